"""Run records, their column-oriented batch form, and the JSON-lines disk
format shared by the command-line tools.

A record stores one run's full history.  Which fields are populated is the
model family's signature: discrete-symmetric runs carry channels and both leg
polarizations, collapse runs drop the return-leg polarization, no-collapse
runs drop the outcome and carry the branch weight pair instead.  Absent
fields stay None in memory and are omitted on disk; angles are radians.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

import numpy as np

# fixed key order of the JSON-lines format
RECORD_KEYS = (
    "sigma_l",
    "in_channel",
    "tau_l",
    "tau_r",
    "sigma_r",
    "out_channel",
    "weights",
    "model",
)


@dataclass(frozen=True)
class ExperimentRecord:
    """Everything one run wrote down; beables that never existed stay None."""

    sigma_l: float
    sigma_r: float
    model: str
    in_channel: int | None = None
    out_channel: int | None = None
    tau_l: float | None = None
    tau_r: float | None = None
    weights: tuple[float, float] | None = None


def record_to_dict(record: ExperimentRecord) -> dict:
    """JSON-ready dict in the fixed key order, absent fields omitted."""
    out: dict = {}
    for key in RECORD_KEYS:
        value = getattr(record, key)
        if value is None:
            continue
        if key == "weights":
            value = [float(value[0]), float(value[1])]
        out[key] = value
    return out


def record_from_dict(data: dict) -> ExperimentRecord:
    weights = data.get("weights")
    if weights is not None:
        weights = (float(weights[0]), float(weights[1]))
    return ExperimentRecord(
        sigma_l=float(data["sigma_l"]),
        sigma_r=float(data["sigma_r"]),
        model=str(data["model"]),
        in_channel=None if data.get("in_channel") is None else int(data["in_channel"]),
        out_channel=None if data.get("out_channel") is None else int(data["out_channel"]),
        tau_l=None if data.get("tau_l") is None else float(data["tau_l"]),
        tau_r=None if data.get("tau_r") is None else float(data["tau_r"]),
        weights=weights,
    )


def write_records_jsonl(path, records: Iterable[ExperimentRecord]) -> int:
    """Write records one JSON object per line; returns the number written."""
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record_to_dict(record)))
            fh.write("\n")
            count += 1
    return count


def read_records_jsonl(path) -> list[ExperimentRecord]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(record_from_dict(json.loads(line)))
    return out


@dataclass
class Ensemble:
    """Column-oriented batch of runs from one model at fixed settings.

    Same content as a list of ExperimentRecord, flattened to arrays so that
    million-run audits stay cheap.  A column is None when that field is
    absent for the whole family, mirroring the per-record convention.
    """

    model: str
    sigma_l: float
    sigma_r: float
    in_channel: np.ndarray | None = None
    out_channel: np.ndarray | None = None
    tau_l: np.ndarray | None = None
    tau_r: np.ndarray | None = None
    weight_1: np.ndarray | None = None

    @property
    def n(self) -> int:
        for column in (self.in_channel, self.out_channel, self.tau_l, self.tau_r, self.weight_1):
            if column is not None:
                return len(column)
        return 0

    def records(self, limit: int | None = None) -> list[ExperimentRecord]:
        """Materialize rows as records; ``limit`` caps the count (None = all)."""
        count = self.n if limit is None else min(self.n, int(limit))
        out = []
        for i in range(count):
            weights = None
            if self.weight_1 is not None:
                w1 = float(self.weight_1[i])
                weights = (w1, 1.0 - w1)
            out.append(
                ExperimentRecord(
                    sigma_l=self.sigma_l,
                    sigma_r=self.sigma_r,
                    model=self.model,
                    in_channel=None if self.in_channel is None else int(self.in_channel[i]),
                    out_channel=None if self.out_channel is None else int(self.out_channel[i]),
                    tau_l=None if self.tau_l is None else float(self.tau_l[i]),
                    tau_r=None if self.tau_r is None else float(self.tau_r[i]),
                    weights=weights,
                )
            )
        return out
