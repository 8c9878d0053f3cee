"""Discrete hidden-variable toy models and the settings-dependence probe.

Two models trade the continuous polarization beable for bookkeeping bits:

* two-bit: the hidden variable is the (past channel, future channel) pair,
  with matched pairs carrying cos^2 of the settings difference split evenly
  and mismatched pairs the complementary sin^2;
* one-bit: the hidden variable only records whether the future channel
  repeats the past one, with probability cos^2 of the settings difference.

Both reproduce the quantum channel statistics exactly.  The detector here,
:func:`settings_dependence`, asks the question those statistics hide: does
the distribution of whatever exists before the right cube depend on the
right-cube setting?  A yes is what "retrocausal" means operationally in this
package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import photon
from .core import HALF_PI, PI, angles_equal, malus, normalize_angle
from .photon import born_probability, emit_from_channel
from .records import Ensemble
from .stats import RandomStream, tv_distance

MODEL_TWOBIT = "twobit"
MODEL_ONEBIT = "onebit"
MODEL_QM_DISCRETE = "qm-discrete"
MODEL_QM_COLLAPSE = "qm-collapse"
MODEL_QM_NOCOLLAPSE = "qm-nocollapse"
MODEL_CLASSICAL = "classical"

#: every model identifier the package understands
MODELS = (
    MODEL_TWOBIT,
    MODEL_ONEBIT,
    MODEL_QM_DISCRETE,
    MODEL_QM_COLLAPSE,
    MODEL_QM_NOCOLLAPSE,
    MODEL_CLASSICAL,
)

#: models that generate stochastic channel records (everything but classical)
STOCHASTIC_MODELS = MODELS[:-1]

# analytic distributions are exact; any distance above this is real
ANALYTIC_TV_TOL = 1e-9


class UnknownModelError(ValueError):
    """Model identifier missing from the registry, or unsupported here."""


@dataclass(frozen=True)
class TwoBitValue:
    """One draw of the two-bit hidden variable."""

    past_bit: int
    future_bit: int

    def __post_init__(self):
        if self.past_bit not in (0, 1) or self.future_bit not in (0, 1):
            raise ValueError("bits must be 0 or 1")


@dataclass(frozen=True)
class HVJoint:
    """Probability four-vector over (past channel, future channel)."""

    p00: float
    p01: float
    p10: float
    p11: float

    def __post_init__(self):
        for p in self.as_tuple():
            if not (-1e-12 <= p <= 1.0 + 1e-12):
                raise ValueError(f"cell probability out of range: {p!r}")
        if abs(math.fsum(self.as_tuple()) - 1.0) > 1e-12:
            raise ValueError("joint must sum to 1")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p00, self.p01, self.p10, self.p11)

    def as_dict(self) -> dict[str, float]:
        return {"00": self.p00, "01": self.p01, "10": self.p10, "11": self.p11}

    def prob(self, past: int, future: int) -> float:
        return self.as_tuple()[2 * past + future]

    @property
    def p_match(self) -> float:
        return self.p00 + self.p11


def twobit_dist(sigma_l: float, sigma_r: float) -> HVJoint:
    """Two-bit hidden-variable distribution at the given settings.

    Matched pairs (00, 11) share cos^2(sigma_l - sigma_r) evenly, mismatched
    pairs share sin^2; the even split keeps the past-bit marginal at 1/2 for
    every pair of settings, as the even input prior demands.
    """
    match = malus(sigma_l - sigma_r)
    miss = 1.0 - match
    return HVJoint(0.5 * match, 0.5 * miss, 0.5 * miss, 0.5 * match)


def _four_way(joint: HVJoint, u: np.ndarray) -> np.ndarray:
    cum = np.cumsum(joint.as_tuple())
    return np.searchsorted(cum[:3], u, side="right")


def sample_twobit(sigma_l: float, sigma_r: float, rng: np.random.Generator) -> TwoBitValue:
    """Draw one two-bit value at the given settings."""
    idx = int(_four_way(twobit_dist(sigma_l, sigma_r), np.asarray(rng.random())))
    return TwoBitValue(past_bit=idx >> 1, future_bit=idx & 1)


def simulate_twobit_ensemble(
    sigma_l: float, sigma_r: float, n: int, stream: RandomStream
) -> Ensemble:
    """n independent two-bit draws as channel records."""
    n = int(n)
    if n < 1:
        raise ValueError("need at least one run")
    rng = stream.generator()
    idx = _four_way(twobit_dist(sigma_l, sigma_r), rng.random(n))
    return Ensemble(
        model=MODEL_TWOBIT,
        sigma_l=normalize_angle(sigma_l),
        sigma_r=normalize_angle(sigma_r),
        in_channel=(idx >> 1).astype(np.int8),
        out_channel=(idx & 1).astype(np.int8),
    )


def onebit_dist(sigma_l: float, sigma_r: float) -> float:
    """Probability that the exit channel repeats the entry channel.

    The hidden bit is stored with 1 meaning "repeat".  Storing its complement
    (entry XOR exit) instead changes no observable statistic; only this one
    labeling is used throughout so the cos^2 always attaches to "repeat".
    """
    return malus(sigma_l - sigma_r)


def sample_parity(sigma_l: float, sigma_r: float, rng: np.random.Generator) -> int:
    """Draw the one-bit hidden variable; 1 = exit repeats entry."""
    return 1 if rng.random() < onebit_dist(sigma_l, sigma_r) else 0


def simulate_onebit_ensemble(
    sigma_l: float, sigma_r: float, n: int, stream: RandomStream
) -> Ensemble:
    """Even input channel plus an independent parity draw per run."""
    n = int(n)
    if n < 1:
        raise ValueError("need at least one run")
    rng = stream.generator()
    in_channel = (rng.random(n) < 0.5).astype(np.int8)
    repeat = rng.random(n) < onebit_dist(sigma_l, sigma_r)
    out_channel = np.where(repeat, in_channel, 1 - in_channel).astype(np.int8)
    return Ensemble(
        model=MODEL_ONEBIT,
        sigma_l=normalize_angle(sigma_l),
        sigma_r=normalize_angle(sigma_r),
        in_channel=in_channel,
        out_channel=out_channel,
    )


def qm_reference_joint(sigma_l: float, sigma_r: float) -> HVJoint:
    """Channel joint implied by the photon rules with an even input prior.

    Computed by enumeration, not by formula: emit on each input channel, take
    the Born probability at the right cube, weight the channels evenly.  That
    it lands exactly on :func:`twobit_dist` is the content of the claim that
    the two-bit model reproduces the quantum predictions.
    """
    cells = {}
    for c in (0, 1):
        state = emit_from_channel(c, sigma_l)
        p1 = born_probability(state, sigma_r)
        cells[(c, 1)] = 0.5 * p1
        cells[(c, 0)] = 0.5 * (1.0 - p1)
    return HVJoint(cells[(0, 0)], cells[(0, 1)], cells[(1, 0)], cells[(1, 1)])


def channel_joint(model: str, sigma_l: float, sigma_r: float) -> HVJoint:
    """Analytic (entry, exit) channel joint for any stochastic model."""
    if model in (MODEL_TWOBIT, MODEL_ONEBIT):
        return twobit_dist(sigma_l, sigma_r)
    if model in (MODEL_QM_DISCRETE, MODEL_QM_COLLAPSE, MODEL_QM_NOCOLLAPSE):
        return qm_reference_joint(sigma_l, sigma_r)
    raise UnknownModelError(
        f"no channel joint for model {model!r}; expected one of {STOCHASTIC_MODELS}"
    )


def _angle_key(x: float) -> float:
    # hashable canonical key for an exact angle value; folds the wrap at pi
    a = normalize_angle(x)
    if a > PI - 5e-10:
        a = 0.0
    return round(a, 9)


#: plain-language description of where each model keeps its pre-measurement state
BEABLES = {
    MODEL_TWOBIT: "(past channel, future channel) bit pair",
    MODEL_ONEBIT: "channel parity bit",
    MODEL_QM_DISCRETE: "input channel, emitted polarization, return-leg polarization",
    MODEL_QM_COLLAPSE: "input channel and prepared polarization",
    MODEL_QM_NOCOLLAPSE: "input channel and uncollapsed polarization state",
    MODEL_CLASSICAL: "intermediate field fixed by the left-side preparation",
}


def beable_distribution(model: str, sigma_l: float, sigma_r: float) -> dict:
    """Distribution of everything a model locates before the right cube.

    Each model declares where its beables live; that declaration is part of
    the model and this function is its executable form.  Keys are hashable
    outcome labels, values exact probabilities.
    """
    if model == MODEL_TWOBIT:
        j = twobit_dist(sigma_l, sigma_r)
        return {(p, f): j.prob(p, f) for p in (0, 1) for f in (0, 1)}
    if model == MODEL_ONEBIT:
        p_same = onebit_dist(sigma_l, sigma_r)
        return {1: p_same, 0: 1.0 - p_same}
    if model == MODEL_QM_DISCRETE:
        # the return-leg polarization already exists before the right cube,
        # pinned to whichever value the exit channel will select
        out: dict = {}
        for c in (0, 1):
            t = emit_from_channel(c, sigma_l).angle
            p1 = born_probability(emit_from_channel(c, sigma_l), sigma_r)
            out[(c, _angle_key(t), _angle_key(sigma_r))] = 0.5 * p1
            out[(c, _angle_key(t), _angle_key(sigma_r + HALF_PI))] = 0.5 * (1.0 - p1)
        return out
    if model == MODEL_QM_COLLAPSE:
        if not photon.COLLAPSE_PRE_MEASUREMENT_SETTINGS_INDEPENDENT:
            raise NotImplementedError(
                "only the settings-independent reading of the collapse "
                "pre-measurement state is modeled"
            )
        return {(c, _angle_key(emit_from_channel(c, sigma_l).angle)): 0.5 for c in (0, 1)}
    if model == MODEL_QM_NOCOLLAPSE:
        # before the right cube the branch structure has not formed yet;
        # the beable is the uncollapsed state itself
        return {(c, _angle_key(emit_from_channel(c, sigma_l).angle)): 0.5 for c in (0, 1)}
    if model == MODEL_CLASSICAL:
        # deterministic field fixed by the left-side preparation alone
        return {("field", _angle_key(sigma_l)): 1.0}
    raise UnknownModelError(f"unknown model {model!r}; expected one of {MODELS}")


@dataclass(frozen=True)
class RetroReport:
    """Settings-dependence verdict for the pre-measurement beables."""

    model: str
    sigma_l: float
    sigma_r: float
    sigma_r_alt: float
    tv_distance: float
    threshold: float
    retro: bool
    beable: str


def settings_dependence(
    model: str, sigma_l: float, sigma_r: float, sigma_r_alt: float
) -> RetroReport:
    """Compare the pre-right-cube beable distribution under two right settings.

    Total-variation distance over the model's declared beables; any distance
    above the analytic tolerance flags the model as settings-dependent.  The
    two right settings must name different directions (mod pi); note that a
    90 degree shift can still leave the distribution unchanged, the one shift
    size a pair-valued beable cannot register.
    """
    if model not in MODELS:
        raise UnknownModelError(f"unknown model {model!r}; expected one of {MODELS}")
    if angles_equal(sigma_r, sigma_r_alt):
        raise ValueError("alternative right setting must differ from sigma_r (mod pi)")
    p = beable_distribution(model, sigma_l, sigma_r)
    q = beable_distribution(model, sigma_l, sigma_r_alt)
    tv = tv_distance(p, q)
    return RetroReport(
        model=model,
        sigma_l=normalize_angle(sigma_l),
        sigma_r=normalize_angle(sigma_r),
        sigma_r_alt=normalize_angle(sigma_r_alt),
        tv_distance=tv,
        threshold=ANALYTIC_TV_TOL,
        retro=tv > ANALYTIC_TV_TOL,
        beable=BEABLES[model],
    )


def twobit_beable_input_joint(sigma_l: float, sigma_r: float) -> dict:
    """Joint of (hidden bit pair, input channel); the pair fixes the input."""
    j = twobit_dist(sigma_l, sigma_r)
    return {((p, f), p): j.prob(p, f) for p in (0, 1) for f in (0, 1)}


def onebit_beable_input_joint(sigma_l: float, sigma_r: float) -> dict:
    """Joint of (parity bit, input channel); exact product of its marginals."""
    p_same = onebit_dist(sigma_l, sigma_r)
    p_diff = 1.0 - p_same
    return {
        (s, c): 0.5 * (p_same if s == 1 else p_diff) for s in (0, 1) for c in (0, 1)
    }
