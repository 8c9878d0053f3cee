"""Single-photon versions of the polarizing-cube experiments.

Intensities become probabilities: a photon polarized at t meets a cube set to
s and takes the transmitted channel with probability cos^2(t - s).  For the
full source-to-detector run three ontologies are modeled:

* ``DISCRETE_SYMMETRIC``: the photon carries a definite polarization on both
  legs, pinned to the local setting by the channel taken at each end.
* ``COLLAPSE``: textbook state evolution; the prepared polarization persists
  up to the right cube and nothing definite exists for the return leg.
* ``NO_COLLAPSE``: no outcome is ever selected; the right cube turns the run
  into two weighted branches that are both kept.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import HALF_PI, JonesVector, angle_diff, jones_from_angle, malus, normalize_angle, pol_angle
from .optics import ModePair
from .records import Ensemble, ExperimentRecord
from .stats import RandomStream

# The collapse story fixes the state after a measurement and says nothing
# about later settings reaching further back, so we read it the conventional
# way: the prepared polarization is a function of the input channel and the
# left setting only.  Kept as a named flag because it is a modeling
# assumption, not a theorem; settings_dependence checks it before treating
# the collapse beable distribution as fixed.
COLLAPSE_PRE_MEASUREMENT_SETTINGS_INDEPENDENT = True


class UndefinedPosteriorError(ValueError):
    """Prior and likelihoods leave zero total probability to condition on."""


class OntologyMode(enum.Enum):
    """What is taken to exist during a run, and when."""

    DISCRETE_SYMMETRIC = "discrete"
    COLLAPSE = "collapse"
    NO_COLLAPSE = "nocollapse"

    @property
    def model_id(self) -> str:
        return _MODEL_IDS[self]


_MODEL_IDS = {
    OntologyMode.DISCRETE_SYMMETRIC: "qm-discrete",
    OntologyMode.COLLAPSE: "qm-collapse",
    OntologyMode.NO_COLLAPSE: "qm-nocollapse",
}

MODE_FOR_MODEL = {v: k for k, v in _MODEL_IDS.items()}


@dataclass(frozen=True)
class PhotonState:
    """Unit-intensity Jones vector: the polarization state of one photon."""

    jones: JonesVector

    def __post_init__(self):
        if abs(self.jones.intensity - 1.0) > 1e-12:
            raise ValueError("photon states must have unit intensity")

    @classmethod
    def linear(cls, pol: float, phase: float = 0.0) -> "PhotonState":
        return cls(jones_from_angle(pol, 1.0, phase))

    @property
    def angle(self) -> float:
        return pol_angle(self.jones)


def born_probability(state: PhotonState, setting: float) -> float:
    """Chance the photon takes the transmitted channel of a cube at ``setting``."""
    c, s = math.cos(setting), math.sin(setting)
    amp = state.jones.ex * c + state.jones.ey * s
    p = amp.real * amp.real + amp.imag * amp.imag
    # squared projection of a unit vector; clip rounding spill
    return min(max(p, 0.0), 1.0)


def born_measure(
    state: PhotonState, setting: float, rng: np.random.Generator
) -> tuple[int, PhotonState]:
    """Sample the exit channel; returns (channel, post-cube state)."""
    p1 = born_probability(state, setting)
    channel = 1 if rng.random() < p1 else 0
    post = PhotonState.linear(setting if channel == 1 else setting + HALF_PI)
    return channel, post


def emit_from_channel(channel: int, setting_l: float) -> PhotonState:
    """State leaving the combining cube for a photon that entered on ``channel``.

    Channel 1 emerges polarized at the cube setting, channel 0 at 90 degrees
    from it: with single photons the input side pins the emitted polarization
    to the setting, mirroring what the analyzing side does on exit.
    """
    if channel not in (0, 1):
        raise ValueError(f"channel must be 0 or 1, got {channel!r}")
    return PhotonState.linear(setting_l if channel == 1 else setting_l + HALF_PI)


def retrodict_channel(tau_l: float, sigma_l: float, prior_1: float = 0.5) -> float:
    """Posterior probability that the photon entered on channel 1.

    Bayes over the two input channels with likelihoods cos^2 / sin^2 of
    (tau_l - sigma_l).  With the even prior this reduces to plain cos^2; a
    lopsided source prior swamps the geometric factor, which is exactly why
    the even-prior stipulation matters when reading the cos^2 backwards.
    """
    if not (math.isfinite(prior_1) and 0.0 <= prior_1 <= 1.0):
        raise ValueError(f"prior must lie in [0, 1], got {prior_1!r}")
    like1 = malus(angle_diff(tau_l, sigma_l))
    like0 = 1.0 - like1
    num = prior_1 * like1
    den = num + (1.0 - prior_1) * like0
    if den == 0.0:
        raise UndefinedPosteriorError(
            "prior assigns zero probability to every channel the polarization allows"
        )
    return num / den


def demon_inputs_superposition(setting_l: float, target_pol: float) -> ModePair:
    """Unit-intensity channel amplitudes that emerge polarized at ``target_pol``.

    Amplitude cos(target - setting) on the transmitted port and
    sin(target - setting) on the reflected port, with zero relative phase,
    recombine into a photon linear at the target.  Every target is reachable,
    so superposed inputs restore on the input side the continuity that
    single-channel inputs lack.
    """
    s = normalize_angle(setting_l)
    d = target_pol - s
    c, sn = math.cos(s), math.sin(s)
    a, b = math.cos(d), math.sin(d)
    trans = JonesVector(a * c, a * sn)
    refl = JonesVector(-b * sn, b * c)
    return ModePair(trans, refl, s)


@dataclass(frozen=True)
class BranchPair:
    """Both weighted components of a run in which no outcome is selected."""

    weight_1: float
    weight_0: float
    state_1: PhotonState
    state_0: PhotonState

    def __post_init__(self):
        if not (0.0 <= self.weight_1 <= 1.0 and 0.0 <= self.weight_0 <= 1.0):
            raise ValueError("branch weights must lie in [0, 1]")
        if abs(self.weight_1 + self.weight_0 - 1.0) > 1e-12:
            raise ValueError("branch weights must sum to 1")


def evolve_no_collapse(state: PhotonState, setting_r: float) -> BranchPair:
    """Unitary passage through the right cube: both branches kept, no sampling."""
    w1 = born_probability(state, setting_r)
    return BranchPair(
        weight_1=w1,
        weight_0=1.0 - w1,
        state_1=PhotonState.linear(setting_r),
        state_0=PhotonState.linear(setting_r + HALF_PI),
    )


def run_trajectory(
    mode: OntologyMode,
    sigma_l: float,
    sigma_r: float,
    rng: np.random.Generator,
    prior_1: float = 0.5,
) -> ExperimentRecord:
    """One full source-to-detector run under the chosen ontology.

    The input channel is drawn from ``prior_1`` (even by default).  What the
    record retains depends on the mode: discrete-symmetric runs keep channels
    and both leg polarizations, collapse runs keep no return-leg beable, and
    no-collapse runs keep the branch weight pair in place of an outcome.
    """
    if not (math.isfinite(prior_1) and 0.0 <= prior_1 <= 1.0):
        raise ValueError(f"prior must lie in [0, 1], got {prior_1!r}")
    sl = normalize_angle(sigma_l)
    sr = normalize_angle(sigma_r)
    in_channel = 1 if rng.random() < prior_1 else 0
    state = emit_from_channel(in_channel, sl)
    tau_l = state.angle
    if mode is OntologyMode.DISCRETE_SYMMETRIC:
        out, post = born_measure(state, sr, rng)
        return ExperimentRecord(
            sigma_l=sl,
            sigma_r=sr,
            model=mode.model_id,
            in_channel=in_channel,
            out_channel=out,
            tau_l=tau_l,
            tau_r=post.angle,
        )
    if mode is OntologyMode.COLLAPSE:
        out, _ = born_measure(state, sr, rng)
        return ExperimentRecord(
            sigma_l=sl,
            sigma_r=sr,
            model=mode.model_id,
            in_channel=in_channel,
            out_channel=out,
            tau_l=tau_l,
        )
    if mode is OntologyMode.NO_COLLAPSE:
        branches = evolve_no_collapse(state, sr)
        return ExperimentRecord(
            sigma_l=sl,
            sigma_r=sr,
            model=mode.model_id,
            in_channel=in_channel,
            tau_l=tau_l,
            weights=(branches.weight_1, branches.weight_0),
        )
    raise ValueError(f"unknown ontology mode: {mode!r}")


def simulate_ensemble(
    mode: OntologyMode,
    sigma_l: float,
    sigma_r: float,
    n: int,
    stream: RandomStream,
    prior_1: float = 0.5,
) -> Ensemble:
    """Vectorized :func:`run_trajectory`: n independent runs as flat columns."""
    n = int(n)
    if n < 1:
        raise ValueError("need at least one run")
    rng = stream.generator()
    sl = normalize_angle(sigma_l)
    sr = normalize_angle(sigma_r)
    t1, t0 = sl, normalize_angle(sl + HALF_PI)
    r1, r0 = sr, normalize_angle(sr + HALF_PI)
    in_channel = (rng.random(n) < prior_1).astype(np.int8)
    tau_l = np.where(in_channel == 1, t1, t0)
    p_if_1 = born_probability(PhotonState.linear(t1), sr)
    p_if_0 = born_probability(PhotonState.linear(t0), sr)
    p1 = np.where(in_channel == 1, p_if_1, p_if_0)
    if mode is OntologyMode.NO_COLLAPSE:
        return Ensemble(
            model=mode.model_id,
            sigma_l=sl,
            sigma_r=sr,
            in_channel=in_channel,
            tau_l=tau_l,
            weight_1=p1,
        )
    out = (rng.random(n) < p1).astype(np.int8)
    if mode is OntologyMode.COLLAPSE:
        return Ensemble(
            model=mode.model_id,
            sigma_l=sl,
            sigma_r=sr,
            in_channel=in_channel,
            out_channel=out,
            tau_l=tau_l,
        )
    if mode is OntologyMode.DISCRETE_SYMMETRIC:
        tau_r = np.where(out == 1, r1, r0)
        return Ensemble(
            model=mode.model_id,
            sigma_l=sl,
            sigma_r=sr,
            in_channel=in_channel,
            out_channel=out,
            tau_l=tau_l,
            tau_r=tau_r,
        )
    raise ValueError(f"unknown ontology mode: {mode!r}")
