"""Angle arithmetic and Jones-vector algebra shared by every model here.

Polarization angles label directions, not orientations: adding pi gives the
same physical state, so every angle-valued quantity is reduced to a canonical
representative in [0, pi).  Fields are Jones vectors, complex amplitude pairs
(ex, ey) in a fixed lab basis; one immutable value carries intensity,
polarization direction and phase together.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

PI = math.pi
HALF_PI = 0.5 * math.pi

# Directions closer than this (mod pi) count as the same direction.
ANGLE_TOL = 1e-9

# |Im(ex conj(ey))| <= LINEAR_TOL * intensity counts as linearly polarized.
LINEAR_TOL = 1e-9

# Below this intensity a field is treated as darkness.
ZERO_INTENSITY = 1e-30


class ZeroBeamError(ValueError):
    """Raised when an operation needs light and the field carries none."""


class NotLinearError(ValueError):
    """Raised when linear polarization is required but the field is elliptical.

    ``ellipticity`` is 2 Im(ex conj ey) / intensity, in [-1, 1]: 0 for linear
    light, +-1 for circular.
    """

    def __init__(self, message: str, ellipticity: float):
        super().__init__(message)
        self.ellipticity = ellipticity


def normalize_angle(x: float) -> float:
    """Reduce an angle in radians to its direction representative in [0, pi)."""
    if not math.isfinite(x):
        raise ValueError(f"angle must be finite, got {x!r}")
    a = math.fmod(x, PI)
    if a < 0.0:
        a += PI
    if a >= PI:
        # fmod of a tiny negative lands exactly on pi after the shift
        a -= PI
    return a


def normalize_angles(x) -> np.ndarray:
    """Vectorized :func:`normalize_angle` for float arrays."""
    a = np.mod(np.asarray(x, dtype=float), PI)
    return np.where(a >= PI, a - PI, a)


def angle_diff(a: float, b: float) -> float:
    """Signed difference between two directions, reduced to [-pi/2, pi/2)."""
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("angles must be finite")
    d = math.fmod(a - b + HALF_PI, PI)
    if d < 0.0:
        d += PI
    if d >= PI:
        d -= PI
    return d - HALF_PI


def angles_equal(a: float, b: float, tol: float = ANGLE_TOL) -> bool:
    """True when the two directions coincide within tol (mod pi)."""
    return abs(angle_diff(a, b)) <= tol


def malus(delta: float) -> float:
    """Transmitted fraction cos^2(delta) for an analyzer offset by delta."""
    if not math.isfinite(delta):
        raise ValueError(f"offset must be finite, got {delta!r}")
    c = math.cos(delta)
    return c * c


@dataclass(frozen=True)
class JonesVector:
    """Complex amplitudes (ex, ey) of one field mode in the lab basis."""

    ex: complex
    ey: complex

    def __post_init__(self):
        ex = complex(self.ex)
        ey = complex(self.ey)
        if not (cmath.isfinite(ex) and cmath.isfinite(ey)):
            raise ValueError("field amplitudes must be finite")
        object.__setattr__(self, "ex", ex)
        object.__setattr__(self, "ey", ey)

    @property
    def intensity(self) -> float:
        return (
            self.ex.real * self.ex.real
            + self.ex.imag * self.ex.imag
            + self.ey.real * self.ey.real
            + self.ey.imag * self.ey.imag
        )

    def __add__(self, other: "JonesVector") -> "JonesVector":
        return JonesVector(self.ex + other.ex, self.ey + other.ey)

    def scaled(self, factor: complex) -> "JonesVector":
        return JonesVector(factor * self.ex, factor * self.ey)

    @property
    def ellipticity(self) -> float:
        """2 Im(ex conj ey) / intensity; 0 is linear, +-1 circular."""
        i = self.intensity
        if i <= ZERO_INTENSITY:
            return 0.0
        return 2.0 * (self.ex * self.ey.conjugate()).imag / i

    def is_linear(self, tol: float = LINEAR_TOL) -> bool:
        """Linear-polarization predicate; dark fields count as linear."""
        i = self.intensity
        if i <= ZERO_INTENSITY:
            return True
        return abs((self.ex * self.ey.conjugate()).imag) <= tol * i


def jones_from_angle(pol: float, intensity: float = 1.0, phase: float = 0.0) -> JonesVector:
    """Linearly polarized field at direction ``pol`` with the given intensity.

    The amplitude pair is exp(i phase) sqrt(intensity) (cos pol, sin pol).
    """
    if not math.isfinite(intensity) or intensity < 0.0:
        raise ValueError(f"intensity must be finite and nonnegative, got {intensity!r}")
    if not math.isfinite(phase):
        raise ValueError(f"phase must be finite, got {phase!r}")
    t = normalize_angle(pol)
    amp = cmath.exp(1j * phase) * math.sqrt(intensity)
    return JonesVector(amp * math.cos(t), amp * math.sin(t))


def pol_angle(v: JonesVector) -> float:
    """Polarization direction of a linearly polarized field, in [0, pi).

    Inverse of :func:`jones_from_angle` up to global phase.  Raises
    ZeroBeamError on dark fields and NotLinearError (carrying the ellipticity)
    when the field has a circular component.
    """
    i = v.intensity
    if i <= ZERO_INTENSITY:
        raise ZeroBeamError("polarization direction of a dark field is undefined")
    cross = v.ex * v.ey.conjugate()
    if abs(cross.imag) > LINEAR_TOL * i:
        raise NotLinearError(
            "field is elliptically polarized, direction undefined",
            ellipticity=2.0 * cross.imag / i,
        )
    # the doubled angle is insensitive to the global phase and to pol -> pol+pi
    s1 = (v.ex.real * v.ex.real + v.ex.imag * v.ex.imag) - (
        v.ey.real * v.ey.real + v.ey.imag * v.ey.imag
    )
    s2 = 2.0 * cross.real
    return normalize_angle(0.5 * math.atan2(s2, s1))
