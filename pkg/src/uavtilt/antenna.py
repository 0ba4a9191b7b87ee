"""Vertical antenna model: 3GPP element pattern times a steered ULA factor.

Elevation angles are measured from the horizontal plane, positive upward.
Only the vertical cut is modeled; the azimuth pattern is omnidirectional.
All functions accept scalars or numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidAngleError, InvalidParameterError

__all__ = [
    "ElementPattern",
    "ArrayConfig",
    "AF_POWER_FLOOR",
    "element_gain_db",
    "array_factor_power",
    "array_factor_gain_db",
    "composite_gain_db",
    "db_to_linear",
    "linear_to_db",
]

# |A|^2 is clamped here before taking logs, i.e. a -300 dB gain floor.
AF_POWER_FLOOR = 1e-30
# below this |sin(pi/2 * (sin(theta) - sin(phi)))| the boresight limit is used
_SINGULAR_BAND = 1e-12


@dataclass(frozen=True)
class ElementPattern:
    ge_max: float = 8.0  # dBi
    theta_3db: float = 65.0  # degrees
    sla_v: float = 30.0  # dB

    def __post_init__(self):
        if not self.theta_3db > 0:
            raise InvalidParameterError("theta_3db must be positive")
        if not self.sla_v >= 0:
            raise InvalidParameterError("sla_v must be non-negative")


@dataclass(frozen=True)
class ArrayConfig:
    n_elements: int = 8
    element_spacing: float = 0.5  # wavelengths; the array factor assumes 0.5

    def __post_init__(self):
        if int(self.n_elements) != self.n_elements or self.n_elements < 1:
            raise InvalidParameterError(f"n_elements must be a positive integer, got {self.n_elements!r}")
        if self.element_spacing != 0.5:
            raise InvalidParameterError("only half-wavelength element spacing is supported")


def db_to_linear(x):
    return 10.0 ** (np.asarray(x, dtype=float) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(x)


def element_gain_db(theta_deg, pattern: ElementPattern = ElementPattern()):
    """Vertical element gain (dB) at elevation ``theta_deg``."""
    theta = np.asarray(theta_deg, dtype=float)
    if np.any(np.abs(theta) > 90.0 + 1e-9) or np.any(~np.isfinite(theta)):
        raise InvalidAngleError("element elevation must lie in [-90, 90] degrees")
    theta = np.clip(theta, -90.0, 90.0)
    attenuation = np.minimum(12.0 * (theta / pattern.theta_3db) ** 2, pattern.sla_v)
    out = pattern.ge_max - attenuation
    return float(out) if out.ndim == 0 else out


def array_factor_power(theta, phi, array: ArrayConfig = ArrayConfig()):
    """Normalized ULA power factor |A(theta, phi)|^2 (linear), floored at 1e-30.

    ``theta`` and ``phi`` are in radians.  At ``sin(theta) = sin(phi)`` (and at
    the grating points two units away) the 0/0 form is replaced by its limit N.
    """
    n = int(array.n_elements)
    x = np.sin(np.asarray(theta, dtype=float)) - np.sin(np.asarray(phi, dtype=float))
    den = np.sin(0.5 * np.pi * x)
    num = np.sin(0.5 * n * np.pi * x)
    singular = np.abs(den) < _SINGULAR_BAND
    safe_den = np.where(singular, 1.0, den)
    power = np.where(singular, float(n), num * num / (n * safe_den * safe_den))
    power = np.maximum(power, AF_POWER_FLOOR)
    return float(power) if power.ndim == 0 else power


def array_factor_gain_db(theta, phi, array: ArrayConfig = ArrayConfig()):
    return linear_to_db(array_factor_power(theta, phi, array))


def composite_gain_db(theta, phi, pattern: ElementPattern = ElementPattern(), array: ArrayConfig = ArrayConfig()):
    """Element gain plus array gain, both in dB; angles in radians."""
    return element_gain_db(np.degrees(theta), pattern) + array_factor_gain_db(theta, phi, array)
