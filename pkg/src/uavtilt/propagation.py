"""Link geometry, height-dependent path loss and two-ray received power.

Powers are linear watts throughout; dB/dBm appear only in parameters.
Distances enter the Friis-style term ``(lambda / 4 pi)^2 / d^alpha`` in meters,
i.e. with an implied 1 m reference distance.

Interpretations not fixed by the underlying model:

* the reflected ray's effective gain is the downtilted composite gain at the
  departure elevation ``-psi`` towards the ground intercept;
* the ground reflection uses the vertically polarized (TM) Fresnel coefficient
  of a lossless ground with real relative permittivity ``eps_r``;
* direct and reflected rays are added in power, not in field.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .antenna import ArrayConfig, ElementPattern, array_factor_power, db_to_linear, element_gain_db
from .errors import InvalidGeometryError, InvalidParameterError

__all__ = [
    "SPEED_OF_LIGHT",
    "RadioParams",
    "SectorGeometry",
    "ReflectionGeometry",
    "dbm_to_watts",
    "link_geometry",
    "pathloss_exponent",
    "reflection_geometry",
    "fresnel_magnitude",
    "composite_gain_linear",
    "dt_power_components",
    "rx_power_dt",
    "rx_power_ut",
]

SPEED_OF_LIGHT = 299_792_458.0


def dbm_to_watts(p_dbm):
    return 10.0 ** ((np.asarray(p_dbm, dtype=float) - 30.0) / 10.0)


@dataclass(frozen=True)
class RadioParams:
    """Carrier, transmit power and ground/path-loss constants.

    ``h_dt`` is the downtilted sector height, which also serves as the BS
    height in the path-loss exponent; ``h_ut`` is the uptilted sector height.
    """

    carrier_freq: float = 3.5e9  # Hz
    tx_power_dbm: float = 46.0
    alpha0: float = 3.5
    eps_r: float = 15.0
    h_dt: float = 30.0  # m
    h_ut: float = 31.0  # m

    def __post_init__(self):
        if not self.carrier_freq > 0:
            raise InvalidParameterError("carrier_freq must be positive")
        if not self.alpha0 >= 2:
            raise InvalidParameterError("alpha0 must be at least 2")
        if not self.eps_r > 0:
            raise InvalidParameterError("eps_r must be positive")
        if not (self.h_dt > 0 and self.h_ut > 0):
            raise InvalidParameterError("sector heights must be positive")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_freq

    @property
    def tx_power(self) -> float:
        return float(dbm_to_watts(self.tx_power_dbm))

    @property
    def friis_constant(self) -> float:
        """P_b * (lambda / 4 pi)^2 in watts (meters^alpha implied)."""
        return self.tx_power * (self.wavelength / (4.0 * np.pi)) ** 2


@dataclass(frozen=True)
class SectorGeometry:
    d2d: np.ndarray
    dist3d: np.ndarray
    elev: np.ndarray  # radians
    delta_h: np.ndarray


@dataclass(frozen=True)
class ReflectionGeometry:
    r1: np.ndarray
    r2: np.ndarray
    grazing: np.ndarray  # radians


def _maybe_scalar(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def link_geometry(displacement, sector_height: float, rx_height: float) -> SectorGeometry:
    """Horizontal distance, 3D distance and elevation from a sector to a receiver.

    ``displacement`` is receiver minus site, shape (..., 2).
    """
    disp = np.asarray(displacement, dtype=float)
    d2d = np.hypot(disp[..., 0], disp[..., 1])
    delta_h = np.broadcast_to(np.asarray(rx_height, dtype=float) - sector_height, d2d.shape)
    dist3d = np.sqrt(d2d * d2d + delta_h * delta_h)
    elev = np.arctan2(delta_h, d2d)
    return SectorGeometry(
        d2d=_maybe_scalar(d2d),
        dist3d=_maybe_scalar(dist3d),
        elev=_maybe_scalar(elev),
        delta_h=_maybe_scalar(delta_h),
    )


def pathloss_exponent(h, h_b: float, alpha0: float = 3.5):
    """Effective exponent: ``alpha0 - (h/h_b)(alpha0 - 2)`` below ``2*h_b``, else 2.

    The linear branch is floored at 2.  Taken literally it would fall to
    ``4 - alpha0`` just below ``2*h_b`` and jump back to 2 there; the floor makes
    the exponent continuous and never better than free space.
    """
    h = np.asarray(h, dtype=float)
    linear = np.maximum(alpha0 - (h / h_b) * (alpha0 - 2.0), 2.0)
    out = np.where(h < 2.0 * h_b, linear, 2.0)
    return _maybe_scalar(out)


def reflection_geometry(d2d, h_tx: float, h_rx) -> ReflectionGeometry:
    """Image-method ground bounce: leg lengths and grazing angle."""
    d2d = np.asarray(d2d, dtype=float)
    h_sum = h_tx + np.asarray(h_rx, dtype=float)
    total = np.sqrt(d2d * d2d + h_sum * h_sum)
    r1 = total * (h_tx / h_sum)
    r2 = total - r1
    grazing = np.arctan2(h_sum, d2d)
    return ReflectionGeometry(r1=_maybe_scalar(r1), r2=_maybe_scalar(r2), grazing=_maybe_scalar(grazing))


def fresnel_magnitude(grazing, eps_r: float = 15.0):
    """|R| of the vertical-polarization Fresnel coefficient at grazing angle ``grazing``."""
    psi = np.asarray(grazing, dtype=float)
    s = np.sin(psi)
    root = np.sqrt(eps_r - np.cos(psi) ** 2)
    r = (eps_r * s - root) / (eps_r * s + root)
    return _maybe_scalar(np.abs(r))


def composite_gain_linear(theta, phi, pattern: ElementPattern, array: ArrayConfig):
    """Linear composite gain; ``theta`` and ``phi`` in radians."""
    element = db_to_linear(element_gain_db(np.degrees(theta), pattern))
    return element * array_factor_power(theta, phi, array)


def _check_distance(dist):
    if np.any(np.asarray(dist) <= 0):
        raise InvalidGeometryError("zero-length link: receiver coincides with the antenna")


def dt_power_components(
    displacement,
    rx_height,
    phi_dt: float,
    params: RadioParams = RadioParams(),
    pattern: ElementPattern = ElementPattern(),
    array: ArrayConfig = ArrayConfig(),
    reflection: bool = True,
):
    """Direct and ground-reflected power (watts) from a downtilted array.

    ``phi_dt`` is in degrees.  With ``reflection=False`` the reflected part is 0.
    """
    geo = link_geometry(displacement, params.h_dt, rx_height)
    _check_distance(geo.dist3d)
    alpha = pathloss_exponent(rx_height, params.h_dt, params.alpha0)
    phi = np.radians(phi_dt)
    k = params.friis_constant
    direct = k * composite_gain_linear(geo.elev, phi, pattern, array) / np.power(geo.dist3d, alpha)
    if not reflection:
        return direct, _maybe_scalar(np.zeros_like(np.asarray(direct)))
    ref = reflection_geometry(geo.d2d, params.h_dt, rx_height)
    gamma = fresnel_magnitude(ref.grazing, params.eps_r)
    g_ref = composite_gain_linear(-np.asarray(ref.grazing), phi, pattern, array)
    reflected = k * gamma * gamma * g_ref / np.power(np.asarray(ref.r1) + ref.r2, alpha)
    return direct, _maybe_scalar(reflected)


def rx_power_dt(
    displacement,
    rx_height,
    phi_dt: float,
    params: RadioParams = RadioParams(),
    pattern: ElementPattern = ElementPattern(),
    array: ArrayConfig = ArrayConfig(),
    reflection: bool = True,
):
    """Total (direct + reflected) average received power from the DT sector, watts."""
    direct, reflected = dt_power_components(displacement, rx_height, phi_dt, params, pattern, array, reflection)
    return _maybe_scalar(np.asarray(direct) + reflected)


def rx_power_ut(
    displacement,
    rx_height,
    phi_ut,
    params: RadioParams = RadioParams(),
    pattern: ElementPattern = ElementPattern(),
    array: ArrayConfig = ArrayConfig(),
):
    """Direct-path received power from the UT sector (no ground bounce), watts.

    ``phi_ut`` is in degrees and broadcasts against the displacement batch shape.
    """
    geo = link_geometry(displacement, params.h_ut, rx_height)
    _check_distance(geo.dist3d)
    alpha = pathloss_exponent(rx_height, params.h_dt, params.alpha0)
    gain = composite_gain_linear(geo.elev, np.radians(phi_ut), pattern, array)
    return _maybe_scalar(params.friis_constant * gain / np.power(geo.dist3d, alpha))
