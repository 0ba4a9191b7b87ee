"""Association, SIR in uncoordinated/coordinated slots, and rate statistics.

Arrays are laid out (grid point, site).  Interference sums run over sites in
ascending index order, one site at a time, so every per-point denominator is
reproducible regardless of how grid points are batched.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .antenna import ArrayConfig, ElementPattern
from .errors import InvalidParameterError
from .geometry import ReceiverGrid, SiteLayout, effective_displacements
from .propagation import RadioParams, rx_power_dt, rx_power_ut

__all__ = [
    "PowerMatrix",
    "Association",
    "SirField",
    "RateMetrics",
    "compute_power_matrix",
    "associate",
    "sir_us",
    "sir_cs",
    "sir_field",
    "dt_only_sir",
    "spectral_efficiency",
    "rate_metrics",
    "ecdf",
    "gue_sir",
    "gue_spectral_efficiency",
    "to_db",
]


@dataclass(frozen=True)
class PowerMatrix:
    p_ut: np.ndarray  # (n_points, n_sites) watts
    p_dt: np.ndarray  # (n_points, n_sites) watts

    @property
    def shape(self):
        return self.p_dt.shape


@dataclass(frozen=True)
class Association:
    serving: np.ndarray  # site index per point
    serving_power: np.ndarray  # watts


@dataclass(frozen=True)
class SirField:
    """Per-point SIR in dB.  ``sir_cs_db`` is None when coordinated slots do not apply."""

    sir_us_db: np.ndarray
    sir_cs_db: Optional[np.ndarray]
    serving: np.ndarray


@dataclass(frozen=True)
class RateMetrics:
    min_se: float
    median_se: float
    sum_se: float


def to_db(x):
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(x)


def compute_power_matrix(
    grid: ReceiverGrid,
    layout: SiteLayout,
    tilts,
    params: RadioParams = RadioParams(),
    pattern: ElementPattern = ElementPattern(),
    array: ArrayConfig = ArrayConfig(),
    phi_dt: float = -6.0,
    reflection: bool = True,
) -> PowerMatrix:
    """UT and DT received power from every site at every grid point."""
    tilts = np.asarray(tilts, dtype=float)
    if tilts.shape != (layout.n_sites,):
        raise InvalidParameterError(f"expected {layout.n_sites} tilts, got shape {tilts.shape}")
    disp = effective_displacements(layout, grid.points)
    p_ut = rx_power_ut(disp, grid.height, tilts[None, :], params, pattern, array)
    p_dt = rx_power_dt(disp, grid.height, phi_dt, params, pattern, array, reflection=reflection)
    return PowerMatrix(p_ut=np.asarray(p_ut), p_dt=np.asarray(p_dt))


def associate(pm: PowerMatrix) -> Association:
    """Serving site = argmax over sites of max(P_ut, P_dt); lowest index wins ties."""
    total = np.maximum(pm.p_ut, pm.p_dt)
    serving = np.argmax(total, axis=1)
    power = np.take_along_axis(total, serving[:, None], axis=1)[:, 0]
    return Association(serving=serving, serving_power=power)


def _masked_site_sum(p: np.ndarray, serving: np.ndarray) -> np.ndarray:
    """Sum over all non-serving sites, accumulated in site order."""
    acc = np.zeros(p.shape[0])
    for b in range(p.shape[1]):
        acc += np.where(serving == b, 0.0, p[:, b])
    return acc


def _serving_value(p: np.ndarray, serving: np.ndarray) -> np.ndarray:
    return np.take_along_axis(p, serving[:, None], axis=1)[:, 0]


def sir_us(pm: PowerMatrix, assoc: Association) -> np.ndarray:
    """Uncoordinated slots: serving UT over every other sector, serving DT included."""
    signal = _serving_value(pm.p_ut, assoc.serving)
    interference = _masked_site_sum(pm.p_ut + pm.p_dt, assoc.serving) + _serving_value(pm.p_dt, assoc.serving)
    return signal / interference


def sir_cs(pm: PowerMatrix, assoc: Association) -> np.ndarray:
    """Coordinated slots: DT data muted, only non-serving UT sectors interfere."""
    signal = _serving_value(pm.p_ut, assoc.serving)
    interference = _masked_site_sum(pm.p_ut, assoc.serving)
    with np.errstate(divide="ignore"):
        return signal / interference


def sir_field(pm: PowerMatrix) -> SirField:
    assoc = associate(pm)
    return SirField(
        sir_us_db=to_db(sir_us(pm, assoc)),
        sir_cs_db=to_db(sir_cs(pm, assoc)),
        serving=assoc.serving,
    )


def dt_only_sir(p_dt: np.ndarray) -> SirField:
    """Legacy deployment without UT sectors: serving DT over the other DTs.

    With a single site there is no interferer and the SIR is +inf.
    """
    p_dt = np.asarray(p_dt, dtype=float)
    serving = np.argmax(p_dt, axis=1)
    signal = _serving_value(p_dt, serving)
    interference = _masked_site_sum(p_dt, serving)
    with np.errstate(divide="ignore"):
        sir = signal / interference
    return SirField(sir_us_db=to_db(sir), sir_cs_db=None, serving=serving)


def spectral_efficiency(sir_linear):
    sir = np.asarray(sir_linear, dtype=float)
    if np.any(sir < 0):
        raise InvalidParameterError("SIR must be non-negative")
    out = np.log2(1.0 + sir)
    return float(out) if out.ndim == 0 else out


def rate_metrics(se_field) -> RateMetrics:
    """Minimum, lower median and sum of a spectral-efficiency field."""
    se = np.sort(np.asarray(se_field, dtype=float).ravel())
    if se.size == 0:
        raise InvalidParameterError("rate metrics need at least one value")
    median = se[(se.size - 1) // 2]
    return RateMetrics(min_se=float(se[0]), median_se=float(median), sum_se=float(math.fsum(se)))


def ecdf(values_db):
    """Sorted (value, k/n) pairs."""
    v = np.sort(np.asarray(values_db, dtype=float).ravel())
    n = v.size
    if n == 0:
        raise InvalidParameterError("ECDF of an empty sample")
    return [(float(x), (k + 1) / n) for k, x in enumerate(v)]


def gue_sir(
    gue_grid: ReceiverGrid,
    layout: SiteLayout,
    tilts,
    phi_dt: float = -6.0,
    params: RadioParams = RadioParams(),
    pattern: ElementPattern = ElementPattern(),
    array: ArrayConfig = ArrayConfig(),
    include_ut: bool = True,
    reflection: bool = True,
):
    """Linear SIR of ground users served by the DT sector.

    Association is by maximum DT power.  Interference is every non-serving DT
    plus every UT sector, the serving site's own UT included; ``include_ut=False``
    leaves only the non-serving DTs.  Returns ``(sir, serving)``.
    """
    disp = effective_displacements(layout, gue_grid.points)
    p_dt = np.asarray(rx_power_dt(disp, gue_grid.height, phi_dt, params, pattern, array, reflection=reflection))
    serving = np.argmax(p_dt, axis=1)
    signal = _serving_value(p_dt, serving)
    interference = _masked_site_sum(p_dt, serving)
    if include_ut:
        tilts = np.asarray(tilts, dtype=float)
        if tilts.shape != (layout.n_sites,):
            raise InvalidParameterError(f"expected {layout.n_sites} tilts, got shape {tilts.shape}")
        p_ut = np.asarray(rx_power_ut(disp, gue_grid.height, tilts[None, :], params, pattern, array))
        for b in range(layout.n_sites):
            interference = interference + p_ut[:, b]
    with np.errstate(divide="ignore"):
        return signal / interference, serving


def gue_spectral_efficiency(gue_sir_linear, beta: float):
    """``beta * log2(1 + SIR)`` where ``beta`` is the DT-active slot fraction."""
    if not 0.0 <= beta <= 1.0:
        raise InvalidParameterError(f"beta must lie in [0, 1], got {beta!r}")
    return beta * spectral_efficiency(gue_sir_linear)
