"""Compiled max-min SIR objective over the uptilt vector.

Everything that does not depend on the uptilts (geometry, element gains, path
loss, the full DT power field) is computed once.  A candidate evaluation then
only needs the array factor of every UT link.  With ``a = pi/2 (sin t - sin p)``
the ULA factor is ``sin(N a) / sin(a) = U_{N-1}(cos a)`` (Chebyshev polynomial of
the second kind), and ``cos a`` splits by the angle-addition formula into
per-link constants times per-site constants.  The evaluation is therefore
free of transcendental calls on the (site, point) grid and has no 0/0 point.
"""
from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np

from ..antenna import AF_POWER_FLOOR, ArrayConfig, ElementPattern, db_to_linear, element_gain_db
from ..errors import InvalidParameterError
from ..geometry import ReceiverGrid, SiteLayout, build_layout, build_receiver_grid, effective_displacements
from ..propagation import RadioParams, link_geometry, pathloss_exponent, rx_power_dt

if TYPE_CHECKING:
    from ..config import Scenario

__all__ = ["TiltProblem", "lattice_values"]


def lattice_values(lo: float, hi: float, quantum: float) -> np.ndarray:
    """``lo, lo+q, lo+2q, ...`` below ``hi``, plus ``hi`` itself."""
    if not quantum > 0:
        raise InvalidParameterError("quantum must be positive")
    n = int(np.floor((hi - lo) / quantum + 1e-9))
    vals = lo + quantum * np.arange(n + 1)
    vals = vals[vals < hi - 1e-9]
    return np.append(vals, hi)


class TiltProblem:
    """Max-min US SIR (dB) over the UAV grid as a function of the uptilts.

    Parameters
    ----------
    layout, grid:
        Sites whose UT angles are free, and the UAV receiver grid.
    quantum:
        If given, every candidate is snapped to the tilt lattice
        ``lattice_values(lo, hi, quantum)`` before evaluation.
    threads:
        Worker threads for batch evaluation.  Each candidate is evaluated by
        the same code on arrays of the same shape, so results do not depend
        on the thread count.
    """

    def __init__(
        self,
        layout: SiteLayout,
        grid: ReceiverGrid,
        params: RadioParams = RadioParams(),
        pattern: ElementPattern = ElementPattern(),
        array: ArrayConfig = ArrayConfig(),
        phi_dt: float = -6.0,
        bounds: Sequence[float] = (5.0, 89.0),
        quantum: Optional[float] = None,
        threads: int = 1,
        cache: bool = True,
    ):
        self.layout = layout
        self.grid = grid
        self.params = params
        self.pattern = pattern
        self.array = array
        self.phi_dt = float(phi_dt)
        self.lo, self.hi = float(bounds[0]), float(bounds[1])
        self.quantum = quantum
        self.lattice = lattice_values(self.lo, self.hi, quantum) if quantum else None
        self.threads = max(1, int(threads))
        self._use_cache = cache
        self._cache: dict[bytes, float] = {}
        self._lock = threading.Lock()
        self.evaluations = 0
        self._precompute()

    @classmethod
    def from_scenario(
        cls,
        scenario: "Scenario",
        sites: Optional[Sequence[int]] = None,
        quantum: Optional[float] = None,
        threads: int = 1,
        n_elements: Optional[int] = None,
    ) -> "TiltProblem":
        """Build from a scenario; ``sites`` keeps a subset of the 19 sites (toy instances)."""
        full = build_layout(scenario.isd)
        grid = build_receiver_grid(full, scenario.grid_spacing, scenario.uav_height)
        layout = full if sites is None else full.subset(sites)
        return cls(
            layout,
            grid,
            params=scenario.radio,
            pattern=scenario.element,
            array=ArrayConfig(n_elements=n_elements or scenario.n_elements),
            phi_dt=scenario.phi_dt,
            bounds=scenario.tilt_bounds,
            quantum=quantum,
            threads=threads,
        )

    @property
    def n_sites(self) -> int:
        return self.layout.n_sites

    def _precompute(self):
        p = self.params
        h = self.grid.height
        disp = effective_displacements(self.layout, self.grid.points)  # (U, B, 2)
        alpha = pathloss_exponent(h, p.h_dt, p.alpha0)
        ut = link_geometry(disp, p.h_ut, h)
        if np.any(np.asarray(ut.dist3d) <= 0):
            raise InvalidParameterError("a UAV grid point coincides with a UT antenna")
        g_elem = db_to_linear(element_gain_db(np.degrees(ut.elev), self.pattern))
        # (B, U) layout: one contiguous row per site
        self._ut_base = np.ascontiguousarray((p.friis_constant * g_elem / np.power(ut.dist3d, alpha)).T)
        half_sin = 0.5 * np.pi * np.sin(ut.elev)
        self._cos_t = np.ascontiguousarray(np.cos(half_sin).T)
        self._sin_t = np.ascontiguousarray(np.sin(half_sin).T)
        p_dt = np.asarray(rx_power_dt(disp, h, self.phi_dt, p, self.pattern, self.array))
        self._p_dt = np.ascontiguousarray(p_dt.T)
        dt_total = np.zeros(len(self.grid))
        for b in range(self.n_sites):
            dt_total += self._p_dt[b]
        self._dt_total = dt_total

    # -- candidate handling -------------------------------------------------

    def check_bounds(self, tilts) -> np.ndarray:
        t = np.asarray(tilts, dtype=float)
        if t.shape != (self.n_sites,):
            raise InvalidParameterError(f"expected {self.n_sites} tilts, got shape {t.shape}")
        if np.any(~np.isfinite(t)) or np.any(t < self.lo) or np.any(t > self.hi):
            raise InvalidParameterError(f"tilts must lie in [{self.lo}, {self.hi}] degrees")
        return t

    def project(self, tilts) -> np.ndarray:
        """Clip into bounds and, on a lattice problem, snap to the nearest lattice value."""
        t = np.clip(np.asarray(tilts, dtype=float), self.lo, self.hi)
        if self.lattice is None:
            return t
        idx = np.abs(t[..., None] - self.lattice).argmin(axis=-1)
        return self.lattice[idx]

    # -- evaluation ---------------------------------------------------------

    def ut_powers(self, tilts) -> np.ndarray:
        """UT received power, shape (n_sites, n_points), via the Chebyshev form."""
        n = int(self.array.n_elements)
        half_sin_phi = 0.5 * np.pi * np.sin(np.radians(np.asarray(tilts, dtype=float)))
        c = self._cos_t * np.cos(half_sin_phi)[:, None] + self._sin_t * np.sin(half_sin_phi)[:, None]
        if n == 1:
            af = np.ones_like(c)
        else:
            u_prev = np.ones_like(c)
            u_cur = 2.0 * c
            two_c = u_cur
            for _ in range(n - 2):
                u_prev, u_cur = u_cur, two_c * u_cur - u_prev
            af = u_cur * u_cur
            af *= 1.0 / n
            np.maximum(af, AF_POWER_FLOOR, out=af)
        return self._ut_base * af

    def sir_us_linear(self, tilts) -> np.ndarray:
        p_ut = self.ut_powers(tilts)
        serving = np.argmax(np.maximum(p_ut, self._p_dt), axis=0)
        signal = np.take_along_axis(p_ut, serving[None, :], axis=0)[0]
        other_ut = np.zeros_like(signal)
        for b in range(self.n_sites):
            other_ut += np.where(serving == b, 0.0, p_ut[b])
        return signal / (self._dt_total + other_ut)

    def _raw_objective(self, tilts: np.ndarray) -> float:
        return float(10.0 * np.log10(np.min(self.sir_us_linear(tilts))))

    def objective(self, tilts) -> float:
        """Minimum US SIR over the grid in dB.  Out-of-bounds tilts raise."""
        t = self.check_bounds(tilts)
        if self.lattice is not None:
            t = self.project(t)
        return self._evaluate_one(t)

    def _evaluate_one(self, t: np.ndarray) -> float:
        key = t.tobytes()
        if self._use_cache:
            with self._lock:
                hit = self._cache.get(key)
            if hit is not None:
                return hit
        value = self._raw_objective(t)
        with self._lock:
            self.evaluations += 1
            if self._use_cache:
                self._cache[key] = value
        return value

    def objective_many(self, candidates) -> np.ndarray:
        """Objective of every row; rows are projected first (lattice snap, clip)."""
        cand = self.project(np.atleast_2d(np.asarray(candidates, dtype=float)))
        rows = [np.ascontiguousarray(r) for r in cand]
        if self.threads == 1 or len(rows) == 1:
            values = [self._evaluate_one(r) for r in rows]
        else:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                values = list(pool.map(self._evaluate_one, rows))
        return np.array(values)

    # -- reporting ----------------------------------------------------------

    def power_matrix(self, tilts):
        """Full UT/DT power matrix (points x sites) for ``tilts``."""
        from ..network import PowerMatrix

        t = self.project(self.check_bounds(tilts))
        return PowerMatrix(p_ut=self.ut_powers(t).T.copy(), p_dt=self._p_dt.T.copy())

    def dt_power_matrix(self) -> np.ndarray:
        return self._p_dt.T.copy()
