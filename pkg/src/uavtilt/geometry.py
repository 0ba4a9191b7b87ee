"""19-cell hexagonal site layout with wraparound, and receiver grids.

Sites sit on the triangular lattice spanned by ``a1 = (isd, 0)`` and
``a2 = (isd/2, isd*sqrt(3)/2)``.  The center cell is the Voronoi cell of the
origin, so "inside the center hexagon" and "site 0 is the nearest site" are
the same test.  Wraparound replicates the 19-cell cluster with the six
translations ``R(60 deg * k) @ (3*a1 + 2*a2)``, each of length ``isd*sqrt(19)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError

__all__ = [
    "SiteLayout",
    "ReceiverGrid",
    "build_layout",
    "effective_displacement",
    "effective_displacements",
    "in_center_cell",
    "build_receiver_grid",
]


@dataclass(frozen=True)
class SiteLayout:
    """Base-station positions plus the wraparound translation set.

    ``sites`` has shape (n_sites, 2) and ``wrap_translations`` shape (7, 2)
    with the zero vector first.  ``ring`` holds the hex-ring index of every
    site (0 for the center, 1 for the first tier, 2 for the second).
    """

    sites: np.ndarray
    isd: float
    wrap_translations: np.ndarray
    ring: np.ndarray
    center_index: int = 0

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    def subset(self, indices) -> "SiteLayout":
        """Keep only the listed sites (same translations); used for toy instances."""
        idx = np.asarray(indices, dtype=int)
        return SiteLayout(
            sites=self.sites[idx].copy(),
            isd=self.isd,
            wrap_translations=self.wrap_translations,
            ring=self.ring[idx].copy(),
            center_index=self.center_index,
        )


@dataclass(frozen=True)
class ReceiverGrid:
    points: np.ndarray  # (n, 2), meters
    spacing: float
    height: float

    def __len__(self) -> int:
        return len(self.points)


def _rotation(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def build_layout(isd: float) -> SiteLayout:
    """Center site, a ring of 6 at distance ``isd`` and a ring of 12 beyond it."""
    if not (isd > 0) or not math.isfinite(isd):
        raise InvalidParameterError(f"isd must be positive, got {isd!r}")
    a1 = np.array([isd, 0.0])
    a2 = np.array([isd / 2.0, isd * math.sqrt(3.0) / 2.0])

    # axial coordinates with hex distance <= 2
    entries = []
    for i in range(-2, 3):
        for j in range(-2, 3):
            ring = max(abs(i), abs(j), abs(i + j))
            if ring > 2:
                continue
            pos = i * a1 + j * a2
            angle = math.atan2(pos[1], pos[0]) % (2.0 * math.pi)
            entries.append((ring, round(angle, 9), pos))
    entries.sort(key=lambda e: (e[0], e[1]))
    sites = np.array([e[2] for e in entries])
    sites[0] = 0.0
    ring = np.array([e[0] for e in entries], dtype=int)

    base = 3.0 * a1 + 2.0 * a2
    translations = [np.zeros(2)]
    translations += [_rotation(math.radians(60.0 * k)) @ base for k in range(6)]
    return SiteLayout(
        sites=sites,
        isd=float(isd),
        wrap_translations=np.array(translations),
        ring=ring,
    )


def effective_displacements(layout: SiteLayout, points) -> np.ndarray:
    """Wraparound displacements from every site to every point.

    Returns an array of shape (n_points, n_sites, 2) holding
    ``p - (site + t*)`` where ``t*`` is the translation giving the shortest
    horizontal distance.  Exact ties keep the zero translation, then the lowest
    translation index.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    # (n_points, n_sites, n_translations, 2)
    images = layout.sites[:, None, :] + layout.wrap_translations[None, :, :]
    disp = pts[:, None, None, :] - images[None, :, :, :]
    d2 = disp[..., 0] ** 2 + disp[..., 1] ** 2
    best = np.argmin(d2, axis=2)  # first minimum -> zero translation on ties
    return np.take_along_axis(disp, best[:, :, None, None], axis=2)[:, :, 0, :]


def effective_displacement(site_index: int, rx_position, layout: SiteLayout) -> np.ndarray:
    if not 0 <= site_index < layout.n_sites:
        raise IndexError(f"site_index {site_index} out of range")
    return effective_displacements(layout, [rx_position])[0, site_index]


def _center_membership(layout: SiteLayout, points: np.ndarray) -> np.ndarray:
    disp = effective_displacements(layout, points)
    d2 = disp[..., 0] ** 2 + disp[..., 1] ** 2
    return d2[:, layout.center_index] <= d2.min(axis=1)


def in_center_cell(p, layout: SiteLayout) -> bool:
    """True iff site 0 is (weakly) the nearest site to ``p`` under wraparound."""
    return bool(_center_membership(layout, np.asarray(p, dtype=float)[None, :])[0])


def build_receiver_grid(layout: SiteLayout, spacing: float, height: float) -> ReceiverGrid:
    """Square lattice anchored at the origin, clipped to the center hexagon.

    Points are ordered by ascending y, then ascending x.
    """
    if not (spacing > 0):
        raise InvalidParameterError(f"grid spacing must be positive, got {spacing!r}")
    if spacing >= layout.isd:
        raise InvalidParameterError(
            f"grid spacing {spacing} must be smaller than the inter-site distance {layout.isd}"
        )
    if height < 0:
        raise InvalidParameterError(f"receiver height must be non-negative, got {height!r}")
    circumradius = layout.isd / math.sqrt(3.0)
    k = int(math.ceil(circumradius / spacing)) + 1
    steps = np.arange(-k, k + 1) * float(spacing)
    yy, xx = np.meshgrid(steps, steps, indexing="ij")
    candidates = np.column_stack([xx.ravel(), yy.ravel()])
    inside = _center_membership(layout, candidates)
    return ReceiverGrid(points=candidates[inside], spacing=float(spacing), height=float(height))
