"""Cube discretization of the scored box and concentric-cylinder shells.

The box around the vehicle is cut into axis-aligned cubes laid out from the
minimum corner; any remainder shorter than one edge is dropped at the
maximum end.  Vertical cylinders centered on the car origin select the cube
subsets the objective counts: a cube belongs to the innermost cylinder whose
lateral surface crosses the cube's ground footprint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Guards against float noise when a range is an exact multiple of the step.
_COUNT_EPS = 1e-9


def _checked_range(name: str, rng) -> tuple[float, float]:
    try:
        lo, hi = float(rng[0]), float(rng[1])
    except (TypeError, ValueError, IndexError):
        raise ValueError(f"{name} must be a (low, high) pair") from None
    if not hi > lo:
        raise ValueError(f"{name} must be a nonempty interval, got [{lo}, {hi}]")
    return (lo, hi)


@dataclass(frozen=True)
class Roi:
    """Axis-aligned box around the vehicle that the objective scores."""

    x_range: tuple[float, float]
    y_range: tuple[float, float]
    z_range: tuple[float, float]
    cube_edge: float

    def __post_init__(self):
        for name in ("x_range", "y_range", "z_range"):
            object.__setattr__(self, name, _checked_range(name, getattr(self, name)))
        object.__setattr__(self, "cube_edge", float(self.cube_edge))
        if not self.cube_edge > 0:
            raise ValueError(f"cube_edge must be positive, got {self.cube_edge}")
        for name, (lo, hi) in zip(("x_range", "y_range", "z_range"), self.ranges):
            if hi - lo + _COUNT_EPS < self.cube_edge:
                raise ValueError(f"{name} is shorter than one cube_edge")

    @property
    def ranges(self) -> tuple[tuple[float, float], ...]:
        return (self.x_range, self.y_range, self.z_range)

    def max_horizontal_extent(self) -> float:
        """Largest horizontal distance from the car origin to the footprint."""
        xm = max(abs(self.x_range[0]), abs(self.x_range[1]))
        ym = max(abs(self.y_range[0]), abs(self.y_range[1]))
        return math.hypot(xm, ym)


@dataclass(frozen=True, eq=False)
class CubeLattice:
    """Cube centers in a fixed x-major, then y, then z order."""

    roi: Roi
    centers: np.ndarray
    shape: tuple[int, int, int]

    @property
    def n_cubes(self) -> int:
        return len(self.centers)


@dataclass(frozen=True, eq=False)
class CylinderFamily:
    """Evenly spaced vertical cylinders through the car origin."""

    radius_gap: float
    radii: np.ndarray
    z_range: tuple[float, float]

    @property
    def n_cylinders(self) -> int:
        return len(self.radii)


@dataclass(frozen=True, eq=False)
class ShellAssignment:
    """Shell index per cube, -1 where no cylinder crosses the footprint."""

    shell_of_cube: np.ndarray
    radii: tuple[float, ...]

    @property
    def n_shells(self) -> int:
        return len(self.radii)

    @property
    def assigned_indices(self) -> np.ndarray:
        return np.nonzero(self.shell_of_cube >= 0)[0]

    @property
    def n_assigned(self) -> int:
        return int((self.shell_of_cube >= 0).sum())


def build_lattice(roi: Roi) -> CubeLattice:
    """Cut the box into cubes; centers sit half an edge off the min corner."""
    counts = []
    axes = []
    for lo, hi in roi.ranges:
        n = int(math.floor((hi - lo) / roi.cube_edge + _COUNT_EPS))
        counts.append(n)
        axes.append(lo + (np.arange(n) + 0.5) * roi.cube_edge)
    xs, ys, zs = np.meshgrid(*axes, indexing="ij")
    centers = np.stack([xs.ravel(), ys.ravel(), zs.ravel()], axis=1)
    return CubeLattice(roi=roi, centers=centers, shape=tuple(counts))


def build_cylinders(roi: Roi, radius_gap: float) -> CylinderFamily:
    """Radii ``gap, 2 gap, ...`` until the farthest footprint corner is covered."""
    if not radius_gap > 0:
        raise ValueError(f"radius_gap must be positive, got {radius_gap}")
    extent = roi.max_horizontal_extent()
    n = max(1, math.ceil(extent / radius_gap - _COUNT_EPS))
    radii = radius_gap * np.arange(1, n + 1, dtype=float)
    return CylinderFamily(radius_gap=float(radius_gap), radii=radii, z_range=roi.z_range)


def footprint_distance_bounds(centers_xy: np.ndarray, edge: float) -> tuple[np.ndarray, np.ndarray]:
    """Exact min and max of hypot(x, y) over each cube's square footprint.

    The minimum is attained at the footprint point nearest the origin
    (clamping the origin into the square), the maximum at the farthest
    corner, so both come out of interval arithmetic with no sampling.
    """
    half = edge / 2.0
    lo = centers_xy - half
    hi = centers_xy + half
    near = np.maximum(0.0, np.maximum(lo, -hi))
    dmin = np.hypot(near[:, 0], near[:, 1])
    far = np.maximum(np.abs(lo), np.abs(hi))
    dmax = np.hypot(far[:, 0], far[:, 1])
    return dmin, dmax


def assign_shells(lattice: CubeLattice, cylinders: CylinderFamily) -> ShellAssignment:
    """Pick, per cube, the smallest radius crossing its footprint, if any.

    A cylinder of radius r crosses a footprint exactly when
    ``dmin <= r <= dmax``; cubes crossed by several cylinders go to the
    smallest radius so the shells stay disjoint.
    """
    dmin, dmax = footprint_distance_bounds(lattice.centers[:, :2], lattice.roi.cube_edge)
    radii = cylinders.radii
    first = np.searchsorted(radii, dmin, side="left")
    clipped = np.minimum(first, len(radii) - 1)
    hit = (first < len(radii)) & (radii[clipped] <= dmax)
    shell = np.where(hit, first, -1).astype(np.int64)
    return ShellAssignment(shell_of_cube=shell, radii=tuple(float(r) for r in radii))
