"""Space segmentation by per-laser side flags and cube membership counts.

Every laser cone splits space into an upward and a downward side.  Fixing a
side for each laser of each LiDAR names one subspace.  Within a single LiDAR
the cones are nested, so with beam angles sorted steepest-first the only
side vectors points can realize are a run of downward flags followed by a
run of upward flags; everything else is geometrically empty and never
enumerated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .geometry import (
    BOUNDARY_TOL,
    LidarPose,
    build_pose_transform,
    invert_transform,
    pyramid_planes,
)

MODES = ("exact", "pyramid")


@dataclass(frozen=True)
class FleetSpec:
    """Beam angles of every LiDAR, each tuple sorted steepest-first.

    All LiDARs must carry the same number of lasers and angles within one
    LiDAR must be distinct; the constructor sorts them descending.
    """

    beam_angles: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        if len(self.beam_angles) == 0:
            raise ValueError("fleet needs at least one LiDAR")
        groups = []
        for i, angles in enumerate(self.beam_angles):
            a = tuple(sorted((float(v) for v in angles), reverse=True))
            if len(a) == 0:
                raise ValueError(f"LiDAR {i} needs at least one beam angle")
            if any(not abs(v) < math.pi / 2 for v in a):
                raise ValueError(f"LiDAR {i} beam angles must satisfy |theta| < pi/2")
            if any(a[j] <= a[j + 1] for j in range(len(a) - 1)):
                raise ValueError(f"LiDAR {i} beam angles must be distinct")
            groups.append(a)
        if len({len(a) for a in groups}) != 1:
            raise ValueError("every LiDAR must carry the same number of lasers")
        object.__setattr__(self, "beam_angles", tuple(groups))

    @property
    def n_lidars(self) -> int:
        return len(self.beam_angles)

    @property
    def n_lasers(self) -> int:
        return len(self.beam_angles[0])

    @property
    def n_total_lasers(self) -> int:
        return self.n_lidars * self.n_lasers

    @property
    def n_subspaces(self) -> int:
        return (self.n_lasers + 1) ** self.n_lidars


def monotone_flag_vectors(n_lasers: int) -> list[tuple[int, ...]]:
    """The n_lasers + 1 realizable side vectors of one LiDAR.

    Entry j has j downward flags on the steepest cones followed by upward
    flags on the rest.
    """
    return [(-1,) * j + (1,) * (n_lasers - j) for j in range(n_lasers + 1)]


@dataclass(frozen=True)
class SubspacePattern:
    """One side flag (+1 up, -1 down) per laser, one vector per LiDAR."""

    flags: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        flags = tuple(tuple(int(f) for f in vec) for vec in self.flags)
        for vec in flags:
            if vec not in monotone_flag_vectors(len(vec)):
                raise ValueError(f"side vector {vec} is not a down-run then up-run")
        object.__setattr__(self, "flags", flags)

    @property
    def below_counts(self) -> tuple[int, ...]:
        """Number of downward flags per LiDAR; identifies the vector."""
        return tuple(sum(1 for f in vec if f == -1) for vec in self.flags)


def enumerate_patterns(fleet: FleetSpec) -> list[SubspacePattern]:
    """All (n_lasers + 1) ** n_lidars subspaces in a fixed deterministic order.

    The per-LiDAR vectors run from all-up to all-down and the first LiDAR
    varies slowest, so a pattern's position equals its below_counts read as
    a base (n_lasers + 1) number.
    """
    per_lidar = monotone_flag_vectors(fleet.n_lasers)
    return [
        SubspacePattern(flags=combo)
        for combo in product(per_lidar, repeat=fleet.n_lidars)
    ]


def _above_matrix(angles: np.ndarray, local_pts: np.ndarray, mode: str, n_faces: int) -> np.ndarray:
    """Boolean (n_lasers, n_points): on the upward side per the mode's test."""
    if mode == "exact":
        radial = np.hypot(local_pts[:, 0], local_pts[:, 1])
        margins = local_pts[:, 2][None, :] - np.tan(angles)[:, None] * radial[None, :]
        return margins >= BOUNDARY_TOL
    if mode == "pyramid":
        rows = []
        for theta in angles:
            normals, _ = pyramid_planes(float(theta), n_faces)
            face_margins = local_pts @ normals.T
            rows.append(np.all(face_margins >= BOUNDARY_TOL, axis=1))
        return np.stack(rows)
    raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def side_levels(fleet, poses, points, mode: str = "exact", n_faces: int = 4):
    """Per-LiDAR count of downward flags for each point, plus validity.

    In exact mode every side vector is a down-run then an up-run by
    construction.  In pyramid mode the linearized upward regions are square
    cones in |tan theta|, so vectors can break that shape when |tan theta|
    is not descending; such points match no enumerated subspace and come
    back invalid.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    if len(poses) != fleet.n_lidars:
        raise ValueError("one pose per LiDAR required")
    levels = np.empty((fleet.n_lidars, len(pts)), dtype=np.int64)
    valid = np.ones(len(pts), dtype=bool)
    for l, (pose, angles) in enumerate(zip(poses, fleet.beam_angles)):
        local = invert_transform(build_pose_transform(pose)).apply(pts)
        above = _above_matrix(np.asarray(angles, dtype=float), local, mode, n_faces)
        levels[l] = above.shape[0] - above.sum(axis=0)
        if above.shape[0] > 1:
            valid &= np.all(above[:-1] <= above[1:], axis=0)
    return levels, valid


def pattern_flat_index(levels: np.ndarray, valid: np.ndarray, n_lasers: int) -> np.ndarray:
    """Below-count tuples to positions in the enumerate_patterns order."""
    base = n_lasers + 1
    flat = np.zeros(levels.shape[1], dtype=np.int64)
    for l in range(levels.shape[0]):
        flat = flat * base + levels[l]
    return np.where(valid, flat, -1)


def cube_membership(fleet, poses, pattern: SubspacePattern, cube_center,
                    mode: str = "exact", n_faces: int = 4) -> int:
    """1 iff the cube center sits on every laser's flagged side, else 0."""
    levels, valid = side_levels(fleet, poses, np.asarray(cube_center, dtype=float),
                                mode=mode, n_faces=n_faces)
    if not valid[0]:
        return 0
    return int(all(levels[l, 0] == j for l, j in enumerate(pattern.below_counts)))


@dataclass(frozen=True, eq=False)
class MembershipTensor:
    """Subspace membership of the shell-assigned cubes plus (s, k) counts.

    ``cube_indices`` are lattice indices; ``shell_index`` and
    ``subspace_index`` align with them, the latter -1 where a cube matches
    no pattern (possible only in pyramid mode).  ``counts[s, k]`` is the
    number of shell-k cubes inside subspace s; each cube contributes to at
    most one subspace.
    """

    cube_indices: np.ndarray
    shell_index: np.ndarray
    subspace_index: np.ndarray
    counts: np.ndarray

    @property
    def n_assigned(self) -> int:
        return len(self.cube_indices)


def build_membership(fleet, poses, lattice, shells, mode: str = "exact",
                     n_faces: int = 4) -> MembershipTensor:
    """Classify every shell-assigned cube center into its subspace."""
    idx = shells.assigned_indices
    pts = lattice.centers[idx]
    levels, valid = side_levels(fleet, poses, pts, mode=mode, n_faces=n_faces)
    flat = pattern_flat_index(levels, valid, fleet.n_lasers)
    shell = shells.shell_of_cube[idx]
    counts = np.zeros((fleet.n_subspaces, shells.n_shells), dtype=np.int64)
    claimed = flat >= 0
    np.add.at(counts, (flat[claimed], shell[claimed]), 1)
    return MembershipTensor(cube_indices=idx, shell_index=shell,
                            subspace_index=flat, counts=counts)
