"""Per-subspace shell scores and the minimax coverage objective.

A configuration is scored by the largest number of same-shell cubes falling
into a single subspace: big clusters of undistinguished cubes mean a big
void no laser boundary cuts through.  Smaller is better.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import LidarPose
from .segmentation import build_membership


@dataclass(frozen=True)
class ObjectiveReport:
    """Scores of one configuration on one lattice.

    ``subspace_scores[s]`` is the worst shell count of subspace s and
    ``objective`` their maximum; ``approx_radius_m`` restates the objective
    as half the edge length times the count, a rough radius of the largest
    undetected void, for human reading only.
    """

    objective: int
    subspace_scores: tuple[int, ...]
    argmax_subspace: int
    approx_radius_m: float
    poses: tuple[LidarPose, ...]
    lattice_key: tuple

    @property
    def total_score(self) -> int:
        return int(sum(self.subspace_scores))


def _lattice_key(lattice, shells, mode: str, n_faces: int) -> tuple:
    faces = n_faces if mode == "pyramid" else None
    return (lattice.roi.ranges, lattice.roi.cube_edge, shells.radii, mode, faces)


def evaluate(fleet, poses, lattice, shells, mode: str = "exact",
             n_faces: int = 4) -> ObjectiveReport:
    """Score a configuration; ties on the max go to the lowest subspace index."""
    member = build_membership(fleet, poses, lattice, shells, mode=mode, n_faces=n_faces)
    if member.counts.shape[1] > 0:
        scores = member.counts.max(axis=1)
    else:
        scores = np.zeros(fleet.n_subspaces, dtype=np.int64)
    objective = int(scores.max())
    return ObjectiveReport(
        objective=objective,
        subspace_scores=tuple(int(v) for v in scores),
        argmax_subspace=int(np.argmax(scores)),
        approx_radius_m=objective * lattice.roi.cube_edge / 2.0,
        poses=tuple(poses),
        lattice_key=_lattice_key(lattice, shells, mode, n_faces),
    )


def compare(a: ObjectiveReport, b: ObjectiveReport) -> int:
    """Total order on reports: -1, 0 or +1 as a ranks before, with or after b.

    Lower objective wins, then lower sum of subspace scores, then the
    lexicographically smaller pose tuple, which makes the order total and
    search results reproducible under reordering.
    """
    if a.lattice_key != b.lattice_key:
        raise ValueError("reports come from different lattice or mode inputs")
    key_a = (a.objective, a.total_score, tuple(p.as_tuple() for p in a.poses))
    key_b = (b.objective, b.total_score, tuple(p.as_tuple() for p in b.poses))
    return (key_a > key_b) - (key_a < key_b)
