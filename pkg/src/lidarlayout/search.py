"""Derivative-free search over mount configurations.

The objective is integer-valued and piecewise constant in the pose
variables, so the search is a multistart simulated annealing over the
flattened pose vector followed by a coordinate-descent polish.  All
randomness flows from one seed through per-start generator streams, which
makes runs reproducible and the final reduction independent of start order.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .geometry import LidarPose
from .objective import ObjectiveReport, compare, evaluate

POSE_DIMS = 5  # x, y, z, pitch, roll


@dataclass
class SearchConfig:
    """Bounds, annealing schedule and start layout for :func:`optimize`.

    ``position_bounds`` is ((x_lo, x_hi), (y_lo, y_hi), (z_lo, z_hi)) and
    applies to every LiDAR; ``angle_bounds`` covers pitch and roll alike and
    matters only when ``optimize_angles`` is set.  Step sizes start at
    ``initial_step_frac`` of each searched dimension's width (or at the
    explicit ``initial_steps``) and shrink geometrically by ``decay`` per
    iteration, as does the acceptance temperature.
    """

    position_bounds: tuple
    angle_bounds: tuple = (-math.radians(20.0), math.radians(20.0))
    multistarts: int = 8
    iterations: int = 300
    initial_step_frac: float = 0.25
    initial_steps: np.ndarray | None = None
    decay: float = 0.97
    initial_temperature: float = 2.0
    polish_levels: int = 2
    optimize_angles: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.multistarts < 1 or self.iterations < 1:
            raise ValueError("multistarts and iterations must be at least 1")
        if not 0 < self.decay < 1:
            raise ValueError(f"decay must lie in (0, 1), got {self.decay}")
        if not self.initial_temperature > 0:
            raise ValueError("initial_temperature must be positive")
        if not self.initial_step_frac > 0:
            raise ValueError("initial_step_frac must be positive")
        bounds = tuple(tuple(map(float, b)) for b in self.position_bounds)
        if len(bounds) != 3 or any(hi < lo for lo, hi in bounds):
            raise ValueError("position_bounds must be three (low, high) pairs")
        self.position_bounds = bounds
        self.angle_bounds = (float(self.angle_bounds[0]), float(self.angle_bounds[1]))
        if self.angle_bounds[1] < self.angle_bounds[0]:
            raise ValueError("angle_bounds must be ordered low, high")

    def dim_bounds(self) -> np.ndarray:
        """(5, 2) array of per-dimension bounds for one LiDAR."""
        rows = list(self.position_bounds) + [self.angle_bounds, self.angle_bounds]
        return np.array(rows, dtype=float)

    def start_steps(self) -> np.ndarray:
        if self.initial_steps is not None:
            steps = np.asarray(self.initial_steps, dtype=float)
            if steps.shape != (POSE_DIMS,):
                raise ValueError(f"initial_steps must have shape ({POSE_DIMS},)")
            return steps.copy()
        bounds = self.dim_bounds()
        return self.initial_step_frac * (bounds[:, 1] - bounds[:, 0])


@dataclass
class SearchTrace:
    """Progress log: global best after every iteration, plus accepted moves."""

    best_objectives: list[int] = field(default_factory=list)
    accepted_moves: list[tuple[int, int, int]] = field(default_factory=list)
    final_report: ObjectiveReport | None = None
    wall_time_s: float = 0.0


def _pose_matrix(poses) -> np.ndarray:
    return np.array([p.as_tuple() for p in poses], dtype=float)


def _poses_from_matrix(mat: np.ndarray) -> tuple[LidarPose, ...]:
    return tuple(LidarPose(*(float(v) for v in row)) for row in mat)


def _searched_dims(cfg: SearchConfig) -> list[int]:
    return list(range(POSE_DIMS if cfg.optimize_angles else 3))


def optimize(fleet, lattice, shells, cfg: SearchConfig, mode: str = "exact",
             initial_poses=None, n_faces: int = 4):
    """Best configuration found by annealing from ``cfg.multistarts`` starts.

    When ``initial_poses`` is given it becomes start 0 and the final result
    can only rank at or above it in the report order; the remaining starts
    sample the bounds uniformly.  Frozen dimensions (the angles, unless
    ``optimize_angles``) keep their start-0 values throughout.  Returns
    ``(poses, trace)`` with a non-increasing best-objective sequence.
    """
    t0 = time.perf_counter()
    n_l = fleet.n_lidars
    bounds = cfg.dim_bounds()
    dims = _searched_dims(cfg)
    moves = [(l, d) for l in range(n_l) for d in dims]

    base = np.zeros((n_l, POSE_DIMS))
    base[:, :3] = bounds[:3, 0] + 0.5 * (bounds[:3, 1] - bounds[:3, 0])
    if initial_poses is not None:
        if len(initial_poses) != n_l:
            raise ValueError("one initial pose per LiDAR required")
        base = _pose_matrix(initial_poses)
        for l, d in moves:
            if not bounds[d, 0] - 1e-12 <= base[l, d] <= bounds[d, 1] + 1e-12:
                raise ValueError(
                    f"initial pose {l} out of bounds on dimension {d}")

    def score(mat: np.ndarray) -> ObjectiveReport:
        return evaluate(fleet, _poses_from_matrix(mat), lattice, shells,
                        mode=mode, n_faces=n_faces)

    trace = SearchTrace()
    best_mat = base.copy()
    best_rep = score(best_mat)
    start_steps = cfg.start_steps()

    for start in range(cfg.multistarts):
        rng = np.random.default_rng([cfg.seed, start])
        mat = base.copy()
        if start > 0 or initial_poses is None:
            for l, d in moves:
                mat[l, d] = rng.uniform(bounds[d, 0], bounds[d, 1])
        cur_rep = score(mat)
        if compare(cur_rep, best_rep) < 0:
            best_mat, best_rep = mat.copy(), cur_rep

        steps = start_steps.copy()
        temperature = cfg.initial_temperature
        for it in range(cfg.iterations):
            l, d = moves[rng.integers(len(moves))]
            cand = mat.copy()
            cand[l, d] = np.clip(cand[l, d] + rng.uniform(-steps[d], steps[d]),
                                 bounds[d, 0], bounds[d, 1])
            cand_rep = score(cand)
            delta = cand_rep.objective - cur_rep.objective
            if delta <= 0 or rng.uniform() < math.exp(-delta / temperature):
                mat, cur_rep = cand, cand_rep
                trace.accepted_moves.append((start, it, cand_rep.objective))
                if compare(cur_rep, best_rep) < 0:
                    best_mat, best_rep = mat.copy(), cur_rep
            steps *= cfg.decay
            temperature *= cfg.decay
            trace.best_objectives.append(best_rep.objective)

    radius = np.where(np.isin(np.arange(POSE_DIMS), dims),
                      start_steps * cfg.decay ** cfg.iterations, 0.0)
    if cfg.polish_levels > 0:
        polished = grid_refine(fleet, lattice, shells, _poses_from_matrix(best_mat),
                               radius, cfg.polish_levels, mode=mode,
                               bounds=bounds, n_faces=n_faces)
        polished_rep = score(_pose_matrix(polished))
        if compare(polished_rep, best_rep) < 0:
            best_mat, best_rep = _pose_matrix(polished), polished_rep
        trace.best_objectives.append(best_rep.objective)

    trace.final_report = best_rep
    trace.wall_time_s = time.perf_counter() - t0
    return _poses_from_matrix(best_mat), trace


def grid_refine(fleet, lattice, shells, poses, radius, levels: int,
                mode: str = "exact", bounds=None, n_faces: int = 4):
    """Coordinate-descent polish around a configuration.

    Each level sweeps every pose dimension with +/- the current per-dim
    step, keeps strict improvements under the report total order, then
    halves the steps.  Dimensions with zero radius never move, and a zero
    radius overall returns the input configuration unchanged.
    """
    if levels < 1:
        raise ValueError(f"levels must be at least 1, got {levels}")
    steps = np.broadcast_to(np.asarray(radius, dtype=float), (POSE_DIMS,)).copy()
    if np.all(steps == 0.0):
        return tuple(poses)
    mat = _pose_matrix(poses)
    n_l = mat.shape[0]

    def score(m: np.ndarray) -> ObjectiveReport:
        return evaluate(fleet, _poses_from_matrix(m), lattice, shells,
                        mode=mode, n_faces=n_faces)

    best_rep = score(mat)
    for _ in range(levels):
        for l in range(n_l):
            for d in range(POSE_DIMS):
                if steps[d] == 0.0:
                    continue
                for sign in (1.0, -1.0):
                    cand = mat.copy()
                    value = cand[l, d] + sign * steps[d]
                    if bounds is not None:
                        value = float(np.clip(value, bounds[d][0], bounds[d][1]))
                    if value == mat[l, d]:
                        continue
                    cand[l, d] = value
                    cand_rep = score(cand)
                    if compare(cand_rep, best_rep) < 0:
                        mat, best_rep = cand, cand_rep
        steps /= 2.0
    return _poses_from_matrix(mat)
