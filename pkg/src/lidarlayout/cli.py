"""Command line front end: evaluate, optimize, export-milp.

Configs are JSON (schema version 1) with angles in degrees; everything
internal runs in radians.  All output files are byte deterministic for a
fixed config and seed: JSON is written sorted with a fixed indent, CSV with
a fixed line terminator, and no wall-clock data lands in any artifact.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from .geometry import LidarPose
from .lattice import Roi, assign_shells, build_cylinders, build_lattice
from .milp import MilpParams, build_model, export_model
from .objective import ObjectiveReport, evaluate
from .search import SearchConfig, optimize
from .segmentation import MODES, FleetSpec, build_membership, enumerate_patterns


class ConfigError(Exception):
    """Malformed or inconsistent run configuration; exit code 2."""


class AngleSearchUnsupportedError(Exception):
    """MILP export requested with angle search enabled; exit code 3."""


@dataclass(frozen=True)
class RunConfig:
    roi: Roi
    cylinder_gap: float
    fleet: FleetSpec
    poses: tuple
    mode: str
    n_faces: int
    search: SearchConfig
    milp: MilpParams


def _check_keys(obj: dict, allowed, path: str) -> None:
    extra = sorted(set(obj) - set(allowed))
    if extra:
        raise ConfigError(f"{path}: unexpected field '{extra[0]}'")


def _field(obj: dict, key: str, path: str, default=None, required: bool = False):
    if key not in obj:
        if required:
            raise ConfigError(f"{path}.{key}: missing required field")
        return default
    return obj[key]


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    return float(value)


def _integer(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}: expected an integer, got {value!r}")
    return value


def _boolean(value, path: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"{path}: expected true or false, got {value!r}")
    return value


def _pair(value, path: str) -> tuple[float, float]:
    if not isinstance(value, list) or len(value) != 2:
        raise ConfigError(f"{path}: expected [low, high]")
    lo, hi = (_number(v, f"{path}[{i}]") for i, v in enumerate(value))
    if hi < lo:
        raise ConfigError(f"{path}: low must not exceed high")
    return lo, hi


def _parse_roi(obj, path: str) -> tuple[Roi, float]:
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected an object")
    _check_keys(obj, ("x", "y", "z", "cube_edge"), path)
    ranges = [_pair(_field(obj, k, path, required=True), f"{path}.{k}")
              for k in ("x", "y", "z")]
    edge = _number(_field(obj, "cube_edge", path, required=True), f"{path}.cube_edge")
    try:
        roi = Roi(*ranges, cube_edge=edge)
    except ValueError as e:
        raise ConfigError(f"{path}: {e}") from e
    return roi, edge


def _parse_fleet(obj, path: str) -> FleetSpec:
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected an object")
    _check_keys(obj, ("beam_angles_deg",), path)
    rows = _field(obj, "beam_angles_deg", path, required=True)
    if not isinstance(rows, list) or not rows:
        raise ConfigError(f"{path}.beam_angles_deg: expected a non-empty list of lists")
    angles = []
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise ConfigError(f"{path}.beam_angles_deg[{i}]: expected a list")
        angles.append(tuple(
            math.radians(_number(v, f"{path}.beam_angles_deg[{i}][{j}]"))
            for j, v in enumerate(row)))
    try:
        return FleetSpec(tuple(angles))
    except ValueError as e:
        raise ConfigError(f"{path}.beam_angles_deg: {e}") from e


def _parse_poses(items, n_lidars: int, path: str) -> tuple[LidarPose, ...]:
    if not isinstance(items, list):
        raise ConfigError(f"{path}: expected a list")
    if len(items) != n_lidars:
        raise ConfigError(f"{path}: expected {n_lidars} poses, got {len(items)}")
    poses = []
    for i, obj in enumerate(items):
        p = f"{path}[{i}]"
        if not isinstance(obj, dict):
            raise ConfigError(f"{p}: expected an object")
        _check_keys(obj, ("x", "y", "z", "pitch_deg", "roll_deg"), p)
        coords = [_number(_field(obj, k, p, required=True), f"{p}.{k}")
                  for k in ("x", "y", "z")]
        ang = [_number(_field(obj, k, p, 0.0), f"{p}.{k}")
               for k in ("pitch_deg", "roll_deg")]
        for k, v in zip(("pitch_deg", "roll_deg"), ang):
            if abs(v) > 90.0:
                raise ConfigError(f"{p}.{k}: must lie in [-90, 90], got {v}")
        poses.append(LidarPose(*coords, pitch_beta=math.radians(ang[0]),
                               roll_gamma=math.radians(ang[1])))
    return tuple(poses)


_SEARCH_KEYS = ("position_bounds", "angle_bound_deg", "multistarts", "iterations",
                "initial_step_frac", "decay", "initial_temperature",
                "polish_levels", "optimize_angles", "seed")


def _parse_search(obj, roi: Roi, poses, path: str) -> SearchConfig:
    obj = {} if obj is None else obj
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected an object")
    _check_keys(obj, _SEARCH_KEYS, path)

    explicit = _field(obj, "position_bounds", path)
    if explicit is not None:
        if not isinstance(explicit, dict):
            raise ConfigError(f"{path}.position_bounds: expected an object")
        _check_keys(explicit, ("x", "y", "z"), f"{path}.position_bounds")
        bounds = [_pair(_field(explicit, k, f"{path}.position_bounds", required=True),
                        f"{path}.position_bounds.{k}") for k in ("x", "y", "z")]
        for i, pose in enumerate(poses):
            for (lo, hi), axis, v in zip(bounds, "xyz", pose.position()):
                if not lo <= v <= hi:
                    raise ConfigError(
                        f"poses[{i}].{axis}: {float(v)} outside "
                        f"{path}.position_bounds.{axis} [{lo}, {hi}]")
    else:
        # Default box: the scored region, stretched to cover the start poses.
        bounds = []
        for (lo, hi), axis in zip(roi.ranges, range(3)):
            vals = [p.position()[axis] for p in poses]
            bounds.append((min([lo] + vals), max([hi] + vals)))

    optimize_angles = _boolean(_field(obj, "optimize_angles", path, False),
                               f"{path}.optimize_angles")
    pose_deg = [abs(math.degrees(a)) for p in poses
                for a in (p.pitch_beta, p.roll_gamma)]
    bound_deg = _field(obj, "angle_bound_deg", path)
    if bound_deg is not None:
        bound_deg = _number(bound_deg, f"{path}.angle_bound_deg")
        if bound_deg < 0:
            raise ConfigError(f"{path}.angle_bound_deg: must be non-negative")
        if optimize_angles and pose_deg and max(pose_deg) > bound_deg:
            raise ConfigError(
                f"{path}.angle_bound_deg: start pose angles exceed {bound_deg} deg")
    else:
        bound_deg = max([20.0] + pose_deg)

    kwargs = {}
    for key, conv in (("multistarts", _integer), ("iterations", _integer),
                      ("polish_levels", _integer), ("seed", _integer),
                      ("initial_step_frac", _number), ("decay", _number),
                      ("initial_temperature", _number)):
        if key in obj:
            kwargs[key] = conv(obj[key], f"{path}.{key}")
    try:
        return SearchConfig(
            position_bounds=tuple(bounds),
            angle_bounds=(-math.radians(bound_deg), math.radians(bound_deg)),
            optimize_angles=optimize_angles, **kwargs)
    except ValueError as e:
        raise ConfigError(f"{path}: {e}") from e


def _parse_milp(obj, n_faces: int, path: str) -> MilpParams:
    obj = {} if obj is None else obj
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected an object")
    _check_keys(obj, ("big_m", "epsilon"), path)
    kwargs = {k: _number(obj[k], f"{path}.{k}") for k in ("big_m", "epsilon") if k in obj}
    try:
        return MilpParams(n_faces=n_faces, **kwargs)
    except ValueError as e:
        raise ConfigError(f"{path}: {e}") from e


_TOP_KEYS = ("version", "roi", "cylinder_gap", "fleet", "poses", "mode",
             "pyramid_faces", "search", "milp")


def load_config(path) -> RunConfig:
    """Parse and validate a JSON run configuration."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"{path}: {e.strerror or e}") from e
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON ({e})") from e
    if not isinstance(obj, dict):
        raise ConfigError("config: top level must be an object")
    _check_keys(obj, _TOP_KEYS, "config")
    if _field(obj, "version", "config", required=True) != 1:
        raise ConfigError(f"config.version: expected 1, got {obj['version']!r}")

    roi, _ = _parse_roi(_field(obj, "roi", "config", required=True), "config.roi")
    gap = _number(_field(obj, "cylinder_gap", "config", required=True),
                  "config.cylinder_gap")
    if not gap > 0:
        raise ConfigError(f"config.cylinder_gap: must be positive, got {gap}")
    fleet = _parse_fleet(_field(obj, "fleet", "config", required=True), "config.fleet")
    poses = _parse_poses(_field(obj, "poses", "config", required=True),
                         fleet.n_lidars, "config.poses")

    mode = _field(obj, "mode", "config", "exact")
    if mode not in MODES:
        raise ConfigError(f"config.mode: expected one of {list(MODES)}, got {mode!r}")
    n_faces = _integer(_field(obj, "pyramid_faces", "config", 4), "config.pyramid_faces")
    if n_faces < 3:
        raise ConfigError(f"config.pyramid_faces: need at least 3, got {n_faces}")

    search = _parse_search(_field(obj, "search", "config"), roi, poses, "config.search")
    milp = _parse_milp(_field(obj, "milp", "config"), n_faces, "config.milp")
    return RunConfig(roi=roi, cylinder_gap=gap, fleet=fleet, poses=poses,
                     mode=mode, n_faces=n_faces, search=search, milp=milp)


def config_dict(cfg: RunConfig, poses) -> dict:
    """Schema-1 JSON object reproducing ``cfg`` with the given poses."""
    (px, py, pz) = cfg.search.position_bounds
    return {
        "version": 1,
        "roi": {"x": list(cfg.roi.x_range), "y": list(cfg.roi.y_range),
                "z": list(cfg.roi.z_range), "cube_edge": cfg.roi.cube_edge},
        "cylinder_gap": cfg.cylinder_gap,
        "fleet": {"beam_angles_deg": [[math.degrees(a) for a in row]
                                      for row in cfg.fleet.beam_angles]},
        "poses": [_pose_dict(p) for p in poses],
        "mode": cfg.mode,
        "pyramid_faces": cfg.n_faces,
        "search": {
            "position_bounds": {"x": list(px), "y": list(py), "z": list(pz)},
            "angle_bound_deg": math.degrees(cfg.search.angle_bounds[1]),
            "multistarts": cfg.search.multistarts,
            "iterations": cfg.search.iterations,
            "initial_step_frac": cfg.search.initial_step_frac,
            "decay": cfg.search.decay,
            "initial_temperature": cfg.search.initial_temperature,
            "polish_levels": cfg.search.polish_levels,
            "optimize_angles": cfg.search.optimize_angles,
            "seed": cfg.search.seed,
        },
        "milp": {"big_m": cfg.milp.big_m, "epsilon": cfg.milp.epsilon},
    }


def _pose_dict(pose: LidarPose) -> dict:
    return {"x": pose.x, "y": pose.y, "z": pose.z,
            "pitch_deg": math.degrees(pose.pitch_beta),
            "roll_deg": math.degrees(pose.roll_gamma)}


def _report_dict(cfg: RunConfig, report: ObjectiveReport, lattice, shells) -> dict:
    return {
        "mode": cfg.mode,
        "objective": report.objective,
        "approx_radius_m": report.approx_radius_m,
        "argmax_subspace": report.argmax_subspace,
        "subspace_scores": list(report.subspace_scores),
        "poses": [_pose_dict(p) for p in report.poses],
        "lattice": {
            "cube_edge": cfg.roi.cube_edge,
            "cylinder_gap": cfg.cylinder_gap,
            "n_cubes": lattice.n_cubes,
            "n_assigned": shells.n_assigned,
            "n_shells": shells.n_shells,
        },
    }


def _write_json(path: Path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {path}")


def _build_scene(cfg: RunConfig):
    lattice = build_lattice(cfg.roi)
    shells = assign_shells(lattice, build_cylinders(cfg.roi, cfg.cylinder_gap))
    return lattice, shells


def run_evaluate(cfg: RunConfig, out_dir: Path) -> ObjectiveReport:
    lattice, shells = _build_scene(cfg)
    report = evaluate(cfg.fleet, cfg.poses, lattice, shells,
                      mode=cfg.mode, n_faces=cfg.n_faces)
    member = build_membership(cfg.fleet, cfg.poses, lattice, shells,
                              mode=cfg.mode, n_faces=cfg.n_faces)
    _write_json(out_dir / "report.json", _report_dict(cfg, report, lattice, shells))

    with open(out_dir / "cubes.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "y", "z", "shell", "subspace"])
        shell = {int(i): int(s) for i, s in zip(member.cube_indices, member.shell_index)}
        sub = {int(i): int(s) for i, s in zip(member.cube_indices, member.subspace_index)}
        for i, (x, y, z) in enumerate(lattice.centers):
            writer.writerow([float(x), float(y), float(z),
                             shell.get(i, -1), sub.get(i, -1)])
    print(f"wrote {out_dir / 'cubes.csv'}")
    print(f"objective {report.objective} "
          f"(approx radius {report.approx_radius_m} m), "
          f"worst subspace {report.argmax_subspace}")
    return report


def run_optimize(cfg: RunConfig, out_dir: Path) -> ObjectiveReport:
    lattice, shells = _build_scene(cfg)
    poses, trace = optimize(cfg.fleet, lattice, shells, cfg.search,
                            mode=cfg.mode, initial_poses=cfg.poses,
                            n_faces=cfg.n_faces)
    report = trace.final_report
    _write_json(out_dir / "report.json", _report_dict(cfg, report, lattice, shells))
    with open(out_dir / "trace.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["iteration", "best_objective"])
        writer.writerows(enumerate(trace.best_objectives))
    print(f"wrote {out_dir / 'trace.csv'}")
    _write_json(out_dir / "best_config.json", config_dict(cfg, poses))
    print(f"best objective {report.objective} "
          f"(approx radius {report.approx_radius_m} m) "
          f"after {len(trace.best_objectives)} logged steps")
    return report


def run_export_milp(cfg: RunConfig, out_dir: Path):
    if cfg.search.optimize_angles:
        raise AngleSearchUnsupportedError(
            "the exported model keeps orientations fixed; "
            "disable search.optimize_angles to export")
    lattice, shells = _build_scene(cfg)
    patterns = enumerate_patterns(cfg.fleet)
    fixed_angles = [(p.pitch_beta, p.roll_gamma) for p in cfg.poses]
    model = build_model(cfg.fleet, fixed_angles, lattice, shells, patterns,
                        params=cfg.milp,
                        position_bounds=cfg.search.position_bounds)
    path = out_dir / "model.lp"
    export_model(model, path)
    print(f"wrote {path}")
    print(f"model: {model.n_variables} variables, "
          f"{model.n_constraints} constraints")
    return model


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="lidarlayout",
        description="Mounting layout scoring and search for multi-LiDAR rigs.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", help="JSON run configuration")
    common.add_argument("--out-dir", default="out", help="output directory")

    p_eval = sub.add_parser("evaluate", parents=[common],
                            help="score the configured poses")
    p_eval.add_argument("--mode", choices=MODES, help="override config mode")

    p_opt = sub.add_parser("optimize", parents=[common],
                           help="search for better poses")
    p_opt.add_argument("--mode", choices=MODES, help="override config mode")
    p_opt.add_argument("--seed", type=int, help="override search seed")

    sub.add_parser("export-milp", parents=[common],
                   help="write the placement model in LP format")

    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if getattr(args, "mode", None):
            cfg = replace(cfg, mode=args.mode)
        if getattr(args, "seed", None) is not None:
            cfg = replace(cfg, search=replace(cfg.search, seed=args.seed))
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        if args.command == "evaluate":
            run_evaluate(cfg, out_dir)
        elif args.command == "optimize":
            run_optimize(cfg, out_dir)
        else:
            run_export_milp(cfg, out_dir)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except AngleSearchUnsupportedError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    return 0
