# 04_export_milp.py
#
# Build the mixed-integer model for a small instance, write it as an LP
# file a solver can read, and sanity-check the encoding by fixing the
# sensor positions and propagating: the bound variable t must then match
# the plain evaluator on the same poses.

import math
import os

from lidarlayout import (
    FleetSpec,
    LidarPose,
    MilpParams,
    Roi,
    assign_shells,
    build_cylinders,
    build_lattice,
    build_model,
    enumerate_patterns,
    evaluate,
    export_model,
    propagate_fixed_positions,
)
from lidarlayout.milp import infer_classes

DEG = math.pi / 180.0


def main():
    roi = Roi((0.0, 3.0), (0.0, 3.0), (0.0, 2.0), cube_edge=1.0)
    lattice = build_lattice(roi)
    shells = assign_shells(lattice, build_cylinders(roi, radius_gap=1.5))
    fleet = FleetSpec(beam_angles=((10 * DEG, -10 * DEG), (10 * DEG, -10 * DEG)))
    patterns = enumerate_patterns(fleet)

    model = build_model(
        fleet,
        fixed_angles=((0.0, 0.0), (0.0, 0.0)),
        lattice=lattice,
        shells=shells,
        patterns=patterns,
        params=MilpParams(big_m=200.0, epsilon=0.01),
    )
    print(f"{model.n_variables} variables, {model.n_constraints} constraints")
    for cls, names in sorted(infer_classes(v.name for v in model.variables).items()):
        print(f"  {cls:9s} {len(names)}")

    os.makedirs("out", exist_ok=True)
    path = os.path.join("out", "small_layout.lp")
    export_model(model, path)
    with open(path, encoding="ascii") as fh:
        head = [next(fh) for _ in range(8)]
    print(f"\nwrote {path}; first lines:")
    print("".join(f"  {line}" for line in head), end="")

    poses = (LidarPose(0.31, 0.42, 0.55), LidarPose(2.6, 1.3, 1.15))
    positions = {}
    for i, p in enumerate(poses):
        positions[f"X{i}"] = p.x
        positions[f"Y{i}"] = p.y
        positions[f"Z{i}"] = p.z
    values = propagate_fixed_positions(model, positions)

    report = evaluate(fleet, poses, lattice, shells, mode="pyramid")
    print(f"\npropagated bound t = {values['t']:.1f}")
    print(f"evaluator objective = {report.objective}")
    assert values["t"] == report.objective


if __name__ == "__main__":
    main()
