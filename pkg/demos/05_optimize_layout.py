# 05_optimize_layout.py
#
# Search for sensor positions in a narrow corridor with a single
# down-tilted beam per sensor.  The annealer proposes one coordinate move
# at a time, keeps anything that does not hurt, occasionally accepts a
# worse layout early on, and a coordinate-descent polish finishes the run.

import math

from lidarlayout import (
    FleetSpec,
    LidarPose,
    Roi,
    SearchConfig,
    assign_shells,
    build_cylinders,
    build_lattice,
    evaluate,
    optimize,
)

DEG = math.pi / 180.0


def main():
    roi = Roi((0.0, 4.0), (0.0, 1.0), (0.0, 1.0), cube_edge=1.0)
    lattice = build_lattice(roi)
    shells = assign_shells(lattice, build_cylinders(roi, radius_gap=1.0))
    fleet = FleetSpec(beam_angles=((10 * DEG,),))

    start = (LidarPose(0.6, 0.5, 0.0),)
    base = evaluate(fleet, start, lattice, shells)
    print(f"start pose z=0.0 scores {base.objective} blind cubes")

    cfg = SearchConfig(
        position_bounds=((0.0, 4.0), (0.0, 1.0), (0.0, 1.0)),
        multistarts=4,
        iterations=60,
        seed=7,
    )
    poses, trace = optimize(fleet, lattice, shells, cfg, initial_poses=start)

    best = trace.final_report
    print(f"best pose  x={poses[0].x:.3f} y={poses[0].y:.3f} z={poses[0].z:.3f}")
    print(f"objective  {best.objective} blind cubes"
          f" (void radius ~{best.approx_radius_m:.2f} m)")
    print(f"accepted {len(trace.accepted_moves)} moves over"
          f" {len(trace.best_objectives)} recorded steps"
          f" in {trace.wall_time_s:.2f} s")

    assert best.objective <= base.objective


if __name__ == "__main__":
    main()
