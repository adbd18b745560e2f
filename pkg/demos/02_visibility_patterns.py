# 02_visibility_patterns.py
#
# A LiDAR with r stacked beam angles splits space into r+1 nested levels:
# above all cones, between consecutive cones, below all of them.  With a
# fleet of several LiDARs the joint levels multiply into (r+1)^m blind
# candidate subspaces.  This walks the enumeration for a two-sensor rig.

import math

import numpy as np

from lidarlayout import (
    FleetSpec,
    LidarPose,
    enumerate_patterns,
    monotone_flag_vectors,
)
from lidarlayout.segmentation import pattern_flat_index, side_levels

DEG = math.pi / 180.0


def main():
    # per-laser vectors for one sensor: -1 below the cone, +1 above
    for v in monotone_flag_vectors(2):
        print(f"  single-sensor flag vector {v}")

    fleet = FleetSpec(beam_angles=((10 * DEG, -10 * DEG), (10 * DEG, -10 * DEG)))
    patterns = enumerate_patterns(fleet)
    print(f"\n{fleet.n_lidars} LiDARs x {fleet.n_lasers} lasers"
          f" -> {len(patterns)} joint subspaces")
    for i, pat in enumerate(patterns):
        print(f"  subspace {i}: {pat.flags}")

    poses = (
        LidarPose(-2.0, 0.0, 1.0),
        LidarPose(2.0, 0.0, 1.0, pitch_beta=5 * DEG),
    )
    pts = np.array([
        [0.0, 0.0, 8.0],    # high above both sensors
        [0.0, 0.0, 1.0],    # between the sensors at mount height
        [0.0, 0.0, -4.0],   # deep under the rig, below every cone
    ])
    levels, valid = side_levels(fleet, poses, pts, mode="exact")
    flat = pattern_flat_index(levels, valid, fleet.n_lasers)
    for j, p in enumerate(pts):
        lv = tuple(int(v) for v in levels[:, j])
        print(f"point {p} -> per-sensor levels {lv} = subspace {flat[j]}")


if __name__ == "__main__":
    main()
