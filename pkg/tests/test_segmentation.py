"""Tests for laser-side patterns and cube-to-subspace membership."""

import itertools
import math

import numpy as np
import pytest

import lidarlayout as ll
from lidarlayout.geometry import LidarPose, build_cones
from lidarlayout.segmentation import pattern_flat_index, side_levels


def test_fleet_sorts_angles_steepest_first():
    fleet = ll.FleetSpec(((math.radians(-10.0), math.radians(10.0)),))
    assert fleet.beam_angles[0][0] > fleet.beam_angles[0][1]
    assert fleet.n_lidars == 1
    assert fleet.n_lasers == 2
    assert fleet.n_total_lasers == 2
    assert fleet.n_subspaces == 3


def test_fleet_validation():
    with pytest.raises(ValueError):
        ll.FleetSpec(())
    with pytest.raises(ValueError):
        ll.FleetSpec(((0.1, 0.1),))  # duplicate angle
    with pytest.raises(ValueError):
        ll.FleetSpec(((0.1,), (0.1, 0.2)))  # ragged laser counts
    with pytest.raises(ValueError):
        ll.FleetSpec(((math.pi / 2,),))


def test_monotone_flag_vectors():
    assert ll.monotone_flag_vectors(1) == [(1,), (-1,)]
    assert ll.monotone_flag_vectors(2) == [(1, 1), (-1, 1), (-1, -1)]
    vectors = ll.monotone_flag_vectors(4)
    assert len(vectors) == 5
    for v in vectors:
        # below flags form a prefix over steepest-first ordering
        assert list(v) == sorted(v)


def test_pattern_rejects_non_monotone_flags():
    with pytest.raises(ValueError):
        ll.SubspacePattern(((1, -1),))


def test_enumerate_patterns_count_and_order(case_fleet):
    patterns = ll.enumerate_patterns(case_fleet)
    assert len(patterns) == 9
    # first LiDAR is the slow axis of the enumeration
    counts = [p.below_counts for p in patterns]
    assert counts == [(a, b) for a in range(3) for b in range(3)]
    for s, p in enumerate(patterns):
        levels = np.array([[c] for c in p.below_counts])
        idx = pattern_flat_index(levels, np.array([True]), case_fleet.n_lasers)
        assert idx[0] == s


def test_side_levels_match_direct_cone_tests(case_fleet):
    rng = np.random.default_rng(4)
    poses = (LidarPose(1.0, 0.5, 0.3, pitch_beta=0.1),
             LidarPose(-2.0, -0.5, 1.1, roll_gamma=-0.2))
    pts = rng.uniform(-8, 8, size=(500, 3))
    levels, valid = side_levels(case_fleet, poses, pts, mode="exact")
    assert valid.all()
    for l, pose in enumerate(poses):
        cones = build_cones(pose, case_fleet.beam_angles[l])
        below = np.stack([c.side_margin(pts) < 1e-12 for c in cones])
        np.testing.assert_array_equal(levels[l], below.sum(axis=0))


def test_non_monotone_vectors_are_empty_exact():
    """No point can be above a steep cone yet below a shallower one."""
    fleet = ll.FleetSpec(((math.radians(20.0), 0.0, math.radians(-20.0)),))
    pose = (LidarPose(0.3, -0.2, 0.4),)
    pts = np.random.default_rng(6).uniform(-20, 20, size=(20000, 3))
    cones = build_cones(pose[0], fleet.beam_angles[0])
    above = np.stack([c.side_margin(pts) >= 1e-12 for c in cones], axis=1)
    monotone = set(ll.monotone_flag_vectors(3))
    for row in above:
        flags = tuple(1 if a else -1 for a in row)
        assert flags in monotone


def test_pyramid_cross_laser_violation_is_flagged():
    """Pyramid tests can break cone nesting; such points get no subspace."""
    fleet = ll.FleetSpec(((math.radians(10.0), math.radians(-25.0)),))
    poses = (LidarPose(0.0, 0.0, 0.0),)
    # above the 10 deg pyramid but outside the -25 deg one
    p = np.array([[-9.894693908688506, 6.424568367655326, 5.941388575040925]])
    _, valid = side_levels(fleet, poses, p, mode="pyramid")
    assert not valid[0]
    idx = pattern_flat_index(*side_levels(fleet, poses, p, mode="pyramid"),
                             fleet.n_lasers)
    assert idx[0] == -1
    # the same point is fine under exact cone tests
    _, valid_exact = side_levels(fleet, poses, p, mode="exact")
    assert valid_exact[0]


def test_cube_membership_matches_tensor(case_fleet, case_lattice, case_shells,
                                        reported_poses):
    member = ll.build_membership(case_fleet, reported_poses, case_lattice,
                                 case_shells, mode="exact")
    patterns = ll.enumerate_patterns(case_fleet)
    rng = np.random.default_rng(8)
    pick = rng.choice(len(member.cube_indices), size=50, replace=False)
    for j in pick:
        cube = case_lattice.centers[member.cube_indices[j]]
        s = member.subspace_index[j]
        for cand in (s, (s + 1) % len(patterns)):
            got = ll.cube_membership(case_fleet, reported_poses,
                                     patterns[cand], cube, mode="exact")
            assert got == (cand == s)


def test_membership_partitions_assigned_cubes(case_fleet, case_lattice, case_shells):
    rng = np.random.default_rng(12)
    for _ in range(5):
        poses = tuple(LidarPose(*rng.uniform(-4, 4, size=2), rng.uniform(0, 3),
                                pitch_beta=rng.uniform(-0.3, 0.3),
                                roll_gamma=rng.uniform(-0.3, 0.3))
                      for _ in range(case_fleet.n_lidars))
        member = ll.build_membership(case_fleet, poses, case_lattice,
                                     case_shells, mode="exact")
        assert member.counts.shape == (9, case_shells.n_shells)
        assert member.counts.sum() == case_shells.n_assigned
        assert member.n_assigned == case_shells.n_assigned


def test_membership_tensor_indices_consistent(case_fleet, case_lattice,
                                              case_shells, reported_poses):
    member = ll.build_membership(case_fleet, reported_poses, case_lattice,
                                 case_shells, mode="pyramid")
    assert np.array_equal(
        member.shell_index,
        case_shells.shell_of_cube[member.cube_indices])
    # every counted (s, k) pair adds up from the per-cube assignments
    counted = np.zeros_like(member.counts)
    for s, k in zip(member.subspace_index, member.shell_index):
        if s >= 0:
            counted[s, k] += 1
    np.testing.assert_array_equal(counted, member.counts)
