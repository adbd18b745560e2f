"""Tests for the minimax shell-count objective and report ordering."""

import math

import pytest

import lidarlayout as ll
from lidarlayout import LidarPose


def _one_cube_scene():
    roi = ll.Roi((0.0, 1.0), (0.0, 1.0), (0.0, 1.0), cube_edge=1.0)
    lattice = ll.build_lattice(roi)
    shells = ll.assign_shells(lattice, ll.build_cylinders(roi, 1.0))
    fleet = ll.FleetSpec(((math.radians(10.0),),))
    return fleet, lattice, shells


def test_single_cube_hand_case():
    """One cube above the only laser: objective 1 in the first subspace."""
    fleet, lattice, shells = _one_cube_scene()
    for mode in ll.MODES:
        rep = ll.evaluate(fleet, (LidarPose(0.0, 0.0, 0.0),), lattice, shells,
                          mode=mode)
        assert rep.objective == 1
        assert rep.subspace_scores == (1, 0)
        assert rep.argmax_subspace == 0
        assert rep.approx_radius_m == 0.5
        assert rep.total_score == 1


def test_reference_scene_scores(case_fleet, case_lattice, case_shells,
                                reported_poses):
    """Regression freeze of the reference two-LiDAR scenario."""
    rep = ll.evaluate(case_fleet, reported_poses, case_lattice, case_shells,
                      mode="exact")
    assert rep.objective == 251
    assert rep.argmax_subspace == 0
    assert rep.approx_radius_m == 251 * 0.5 / 2.0
    rep_pyr = ll.evaluate(case_fleet, reported_poses, case_lattice, case_shells,
                          mode="pyramid")
    assert rep_pyr.objective == 234


def test_spread_beats_stacked_at_origin(case_fleet, case_lattice, case_shells,
                                        reported_poses):
    """Two separated mounts leave smaller voids than co-located sensors."""
    origin = (LidarPose(0.0, 0.0, 0.0), LidarPose(0.0, 0.0, 0.0))
    spread = ll.evaluate(case_fleet, reported_poses, case_lattice, case_shells)
    stacked = ll.evaluate(case_fleet, origin, case_lattice, case_shells)
    assert spread.objective < stacked.objective
    assert ll.compare(spread, stacked) == -1
    assert ll.compare(stacked, spread) == 1


def test_mirror_symmetry(case_fleet, case_lattice, case_shells):
    """Reflecting poses across the x-z plane leaves all scores unchanged."""
    poses = (LidarPose(3.1, -1.2, 0.8, pitch_beta=0.2, roll_gamma=0.15),
             LidarPose(-2.7, 0.9, 1.4, pitch_beta=-0.1, roll_gamma=-0.25))
    mirrored = tuple(LidarPose(p.x, -p.y, p.z, pitch_beta=p.pitch_beta,
                               roll_gamma=-p.roll_gamma) for p in poses)
    for mode in ll.MODES:
        a = ll.evaluate(case_fleet, poses, case_lattice, case_shells, mode=mode)
        b = ll.evaluate(case_fleet, mirrored, case_lattice, case_shells, mode=mode)
        assert a.subspace_scores == b.subspace_scores


def test_finer_lattice_raises_count_objective(case_fleet, reported_poses):
    """Halving the cube edge strictly increases the integer objective."""
    objectives = {}
    for edge in (1.0, 0.5):
        roi = ll.Roi((-8.5, 8.5), (-2.5, 2.5), (0.0, 5.0), cube_edge=edge)
        lattice = ll.build_lattice(roi)
        shells = ll.assign_shells(lattice, ll.build_cylinders(roi, 1.0))
        rep = ll.evaluate(case_fleet, reported_poses, lattice, shells)
        objectives[edge] = rep.objective
    assert objectives[0.5] > objectives[1.0]


def test_compare_is_a_total_order_on_ties(case_fleet, case_lattice, case_shells,
                                          reported_poses):
    rep = ll.evaluate(case_fleet, reported_poses, case_lattice, case_shells)
    again = ll.evaluate(case_fleet, reported_poses, case_lattice, case_shells)
    assert ll.compare(rep, again) == 0
    swapped = ll.evaluate(case_fleet, reported_poses[::-1], case_lattice,
                          case_shells)
    assert rep.objective == swapped.objective
    assert ll.compare(rep, swapped) == -ll.compare(swapped, rep) != 0


def test_compare_rejects_mismatched_lattices(case_fleet, case_lattice,
                                             case_shells, reported_poses, table_roi):
    other_shells = ll.assign_shells(case_lattice, ll.build_cylinders(table_roi, 2.0))
    a = ll.evaluate(case_fleet, reported_poses, case_lattice, case_shells)
    b = ll.evaluate(case_fleet, reported_poses, case_lattice, other_shells)
    with pytest.raises(ValueError):
        ll.compare(a, b)
