"""Tests for frames, cone side tests and the inscribed-pyramid planes."""

import math

import numpy as np
import pytest

from lidarlayout.geometry import (
    LaserCone,
    LidarPose,
    build_cones,
    build_pose_transform,
    cone_side_test,
    invert_transform,
    pyramid_planes,
    pyramid_side_margins,
    rotation_x,
    rotation_y,
    to_lidar_frame,
)


def test_rotation_y_quarter_turn():
    """Pitching by +90 deg sends the forward axis straight down."""
    out = rotation_y(math.pi / 2) @ np.array([1.0, 0.0, 0.0])
    np.testing.assert_allclose(out, [0.0, 0.0, -1.0], atol=1e-15)


def test_rotation_x_quarter_turn():
    out = rotation_x(math.pi / 2) @ np.array([0.0, 1.0, 0.0])
    np.testing.assert_allclose(out, [0.0, 0.0, 1.0], atol=1e-15)


def test_rotations_are_orthonormal():
    rng = np.random.default_rng(3)
    for angle in rng.uniform(-math.pi, math.pi, size=20):
        for rot in (rotation_y(angle), rotation_x(angle)):
            np.testing.assert_allclose(rot @ rot.T, np.eye(3), atol=1e-12)
            assert abs(np.linalg.det(rot) - 1.0) < 1e-12


def test_pose_transform_maps_sensor_origin_to_mount_point():
    pose = LidarPose(1.0, -2.0, 0.5, pitch_beta=0.3, roll_gamma=-0.2)
    t = build_pose_transform(pose)
    np.testing.assert_allclose(t.apply(np.zeros(3)), pose.position(), atol=1e-15)


def test_pitch_then_roll_composition_order():
    """The mount rotation applies roll about x first, then pitch about y."""
    pose = LidarPose(0.0, 0.0, 0.0, pitch_beta=0.4, roll_gamma=-0.7)
    t = build_pose_transform(pose)
    expected = rotation_y(0.4) @ rotation_x(-0.7)
    np.testing.assert_allclose(t.rotation, expected, atol=1e-15)


def test_frame_round_trip():
    rng = np.random.default_rng(11)
    for _ in range(50):
        pose = LidarPose(*rng.uniform(-5, 5, size=3),
                         pitch_beta=rng.uniform(-1, 1),
                         roll_gamma=rng.uniform(-1, 1))
        pts = rng.uniform(-10, 10, size=(7, 3))
        local = to_lidar_frame(pts, pose)
        back = build_pose_transform(pose).apply(local)
        np.testing.assert_allclose(back, pts, atol=1e-9)


def test_invert_transform_composes_to_identity():
    pose = LidarPose(2.0, 1.0, -0.5, pitch_beta=0.2, roll_gamma=0.1)
    t = build_pose_transform(pose)
    ident = t.compose(invert_transform(t)).as_matrix()
    np.testing.assert_allclose(ident, np.eye(4), atol=1e-12)


def test_cone_side_test_axis_points():
    theta = math.radians(10.0)
    assert cone_side_test(np.array([0.0, 0.0, 1.0]), theta) > 0
    assert cone_side_test(np.array([0.0, 0.0, -1.0]), theta) < 0
    # on the surface: z = tan(theta) * rho
    rho = 3.0
    on = np.array([rho, 0.0, math.tan(theta) * rho])
    assert abs(cone_side_test(on, theta)) < 1e-12


def test_cone_side_test_shapes():
    theta = math.radians(-10.0)
    single = cone_side_test(np.array([1.0, 2.0, 3.0]), theta)
    assert isinstance(single, float)
    batch = cone_side_test(np.ones((4, 3)), theta)
    assert batch.shape == (4,)


def test_downward_cone_sign():
    """A point between an up and a down cone is below one, above the other."""
    p = np.array([5.0, 0.0, 0.0])
    assert cone_side_test(p, math.radians(10.0)) < 0
    assert cone_side_test(p, math.radians(-10.0)) > 0


def test_pyramid_planes_basic_properties():
    normals, offsets = pyramid_planes(math.radians(10.0), 4)
    assert normals.shape == (4, 3)
    np.testing.assert_allclose(np.linalg.norm(normals, axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose(offsets, 0.0)
    # apex sits on every face
    np.testing.assert_allclose(normals @ np.zeros(3), 0.0)


def test_pyramid_planes_rejects_degenerate_face_count():
    with pytest.raises(ValueError):
        pyramid_planes(math.radians(10.0), 2)


def test_pyramid_edges_lie_on_cone():
    """The pyramid's slant edges are rays of the exact cone."""
    theta = math.radians(10.0)
    n_faces = 4
    normals, _ = pyramid_planes(theta, n_faces)
    for k in range(n_faces):
        alpha = 2.0 * math.pi * k / n_faces + math.pi / n_faces
        edge = np.array([math.cos(alpha), math.sin(alpha), math.tan(theta)])
        assert abs(cone_side_test(edge, theta)) < 1e-12
        margins = normals @ edge
        assert np.min(np.abs(margins)) < 1e-12  # touches the adjacent faces


def test_pyramid_above_region_inside_cone():
    rng = np.random.default_rng(5)
    pts = rng.uniform(-10, 10, size=(2000, 3))
    for deg in (10.0, -10.0, 25.0, -25.0):
        theta = math.radians(deg)
        margins = pyramid_side_margins(pts, theta)
        above_pyr = (margins >= 1e-12).all(axis=1)
        cone = cone_side_test(pts, theta)
        assert (cone[above_pyr] > -1e-12).all()


def test_zero_angle_pyramid_degenerates_to_horizontal_plane():
    normals, _ = pyramid_planes(0.0, 4)
    np.testing.assert_allclose(normals, np.tile([0.0, 0.0, 1.0], (4, 1)), atol=1e-15)


def test_laser_cone_matches_manual_transform():
    pose = LidarPose(1.0, 0.5, -0.25, pitch_beta=0.15, roll_gamma=-0.3)
    theta = math.radians(-10.0)
    cone = build_cones(pose, [theta])[0]
    pts = np.random.default_rng(9).uniform(-6, 6, size=(30, 3))
    np.testing.assert_allclose(
        cone.side_margin(pts), cone_side_test(to_lidar_frame(pts, pose), theta),
        atol=1e-12)


def test_laser_cone_rejects_vertical_beam():
    with pytest.raises(ValueError):
        LaserCone(math.pi / 2, np.zeros(3), np.eye(3))
