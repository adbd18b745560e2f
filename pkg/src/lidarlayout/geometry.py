"""Rigid transforms between the car frame and LiDAR frames, plus side tests
against laser cones and the pyramids inscribed in them.

Conventions used throughout the package: the car frame has x forward, y left
and z up, with the origin on the ground under the vehicle center.  Each LiDAR
carries a local frame whose origin sits at the shared apex of its laser
cones.  A laser tilted by ``theta`` (positive above the horizon) sweeps the
cone ``z = tan(theta) * sqrt(x^2 + y^2)`` in that local frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Tie band for side tests: margins with |g| below this count as the downward
# side, so points sitting exactly on a boundary land in exactly one subspace.
BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class LidarPose:
    """Mounting pose of one LiDAR in the car frame.

    Positions are meters, angles radians.  Pitch rotates about the car y
    axis and roll about the car x axis; there is no yaw degree of freedom
    because the cones are rotationally symmetric about the local z axis.
    Angle ranges are enforced where configurations are parsed, not here.
    """

    x: float
    y: float
    z: float
    pitch_beta: float = 0.0
    roll_gamma: float = 0.0

    def position(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.x, self.y, self.z, self.pitch_beta, self.roll_gamma)


@dataclass(frozen=True, eq=False)
class Transform:
    """Rigid map ``p_out = rotation @ p_in + translation``."""

    rotation: np.ndarray
    translation: np.ndarray

    def apply(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return pts @ self.rotation.T + self.translation

    def compose(self, other: "Transform") -> "Transform":
        """Map equivalent to applying ``other`` first, then ``self``."""
        return Transform(
            rotation=self.rotation @ other.rotation,
            translation=self.rotation @ other.translation + self.translation,
        )

    def as_matrix(self) -> np.ndarray:
        m = np.eye(4)
        m[:3, :3] = self.rotation
        m[:3, 3] = self.translation
        return m


def rotation_y(beta: float) -> np.ndarray:
    """Rotation about the y axis (pitch)."""
    c, s = math.cos(beta), math.sin(beta)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rotation_x(gamma: float) -> np.ndarray:
    """Rotation about the x axis (roll)."""
    c, s = math.cos(gamma), math.sin(gamma)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def build_pose_transform(pose: LidarPose) -> Transform:
    """LiDAR-to-car transform for a mounting pose.

    The rotation is pitch about y composed with roll about x, applied in
    that order, and the translation is the mount position; local LiDAR
    coordinates map into the car frame.  Use :func:`invert_transform` or
    :func:`to_lidar_frame` for the opposite direction.
    """
    rot = rotation_y(pose.pitch_beta) @ rotation_x(pose.roll_gamma)
    return Transform(rotation=rot, translation=pose.position())


def invert_transform(t: Transform) -> Transform:
    rot_inv = t.rotation.T
    return Transform(rotation=rot_inv, translation=-(rot_inv @ t.translation))


def to_lidar_frame(p_car, pose: LidarPose) -> np.ndarray:
    """Coordinates of car-frame point(s) in the laser-apex-centered frame."""
    return invert_transform(build_pose_transform(pose)).apply(p_car)


def cone_side_test(p_local, theta: float):
    """Signed margin of local point(s) against the cone ``z = tan(theta) r``.

    Positive means the upward side of the cone, negative the downward side;
    the magnitude is the vertical clearance from the cone surface.  Accepts
    a single point of shape (3,) or a batch of shape (n, 3).
    """
    pts = np.asarray(p_local, dtype=float)
    radial = np.hypot(pts[..., 0], pts[..., 1])
    g = pts[..., 2] - math.tan(theta) * radial
    if pts.ndim == 1:
        return float(g)
    return g


def pyramid_planes(theta: float, n_faces: int = 4) -> tuple[np.ndarray, np.ndarray]:
    """Half-space description of the pyramid inscribed in a laser cone.

    The pyramid apex sits at the local origin and its edges lie on the cone
    at azimuths halfway between adjacent face directions, so with four faces
    the faces look along +x, +y, -x and -y.  Each row of ``normals`` is a
    unit normal pointing to the upward side; a point is above face i when
    ``normals[i] @ p > 0``.  All planes pass through the apex, hence the
    returned offsets are zero.  With ``theta = 0`` every normal degenerates
    to +z and the test collapses to the horizontal plane through the apex.

    A point above every face is above the exact cone as well, for either
    sign of ``theta``, which is the one-sided guarantee the linearized
    model relies on.

    Returns ``(normals, offsets)`` with shapes (n_faces, 3) and (n_faces,).
    """
    if n_faces < 3:
        raise ValueError(f"pyramid needs at least 3 faces, got {n_faces}")
    t = math.tan(theta)
    half = math.pi / n_faces
    azimuths = 2.0 * half * np.arange(n_faces)
    normals = np.stack(
        [
            -t * np.cos(azimuths),
            -t * np.sin(azimuths),
            np.full(n_faces, math.cos(half)),
        ],
        axis=1,
    )
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    return normals, np.zeros(n_faces)


def pyramid_side_margins(p_local, theta: float, n_faces: int = 4) -> np.ndarray:
    """Per-face signed margins; above the pyramid iff every margin > 0."""
    normals, _ = pyramid_planes(theta, n_faces)
    pts = np.asarray(p_local, dtype=float)
    return pts @ normals.T


@dataclass(frozen=True, eq=False)
class LaserCone:
    """One laser's swept surface: a cone with apex at the LiDAR origin."""

    beam_angle_theta: float
    apex: np.ndarray
    orientation: Transform

    def __post_init__(self):
        if not abs(self.beam_angle_theta) < math.pi / 2:
            raise ValueError("beam angle must satisfy |theta| < pi/2")

    def side_margin(self, p_car):
        local = invert_transform(self.orientation).apply(p_car)
        return cone_side_test(local, self.beam_angle_theta)


def build_cones(pose: LidarPose, beam_angles) -> list[LaserCone]:
    """Cones of one LiDAR, sharing the pose transform as their orientation."""
    t = build_pose_transform(pose)
    return [
        LaserCone(beam_angle_theta=float(a), apex=t.translation.copy(), orientation=t)
        for a in beam_angles
    ]
