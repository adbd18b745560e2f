"""Mounting layout scoring and search for multi-LiDAR rigs.

The package scores a set of LiDAR mounting poses by the largest region of
the space around the vehicle that every sensor misses, approximated on a
cube lattice split into concentric cylindrical shells.  On top of the
scorer sit a derivative-free pose search and an exporter that writes the
same minimax problem as a mixed-integer model in LP format.
"""

from .geometry import (
    LaserCone,
    LidarPose,
    Transform,
    build_cones,
    build_pose_transform,
    cone_side_test,
    pyramid_planes,
    pyramid_side_margins,
    to_lidar_frame,
)
from .lattice import (
    CubeLattice,
    CylinderFamily,
    Roi,
    ShellAssignment,
    assign_shells,
    build_cylinders,
    build_lattice,
    footprint_distance_bounds,
)
from .milp import (
    Affine,
    BigMValidationError,
    Constraint,
    DeadBandError,
    MilpModel,
    MilpParams,
    Variable,
    build_model,
    encode_and,
    encode_if_then_else,
    encode_or,
    export_model,
    propagate_fixed_positions,
    read_model,
)
from .objective import ObjectiveReport, compare, evaluate
from .search import SearchConfig, SearchTrace, grid_refine, optimize
from .segmentation import (
    MODES,
    FleetSpec,
    MembershipTensor,
    SubspacePattern,
    build_membership,
    cube_membership,
    enumerate_patterns,
    monotone_flag_vectors,
)

__version__ = "0.1.0"

__all__ = [
    "Affine",
    "BigMValidationError",
    "Constraint",
    "CubeLattice",
    "CylinderFamily",
    "DeadBandError",
    "FleetSpec",
    "LaserCone",
    "LidarPose",
    "MODES",
    "MembershipTensor",
    "MilpModel",
    "MilpParams",
    "ObjectiveReport",
    "Roi",
    "SearchConfig",
    "SearchTrace",
    "ShellAssignment",
    "SubspacePattern",
    "Transform",
    "Variable",
    "assign_shells",
    "build_cones",
    "build_cylinders",
    "build_lattice",
    "build_membership",
    "build_model",
    "build_pose_transform",
    "compare",
    "cone_side_test",
    "cube_membership",
    "encode_and",
    "encode_if_then_else",
    "encode_or",
    "enumerate_patterns",
    "evaluate",
    "export_model",
    "footprint_distance_bounds",
    "grid_refine",
    "monotone_flag_vectors",
    "optimize",
    "propagate_fixed_positions",
    "pyramid_planes",
    "pyramid_side_margins",
    "read_model",
    "to_lidar_frame",
]
