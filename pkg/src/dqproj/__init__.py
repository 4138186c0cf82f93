"""Exact metric projection onto the unit dual quaternion set.

The library exposes the dual quaternion algebra (`dq`), the projection
solver with its verification oracle (`projection`), robust cubic and
quartic real-root extraction (`polyroots`), seeded synthetic batch
generation (`synthetic`), trajectory ingestion (`trajectory`), and a
benchmark harness (`bench`). The `dqproj` command wires them together.
"""

__version__ = "0.1.0"

from .bench import (BatchStats, CdfSeries, ItemResult, baseline_project,
                    compute_cdf, run_batch)
from .dq import (CorruptPose, DivisionUndefined, DualNumber, DualQuaternion,
                 NotRotation, NotUnit, Quaternion, TrajectoryPose,
                 canonicalize_sign, dual_quaternion_to_pose,
                 pose_to_dual_quaternion, quat_to_rotation_matrix,
                 rotation_matrix_to_quat)
from .polyroots import (DegenerateLeading, RealRoots, cubic_real_roots,
                        quartic_real_roots)
from .projection import (Candidate, NoFeasibleCandidate, NonFinite,
                         OracleResult, ProjectionCase, ProjectionResult,
                         build_quartic, candidate_from_root, classify,
                         dependence_ratio, kkt_residual, oracle_project,
                         project, project_vectors, unit_orthogonal_to)
from .synthetic import SyntheticBatch, SyntheticConfig, make_batch
from .trajectory import (EmptyFile, TrajectoryFile, parse_trajectory,
                         trajectory_to_inputs, write_trajectory)

__all__ = [
    "__version__",
    "BatchStats", "CdfSeries", "ItemResult", "baseline_project",
    "compute_cdf", "run_batch",
    "CorruptPose", "DivisionUndefined", "DualNumber", "DualQuaternion",
    "NotRotation", "NotUnit", "Quaternion", "TrajectoryPose",
    "canonicalize_sign", "dual_quaternion_to_pose", "pose_to_dual_quaternion",
    "quat_to_rotation_matrix", "rotation_matrix_to_quat",
    "DegenerateLeading", "RealRoots", "cubic_real_roots", "quartic_real_roots",
    "Candidate", "NoFeasibleCandidate", "NonFinite", "OracleResult",
    "ProjectionCase", "ProjectionResult", "build_quartic",
    "candidate_from_root", "classify", "dependence_ratio", "kkt_residual",
    "oracle_project", "project", "project_vectors", "unit_orthogonal_to",
    "SyntheticBatch", "SyntheticConfig", "make_batch",
    "EmptyFile", "TrajectoryFile", "parse_trajectory", "trajectory_to_inputs",
    "write_trajectory",
]
