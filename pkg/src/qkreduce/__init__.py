"""qkreduce: weighted-torus quaternion-Kahler / 3-Sasakian reduction toolkit.

Exact admissibility checking of integer weight matrices, moment-map zero
set projection and rank diagnostics, and enumeration/verification of the
singular-stratum catalogs of the two reduction families (3x4 weights on
H^8, 2x3 weights on H^7).
"""

from .quat import HPoint, Quaternion, Sp1Element, quat_mul, sp1_from_angles
from .weights import (BoxSet, IsotropyGroup, MinorSet, OmegaMatrix,
                      ThetaMatrix, admissible_omega, admissible_theta,
                      box_identities_check, boxes_omega, boxes_theta,
                      feasible_grassmannians, free_impossibility_search,
                      is_free_omega, isotropy_group, minors_omega,
                      minors_theta, parse_weight_matrix, smith_normal_form)
from .reduction import (GroupElement, MomentValue, ReductionConfig, act,
                        fixed_point_residual, moment_value, mu, nu)
from .numerics import (ProjectionResult, RankReport, Tolerances,
                       constrained_project, constraint_rank,
                       infeasibility_probe, orbit_rank, project_to_N,
                       stratum_dimensions)
from .strata import (StratumDescriptor, StratumReport, compare_families,
                     descriptor_pattern, enumerate_sasakian_strata_omega,
                     enumerate_sasakian_strata_theta, enumerate_strata,
                     enumerate_twistor_strata_omega,
                     enumerate_twistor_strata_theta, fixed_point_block_det,
                     omega_positive_sign_pattern, stratum_isotropy_verify,
                     stratum_point_parametrize, v3_positive_sign_pattern,
                     verify_stratum)

__version__ = "0.1.0"
