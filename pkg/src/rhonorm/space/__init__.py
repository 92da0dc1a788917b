from .blocks import (exact_pair_check, l1k_average_find, niceasris_check,
                     ris_check, risav_check)
from .coding import (CodingError, CodingState, QsEntry, ScheduleExhausted,
                     qs_problems, qs_project, sigma_rho)
from .depseq import DependentSequence, canonical_pair_source, dependent_sequence_build
from .knorm import (alternating_sum_demo, hi_demo, k_desk_norm, k_norm_bounds,
                    k_norm_bounds_witness, restriction_admissible,
                    restriction_audit, tree_analysis_validate)
from .special import (BlockAllocator, SpecialSequence, build_special_sequence,
                      canonical_phi_source, replaying_source, tree_interference)
