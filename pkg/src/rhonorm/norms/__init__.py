from .estimates import basis_estimate_check, lkio1_check
from .functionals import (FCombine, FConvex, FLeaf, Functional, evaluate,
                          render_functional, validate_tree, weight_of)
from .james import james_norm, james_norm_witness
from .schedules import ParamSchedule, ScheduleError, parse_schedule, schedule_paper
from .tsirelson import (aux_w_norm, norming_enumerate, oracle_norm,
                        tsirelson_norm, tsirelson_norm_witness)
