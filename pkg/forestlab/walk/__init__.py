from .heat_kernel import ZValues, heat_kernel, heat_kernel_offdiagonal, z_values
from .kac import MarkovChain, cycle_chain, kac_check, two_state_chain
from .loop_erasure import cut_times, loop_erase, lerw_reversal_law
from .paths import LoopMark, MarkedLoop, MarkKind, Path
from .srw import FixedSteps, HitSet, HitWired, run_srw
from .two_sided import cut_time_T_n, lerw_length_counter_L_n, two_sided_lerw

__all__ = [
    "FixedSteps",
    "HitSet",
    "HitWired",
    "LoopMark",
    "MarkKind",
    "MarkedLoop",
    "MarkovChain",
    "Path",
    "ZValues",
    "cut_time_T_n",
    "cut_times",
    "cycle_chain",
    "heat_kernel",
    "heat_kernel_offdiagonal",
    "kac_check",
    "lerw_length_counter_L_n",
    "lerw_reversal_law",
    "loop_erase",
    "run_srw",
    "two_sided_lerw",
    "two_state_chain",
    "z_values",
]
