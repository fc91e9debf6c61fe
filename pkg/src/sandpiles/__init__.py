"""Sequential and parallel (symmetric) sandpile models on a line."""

from .core import (
    CollapseEvent,
    Configuration,
    Direction,
    Form,
    Greedy,
    Model,
    collapsible,
    difference_coding,
    format_config,
    from_difference_coding,
    height,
    is_fixed_point,
    is_partition,
    is_unimodal,
    mirror,
    normalize,
    parse_config,
    pspm_step,
    psspm_step_policy,
    psspm_successors,
    reverse,
    spm_successors,
    sspm_successors,
    translate,
    weight,
)
from .characterization import (
    div_profile,
    enumerate_fixed_point_forms,
    is_spm_reachable,
    is_sspm_form,
    spm_fixed_point,
)
from .procedures import (
    alternating_procedure,
    atom_form_check,
    atom_procedure,
    construct_path,
    deterministic_finish,
    max_alternating_steps,
    pseudo_alternating,
)
from .explorer import conjecture_scan, explore, fixed_point_forms, transient_stats, verify_main_theorem

__version__ = "0.1.0"
