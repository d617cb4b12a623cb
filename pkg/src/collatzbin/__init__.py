"""Binary-string arithmetic and verification toolkit for the 3n+1 map.

Values are naturals from 1 up, stored as explicit bit strings so the
digit mechanics of the map stay visible: tripling-plus-one is a single
carry pass, halving drops the last digit, and the 2-adic valuation is
the length of the trailing zero run. On top of that sit the orbit walks,
the digit-class partition, the tree-path composition view, the
power-of-two merge derivations, and a batch range verifier.
"""

from .bitnat import ONE, BinaryNat
from .classify import NumberClass, classify, hard_number, is_hard
from .collatz import (
    DEFAULT_CAP,
    CollatzTrace,
    ReducedStepResult,
    StepKind,
    cycle_check,
    odd_chain,
    reduced_step,
    sequence,
    step,
    stopping_time,
)
from .compose import CompositionPath, Step, decompose, f_inverse, tree_path
from .errors import (
    CapExceeded,
    CheckpointError,
    DomainError,
    ParityError,
    ResourceError,
)
from .powersum import (
    DerivationRecord,
    ExponentMultiset,
    PowerSum,
    derivation_trace,
    from_powersum,
    normalize,
    three_n_plus_one_merge,
    to_powersum,
)
from .traceio import RenderConfig, render_machine, render_points, render_scratch, render_table
from .verify import Checkpoint, RangeReport, checkpoint_resume, summarize, verify_range

__version__ = "0.1.0"

__all__ = [
    "BinaryNat",
    "ONE",
    "NumberClass",
    "classify",
    "is_hard",
    "hard_number",
    "DEFAULT_CAP",
    "StepKind",
    "CollatzTrace",
    "ReducedStepResult",
    "step",
    "reduced_step",
    "sequence",
    "stopping_time",
    "odd_chain",
    "cycle_check",
    "Step",
    "CompositionPath",
    "decompose",
    "f_inverse",
    "tree_path",
    "PowerSum",
    "ExponentMultiset",
    "DerivationRecord",
    "to_powersum",
    "from_powersum",
    "normalize",
    "three_n_plus_one_merge",
    "derivation_trace",
    "RenderConfig",
    "render_table",
    "render_scratch",
    "render_points",
    "render_machine",
    "RangeReport",
    "Checkpoint",
    "verify_range",
    "checkpoint_resume",
    "summarize",
    "ParityError",
    "DomainError",
    "ResourceError",
    "CapExceeded",
    "CheckpointError",
    "__version__",
]
