"""Executable thread-local semantics of the C/C++ memory model.

Programs are instruction trees composed by parallelized sequential
composition; the configured reordering relation (data dependencies, fences,
ordering constraints) decides which later instructions may execute early,
and exhaustive exploration decides litmus verdicts.
"""

from .ast import Program
from .reorder import ModelConfig
from .semantics import ExplorationLimits, enumerate_traces, explore_finals
from .analysis import (Judgment, block_all_check, hoare_check,
                       plain_interpretation, refines, run_law_suite,
                       sc_oracle, trace_equiv)
from .litmus import LitmusFile, parse_litmus, run_litmus

__version__ = "0.1.0"

__all__ = [
    "Program", "ModelConfig", "ExplorationLimits", "enumerate_traces",
    "explore_finals", "Judgment", "block_all_check", "hoare_check",
    "plain_interpretation", "refines", "run_law_suite", "sc_oracle",
    "trace_equiv", "LitmusFile", "parse_litmus", "run_litmus", "__version__",
]
