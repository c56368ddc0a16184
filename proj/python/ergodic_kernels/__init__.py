"""Finite-state Markov kernels: ergodic decomposition, spectral split, ergodicity conditions."""

from ._core import (
    AmbiguousLimit,
    EconomyModel,
    InvalidInput,
    MarkovKernel,
    NonReturningSubset,
    NumericalDegeneracy,
    check_doeblin,
    check_harris,
    check_qscc_witness,
    check_uniform_integrability,
    compute_split,
    decompose,
    deterministic_time_average,
    kernel_distance,
    kernel_from_json,
    kernel_to_json,
    replay_witnesses,
    simulate_path,
    trace_chain,
)

__all__ = [name for name in dir() if not name.startswith("_")]
