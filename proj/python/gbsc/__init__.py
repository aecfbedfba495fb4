"""Gaussian-beam wave propagation with sparse-grid stochastic collocation."""

from ._core import (
    ConfigError,
    DataError,
    DomainError,
    GbscError,
    ParameterError,
    Problem,
    RandomSpace,
    SparseRule,
    StructureError,
    combination_coeffs,
    commands,
    draw_samples,
    growth,
    index_set,
    integrate,
    interpolate,
    load_problem,
    mc_estimate,
    parse_problem,
    regression_rate,
    set_thread_count,
    sparse_rule,
    tensor_rule,
    thread_count,
    univariate_nodes,
    univariate_weights,
)

__version__ = "0.1.0"
