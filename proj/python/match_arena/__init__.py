"""Online matching under vertex arrivals: fractional algorithm, rounding, hardness family."""

from ._core import (
    ArrivalInstance,
    EdgeArrivalInstance,
    beta_star,
    certificate_bound,
    edge_probabilities,
    f_kappa,
    generate_family,
    hard_instance,
    long_path_probabilities,
    lp_export,
    maximum_matching_size,
    prefix_ratio,
    read_instance,
    run_fractional,
    run_improved,
    run_trials,
    run_warmup,
    verify_certificate,
)

__all__ = [
    "ArrivalInstance",
    "EdgeArrivalInstance",
    "beta_star",
    "certificate_bound",
    "edge_probabilities",
    "f_kappa",
    "generate_family",
    "hard_instance",
    "long_path_probabilities",
    "lp_export",
    "maximum_matching_size",
    "prefix_ratio",
    "read_instance",
    "run_fractional",
    "run_improved",
    "run_trials",
    "run_warmup",
    "verify_certificate",
]
