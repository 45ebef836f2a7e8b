from ._syncbandit import (
    ConstraintSet,
    ProblemInstance,
    analytic_gradient,
    barrier_init,
    corollary_hyperparams,
    div_f,
    euclidean_projection_step,
    generate_poisson_instance,
    generate_polynomial_instance,
    grad_j_sample,
    load_instance,
    mirror_descent_step,
    oracle_optimal_rates,
    policy_cost,
    run_async_mirrorsync,
    run_async_psgd,
    run_mirrorsync,
    save_instance,
)

__all__ = [
    "ConstraintSet",
    "ProblemInstance",
    "analytic_gradient",
    "barrier_init",
    "corollary_hyperparams",
    "div_f",
    "euclidean_projection_step",
    "generate_poisson_instance",
    "generate_polynomial_instance",
    "grad_j_sample",
    "load_instance",
    "mirror_descent_step",
    "oracle_optimal_rates",
    "policy_cost",
    "run_async_mirrorsync",
    "run_async_psgd",
    "run_mirrorsync",
    "save_instance",
]
