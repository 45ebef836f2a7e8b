#pragma once

#include <functional>

#include "syncbandit/policy.hpp"

namespace syncbandit {

// Inputs for one constrained update step.
struct StepSpec {
    double eta = 0.0;
    RateVector gradient;
    RateVector current;
    ConstraintSet constraints;
};

// Outcome of the budget-plane dual solve.
struct DualSolve {
    double lambda = 0.0;
    int iterations = 0;
    double residual = 0.0;  // |sum(x) - budget|
};

/// Bregman divergence of the log-barrier potential:
/// sum_k -log(x_k / r_k) + x_k / r_k - 1. Non-negative, zero iff x == r.
double div_f(const RateVector& x, const RateVector& r);

/// argmin over the constraint set of eta*<x, g> + div_f(x, current).
/// Non-clipped coordinates satisfy x_k = 1/(eta*g_k + 1/r_k + lambda*)
/// for a single shared dual value lambda*.
RateVector mirror_descent_step(const StepSpec& spec, DualSolve* info = nullptr);

/// argmin over the constraint set of ||x - (current - eta*g)||_2, i.e. the
/// Euclidean projection used by the PSGD baseline.
RateVector euclidean_projection_step(const StepSpec& spec, DualSolve* info = nullptr);

/// Minimizer of the log barrier sum_k -log(x_k) over the constraint set;
/// this is the uniform vector budget/dim whenever that lies inside the box,
/// which feasibility guarantees.
RateVector barrier_init(const ConstraintSet& constraints);

/// Finds lambda such that sum_k coord(k, lambda) == budget, where each
/// coordinate is non-increasing in lambda. Bracket by doubling outward from
/// lambda = 0, then bisect. Shared by both step kinds.
DualSolve solve_budget_dual(const std::function<double(std::size_t, double)>& coord,
                            const ConstraintSet& constraints);

}  // namespace syncbandit
