#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "syncbandit/cost_process.hpp"

namespace syncbandit {

// Per-arm sync-mode play rates (plays per time unit), all strictly positive.
using RateVector = std::vector<double>;

// Box [lo, hi]^dim intersected with the budget plane sum(x) == budget.
struct ConstraintSet {
    double lo = 0.0;
    double hi = 0.0;
    double budget = 0.0;
    std::size_t dim = 0;

    // Throws InfeasibleError unless 0 < lo <= hi and dim*lo <= budget <= dim*hi.
    void validate() const;
    bool contains(const RateVector& r, double tol = 1e-8) const;
};

struct ProblemInstance {
    ProblemInstance() = default;
    ProblemInstance(ProblemInstance&&) = default;
    ProblemInstance& operator=(ProblemInstance&&) = default;
    // Deep copies go through clone(); the process vector makes the implicit
    // copy ill-formed anyway.
    ProblemInstance(const ProblemInstance&) = delete;
    ProblemInstance& operator=(const ProblemInstance&) = delete;

    double r_min = 0.0;
    double r_max = 0.0;
    double budget = 0.0;   // total bandwidth B
    double cost_cap = 0.0; // U
    std::vector<std::unique_ptr<CostProcess>> processes;

    std::size_t num_arms() const { return processes.size(); }
    ProblemInstance clone() const;
    void validate() const;

    // K_eps: box [r_min, r_max/(1+eps)], budget B/(1+eps). eps = 0 gives K_0.
    ConstraintSet constraint_set(double epsilon) const;
};

/// Expected long-run average policy cost J(r) = (1/K) sum_k r_k * Cbar_k(1/r_k),
/// evaluated exactly via each process's cumulative-expectation oracle.
double policy_cost(const ProblemInstance& instance, const RateVector& r);

/// Analytic gradient of J: dJ/dr_k = (1/K) [Cbar_k(1/r_k) - (1/r_k) cbar_k(1/r_k)].
/// Every component is <= 0.
RateVector analytic_gradient(const ProblemInstance& instance, const RateVector& r);

/// Known-model minimizer of policy_cost over the constraint set. Solves the
/// KKT system directly: the components of the analytic gradient share one
/// dual value except at box-clipped coordinates.
RateVector oracle_optimal_rates(const ProblemInstance& instance,
                                const ConstraintSet& constraints);

/// Largest deviation from the KKT conditions at r: interior coordinates must
/// share a common gradient value, lo-clipped ones must sit at or above it,
/// hi-clipped ones at or below. Zero means a certified optimum.
double kkt_residual(const ProblemInstance& instance, const ConstraintSet& constraints,
                    const RateVector& r, double clip_tol = 1e-9);

}  // namespace syncbandit
