#include "syncbandit/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "syncbandit/errors.hpp"

namespace syncbandit {

double div_f(const RateVector& x, const RateVector& r) {
    if (x.size() != r.size()) throw std::invalid_argument("div_f: dimension mismatch");
    double sum = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!(x[k] > 0.0) || !(r[k] > 0.0))
            throw std::invalid_argument("div_f: inputs must be strictly positive");
        const double ratio = x[k] / r[k];
        sum += -std::log(ratio) + ratio - 1.0;
    }
    return sum;
}

DualSolve solve_budget_dual(const std::function<double(std::size_t, double)>& coord,
                            const ConstraintSet& constraints) {
    const double budget = constraints.budget;
    auto total = [&](double lambda) {
        double sum = 0.0;
        for (std::size_t k = 0; k < constraints.dim; ++k) sum += coord(k, lambda);
        return sum;
    };

    DualSolve solve;
    double lo = 0.0, hi = 0.0;
    const double s0 = total(0.0);
    if (s0 > budget) {
        // Need lambda > 0 to shrink the sum.
        double step = 1.0;
        hi = step;
        int doublings = 0;
        while (total(hi) > budget) {
            step *= 2.0;
            hi += step;
            if (++doublings > 200)
                throw ConvergenceError("solve_budget_dual: no upper bracket in 200 doublings");
        }
    } else {
        double step = 1.0;
        lo = -step;
        int doublings = 0;
        while (total(lo) < budget) {
            step *= 2.0;
            lo -= step;
            if (++doublings > 200)
                throw ConvergenceError("solve_budget_dual: no lower bracket in 200 doublings");
        }
        hi = 0.0;
    }

    const double tol = 1e-10 * std::max(1.0, budget);
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double s = total(mid);
        solve.iterations = it + 1;
        solve.residual = std::abs(s - budget);
        if (solve.residual <= tol) break;
        if (s > budget)
            lo = mid;
        else
            hi = mid;
    }
    solve.lambda = mid;
    solve.residual = std::abs(total(mid) - budget);
    if (solve.residual > 1e-8 * std::max(1.0, budget))
        throw ConvergenceError("solve_budget_dual: bisection residual too large");
    return solve;
}

namespace {

void check_spec(const StepSpec& spec) {
    spec.constraints.validate();
    if (!(spec.eta > 0.0)) throw std::invalid_argument("StepSpec: eta must be > 0");
    if (spec.gradient.size() != spec.constraints.dim ||
        spec.current.size() != spec.constraints.dim)
        throw std::invalid_argument("StepSpec: dimension mismatch");
    for (double rk : spec.current)
        if (!(rk > 0.0)) throw std::invalid_argument("StepSpec: current must be positive");
}

RateVector materialize(const std::function<double(std::size_t, double)>& coord,
                       const ConstraintSet& constraints, DualSolve* info) {
    DualSolve solve = solve_budget_dual(coord, constraints);
    if (info) *info = solve;
    RateVector x(constraints.dim);
    for (std::size_t k = 0; k < constraints.dim; ++k) x[k] = coord(k, solve.lambda);
    return x;
}

}  // namespace

RateVector mirror_descent_step(const StepSpec& spec, DualSolve* info) {
    check_spec(spec);
    if (spec.constraints.dim == 1) {
        if (info) *info = DualSolve{};
        return {spec.constraints.budget};
    }
    const double lo = spec.constraints.lo;
    const double hi = spec.constraints.hi;
    auto coord = [&spec, lo, hi](std::size_t k, double lambda) {
        // Stationarity of eta*g_k*x - log(x/r_k) + x/r_k - 1 + lambda*x gives
        // x = 1/(eta*g_k + 1/r_k + lambda). A non-positive denominator means
        // the partial objective decreases on all of (0, hi], so clip to hi.
        const double denom = spec.eta * spec.gradient[k] + 1.0 / spec.current[k] + lambda;
        if (denom <= 0.0) return hi;
        return std::clamp(1.0 / denom, lo, hi);
    };
    return materialize(coord, spec.constraints, info);
}

RateVector euclidean_projection_step(const StepSpec& spec, DualSolve* info) {
    check_spec(spec);
    if (spec.constraints.dim == 1) {
        if (info) *info = DualSolve{};
        return {spec.constraints.budget};
    }
    const double lo = spec.constraints.lo;
    const double hi = spec.constraints.hi;
    auto coord = [&spec, lo, hi](std::size_t k, double lambda) {
        return std::clamp(spec.current[k] - spec.eta * spec.gradient[k] - lambda, lo, hi);
    };
    return materialize(coord, spec.constraints, info);
}

RateVector barrier_init(const ConstraintSet& constraints) {
    constraints.validate();
    // The barrier's stationarity forces all coordinates equal; feasibility
    // puts budget/dim inside the box.
    return RateVector(constraints.dim, constraints.budget / static_cast<double>(constraints.dim));
}

}  // namespace syncbandit
