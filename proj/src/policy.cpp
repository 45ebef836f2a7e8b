#include "syncbandit/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "syncbandit/errors.hpp"

namespace syncbandit {

void ConstraintSet::validate() const {
    if (dim == 0) throw InfeasibleError("ConstraintSet: dim must be >= 1");
    if (!(lo > 0.0) || !(lo <= hi) || !std::isfinite(hi))
        throw InfeasibleError("ConstraintSet: need 0 < lo <= hi");
    const double n = static_cast<double>(dim);
    if (budget < n * lo - 1e-12 || budget > n * hi + 1e-12)
        throw InfeasibleError("ConstraintSet: budget outside [dim*lo, dim*hi]");
}

bool ConstraintSet::contains(const RateVector& r, double tol) const {
    if (r.size() != dim) return false;
    double sum = 0.0;
    for (double x : r) {
        if (x < lo - tol || x > hi + tol) return false;
        sum += x;
    }
    return std::abs(sum - budget) <= tol * std::max(1.0, budget);
}

ProblemInstance ProblemInstance::clone() const {
    ProblemInstance out;
    out.r_min = r_min;
    out.r_max = r_max;
    out.budget = budget;
    out.cost_cap = cost_cap;
    out.processes.reserve(processes.size());
    for (const auto& p : processes) out.processes.push_back(p->clone());
    return out;
}

void ProblemInstance::validate() const {
    if (processes.empty()) throw std::invalid_argument("ProblemInstance: no arms");
    if (!(r_min > 0.0) || !(r_min <= r_max))
        throw std::invalid_argument("ProblemInstance: need 0 < r_min <= r_max");
    if (cost_cap <= 0.0) throw std::invalid_argument("ProblemInstance: cost_cap must be > 0");
    constraint_set(0.0).validate();
}

ConstraintSet ProblemInstance::constraint_set(double epsilon) const {
    if (epsilon < 0.0) throw std::invalid_argument("constraint_set: epsilon must be >= 0");
    ConstraintSet set;
    set.lo = r_min;
    set.hi = r_max / (1.0 + epsilon);
    set.budget = budget / (1.0 + epsilon);
    set.dim = processes.size();
    return set;
}

namespace {

void check_rates(const ProblemInstance& instance, const RateVector& r) {
    if (r.size() != instance.num_arms())
        throw std::invalid_argument("rate vector dimension mismatch");
    for (double rk : r)
        if (!(rk > 0.0) || !std::isfinite(rk))
            throw std::invalid_argument("rates must be strictly positive and finite");
}

double partial_cost(const CostProcess& proc, double rk, std::size_t num_arms) {
    const double gap = 1.0 / rk;
    return (proc.mean_cumulative_cost(gap) - gap * proc.mean_cost(gap)) /
           static_cast<double>(num_arms);
}

}  // namespace

double policy_cost(const ProblemInstance& instance, const RateVector& r) {
    check_rates(instance, r);
    double sum = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k)
        sum += r[k] * instance.processes[k]->mean_cumulative_cost(1.0 / r[k]);
    return sum / static_cast<double>(r.size());
}

RateVector analytic_gradient(const ProblemInstance& instance, const RateVector& r) {
    check_rates(instance, r);
    RateVector grad(r.size());
    for (std::size_t k = 0; k < r.size(); ++k)
        grad[k] = partial_cost(*instance.processes[k], r[k], r.size());
    return grad;
}

RateVector oracle_optimal_rates(const ProblemInstance& instance,
                                const ConstraintSet& constraints) {
    constraints.validate();
    if (constraints.dim != instance.num_arms())
        throw std::invalid_argument("oracle_optimal_rates: dimension mismatch");
    const std::size_t K = constraints.dim;
    const double lo = constraints.lo;
    const double hi = constraints.hi;

    if (K == 1) return {constraints.budget};

    // dJ/dr_k is non-decreasing in r_k (convexity), so for a candidate dual
    // value c the KKT-consistent coordinate is the box-clamped inverse of the
    // gradient. The budget pins c down by monotone bisection.
    auto coord_at = [&](std::size_t k, double c) {
        const CostProcess& proc = *instance.processes[k];
        double g_lo = partial_cost(proc, lo, K);
        if (g_lo >= c) return lo;
        double g_hi = partial_cost(proc, hi, K);
        if (g_hi <= c) return hi;
        double a = lo, b = hi;
        for (int it = 0; it < 200 && (b - a) > 1e-14 * hi; ++it) {
            double mid = 0.5 * (a + b);
            (partial_cost(proc, mid, K) < c ? a : b) = mid;
        }
        return 0.5 * (a + b);
    };
    auto total_at = [&](double c) {
        double sum = 0.0;
        for (std::size_t k = 0; k < K; ++k) sum += coord_at(k, c);
        return sum;
    };

    double c_lo = std::numeric_limits<double>::infinity();
    double c_hi = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < K; ++k) {
        c_lo = std::min(c_lo, partial_cost(*instance.processes[k], lo, K));
        c_hi = std::max(c_hi, partial_cost(*instance.processes[k], hi, K));
    }
    // total_at(c_lo) == K*lo <= budget and total_at(c_hi) == K*hi >= budget.
    double a = c_lo, b = c_hi;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (a + b);
        if (total_at(mid) < constraints.budget)
            a = mid;
        else
            b = mid;
        if (std::abs(total_at(mid) - constraints.budget) <=
            1e-12 * std::max(1.0, constraints.budget))
            break;
    }
    const double c_star = 0.5 * (a + b);
    RateVector r(K);
    for (std::size_t k = 0; k < K; ++k) r[k] = coord_at(k, c_star);

    // Absorb the leftover budget residual into interior coordinates. Arms
    // whose gradient saturates (flat in r at machine precision) make the
    // inverse map effectively discontinuous, so the bisection can land a
    // small gap off the budget plane; shifting interior coordinates there
    // leaves the equal-gradient certificate intact.
    double residual = constraints.budget;
    for (double rk : r) residual -= rk;
    for (int pass = 0; pass < 4 && std::abs(residual) > 0.0; ++pass) {
        std::vector<std::size_t> interior;
        for (std::size_t k = 0; k < K; ++k)
            if (r[k] > lo + 1e-12 && r[k] < hi - 1e-12) interior.push_back(k);
        if (interior.empty()) break;
        const double share = residual / static_cast<double>(interior.size());
        for (std::size_t k : interior) {
            const double adjusted = std::clamp(r[k] + share, lo, hi);
            residual -= adjusted - r[k];
            r[k] = adjusted;
        }
    }
    if (std::abs(residual) > 1e-8 * std::max(1.0, constraints.budget))
        throw ConvergenceError("oracle_optimal_rates: dual bisection failed to meet budget");
    return r;
}

double kkt_residual(const ProblemInstance& instance, const ConstraintSet& constraints,
                    const RateVector& r, double clip_tol) {
    RateVector grad = analytic_gradient(instance, r);
    std::vector<double> interior;
    double max_hi_grad = -std::numeric_limits<double>::infinity();
    double min_lo_grad = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < r.size(); ++k) {
        if (r[k] <= constraints.lo + clip_tol)
            min_lo_grad = std::min(min_lo_grad, grad[k]);
        else if (r[k] >= constraints.hi - clip_tol)
            max_hi_grad = std::max(max_hi_grad, grad[k]);
        else
            interior.push_back(grad[k]);
    }
    double c;
    if (!interior.empty()) {
        std::nth_element(interior.begin(), interior.begin() + interior.size() / 2,
                         interior.end());
        c = interior[interior.size() / 2];
    } else {
        // Any c between the hi-clipped and lo-clipped gradients certifies.
        double upper = std::isfinite(min_lo_grad) ? min_lo_grad : max_hi_grad;
        double lower = std::isfinite(max_hi_grad) ? max_hi_grad : min_lo_grad;
        c = 0.5 * (lower + upper);
    }
    double res = 0.0;
    for (double g : interior) res = std::max(res, std::abs(g - c));
    for (std::size_t k = 0; k < r.size(); ++k) {
        if (r[k] <= constraints.lo + clip_tol)
            res = std::max(res, c - grad[k]);  // need grad >= c at the lower bound
        else if (r[k] >= constraints.hi - clip_tol)
            res = std::max(res, grad[k] - c);  // need grad <= c at the upper bound
    }
    return std::max(res, 0.0);
}

}  // namespace syncbandit
