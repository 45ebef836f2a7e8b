#pragma once

#include <limits>
#include <random>
#include <vector>

#include "syncbandit/policy.hpp"

namespace syncbandit::testing {

// Arms with mean cost a_k * tau (p = 1), noiseless unless stated.
inline ProblemInstance make_linear_instance(const std::vector<double>& coeffs, double r_min,
                                            double r_max, double budget, double cap = 40.0,
                                            double noise = 0.0) {
    ProblemInstance instance;
    instance.r_min = r_min;
    instance.r_max = r_max;
    instance.budget = budget;
    instance.cost_cap = cap;
    for (double a : coeffs)
        instance.processes.push_back(std::make_unique<PolynomialProcess>(a, 1.0, noise, cap));
    instance.validate();
    return instance;
}

inline ProblemInstance make_poisson_instance(const std::vector<double>& lambdas, double r_min,
                                             double r_max, double budget) {
    ProblemInstance instance;
    instance.r_min = r_min;
    instance.r_max = r_max;
    instance.budget = budget;
    instance.cost_cap = 1.0;
    for (double l : lambdas)
        instance.processes.push_back(std::make_unique<PoissonIndicatorProcess>(l));
    instance.validate();
    return instance;
}

// Uniform center plus a random zero-sum direction, scaled to stay in the box.
inline RateVector random_feasible(const ConstraintSet& set, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t k = set.dim;
    RateVector d(k);
    double mean = 0.0;
    for (auto& v : d) {
        v = unit(rng) - 0.5;
        mean += v;
    }
    mean /= static_cast<double>(k);
    double s_max = std::numeric_limits<double>::infinity();
    double center = set.budget / static_cast<double>(k);
    for (auto& v : d) {
        v -= mean;
        if (v > 1e-12) s_max = std::min(s_max, (set.hi - center) / v);
        if (v < -1e-12) s_max = std::min(s_max, (set.lo - center) / v);
    }
    double s = unit(rng) * (std::isfinite(s_max) ? s_max : 0.0);
    RateVector x(k, center);
    for (std::size_t i = 0; i < k; ++i) x[i] += s * d[i];
    return x;
}

}  // namespace syncbandit::testing
