#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "syncbandit/optimizer.hpp"

using namespace syncbandit;
using testing::random_feasible;

namespace {

// Objective the mirror step minimizes over the constraint set.
double mirror_objective(const RateVector& x, const StepSpec& spec) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += spec.eta * x[i] * spec.gradient[i];
    return acc + div_f(x, spec.current);
}

double euclid_objective(const RateVector& x, const StepSpec& spec) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - (spec.current[i] - spec.eta * spec.gradient[i]);
        acc += d * d;
    }
    return acc;
}

StepSpec random_spec(Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    StepSpec spec;
    spec.constraints = ConstraintSet{0.1, 2.0, 0.0, 2};
    spec.constraints.budget = 2.0 * 0.1 + (2.0 * 2.0 - 2.0 * 0.1) * unit(rng);
    spec.eta = 0.05 + 0.3 * unit(rng);
    spec.current = random_feasible(spec.constraints, rng);
    for (std::size_t i = 0; i < 2; ++i) spec.gradient.push_back(2.0 * unit(rng) - 1.0);
    return spec;
}

}  // namespace

TEST_SUITE_BEGIN("optimizer");

TEST_CASE("div_f closed forms") {
    CHECK(div_f({1.3, 0.4}, {1.3, 0.4}) == 0.0);
    CHECK(div_f({2.0}, {1.0}) == doctest::Approx(-std::log(2.0) + 1.0).epsilon(1e-10));
    CHECK(div_f({0.5}, {1.0}) == doctest::Approx(-std::log(0.5) - 0.5).epsilon(1e-10));
    CHECK_THROWS_AS(div_f({0.0}, {1.0}), std::invalid_argument);
    CHECK(div_f({0.7, 1.8}, {1.1, 0.3}) >= 0.0);
}

TEST_CASE("mirror step fixed points and the two-arm closed form") {
    ConstraintSet set{0.1, 1.9, 2.0, 2};
    RateVector current{1.1, 0.9};

    auto same = mirror_descent_step({0.5, {0.0, 0.0}, current, set});
    CHECK(same[0] == doctest::Approx(1.1).epsilon(1e-9));
    CHECK(same[1] == doctest::Approx(0.9).epsilon(1e-9));

    // eta=1, g=(-0.5, 0): stationarity gives x=(1/(0.5+l), 1/(1+l)) with
    // the dual root l=(sqrt(5)-1)/4.
    DualSolve info;
    auto x = mirror_descent_step({1.0, {-0.5, 0.0}, {1.0, 1.0}, set}, &info);
    double lambda = (std::sqrt(5.0) - 1.0) / 4.0;
    CHECK(x[0] == doctest::Approx(1.0 / (0.5 + lambda)).epsilon(1e-6));
    CHECK(x[1] == doctest::Approx(1.0 / (1.0 + lambda)).epsilon(1e-6));
    CHECK(info.lambda == doctest::Approx(lambda).epsilon(1e-4));
    CHECK(x[0] + x[1] == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("euclidean step fixed points and the shift example") {
    ConstraintSet set{0.01, 2.0, 2.0, 2};
    auto same = euclidean_projection_step({0.5, {0.0, 0.0}, {1.2, 0.8}, set});
    CHECK(same[0] == doctest::Approx(1.2).epsilon(1e-9));
    CHECK(same[1] == doctest::Approx(0.8).epsilon(1e-9));

    // Target (1.5, 0.5) already sums to the budget, so lambda = 0.
    auto x = euclidean_projection_step({1.0, {-0.5, 0.5}, {1.0, 1.0}, set});
    CHECK(x[0] == doctest::Approx(1.5).epsilon(1e-8));
    CHECK(x[1] == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("K=1 steps return the single feasible point") {
    ConstraintSet set{0.1, 5.0, 2.5, 1};
    CHECK(mirror_descent_step({1.0, {-3.0}, {2.5}, set})[0] == 2.5);
    CHECK(euclidean_projection_step({1.0, {-3.0}, {2.5}, set})[0] == 2.5);
}

TEST_CASE("barrier_init is the uniform interior point") {
    ConstraintSet table1{0.025, 3.0 / 1.05, 40.0 / 1.05, 100};
    auto init = barrier_init(table1);
    for (double v : init) CHECK(v == doctest::Approx(40.0 / 105.0).epsilon(1e-12));

    auto a = barrier_init({0.4, 5.0, 1.0, 2});
    CHECK(a[0] == doctest::Approx(0.5).epsilon(1e-12));
    auto b = barrier_init({0.6, 5.0, 1.5, 2});
    CHECK(b[0] == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("both steps stay feasible on random specs") {
    Rng rng(424242);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        std::size_t k = 2 + static_cast<std::size_t>(unit(rng) * 6);
        ConstraintSet set{0.05, 2.5, 0.0, k};
        double klo = set.lo * static_cast<double>(k), khi = set.hi * static_cast<double>(k);
        set.budget = klo + (khi - klo) * (0.1 + 0.8 * unit(rng));
        StepSpec spec;
        spec.constraints = set;
        spec.eta = 0.01 + 0.5 * unit(rng);
        spec.current = random_feasible(set, rng);
        for (std::size_t j = 0; j < k; ++j) spec.gradient.push_back(4.0 * unit(rng) - 2.0);
        auto m = mirror_descent_step(spec);
        auto e = euclidean_projection_step(spec);
        CHECK(set.contains(m, 1e-8));
        CHECK(set.contains(e, 1e-8));
    }
}

TEST_CASE("mirror step satisfies the shared-dual KKT system") {
    Rng rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        std::size_t k = 100;
        ConstraintSet set{0.025, 3.0, 40.0, k};
        StepSpec spec;
        spec.constraints = set;
        spec.eta = 0.2;
        spec.current = random_feasible(set, rng);
        for (std::size_t j = 0; j < k; ++j) spec.gradient.push_back(-unit(rng));
        DualSolve info;
        auto x = mirror_descent_step(spec, &info);
        CHECK(info.residual <= 1e-8 * set.budget);
        for (std::size_t j = 0; j < k; ++j) {
            bool clipped = x[j] <= set.lo + 1e-9 || x[j] >= set.hi - 1e-9;
            if (clipped) continue;
            double implied = 1.0 / x[j] - spec.eta * spec.gradient[j] - 1.0 / spec.current[j];
            CHECK(implied == doctest::Approx(info.lambda).epsilon(1e-6));
        }
    }
}

TEST_CASE("steps match brute-force search on the K=2 feasible segment") {
    Rng rng(314);
    for (int i = 0; i < 100; ++i) {
        auto spec = random_spec(rng);
        const auto& set = spec.constraints;
        double lo0 = std::max(set.lo, set.budget - set.hi);
        double hi0 = std::min(set.hi, set.budget - set.lo);
        double best_m = 1e100, best_e = 1e100;
        const int n = 100000;
        for (int j = 0; j <= n; ++j) {
            double x0 = lo0 + (hi0 - lo0) * j / n;
            RateVector x{x0, set.budget - x0};
            best_m = std::min(best_m, mirror_objective(x, spec));
            best_e = std::min(best_e, euclid_objective(x, spec));
        }
        auto m = mirror_descent_step(spec);
        auto e = euclidean_projection_step(spec);
        CHECK(mirror_objective(m, spec) <= best_m + 1e-6);
        CHECK(euclid_objective(e, spec) <= best_e + 1e-6);
    }
}

TEST_CASE("dual sum is monotone non-increasing in lambda") {
    Rng rng(17);
    auto spec = random_spec(rng);
    auto coord = [&](std::size_t k, double lambda) {
        double denom = spec.eta * spec.gradient[k] + 1.0 / spec.current[k] + lambda;
        if (denom <= 0.0) return spec.constraints.hi;
        return std::clamp(1.0 / denom, spec.constraints.lo, spec.constraints.hi);
    };
    double prev = 1e100;
    for (double lambda = -0.4; lambda <= 4.0; lambda += 0.01) {
        double sum = coord(0, lambda) + coord(1, lambda);
        CHECK(sum <= prev + 1e-12);
        prev = sum;
    }
}

TEST_SUITE_END();
