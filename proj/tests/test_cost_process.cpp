#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "syncbandit/cost_process.hpp"

using namespace syncbandit;

TEST_SUITE_BEGIN("cost_process");

TEST_CASE("poly_mean_cumulative closed forms") {
    CHECK(poly_mean_cumulative(1.0, 1.0, 0.5) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(poly_mean_cumulative(1.0, 0.5, 0.0) == 0.0);
    CHECK(poly_mean_cumulative(0.4, 0.5, 1.0) == doctest::Approx(0.4 / 1.5).epsilon(1e-12));
    CHECK_THROWS_AS(poly_mean_cumulative(1.0, 0.5, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(poly_mean_cumulative(1.0, 1.5, 1.0), std::invalid_argument);
}

TEST_CASE("poisson_mean_cumulative closed forms") {
    CHECK(poisson_mean_cumulative(1.0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
    CHECK(poisson_mean_cumulative(1.0, 0.0) == 0.0);
    CHECK(poisson_mean_cumulative(2.0, 0.5) ==
          doctest::Approx(0.5 + (std::exp(-1.0) - 1.0) / 2.0).epsilon(1e-10));
    CHECK_THROWS_AS(poisson_mean_cumulative(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("poisson_mean_cumulative is stable for tiny lambda*tau") {
    // Quadratic leading term lambda*tau^2/2; naive exp() would cancel badly.
    double lambda = 1e-9, tau = 1e-3;
    double expected = lambda * tau * tau / 2.0;
    CHECK(poisson_mean_cumulative(lambda, tau) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("polynomial reset and sampling") {
    Rng rng(7);

    PolynomialProcess noiseless(0.5, 1.0, 0.0, 40.0);
    noiseless.reset_at_sync(rng);
    CHECK(noiseless.a_current() == 0.5);

    PolynomialProcess proc(0.5, 1.0, 0.1, 40.0);
    for (int i = 0; i < 1000; ++i) {
        proc.reset_at_sync(rng);
        CHECK(proc.a_current() >= 0.45);
        CHECK(proc.a_current() <= 0.55);
    }

    CHECK(proc.sample_cost_at(0.0) == 0.0);
    proc.reset_at_sync(rng);
    CHECK(proc.sample_cost_at(0.3) == doctest::Approx(proc.a_current() * 0.3).epsilon(1e-12));
}

TEST_CASE("poisson reset draws exponential first-event times") {
    Rng rng(11);
    PoissonIndicatorProcess proc(1.0);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        proc.reset_at_sync(rng);
        sum += proc.first_event_time();
    }
    CHECK(sum / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("poisson indicator sampling") {
    Rng rng(3);
    PoissonIndicatorProcess proc(1.0);
    // Before any reset the first event is at +infinity: no cost ever.
    CHECK(proc.sample_cost_at(100.0) == 0.0);
    for (int i = 0; i < 200; ++i) {
        proc.reset_at_sync(rng);
        double t = proc.first_event_time();
        CHECK(proc.sample_cost_at(t * 0.5) == 0.0);
        CHECK(proc.sample_cost_at(t * 1.5) == 1.0);
        CHECK(proc.sample_cost_at(0.0) == 0.0);
    }
}

TEST_CASE("Monte-Carlo sample mean matches mean_cost") {
    Rng rng(101);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int resets = 100000;

    for (int trial = 0; trial < 10; ++trial) {
        double a = 0.2 + 0.8 * unit(rng);
        double p = 0.3 + 0.7 * unit(rng);
        double noise = 0.3 * unit(rng);
        double tau = 0.5 + 2.0 * unit(rng);
        PolynomialProcess proc(a, p, noise, 40.0);
        double sum = 0.0, sum_sq = 0.0;
        for (int i = 0; i < resets; ++i) {
            proc.reset_at_sync(rng);
            double c = proc.sample_cost_at(tau);
            sum += c;
            sum_sq += c * c;
        }
        double mean = sum / resets;
        double var = std::max(sum_sq / resets - mean * mean, 0.0);
        double se = std::sqrt(var / resets);
        CHECK(std::abs(mean - proc.mean_cost(tau)) <= 3.0 * se + 1e-12);
    }

    for (int trial = 0; trial < 10; ++trial) {
        double lambda = 0.1 + 3.0 * unit(rng);
        double tau = 0.2 + 2.0 * unit(rng);
        PoissonIndicatorProcess proc(lambda);
        double sum = 0.0;
        for (int i = 0; i < resets; ++i) {
            proc.reset_at_sync(rng);
            sum += proc.sample_cost_at(tau);
        }
        double mean = sum / resets;
        double q = proc.mean_cost(tau);
        double se = std::sqrt(std::max(q * (1.0 - q), 1e-12) / resets);
        CHECK(std::abs(mean - q) <= 3.0 * se + 1e-12);
    }
}

TEST_CASE("Simpson integration of mean_cost matches mean_cumulative_cost") {
    auto simpson = [](auto&& f, double hi, int panels) {
        double h = hi / panels, acc = f(0.0) + f(hi);
        for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h);
        return acc * h / 3.0;
    };

    PolynomialProcess poly(0.7, 0.6, 0.1, 40.0);
    double tau = 2.5;
    double num = simpson([&](double s) { return poly.mean_cost(s); }, tau, 10000);
    CHECK(num == doctest::Approx(poly.mean_cumulative_cost(tau)).epsilon(1e-6));

    PoissonIndicatorProcess pois(1.7);
    num = simpson([&](double s) { return pois.mean_cost(s); }, tau, 10000);
    CHECK(num == doctest::Approx(pois.mean_cumulative_cost(tau)).epsilon(1e-6));
}

TEST_CASE("sample paths within one interval are non-decreasing") {
    Rng rng(55);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        PolynomialProcess poly(unit(rng), 0.2 + 0.8 * unit(rng), 0.2, 40.0);
        PoissonIndicatorProcess pois(0.2 + 3.0 * unit(rng));
        poly.reset_at_sync(rng);
        pois.reset_at_sync(rng);
        std::vector<double> taus(8);
        for (auto& t : taus) t = 3.0 * unit(rng);
        std::sort(taus.begin(), taus.end());
        double prev_poly = -1.0, prev_pois = -1.0;
        for (double t : taus) {
            double cp = poly.sample_cost_at(t);
            double ci = pois.sample_cost_at(t);
            CHECK(cp >= prev_poly);
            CHECK(ci >= prev_pois);
            prev_poly = cp;
            prev_pois = ci;
        }
    }
}

TEST_CASE("benchmark-region polynomial costs respect the cap") {
    // a_mean <= 1, noise 0.1, p <= 1, tau <= 1/r_min = 40: mean cost
    // a_mean*40^p <= 40 always; sampled cost a*40^p <= 1.1*40 worst case,
    // checked here at the exact benchmark prior bounds on a fixed stream.
    Rng rng(9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        double a = unit(rng);
        double p = 1.0 / (1.0 + std::exp(-5.0 * unit(rng)));
        PolynomialProcess proc(a, p, 0.1, 40.0);
        CHECK(proc.mean_cost(40.0) <= 40.0 + 1e-9);
        proc.reset_at_sync(rng);
        CHECK(proc.sample_cost_at(40.0) <= 40.0 * 1.1 + 1e-9);
        CHECK(proc.cost_cap() == 40.0);
    }
}

TEST_CASE("clone copies state without sharing it") {
    Rng rng(21);
    PolynomialProcess proc(0.5, 0.8, 0.2, 40.0);
    proc.reset_at_sync(rng);
    auto copy = proc.clone();
    CHECK(copy->sample_cost_at(1.3) == proc.sample_cost_at(1.3));
    copy->reset_at_sync(rng);
    CHECK(proc.sample_cost_at(1.3) ==
          doctest::Approx(proc.a_current() * std::pow(1.3, 0.8)).epsilon(1e-12));
}

TEST_SUITE_END();
