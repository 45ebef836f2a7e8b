#include "syncbandit/cost_process.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace syncbandit {

double poly_mean_cumulative(double a_mean, double p, double tau) {
    if (tau < 0.0) throw std::invalid_argument("poly_mean_cumulative: tau must be >= 0");
    if (a_mean < 0.0) throw std::invalid_argument("poly_mean_cumulative: a_mean must be >= 0");
    if (p <= 0.0 || p > 1.0) throw std::invalid_argument("poly_mean_cumulative: p must be in (0,1]");
    if (tau == 0.0) return 0.0;
    return a_mean * std::pow(tau, p + 1.0) / (p + 1.0);
}

double poisson_mean_cumulative(double lambda, double tau) {
    if (lambda <= 0.0) throw std::invalid_argument("poisson_mean_cumulative: lambda must be > 0");
    if (tau < 0.0) throw std::invalid_argument("poisson_mean_cumulative: tau must be >= 0");
    // tau + (exp(-lambda*tau) - 1)/lambda, kept stable as lambda*tau -> 0.
    return tau + std::expm1(-lambda * tau) / lambda;
}

PolynomialProcess::PolynomialProcess(double a_mean, double p, double noise, double cap)
    : a_mean_(a_mean), p_(p), noise_(noise), cap_(cap), a_current_(a_mean) {
    if (a_mean < 0.0) throw std::invalid_argument("PolynomialProcess: a_mean must be >= 0");
    if (p <= 0.0 || p > 1.0) throw std::invalid_argument("PolynomialProcess: p must be in (0,1]");
    if (noise < 0.0 || noise > 1.0) throw std::invalid_argument("PolynomialProcess: noise must be in [0,1]");
    if (cap <= 0.0) throw std::invalid_argument("PolynomialProcess: cap must be > 0");
}

void PolynomialProcess::reset_at_sync(Rng& rng) {
    if (noise_ == 0.0) {
        a_current_ = a_mean_;
        return;
    }
    std::uniform_real_distribution<double> dist(a_mean_ * (1.0 - noise_),
                                                a_mean_ * (1.0 + noise_));
    a_current_ = dist(rng);
}

double PolynomialProcess::sample_cost_at(double tau) const {
    if (tau < 0.0) throw std::invalid_argument("sample_cost_at: tau must be >= 0");
    if (tau == 0.0) return 0.0;
    return a_current_ * std::pow(tau, p_);
}

double PolynomialProcess::mean_cost(double tau) const {
    if (tau < 0.0) throw std::invalid_argument("mean_cost: tau must be >= 0");
    if (tau == 0.0) return 0.0;
    return a_mean_ * std::pow(tau, p_);
}

double PolynomialProcess::mean_cumulative_cost(double tau) const {
    return poly_mean_cumulative(a_mean_, p_, tau);
}

std::unique_ptr<CostProcess> PolynomialProcess::clone() const {
    return std::make_unique<PolynomialProcess>(*this);
}

PoissonIndicatorProcess::PoissonIndicatorProcess(double lambda)
    : lambda_(lambda), t_first_(std::numeric_limits<double>::infinity()) {
    if (lambda <= 0.0) throw std::invalid_argument("PoissonIndicatorProcess: lambda must be > 0");
}

void PoissonIndicatorProcess::reset_at_sync(Rng& rng) {
    std::exponential_distribution<double> dist(lambda_);
    t_first_ = dist(rng);
}

double PoissonIndicatorProcess::sample_cost_at(double tau) const {
    if (tau < 0.0) throw std::invalid_argument("sample_cost_at: tau must be >= 0");
    return tau >= t_first_ ? 1.0 : 0.0;
}

double PoissonIndicatorProcess::mean_cost(double tau) const {
    if (tau < 0.0) throw std::invalid_argument("mean_cost: tau must be >= 0");
    return -std::expm1(-lambda_ * tau);
}

double PoissonIndicatorProcess::mean_cumulative_cost(double tau) const {
    return poisson_mean_cumulative(lambda_, tau);
}

std::unique_ptr<CostProcess> PoissonIndicatorProcess::clone() const {
    return std::make_unique<PoissonIndicatorProcess>(*this);
}

}  // namespace syncbandit
