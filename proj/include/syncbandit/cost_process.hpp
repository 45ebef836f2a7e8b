#pragma once

#include <memory>
#include <random>

namespace syncbandit {

using Rng = std::mt19937_64;

/// Closed-form expected cumulative cost of a polynomial process:
/// integral of a_mean * s^p over [0, tau].
double poly_mean_cumulative(double a_mean, double p, double tau);

/// Closed-form expected cumulative cost of a Poisson-indicator process:
/// integral of 1 - exp(-lambda * s) over [0, tau]. Stable for small
/// lambda * tau via expm1.
double poisson_mean_cumulative(double lambda, double tau);

// A per-arm cost-generating process. The instantaneous cost depends on
// tau, the time elapsed since the arm's last sync-mode play. Between two
// sync plays the within-interval randomness is fixed, so sample paths at
// increasing tau are non-decreasing. reset_at_sync draws fresh
// within-interval randomness; probe plays never touch process state.
class CostProcess {
public:
    virtual ~CostProcess() = default;

    virtual void reset_at_sync(Rng& rng) = 0;
    virtual double sample_cost_at(double tau) const = 0;
    virtual double mean_cost(double tau) const = 0;
    virtual double mean_cumulative_cost(double tau) const = 0;
    virtual double cost_cap() const = 0;
    virtual std::unique_ptr<CostProcess> clone() const = 0;
};

// Cost a * tau^p with the coefficient a redrawn uniformly from
// [a_mean*(1-noise), a_mean*(1+noise)] at each sync play.
class PolynomialProcess final : public CostProcess {
public:
    PolynomialProcess(double a_mean, double p, double noise, double cap);

    void reset_at_sync(Rng& rng) override;
    double sample_cost_at(double tau) const override;
    double mean_cost(double tau) const override;
    double mean_cumulative_cost(double tau) const override;
    double cost_cap() const override { return cap_; }
    std::unique_ptr<CostProcess> clone() const override;

    double a_mean() const { return a_mean_; }
    double exponent() const { return p_; }
    double noise() const { return noise_; }
    double a_current() const { return a_current_; }

private:
    double a_mean_;
    double p_;
    double noise_;
    double cap_;
    double a_current_;
};

// Indicator cost driven by a Poisson point process with rate lambda:
// cost is 1 once at least one event has occurred since the last sync.
// The first-event time is drawn once per sync interval, which keeps
// sample paths monotone within an interval.
class PoissonIndicatorProcess final : public CostProcess {
public:
    explicit PoissonIndicatorProcess(double lambda);

    void reset_at_sync(Rng& rng) override;
    double sample_cost_at(double tau) const override;
    double mean_cost(double tau) const override;
    double mean_cumulative_cost(double tau) const override;
    double cost_cap() const override { return 1.0; }
    std::unique_ptr<CostProcess> clone() const override;

    double rate() const { return lambda_; }
    double first_event_time() const { return t_first_; }

private:
    double lambda_;
    double t_first_;
};

}  // namespace syncbandit
