#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "syncbandit/simulator.hpp"

namespace syncbandit {

enum class Family { Polynomial, Poisson };
enum class Algo { MirrorSync, AsyncMirrorSync, AsyncPsgd };

const char* algo_name(Algo algo);
Algo parse_algo(const std::string& name);

// Defaults follow the polynomial benchmark setup.
struct PolynomialGenParams {
    std::size_t arms = 100;
    double r_min = 0.025;
    double r_max = 3.0;
    double budget = 40.0;  // 0.4 * arms
    double noise = 0.1;
    double scaling = 5.0;  // sigmoid prior scale for the exponent
    double cost_cap = 40.0;
};

// Defaults follow the Poisson benchmark setup; indicator costs cap at 1.
struct PoissonGenParams {
    std::size_t arms = 100;
    double r_min = 0.025;
    double r_max = 6.0;
    double budget = 40.0;
    double lambda_lo = 0.005;
    double lambda_hi = 5.0;
};

/// K arms with a_mean ~ Uniform[0,1] and exponent drawn from the sigmoid
/// prior sigmoid(scaling * Uniform[0,1]).
ProblemInstance generate_polynomial_instance(const PolynomialGenParams& params,
                                             std::uint64_t seed);

/// K arms with Poisson-indicator processes, lambda ~ Uniform[lambda_lo, lambda_hi].
ProblemInstance generate_poisson_instance(const PoissonGenParams& params,
                                          std::uint64_t seed);

struct CorollaryParams {
    double eta = 0.0;
    double epsilon = 0.0;
    double regret_bound = 0.0;
};

/// Horizon-tuned hyperparameters and the matching regret bound
/// 3*U*T^(2/3)*log^(1/3)(B/(r_min*K)). Throws if T_max <= 8*log(B/(r_min*K))
/// or the log ratio degenerates to zero.
CorollaryParams corollary_hyperparams(double budget, double r_min, std::size_t arms,
                                      double cost_cap, std::size_t t_max);

struct RegretCurve {
    std::vector<double> cumulative;  // cumulative[i] = sum over updates < i of (J - J*)
    double oracle_cost = 0.0;
};

/// Cumulative regret of a trial against the full-budget oracle optimum over
/// the epsilon = 0 constraint set; monotone non-decreasing.
RegretCurve compute_regret_curve(const TrialResult& trial, const ProblemInstance& instance,
                                 const ConstraintSet& constraints);

// Plain-text key/value instance files.
void save_instance(const ProblemInstance& instance, std::ostream& out);
void save_instance_file(const ProblemInstance& instance, const std::string& path);
ProblemInstance load_instance(std::istream& in);
ProblemInstance load_instance_file(const std::string& path);

/// Per-trial stream seed derived from the master seed; distinct indices give
/// distinct streams (splitmix64 over disjoint counters).
std::uint64_t derive_trial_seed(std::uint64_t master, std::uint64_t index);

struct ExperimentConfig {
    Family family = Family::Polynomial;
    PolynomialGenParams poly;
    PoissonGenParams poisson;
    std::optional<std::string> instance_path;  // fixed instance instead of per-trial generation

    Algo algo = Algo::MirrorSync;
    double eta = 2.7;
    double epsilon = 0.05;
    double upd_period = 20.0;  // async inter-update interval
    std::size_t trials = 1;
    std::size_t rounds = 240;                 // horizon in rounds of length 1/r_min
    std::optional<double> horizon_time;       // overrides rounds for async algorithms
    std::uint64_t seed = 0;
    LocalBudgetRule budget_rule = LocalBudgetRule::Conserving;
    GradScaling scaling = GradScaling::ActiveArms;
    std::size_t workers = 1;
    bool with_regret = true;
};

struct TrialRecord {
    std::size_t trial = 0;
    TrialResult result;
    std::vector<double> regret_cum;  // empty when regret was not requested
};

struct AggregatePoint {
    double sim_time = 0.0;
    double j_mean = 0.0;
    double j_stderr = 0.0;
    std::size_t n = 0;
};

struct ExperimentOutcome {
    Algo algo = Algo::MirrorSync;
    std::vector<TrialRecord> trials;
    std::vector<AggregatePoint> aggregate;  // aligned on update index
};

/// Runs config.trials trials (fresh instance per trial unless a fixed
/// instance file is given), in parallel over config.workers threads,
/// deterministically in the master seed.
ExperimentOutcome run_experiment(const ExperimentConfig& config);

// CSV schema: trial,algo,update_index,sim_time,J,regret_cum
void write_trial_csv(const ExperimentOutcome& outcome, std::ostream& out);
// CSV schema: algo,sim_time,J_mean,J_stderr,n
void write_aggregate_csv(const ExperimentOutcome& outcome, std::ostream& out);
std::vector<AggregatePoint> parse_aggregate_csv(std::istream& in);

struct GridSpec {
    ExperimentConfig base;
    std::vector<double> etas;
    std::vector<double> upd_periods;  // ignored for MirrorSync
    bool allow_any_period = false;    // lift the default [8,40] period filter
};

struct GridEntry {
    double eta = 0.0;
    double upd_period = 0.0;
    double final_j = 0.0;
    double trailing_std = 0.0;  // standard deviation over the last quarter of updates
};

/// One fixed-seed single-trial run per combination, ranked by final J.
std::vector<GridEntry> grid_search(const GridSpec& spec);

}  // namespace syncbandit
