#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "syncbandit/errors.hpp"
#include "syncbandit/harness.hpp"

namespace sb = syncbandit;

namespace {

struct CommonOpts {
    std::string family = "polynomial";
    std::size_t arms = 100;
    double r_min = 0.025;
    double r_max = -1.0;  // family-dependent default
    double budget = 40.0;
    double noise = 0.1;
    double scaling = 5.0;
    double cost_cap = 40.0;
    double lambda_lo = 0.005;
    double lambda_hi = 5.0;
};

void add_family_opts(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--family", opts.family, "Cost process family")
        ->check(CLI::IsMember({"polynomial", "poisson"}));
    cmd->add_option("--arms", opts.arms, "Number of arms");
    cmd->add_option("--r-min", opts.r_min, "Lowest allowed sync rate");
    cmd->add_option("--r-max", opts.r_max, "Highest allowed sync rate");
    cmd->add_option("--bandwidth", opts.budget, "Total play-rate budget B");
    cmd->add_option("--noise", opts.noise, "Polynomial coefficient noise half-width");
    cmd->add_option("--scaling", opts.scaling, "Sigmoid prior scale for exponents");
    cmd->add_option("--cost-cap", opts.cost_cap, "Cost cap U (polynomial family)");
    cmd->add_option("--lambda-lo", opts.lambda_lo, "Poisson rate lower bound");
    cmd->add_option("--lambda-hi", opts.lambda_hi, "Poisson rate upper bound");
}

void fill_config_family(sb::ExperimentConfig& config, const CommonOpts& opts) {
    if (opts.family == "polynomial") {
        config.family = sb::Family::Polynomial;
        config.poly.arms = opts.arms;
        config.poly.r_min = opts.r_min;
        config.poly.r_max = opts.r_max > 0 ? opts.r_max : 3.0;
        config.poly.budget = opts.budget;
        config.poly.noise = opts.noise;
        config.poly.scaling = opts.scaling;
        config.poly.cost_cap = opts.cost_cap;
    } else {
        config.family = sb::Family::Poisson;
        config.poisson.arms = opts.arms;
        config.poisson.r_min = opts.r_min;
        config.poisson.r_max = opts.r_max > 0 ? opts.r_max : 6.0;
        config.poisson.budget = opts.budget;
        config.poisson.lambda_lo = opts.lambda_lo;
        config.poisson.lambda_hi = opts.lambda_hi;
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

int run_main(int argc, char** argv) {
    CLI::App app{"Synchronization-bandit simulation toolkit"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "Emit a problem instance file");
    CommonOpts gen_opts;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    add_family_opts(generate, gen_opts);
    generate->add_option("--seed", gen_seed, "Generator seed");
    generate->add_option("--out", gen_out, "Output path")->required();

    // run
    auto* run = app.add_subcommand("run", "Run a learning algorithm");
    CommonOpts run_opts;
    sb::ExperimentConfig config;
    std::string algo_str = "mirrorsync";
    std::string instance_path, run_out, aggregate_out, budget_rule = "conserving";
    double horizon_time = -1.0;
    add_family_opts(run, run_opts);
    run->add_option("--algo", algo_str, "Algorithm")
        ->check(CLI::IsMember({"mirrorsync", "async", "async-psgd"}));
    run->add_option("--instance", instance_path, "Fixed instance file (else fresh per trial)");
    run->add_option("--eta", config.eta, "Learning rate")->required();
    run->add_option("--epsilon", config.epsilon, "Probe probability");
    run->add_option("--upd-period", config.upd_period, "Async inter-update interval");
    run->add_option("--trials", config.trials, "Trial count");
    run->add_option("--rounds", config.rounds, "Horizon in rounds of length 1/r_min");
    run->add_option("--horizon-time", horizon_time, "Async horizon in time units");
    run->add_option("--seed", config.seed, "Master seed");
    run->add_option("--out", run_out, "Per-trial CSV path")->required();
    run->add_option("--aggregate-out", aggregate_out, "Aggregate CSV path");
    run->add_option("--workers", config.workers, "Worker thread count");
    run->add_option("--local-budget", budget_rule, "Async local budget rule")
        ->check(CLI::IsMember({"literal", "conserving"}));
    bool no_regret = false;
    run->add_flag("--no-regret", no_regret, "Skip per-trial regret computation");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Compute the oracle optimum r* and J*");
    std::string oracle_instance;
    double oracle_eps = 0.0;
    oracle->add_option("--instance", oracle_instance, "Instance file")->required();
    oracle->add_option("--epsilon", oracle_eps, "Constraint-set epsilon (0 for K_0)");

    // regret
    auto* regret = app.add_subcommand("regret", "Recompute a regret curve from a result CSV");
    std::string regret_instance, regret_in, regret_out;
    regret->add_option("--instance", regret_instance, "Instance file")->required();
    regret->add_option("--in", regret_in, "Per-trial CSV from 'run'")->required();
    regret->add_option("--out", regret_out, "Output CSV path")->required();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Grid search over eta and update period");
    CommonOpts sweep_opts;
    std::vector<double> sweep_etas, sweep_periods;
    std::string sweep_algo = "async", sweep_out;
    std::uint64_t sweep_seed = 0;
    std::size_t sweep_rounds = 240;
    double sweep_epsilon = 0.05;
    bool any_period = false;
    add_family_opts(sweep, sweep_opts);
    sweep->add_option("--algo", sweep_algo, "Algorithm")
        ->check(CLI::IsMember({"mirrorsync", "async", "async-psgd"}));
    sweep->add_option("--etas", sweep_etas, "Learning-rate grid")->required();
    sweep->add_option("--upd-periods", sweep_periods, "Update-period grid");
    sweep->add_option("--epsilon", sweep_epsilon, "Probe probability");
    sweep->add_option("--rounds", sweep_rounds, "Horizon in rounds");
    sweep->add_option("--seed", sweep_seed, "Fixed seed");
    sweep->add_option("--out", sweep_out, "Ranked table CSV path");
    sweep->add_flag("--any-period", any_period, "Lift the default [8,40] period filter");

    // bound
    auto* bound = app.add_subcommand("bound", "Horizon-tuned hyperparameters and regret bound");
    double b_budget = 40.0, b_rmin = 0.025, b_cap = 40.0;
    std::size_t b_arms = 100, b_rounds = 240;
    bound->add_option("--bandwidth", b_budget, "Budget B");
    bound->add_option("--r-min", b_rmin, "Lowest rate");
    bound->add_option("--arms", b_arms, "Arm count");
    bound->add_option("--cost-cap", b_cap, "Cost cap U");
    bound->add_option("--rounds", b_rounds, "Horizon T_max in rounds");

    CLI11_PARSE(app, argc, argv);

    if (generate->parsed()) {
        sb::ExperimentConfig tmp;
        fill_config_family(tmp, gen_opts);
        sb::ProblemInstance instance =
            tmp.family == sb::Family::Polynomial
                ? sb::generate_polynomial_instance(tmp.poly, gen_seed)
                : sb::generate_poisson_instance(tmp.poisson, gen_seed);
        sb::save_instance_file(instance, gen_out);
        std::cout << "wrote " << gen_out << " (" << instance.num_arms() << " arms)\n";
    } else if (run->parsed()) {
        fill_config_family(config, run_opts);
        config.algo = sb::parse_algo(algo_str);
        if (!instance_path.empty()) config.instance_path = instance_path;
        if (horizon_time > 0) config.horizon_time = horizon_time;
        config.budget_rule = budget_rule == "literal" ? sb::LocalBudgetRule::Literal
                                                      : sb::LocalBudgetRule::Conserving;
        config.with_regret = !no_regret;
        sb::ExperimentOutcome outcome = sb::run_experiment(config);
        auto out = open_out(run_out);
        sb::write_trial_csv(outcome, out);
        if (!aggregate_out.empty()) {
            auto agg = open_out(aggregate_out);
            sb::write_aggregate_csv(outcome, agg);
        }
        std::cout << "final mean J = " << outcome.aggregate.back().j_mean << " over "
                  << config.trials << " trial(s)\n";
    } else if (oracle->parsed()) {
        sb::ProblemInstance instance = sb::load_instance_file(oracle_instance);
        sb::ConstraintSet set = instance.constraint_set(oracle_eps);
        sb::RateVector r_star = sb::oracle_optimal_rates(instance, set);
        std::cout << std::setprecision(12) << "J* = " << sb::policy_cost(instance, r_star)
                  << "\nr* =";
        for (double r : r_star) std::cout << ' ' << r;
        std::cout << '\n';
    } else if (regret->parsed()) {
        sb::ProblemInstance instance = sb::load_instance_file(regret_instance);
        sb::RateVector r_star =
            sb::oracle_optimal_rates(instance, instance.constraint_set(0.0));
        const double j_star = sb::policy_cost(instance, r_star);
        std::ifstream in(regret_in);
        if (!in) throw std::runtime_error("cannot open '" + regret_in + "'");
        auto out = open_out(regret_out);
        out << std::setprecision(17) << "trial,algo,update_index,sim_time,J,regret_cum\n";
        std::string line;
        if (!std::getline(in, line) || line.rfind("trial,algo,", 0) != 0)
            throw std::runtime_error("regret: bad input CSV header");
        std::size_t prev_trial = static_cast<std::size_t>(-1);
        double cum = 0.0, prev_j = 0.0;
        bool have_prev = false;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            std::string trial_s, algo_s, idx_s, time_s, j_s;
            std::getline(ls, trial_s, ',');
            std::getline(ls, algo_s, ',');
            std::getline(ls, idx_s, ',');
            std::getline(ls, time_s, ',');
            std::getline(ls, j_s, ',');
            const std::size_t trial = std::stoul(trial_s);
            if (trial != prev_trial) {
                prev_trial = trial;
                cum = 0.0;
                have_prev = false;
            }
            if (have_prev) cum += prev_j - j_star;
            prev_j = std::stod(j_s);
            have_prev = true;
            out << trial_s << ',' << algo_s << ',' << idx_s << ',' << time_s << ',' << j_s
                << ',' << cum << '\n';
        }
        std::cout << "J* = " << j_star << "; wrote " << regret_out << '\n';
    } else if (sweep->parsed()) {
        sb::GridSpec spec;
        fill_config_family(spec.base, sweep_opts);
        spec.base.algo = sb::parse_algo(sweep_algo);
        spec.base.epsilon = sweep_epsilon;
        spec.base.rounds = sweep_rounds;
        spec.base.seed = sweep_seed;
        spec.etas = sweep_etas;
        spec.upd_periods = sweep_periods.empty() ? std::vector<double>{8, 20, 40}
                                                 : sweep_periods;
        spec.allow_any_period = any_period;
        auto entries = sb::grid_search(spec);
        std::ostringstream table;
        table << "eta,upd_period,final_J,trailing_std\n" << std::setprecision(12);
        for (const auto& e : entries)
            table << e.eta << ',' << e.upd_period << ',' << e.final_j << ','
                  << e.trailing_std << '\n';
        if (!sweep_out.empty()) open_out(sweep_out) << table.str();
        std::cout << table.str();
    } else if (bound->parsed()) {
        sb::CorollaryParams params =
            sb::corollary_hyperparams(b_budget, b_rmin, b_arms, b_cap, b_rounds);
        std::cout << std::setprecision(12) << "eta = " << params.eta
                  << "\nepsilon = " << params.epsilon
                  << "\nregret_bound = " << params.regret_bound << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_main(argc, argv);
    } catch (const sb::ConvergenceError& e) {
        std::cerr << "convergence failure: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
