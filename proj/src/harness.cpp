#include "syncbandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "syncbandit/errors.hpp"

namespace syncbandit {

const char* algo_name(Algo algo) {
    switch (algo) {
        case Algo::MirrorSync: return "mirrorsync";
        case Algo::AsyncMirrorSync: return "async";
        case Algo::AsyncPsgd: return "async-psgd";
    }
    throw std::invalid_argument("algo_name: unknown algorithm");
}

Algo parse_algo(const std::string& name) {
    if (name == "mirrorsync") return Algo::MirrorSync;
    if (name == "async") return Algo::AsyncMirrorSync;
    if (name == "async-psgd") return Algo::AsyncPsgd;
    throw std::invalid_argument("unknown algorithm '" + name + "'");
}

ProblemInstance generate_polynomial_instance(const PolynomialGenParams& params,
                                             std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ProblemInstance instance;
    instance.r_min = params.r_min;
    instance.r_max = params.r_max;
    instance.budget = params.budget;
    instance.cost_cap = params.cost_cap;
    instance.processes.reserve(params.arms);
    for (std::size_t k = 0; k < params.arms; ++k) {
        const double a_mean = unit(rng);
        const double p = 1.0 / (1.0 + std::exp(-params.scaling * unit(rng)));
        instance.processes.push_back(
            std::make_unique<PolynomialProcess>(a_mean, p, params.noise, params.cost_cap));
    }
    instance.validate();
    return instance;
}

ProblemInstance generate_poisson_instance(const PoissonGenParams& params,
                                          std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> lambda_dist(params.lambda_lo, params.lambda_hi);
    ProblemInstance instance;
    instance.r_min = params.r_min;
    instance.r_max = params.r_max;
    instance.budget = params.budget;
    instance.cost_cap = 1.0;
    instance.processes.reserve(params.arms);
    for (std::size_t k = 0; k < params.arms; ++k)
        instance.processes.push_back(std::make_unique<PoissonIndicatorProcess>(lambda_dist(rng)));
    instance.validate();
    return instance;
}

CorollaryParams corollary_hyperparams(double budget, double r_min, std::size_t arms,
                                      double cost_cap, std::size_t t_max) {
    if (!(budget > 0.0) || !(r_min > 0.0) || arms == 0 || !(cost_cap > 0.0))
        throw std::invalid_argument("corollary_hyperparams: invalid problem parameters");
    const double log_ratio = std::log(budget / (r_min * static_cast<double>(arms)));
    if (!(log_ratio > 0.0))
        throw std::invalid_argument(
            "corollary_hyperparams: log(B/(r_min*K)) must be positive");
    const double t = static_cast<double>(t_max);
    if (!(t > 8.0 * log_ratio))
        throw std::invalid_argument(
            "corollary_hyperparams: need T_max > 8*log(B/(r_min*K))");
    CorollaryParams out;
    out.epsilon = std::cbrt(log_ratio / t);
    out.eta = (static_cast<double>(arms) / cost_cap) * std::sqrt(log_ratio * out.epsilon / t);
    out.regret_bound = 3.0 * cost_cap * std::pow(t, 2.0 / 3.0) * std::cbrt(log_ratio);
    return out;
}

RegretCurve compute_regret_curve(const TrialResult& trial, const ProblemInstance& instance,
                                 const ConstraintSet& constraints) {
    RegretCurve curve;
    const RateVector r_star = oracle_optimal_rates(instance, constraints);
    curve.oracle_cost = policy_cost(instance, r_star);
    curve.cumulative.reserve(trial.points.size());
    double total = 0.0;
    // points[i] is the cost of the rates in force between updates i and i+1,
    // so the regret through update i sums the costs of points 0..i-1.
    for (std::size_t i = 0; i < trial.points.size(); ++i) {
        curve.cumulative.push_back(total);
        total += trial.points[i].cost - curve.oracle_cost;
    }
    return curve;
}

namespace {

void write_doubles(std::ostream& out, const char* key, const std::vector<double>& values) {
    out << key << " =";
    for (double v : values) out << ' ' << v;
    out << '\n';
}

}  // namespace

void save_instance(const ProblemInstance& instance, std::ostream& out) {
    out << std::setprecision(17);
    std::vector<double> a_mean, p, lambda;
    const PolynomialProcess* poly = nullptr;
    for (const auto& proc : instance.processes) {
        if (auto* pp = dynamic_cast<const PolynomialProcess*>(proc.get())) {
            poly = pp;
            a_mean.push_back(pp->a_mean());
            p.push_back(pp->exponent());
        } else if (auto* pi = dynamic_cast<const PoissonIndicatorProcess*>(proc.get())) {
            lambda.push_back(pi->rate());
        } else {
            throw std::invalid_argument("save_instance: unknown process family");
        }
    }
    if (!a_mean.empty() && !lambda.empty())
        throw std::invalid_argument("save_instance: mixed process families");
    out << "family = " << (lambda.empty() ? "polynomial" : "poisson") << '\n';
    out << "arms = " << instance.num_arms() << '\n';
    out << "r_min = " << instance.r_min << '\n';
    out << "r_max = " << instance.r_max << '\n';
    out << "budget = " << instance.budget << '\n';
    out << "cost_cap = " << instance.cost_cap << '\n';
    if (lambda.empty()) {
        out << "noise = " << poly->noise() << '\n';
        write_doubles(out, "a_mean", a_mean);
        write_doubles(out, "p", p);
    } else {
        write_doubles(out, "lambda", lambda);
    }
}

void save_instance_file(const ProblemInstance& instance, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    save_instance(instance, out);
}

ProblemInstance load_instance(std::istream& in) {
    std::map<std::string, std::vector<std::string>> fields;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key, eq;
        ls >> key >> eq;
        if (eq != "=") throw std::runtime_error("instance file: expected 'key = value' lines");
        std::string token;
        auto& bucket = fields[key];
        while (ls >> token) bucket.push_back(token);
    }
    auto get_one = [&](const std::string& key) -> const std::string& {
        auto it = fields.find(key);
        if (it == fields.end() || it->second.size() != 1)
            throw std::runtime_error("instance file: missing scalar field '" + key + "'");
        return it->second[0];
    };
    auto get_array = [&](const std::string& key) {
        auto it = fields.find(key);
        if (it == fields.end())
            throw std::runtime_error("instance file: missing array field '" + key + "'");
        std::vector<double> out;
        for (const auto& tok : it->second) out.push_back(std::stod(tok));
        return out;
    };

    ProblemInstance instance;
    const std::string family = get_one("family");
    const std::size_t arms = std::stoul(get_one("arms"));
    instance.r_min = std::stod(get_one("r_min"));
    instance.r_max = std::stod(get_one("r_max"));
    instance.budget = std::stod(get_one("budget"));
    instance.cost_cap = std::stod(get_one("cost_cap"));
    if (family == "polynomial") {
        const double noise = std::stod(get_one("noise"));
        auto a_mean = get_array("a_mean");
        auto p = get_array("p");
        if (a_mean.size() != arms || p.size() != arms)
            throw std::runtime_error("instance file: array length mismatch");
        for (std::size_t k = 0; k < arms; ++k)
            instance.processes.push_back(std::make_unique<PolynomialProcess>(
                a_mean[k], p[k], noise, instance.cost_cap));
    } else if (family == "poisson") {
        auto lambda = get_array("lambda");
        if (lambda.size() != arms)
            throw std::runtime_error("instance file: array length mismatch");
        for (double l : lambda)
            instance.processes.push_back(std::make_unique<PoissonIndicatorProcess>(l));
    } else {
        throw std::runtime_error("instance file: unknown family '" + family + "'");
    }
    instance.validate();
    return instance;
}

ProblemInstance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return load_instance(in);
}

std::uint64_t derive_trial_seed(std::uint64_t master, std::uint64_t index) {
    // splitmix64 over a counter offset by the master seed.
    std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

namespace {

ProblemInstance make_instance(const ExperimentConfig& config, std::uint64_t instance_seed) {
    if (config.instance_path) return load_instance_file(*config.instance_path);
    if (config.family == Family::Polynomial)
        return generate_polynomial_instance(config.poly, instance_seed);
    return generate_poisson_instance(config.poisson, instance_seed);
}

TrialResult run_one(const ExperimentConfig& config, const ProblemInstance& instance,
                    std::uint64_t trial_seed) {
    const double round_len = 1.0 / instance.r_min;
    switch (config.algo) {
        case Algo::MirrorSync: {
            MirrorSyncParams params{config.eta, config.epsilon, config.rounds};
            return run_mirrorsync(instance, params, trial_seed);
        }
        case Algo::AsyncMirrorSync:
        case Algo::AsyncPsgd: {
            AsyncParams params;
            params.eta = config.eta;
            params.epsilon = config.epsilon;
            params.horizon = config.horizon_time
                                 ? *config.horizon_time
                                 : static_cast<double>(config.rounds) * round_len;
            params.updates = UpdateSchedule::periodic(config.upd_period, params.horizon);
            params.budget_rule = config.budget_rule;
            params.scaling = config.scaling;
            return config.algo == Algo::AsyncMirrorSync
                       ? run_async_mirrorsync(instance, params, trial_seed)
                       : run_async_psgd(instance, params, trial_seed);
        }
    }
    throw std::invalid_argument("run_one: unknown algorithm");
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& config) {
    if (config.trials == 0) throw std::invalid_argument("run_experiment: trials must be >= 1");
    ExperimentOutcome outcome;
    outcome.algo = config.algo;
    outcome.trials.resize(config.trials);

    const std::size_t workers = std::max<std::size_t>(1, std::min(config.workers, config.trials));
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= config.trials) return;
            try {
                const std::uint64_t instance_seed = derive_trial_seed(config.seed, 2 * i);
                const std::uint64_t trial_seed = derive_trial_seed(config.seed, 2 * i + 1);
                ProblemInstance instance = make_instance(config, instance_seed);
                TrialRecord record;
                record.trial = i;
                record.result = run_one(config, instance, trial_seed);
                if (config.with_regret) {
                    RegretCurve curve = compute_regret_curve(record.result, instance,
                                                             instance.constraint_set(0.0));
                    record.regret_cum = std::move(curve.cumulative);
                }
                outcome.trials[i] = std::move(record);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    // Aggregate aligned on update index; all trials share one cadence.
    const std::size_t n_points = outcome.trials.front().result.points.size();
    for (const auto& record : outcome.trials)
        if (record.result.points.size() != n_points)
            throw std::runtime_error("run_experiment: trials disagree on update count");
    outcome.aggregate.resize(n_points);
    for (std::size_t p = 0; p < n_points; ++p) {
        double sum = 0.0, sum_sq = 0.0;
        for (const auto& record : outcome.trials) {
            const double j = record.result.points[p].cost;
            sum += j;
            sum_sq += j * j;
        }
        const double n = static_cast<double>(config.trials);
        AggregatePoint& agg = outcome.aggregate[p];
        agg.sim_time = outcome.trials.front().result.points[p].sim_time;
        agg.j_mean = sum / n;
        agg.n = config.trials;
        if (config.trials > 1) {
            const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
            agg.j_stderr = std::sqrt(var / n);
        }
    }
    return outcome;
}

void write_trial_csv(const ExperimentOutcome& outcome, std::ostream& out) {
    out << std::setprecision(17);
    out << "trial,algo,update_index,sim_time,J,regret_cum\n";
    const char* name = algo_name(outcome.algo);
    for (const auto& record : outcome.trials) {
        for (std::size_t p = 0; p < record.result.points.size(); ++p) {
            const TrialPoint& point = record.result.points[p];
            out << record.trial << ',' << name << ',' << point.update_index << ','
                << point.sim_time << ',' << point.cost << ',';
            if (p < record.regret_cum.size()) out << record.regret_cum[p];
            out << '\n';
        }
    }
}

void write_aggregate_csv(const ExperimentOutcome& outcome, std::ostream& out) {
    out << std::setprecision(17);
    out << "algo,sim_time,J_mean,J_stderr,n\n";
    for (const auto& agg : outcome.aggregate)
        out << algo_name(outcome.algo) << ',' << agg.sim_time << ',' << agg.j_mean << ','
            << agg.j_stderr << ',' << agg.n << '\n';
}

std::vector<AggregatePoint> parse_aggregate_csv(std::istream& in) {
    std::vector<AggregatePoint> points;
    std::string line;
    if (!std::getline(in, line) || line != "algo,sim_time,J_mean,J_stderr,n")
        throw std::runtime_error("parse_aggregate_csv: bad header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        AggregatePoint point;
        std::getline(ls, field, ',');  // algo
        std::getline(ls, field, ',');
        point.sim_time = std::stod(field);
        std::getline(ls, field, ',');
        point.j_mean = std::stod(field);
        std::getline(ls, field, ',');
        point.j_stderr = std::stod(field);
        std::getline(ls, field, ',');
        point.n = std::stoul(field);
        points.push_back(point);
    }
    return points;
}

std::vector<GridEntry> grid_search(const GridSpec& spec) {
    std::vector<double> periods = spec.upd_periods;
    if (spec.base.algo == Algo::MirrorSync) {
        periods = {0.0};
    } else if (!spec.allow_any_period) {
        std::erase_if(periods, [](double l) { return l < 8.0 || l > 40.0; });
    }
    if (periods.empty() || spec.etas.empty())
        throw std::invalid_argument("grid_search: empty grid");

    std::vector<GridEntry> entries;
    for (double eta : spec.etas) {
        for (double period : periods) {
            ExperimentConfig config = spec.base;
            config.eta = eta;
            if (period > 0.0) config.upd_period = period;
            config.trials = 1;
            config.with_regret = false;
            ExperimentOutcome outcome = run_experiment(config);
            const auto& points = outcome.aggregate;
            GridEntry entry{eta, period, points.back().j_mean, 0.0};
            const std::size_t window = std::max<std::size_t>(2, points.size() / 4);
            double sum = 0.0, sum_sq = 0.0;
            for (std::size_t p = points.size() - window; p < points.size(); ++p) {
                sum += points[p].j_mean;
                sum_sq += points[p].j_mean * points[p].j_mean;
            }
            const double n = static_cast<double>(window);
            entry.trailing_std =
                std::sqrt(std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0)));
            entries.push_back(entry);
        }
    }
    std::sort(entries.begin(), entries.end(),
              [](const GridEntry& a, const GridEntry& b) { return a.final_j < b.final_j; });
    return entries;
}

}  // namespace syncbandit
