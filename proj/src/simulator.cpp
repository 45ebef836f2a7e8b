#include "syncbandit/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace syncbandit {

namespace {

void warn_eta_once(double eta, std::size_t num_arms, double epsilon, double cost_cap) {
    static std::atomic<bool> warned{false};
    const double threshold = static_cast<double>(num_arms) * epsilon / (2.0 * cost_cap);
    if (eta >= threshold && !warned.exchange(true)) {
        std::cerr << "syncbandit: eta = " << eta << " is outside (0, K*eps/(2U)) = (0, "
                  << threshold << "); the in-policy regret guarantee does not apply\n";
    }
}

}  // namespace

ArmSchedule schedule_arm_plays(double& t_prev, double r_k, double interval_end,
                               double epsilon, Rng& rng) {
    if (!(r_k > 0.0)) throw std::invalid_argument("schedule_arm_plays: r_k must be > 0");
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("schedule_arm_plays: epsilon must be in [0,1]");
    ArmSchedule schedule;
    const double gap = 1.0 / r_k;
    std::bernoulli_distribution probe_flip(epsilon);
    double t_n = t_prev;
    while (t_n + gap < interval_end) {
        const double prev_sync = t_n;
        if (epsilon > 0.0 && probe_flip(rng)) {
            std::uniform_real_distribution<double> pos(prev_sync, prev_sync + gap);
            double t_probe;
            do {
                t_probe = pos(rng);
            } while (t_probe <= prev_sync || t_probe >= prev_sync + gap);
            schedule.entries.push_back({t_probe, PlayMode::Probe});
        }
        t_n = prev_sync + gap;
        schedule.entries.push_back({t_n, PlayMode::Sync});
    }
    t_prev = t_n;
    return schedule;
}

SimState::SimState(const ProblemInstance& source)
    : instance(source.clone()), last_sync(source.num_arms(), 0.0) {}

void SimState::reset_all(Rng& rng) {
    for (std::size_t k = 0; k < instance.num_arms(); ++k) {
        instance.processes[k]->reset_at_sync(rng);
        last_sync[k] = 0.0;
    }
}

namespace {

struct PendingEvent {
    std::size_t arm;
    PlayEvent event;
};

// Probe before sync on time ties, then lower arm index.
bool event_order(const PendingEvent& a, const PendingEvent& b) {
    if (a.event.time != b.event.time) return a.event.time < b.event.time;
    if (a.event.mode != b.event.mode) return a.event.mode == PlayMode::Probe;
    return a.arm < b.arm;
}

std::vector<CostObservation> play_events(SimState& state, std::vector<PendingEvent>& events,
                                         Rng& rng) {
    std::sort(events.begin(), events.end(), event_order);
    std::vector<CostObservation> observations;
    observations.reserve(events.size());
    for (const PendingEvent& pe : events) {
        CostProcess& proc = *state.instance.processes[pe.arm];
        const double tau = pe.event.time - state.last_sync[pe.arm];
        CostObservation obs;
        obs.arm = pe.arm;
        obs.time = pe.event.time;
        obs.tau = tau;
        obs.mode = pe.event.mode;
        obs.cost = proc.sample_cost_at(tau);
        if (pe.event.mode == PlayMode::Sync) {
            proc.reset_at_sync(rng);
            state.last_sync[pe.arm] = pe.event.time;
        }
        observations.push_back(obs);
    }
    return observations;
}

}  // namespace

std::vector<CostObservation> play_schedule(SimState& state,
                                           const std::vector<ArmSchedule>& schedules,
                                           Rng& rng) {
    if (schedules.size() != state.instance.num_arms())
        throw std::invalid_argument("play_schedule: schedule count mismatch");
    std::vector<PendingEvent> events;
    for (std::size_t k = 0; k < schedules.size(); ++k)
        for (const PlayEvent& e : schedules[k].entries) events.push_back({k, e});
    return play_events(state, events, rng);
}

TrialResult run_mirrorsync(const ProblemInstance& instance, const MirrorSyncParams& params,
                           std::uint64_t seed) {
    instance.validate();
    if (!(params.eta > 0.0)) throw std::invalid_argument("run_mirrorsync: eta must be > 0");
    if (params.epsilon < 0.0 || params.epsilon > 1.0)
        throw std::invalid_argument("run_mirrorsync: epsilon must be in [0,1]");
    const std::size_t K = instance.num_arms();
    const ConstraintSet feasible = instance.constraint_set(params.epsilon);
    feasible.validate();
    warn_eta_once(params.eta, K, params.epsilon, instance.cost_cap);

    Rng rng(seed);
    SimState state(instance);
    RateVector r = barrier_init(feasible);
    const double round_len = 1.0 / instance.r_min;

    TrialResult result;
    result.seed = seed;
    result.points.push_back({0, 0.0, policy_cost(instance, r)});

    for (std::size_t round = 1; round <= params.rounds; ++round) {
        // Free round-start resets: all arms synchronized, time restarts at 0.
        state.reset_all(rng);
        std::vector<ArmSchedule> schedules(K);
        for (std::size_t k = 0; k < K; ++k) {
            double t_prev = 0.0;
            schedules[k] = schedule_arm_plays(t_prev, r[k], round_len, params.epsilon, rng);
        }
        auto observations = play_schedule(state, schedules, rng);
        std::vector<std::vector<CostObservation>> per_arm(K);
        for (const auto& obs : observations) per_arm[obs.arm].push_back(obs);

        RateVector estimate(K, 0.0);
        for (std::size_t k = 0; k < K; ++k)
            estimate[k] = extract_round_estimate(schedules[k], per_arm[k], r[k],
                                                 params.epsilon, K);

        StepSpec spec{params.eta, std::move(estimate), r, feasible};
        r = mirror_descent_step(spec);
        result.points.push_back({round, static_cast<double>(round) * round_len,
                                 policy_cost(instance, r)});
    }
    result.final_rates = r;
    return result;
}

UpdateSchedule UpdateSchedule::periodic(double period, double horizon) {
    if (!(period > 0.0)) throw std::invalid_argument("UpdateSchedule: period must be > 0");
    UpdateSchedule schedule;
    const double slack = 1.0 + 1e-12;
    for (std::size_t i = 1; static_cast<double>(i) * period <= horizon * slack; ++i)
        schedule.times.push_back(static_cast<double>(i) * period);
    return schedule;
}

namespace {

TrialResult run_async_impl(const ProblemInstance& instance, const AsyncParams& params,
                           std::uint64_t seed, bool use_mirror) {
    instance.validate();
    if (!(params.eta > 0.0)) throw std::invalid_argument("async: eta must be > 0");
    if (params.epsilon < 0.0 || params.epsilon > 1.0)
        throw std::invalid_argument("async: epsilon must be in [0,1]");
    for (std::size_t i = 0; i < params.updates.times.size(); ++i) {
        const double t = params.updates.times[i];
        if (!(t > 0.0) || (i > 0 && t <= params.updates.times[i - 1]))
            throw std::invalid_argument("async: update times must be positive and increasing");
    }
    const std::size_t K = instance.num_arms();
    const ConstraintSet feasible = instance.constraint_set(params.epsilon);
    feasible.validate();
    warn_eta_once(params.eta, K, params.epsilon, instance.cost_cap);

    Rng rng(seed);
    SimState state(instance);
    state.reset_all(rng);
    RateVector r = barrier_init(feasible);

    TrialResult result;
    result.seed = seed;
    result.points.push_back({0, 0.0, policy_cost(instance, r)});

    std::vector<double> update_times;
    for (double t : params.updates.times)
        if (t <= params.horizon * (1.0 + 1e-12)) update_times.push_back(t);
    if (update_times.empty()) {
        result.final_rates = r;
        return result;
    }

    std::vector<ArmSchedule> schedules(K);
    std::vector<std::size_t> cursor(K, 0);  // next unplayed entry per arm
    std::vector<double> t_prev(K, 0.0);
    for (std::size_t k = 0; k < K; ++k)
        schedules[k] = schedule_arm_plays(t_prev[k], r[k], update_times[0], params.epsilon, rng);

    for (std::size_t i = 0; i < update_times.size(); ++i) {
        const double t_now = update_times[i];

        // Play every scheduled event up to the update time, in global order.
        std::vector<PendingEvent> pending;
        for (std::size_t k = 0; k < K; ++k) {
            while (cursor[k] < schedules[k].entries.size() &&
                   schedules[k].entries[cursor[k]].time <= t_now) {
                pending.push_back({k, schedules[k].entries[cursor[k]]});
                ++cursor[k];
            }
        }
        auto observations = play_events(state, pending, rng);
        std::vector<std::vector<CostObservation>> window(K);
        for (const auto& obs : observations) window[obs.arm].push_back(obs);

        AsyncEstimates estimates =
            params.epsilon > 0.0 ? collect_async_estimates(window, r, params.epsilon)
                                 : AsyncEstimates{};
        if (!estimates.updated_arms.empty()) {
            const std::size_t active = estimates.updated_arms.size();
            RateVector grad = estimates.normalized;
            if (params.scaling == GradScaling::AllArms) {
                const double rescale = static_cast<double>(active) / static_cast<double>(K);
                for (double& g : grad) g *= rescale;
            }
            double local_budget = 0.0;
            RateVector local_r(active);
            for (std::size_t j = 0; j < active; ++j) {
                local_r[j] = r[estimates.updated_arms[j]];
                local_budget += local_r[j];
            }
            if (params.budget_rule == LocalBudgetRule::Literal)
                local_budget /= 1.0 + params.epsilon;
            ConstraintSet local{feasible.lo, feasible.hi, local_budget, active};
            // The literal rule can push the budget below |A_i|*r_min; clamp
            // to keep the local set non-empty.
            local.budget = std::clamp(local.budget,
                                      static_cast<double>(active) * local.lo,
                                      static_cast<double>(active) * local.hi);
            StepSpec spec{params.eta, std::move(grad), std::move(local_r), local};
            RateVector stepped = use_mirror ? mirror_descent_step(spec)
                                            : euclidean_projection_step(spec);
            for (std::size_t j = 0; j < active; ++j) r[estimates.updated_arms[j]] = stepped[j];
        }
        result.points.push_back({i + 1, t_now, policy_cost(instance, r)});

        // Stitch every arm's schedule forward to the next update time.
        if (i + 1 < update_times.size()) {
            const double next_end = update_times[i + 1];
            std::bernoulli_distribution immediate_sync(params.epsilon);
            for (std::size_t k = 0; k < K; ++k) {
                if (params.epsilon > 0.0 && immediate_sync(rng)) {
                    // An immediate sync supersedes whatever was already
                    // scheduled past t_now (the chain of pushed syncs can run
                    // ahead of the update clock when 1/r_k exceeds the update
                    // period); drop those so entries stay time-sorted.
                    schedules[k].entries.resize(cursor[k]);
                    t_prev[k] = t_now;
                } else
                    t_prev[k] = std::max(t_prev[k] + 1.0 / r[k], t_now);
                schedules[k].entries.push_back({t_prev[k], PlayMode::Sync});
                ArmSchedule extension =
                    schedule_arm_plays(t_prev[k], r[k], next_end, params.epsilon, rng);
                schedules[k].entries.insert(schedules[k].entries.end(),
                                            extension.entries.begin(),
                                            extension.entries.end());
            }
        }
    }
    result.final_rates = r;
    return result;
}

}  // namespace

TrialResult run_async_mirrorsync(const ProblemInstance& instance, const AsyncParams& params,
                                 std::uint64_t seed) {
    return run_async_impl(instance, params, seed, true);
}

TrialResult run_async_psgd(const ProblemInstance& instance, const AsyncParams& params,
                           std::uint64_t seed) {
    return run_async_impl(instance, params, seed, false);
}

}  // namespace syncbandit
