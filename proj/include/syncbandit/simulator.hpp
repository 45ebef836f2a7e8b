#pragma once

#include <cstdint>
#include <vector>

#include "syncbandit/estimator.hpp"
#include "syncbandit/optimizer.hpp"
#include "syncbandit/policy.hpp"
#include "syncbandit/schedule.hpp"

namespace syncbandit {

/// Sync plays at gaps 1/r_k starting from t_prev, stopping while the next
/// play still lands before interval_end; with probability epsilon a probe is
/// inserted strictly inside each gap at a uniform position. Updates t_prev
/// to the last scheduled time.
ArmSchedule schedule_arm_plays(double& t_prev, double r_k, double interval_end,
                               double epsilon, Rng& rng);

// Live per-arm execution state of one trial.
struct SimState {
    ProblemInstance instance;
    std::vector<double> last_sync;  // per-arm time of last sync-mode play

    explicit SimState(const ProblemInstance& source);
    // Draws each arm's initial within-interval randomness; all staleness
    // clocks start at zero.
    void reset_all(Rng& rng);
};

/// Executes the given per-arm schedules in global time order (probe before
/// sync on ties, then lower arm index). A probe samples the cost at the
/// arm's current staleness; a sync samples and then resets the process.
std::vector<CostObservation> play_schedule(SimState& state,
                                           const std::vector<ArmSchedule>& schedules,
                                           Rng& rng);

struct TrialPoint {
    std::size_t update_index = 0;
    double sim_time = 0.0;
    double cost = 0.0;  // exact expected policy cost J(r) after this update
};

struct TrialResult {
    std::vector<TrialPoint> points;  // points[0] is the pre-update barrier init
    RateVector final_rates;
    std::uint64_t seed = 0;
};

struct MirrorSyncParams {
    double eta = 0.0;
    double epsilon = 0.0;
    std::size_t rounds = 0;
};

/// Algorithm: rounds of length 1/r_min; all arms resynchronized for free at
/// each round start; one first-interval gradient estimate per arm per round;
/// a full-vector mirror step closes each round.
TrialResult run_mirrorsync(const ProblemInstance& instance, const MirrorSyncParams& params,
                           std::uint64_t seed);

enum class LocalBudgetRule {
    Conserving,  // local budget = sum of the updated arms' current rates
    Literal      // that sum divided by (1+epsilon), as written
};

enum class GradScaling {
    ActiveArms,  // divide averaged estimates by |A_i|
    AllArms      // divide by K instead
};

struct UpdateSchedule {
    std::vector<double> times;  // strictly increasing, first > 0
    static UpdateSchedule periodic(double period, double horizon);
};

struct AsyncParams {
    double eta = 0.0;
    double epsilon = 0.0;
    UpdateSchedule updates;
    double horizon = 0.0;
    LocalBudgetRule budget_rule = LocalBudgetRule::Conserving;
    GradScaling scaling = GradScaling::ActiveArms;
};

/// Asynchronous variant: no free resets; at each update time only the arms
/// with at least one fresh gradient sample are stepped, under a local
/// constraint set over those arms; schedules are stitched forward.
TrialResult run_async_mirrorsync(const ProblemInstance& instance, const AsyncParams& params,
                                 std::uint64_t seed);

/// Same loop with the Euclidean projection step in place of the mirror step.
TrialResult run_async_psgd(const ProblemInstance& instance, const AsyncParams& params,
                           std::uint64_t seed);

}  // namespace syncbandit
