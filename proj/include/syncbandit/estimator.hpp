#pragma once

#include <optional>
#include <span>
#include <vector>

#include "syncbandit/policy.hpp"
#include "syncbandit/schedule.hpp"

namespace syncbandit {

struct GradientSample {
    std::size_t arm = 0;
    double value = 0.0;        // raw partial-derivative estimate
    std::size_t interval_index = 0;
};

/// Raw single-interval estimate of dJ/dr_k: 0 when no probe occurred,
/// otherwise (probe_cost - sync_cost)/(epsilon * r_k).
double grad_j_sample(std::optional<double> probe_cost, double sync_cost,
                     double r_k, double epsilon);

/// One arm's round estimate: the mean of grad_j_sample over every completed
/// sync interval in the round (probe-less intervals contribute 0), divided
/// by the arm count. A round with no completed interval yields 0.
/// Throws if a probe observation has no following sync (malformed round).
double extract_round_estimate(const ArmSchedule& schedule,
                              std::span<const CostObservation> observations,
                              double r_k, double epsilon, std::size_t num_arms);

/// All probe/sync-paired estimates found in one arm's observation window.
/// Probes whose paired sync lies outside the window are dropped.
std::vector<GradientSample> pair_interval_samples(
    std::span<const CostObservation> observations, double r_k, double epsilon);

struct AsyncEstimates {
    std::vector<std::size_t> updated_arms;  // the set A_i, ascending
    RateVector normalized;                  // per-arm interval mean / |A_i|
};

/// Per-arm averaging of the raw sample of every completed sync interval
/// since the previous update (probe-less intervals contribute 0), then
/// normalization by the number of arms with at least one completed interval.
/// An empty updated_arms means no update should happen.
AsyncEstimates collect_async_estimates(
    const std::vector<std::vector<CostObservation>>& per_arm_observations,
    const RateVector& r, double epsilon);

}  // namespace syncbandit
