#include "syncbandit/estimator.hpp"

#include <stdexcept>

namespace syncbandit {

double grad_j_sample(std::optional<double> probe_cost, double sync_cost,
                     double r_k, double epsilon) {
    if (!(epsilon > 0.0) || epsilon > 1.0)
        throw std::invalid_argument("grad_j_sample: epsilon must be in (0,1]");
    if (!(r_k > 0.0)) throw std::invalid_argument("grad_j_sample: r_k must be > 0");
    if (!probe_cost) return 0.0;
    return (*probe_cost - sync_cost) / (epsilon * r_k);
}

double extract_round_estimate(const ArmSchedule& schedule,
                              std::span<const CostObservation> observations,
                              double r_k, double epsilon, std::size_t num_arms) {
    if (num_arms == 0) throw std::invalid_argument("extract_round_estimate: num_arms == 0");
    if (schedule.size() != observations.size())
        throw std::invalid_argument("extract_round_estimate: schedule/observation mismatch");
    if (observations.empty()) return 0.0;

    // One raw sample per completed sync interval: a probe-less interval
    // yields 0 without touching the 1/epsilon formula (so the epsilon = 0
    // degenerate run stays valid), a probed one yields grad_j_sample.
    double sum = 0.0;
    std::size_t intervals = 0;
    for (std::size_t n = 0; n < observations.size(); ++n) {
        if (observations[n].mode == PlayMode::Sync) {
            ++intervals;
            continue;
        }
        if (n + 1 >= observations.size() || observations[n + 1].mode != PlayMode::Sync)
            throw std::runtime_error("extract_round_estimate: probe with no following sync");
        sum += grad_j_sample(observations[n].cost, observations[n + 1].cost, r_k, epsilon);
        ++intervals;
        ++n;  // consume the paired sync
    }
    if (intervals == 0) return 0.0;
    return sum / static_cast<double>(intervals) / static_cast<double>(num_arms);
}

std::vector<GradientSample> pair_interval_samples(
    std::span<const CostObservation> observations, double r_k, double epsilon) {
    std::vector<GradientSample> samples;
    std::size_t interval = 0;
    for (std::size_t n = 0; n < observations.size(); ++n) {
        if (observations[n].mode == PlayMode::Sync) {
            ++interval;
            continue;
        }
        // Probe: pair with the next sync if it fell inside the window,
        // otherwise the pair is split by the window cut and is dropped.
        if (n + 1 < observations.size() && observations[n + 1].mode == PlayMode::Sync) {
            samples.push_back(GradientSample{
                observations[n].arm,
                grad_j_sample(observations[n].cost, observations[n + 1].cost, r_k, epsilon),
                interval});
            ++interval;
            ++n;  // consume the paired sync
        }
    }
    return samples;
}

AsyncEstimates collect_async_estimates(
    const std::vector<std::vector<CostObservation>>& per_arm_observations,
    const RateVector& r, double epsilon) {
    if (per_arm_observations.size() != r.size())
        throw std::invalid_argument("collect_async_estimates: dimension mismatch");
    AsyncEstimates out;
    RateVector means;
    for (std::size_t k = 0; k < r.size(); ++k) {
        // One sample per completed interval; probe-less intervals are zeros.
        // An arm whose window closed no interval (at most a dangling probe)
        // is left out of A_i.
        std::size_t intervals = 0;
        for (const auto& obs : per_arm_observations[k])
            if (obs.mode == PlayMode::Sync) ++intervals;
        if (intervals == 0) continue;
        double sum = 0.0;
        for (const auto& s : pair_interval_samples(per_arm_observations[k], r[k], epsilon))
            sum += s.value;
        out.updated_arms.push_back(k);
        means.push_back(sum / static_cast<double>(intervals));
    }
    const double scale =
        out.updated_arms.empty() ? 1.0 : 1.0 / static_cast<double>(out.updated_arms.size());
    out.normalized.reserve(means.size());
    for (double m : means) out.normalized.push_back(m * scale);
    return out;
}

}  // namespace syncbandit
