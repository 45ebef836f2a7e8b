#pragma once

#include <cstddef>
#include <vector>

namespace syncbandit {

enum class PlayMode { Sync, Probe };

struct PlayEvent {
    double time = 0.0;
    PlayMode mode = PlayMode::Sync;
};

// Timed sequence of plays for one arm; times strictly increasing, every
// probe immediately followed by its paired sync.
struct ArmSchedule {
    std::vector<PlayEvent> entries;

    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }
};

struct CostObservation {
    std::size_t arm = 0;
    double time = 0.0;  // absolute play time
    double tau = 0.0;   // time since this arm's last sync
    PlayMode mode = PlayMode::Sync;
    double cost = 0.0;
};

}  // namespace syncbandit
