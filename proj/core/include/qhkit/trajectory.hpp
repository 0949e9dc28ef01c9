#pragma once

namespace qh {

// One row of a run's step log.
struct TrajectoryRecord {
    long step = 0;
    double lr = 0.0;
    double loss = 0.0;        // sampled loss at the pre-update point
    double param_norm = 0.0;  // |theta| after the update
    double update_norm = 0.0; // |theta' - theta|
};

} // namespace qh
