#pragma once

namespace qh {

// Per-step learning-rate schedule: linear warmup followed by step decay.
// Callers working in epochs convert epoch counts to step counts themselves.
struct LRSchedule {
    double base_alpha = 1.0;
    long warmup_steps = 0;     // 0 disables warmup
    long decay_every = 1;      // decay window length, in steps
    double decay_factor = 1.0; // in (0, 1]; 1 disables decay

    LRSchedule() = default;
    LRSchedule(double base, long warmup, long every, double factor);

    // During warmup the rate is base * (step+1)/warmup_steps, so the very
    // first step is already nonzero. Afterwards it is
    // base * decay_factor^floor(step / decay_every).
    double at(long step) const;
};

} // namespace qh
