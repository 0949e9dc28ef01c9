#include "qhkit/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace qh {

LRSchedule::LRSchedule(double base, long warmup, long every, double factor)
    : base_alpha(base), warmup_steps(warmup), decay_every(every), decay_factor(factor) {
    if (!(base_alpha > 0.0)) throw std::invalid_argument("base_alpha must be positive");
    if (warmup_steps < 0) throw std::invalid_argument("warmup_steps must be nonnegative");
    if (decay_every <= 0) throw std::invalid_argument("decay_every must be positive");
    if (!(decay_factor > 0.0 && decay_factor <= 1.0)) {
        throw std::invalid_argument("decay_factor must be in (0, 1]");
    }
}

double LRSchedule::at(long step) const {
    if (step < 0) throw std::invalid_argument("step must be nonnegative");
    if (step < warmup_steps) {
        double ramp = static_cast<double>(step + 1) / static_cast<double>(warmup_steps);
        return base_alpha * std::min(1.0, ramp);
    }
    double windows = static_cast<double>(step / decay_every);
    return base_alpha * std::pow(decay_factor, windows);
}

} // namespace qh
