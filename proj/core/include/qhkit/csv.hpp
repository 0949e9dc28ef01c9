#pragma once

#include <string>
#include <vector>

#include "qhkit/trajectory.hpp"

namespace qh {

// Shortest decimal representation that round-trips the exact double.
std::string format_double(double x);

// Schema: step,lr,loss,param_norm,update_norm. '\n' line endings, header always present.
std::string trajectory_csv(const std::vector<TrajectoryRecord>& records);

} // namespace qh
