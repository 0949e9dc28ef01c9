#pragma once

#include <stdexcept>
#include <string>

namespace qh {

// Thrown when a parameter mapping cannot produce a valid target
// parameterization. The message names the violated constraint.
class infeasible_error : public std::runtime_error {
public:
    explicit infeasible_error(const std::string& constraint)
        : std::runtime_error(constraint) {}
};

} // namespace qh
