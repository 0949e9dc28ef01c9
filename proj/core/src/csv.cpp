#include "qhkit/csv.hpp"

#include <charconv>

namespace qh {

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, ptr);
}

std::string trajectory_csv(const std::vector<TrajectoryRecord>& records) {
    std::string out = "step,lr,loss,param_norm,update_norm\n";
    for (const auto& r : records) {
        out += std::to_string(r.step);
        out += ',';
        out += format_double(r.lr);
        out += ',';
        out += format_double(r.loss);
        out += ',';
        out += format_double(r.param_norm);
        out += ',';
        out += format_double(r.update_norm);
        out += '\n';
    }
    return out;
}

} // namespace qh
