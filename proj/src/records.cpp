#include "cocopf/records.hpp"

#include <cmath>
#include <stdexcept>

namespace cocopf {

std::optional<long> TrialRecord::hit_for(double delta_f) const {
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        const double d = ladder[i].delta_f;
        if (std::abs(d - delta_f) <= 1e-9 * std::max(std::abs(d), std::abs(delta_f)))
            return hits[i];
    }
    throw std::invalid_argument("delta_f is not a rung of this record's target ladder");
}

} // namespace cocopf
