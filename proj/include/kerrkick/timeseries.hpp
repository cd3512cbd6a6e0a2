#pragma once

#include <cstddef>
#include <vector>

namespace kerrkick {

/// Uniformly sampled real scalar sequence indexed by kick number.
struct TimeSeries {
    std::vector<double> values;
    long t0 = 0;      // kick index of values[0]
    long stride = 1;  // kicks between consecutive samples

    std::size_t size() const { return values.size(); }
    long kick_at(std::size_t i) const { return t0 + static_cast<long>(i) * stride; }
};

}  // namespace kerrkick
