#ifndef GAPFLOW_TYPES_HPP
#define GAPFLOW_TYPES_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gapflow {

/// Sobolev scale index alpha, restricted to [-1, 1].
struct SobolevIndex {
    double alpha;

    explicit SobolevIndex(double a) : alpha(a) {
        if (!std::isfinite(a) || a < -1.0 || a > 1.0)
            throw std::invalid_argument("SobolevIndex: alpha must be a finite real in [-1, 1]");
    }
};

/// Action variables I_n, n = 1..K. All entries nonnegative.
struct ActionSequence {
    std::vector<double> values;

    double at(int n) const {  // 1-based
        if (n < 1 || n > static_cast<int>(values.size()))
            throw std::out_of_range("ActionSequence: index out of range");
        return values[static_cast<std::size_t>(n - 1)];
    }
    int size() const { return static_cast<int>(values.size()); }
};

}  // namespace gapflow

#endif
