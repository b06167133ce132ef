#ifndef GAPFLOW_BIRKHOFF_HPP
#define GAPFLOW_BIRKHOFF_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gapflow/types.hpp"

namespace gapflow {

/// Finite Birkhoff coordinate vector z = (x_k, y_k), k = 1..K; indices beyond
/// K are implicitly zero.
struct BirkhoffVector {
    std::vector<std::array<double, 2>> pairs;

    int size() const { return static_cast<int>(pairs.size()); }
    const std::array<double, 2>& at(int k) const {
        if (k < 1 || k > size()) throw std::out_of_range("BirkhoffVector: index out of range");
        return pairs[static_cast<std::size_t>(k - 1)];
    }
};

/// ||z||_alpha = (sum_k k^{2 alpha} (x_k^2 + y_k^2))^{1/2}.
inline double seq_norm(const BirkhoffVector& z, SobolevIndex alpha) {
    double s = 0.0;
    for (int k = 1; k <= z.size(); ++k) {
        const auto& p = z.pairs[static_cast<std::size_t>(k - 1)];
        s += std::pow(static_cast<double>(k), 2.0 * alpha.alpha) * (p[0] * p[0] + p[1] * p[1]);
    }
    return std::sqrt(s);
}

/// Squared weighted norm at index alpha + 1/2, the quantity the damping
/// recursion certifies: sum_k k^{1 + 2 alpha} (x_k^2 + y_k^2).
inline double seq_norm_sq_shifted(const BirkhoffVector& z, SobolevIndex alpha) {
    double s = 0.0;
    for (int k = 1; k <= z.size(); ++k) {
        const auto& p = z.pairs[static_cast<std::size_t>(k - 1)];
        s += std::pow(static_cast<double>(k), 1.0 + 2.0 * alpha.alpha) * (p[0] * p[0] + p[1] * p[1]);
    }
    return s;
}

/// I_k = (x_k^2 + y_k^2) / 2.
inline ActionSequence actions_of(const BirkhoffVector& z) {
    ActionSequence a;
    a.values.reserve(z.pairs.size());
    for (const auto& p : z.pairs) a.values.push_back(0.5 * (p[0] * p[0] + p[1] * p[1]));
    return a;
}

/// z_k = sqrt(2 I_k) (cos theta_k, sin theta_k).
inline BirkhoffVector from_polar(const ActionSequence& actions, const std::vector<double>& theta) {
    if (actions.values.size() != theta.size())
        throw std::invalid_argument("from_polar: action and angle lists must have equal length");
    BirkhoffVector z;
    z.pairs.reserve(actions.values.size());
    for (std::size_t k = 0; k < actions.values.size(); ++k) {
        const double I = actions.values[k];
        if (I < 0.0) throw std::invalid_argument("from_polar: negative action");
        const double r = std::sqrt(2.0 * I);
        z.pairs.push_back({r * std::cos(theta[k]), r * std::sin(theta[k])});
    }
    return z;
}

}  // namespace gapflow

#endif
