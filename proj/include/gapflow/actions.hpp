#ifndef GAPFLOW_ACTIONS_HPP
#define GAPFLOW_ACTIONS_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "gapflow/floquet.hpp"
#include "gapflow/potential.hpp"
#include "gapflow/quadrature.hpp"
#include "gapflow/types.hpp"

namespace gapflow {

struct ActionOptions {
    int nodes = 64;   // Gauss-Legendre nodes on the gap
    int steps = 1024; // monodromy steps
    double tol_gap = 1e-9;
};

/// KdV action attached to the n-th gap:
///   I_n = (2/pi) int_{lambda_{2n-1}}^{lambda_{2n}} arcosh((-1)^n Delta(lambda)/2) dlambda,
/// after the substitution lambda = midpoint + (gamma/2) sin(phi) that removes
/// the square-root vanishing of the integrand at both endpoints. Returns 0 for
/// a closed gap. For small gaps I_n ~ gamma_n^2 / (8 pi n).
inline double action(const Potential& q, int n, const Spectrum& s, int nodes = 64,
                     int steps = 1024) {
    if (n < 1 || n > s.gaps()) throw std::invalid_argument("action: gap index out of range");
    if (nodes < 32) throw std::invalid_argument("action: nodes must be >= 32");
    const double lo = s.lambda_lo(n), hi = s.lambda_hi(n);
    const double gamma = hi - lo;
    if (gamma <= 0.0) return 0.0;

    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * gamma;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    detail::DiscEval disc{q, q.mean, steps};

    // sign self-check at the gap midpoint
    const double umid = sign * disc.delta(mid) / 2.0;
    if (umid < 1.0 - 1e-12)
        throw std::runtime_error("action: discriminant sign check failed at gap " +
                                 std::to_string(n) + " (midpoint value " + std::to_string(umid) + ")");

    const auto rule = gauss_legendre(nodes);
    double integral = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double phi = 0.5 * std::numbers::pi * rule.nodes[i];
        const double lam = mid + half * std::sin(phi);
        double v = sign * disc.delta(lam) / 2.0;
        if (v < 1.0) v = 1.0;  // guard floating-point dips at the endpoints
        integral += rule.weights[i] * std::acosh(v) * half * std::cos(phi);
    }
    integral *= 0.5 * std::numbers::pi;  // phi-interval scaling
    return (2.0 / std::numbers::pi) * integral;
}

inline ActionSequence all_actions(const Potential& q, const Spectrum& s,
                                  const ActionOptions& opts = {}) {
    const GapSequence gaps = gap_lengths(s, opts.tol_gap);
    ActionSequence a;
    a.values.reserve(static_cast<std::size_t>(s.gaps()));
    for (int n = 1; n <= s.gaps(); ++n) {
        a.values.push_back(gaps.at(n) == 0.0 ? 0.0 : action(q, n, s, opts.nodes, opts.steps));
    }
    return a;
}

/// R_n = 8 pi n I_n / gamma_n^2; tends to 1 as the gap shrinks.
inline double action_gap_ratio(const Potential& q, int n, const Spectrum& s,
                               const ActionOptions& opts = {}) {
    const GapSequence gaps = gap_lengths(s, opts.tol_gap);
    const double gamma = gaps.at(n);
    if (gamma == 0.0)
        throw std::runtime_error("action_gap_ratio: ratio undefined at closed gap " +
                                 std::to_string(n));
    const double I = action(q, n, s, opts.nodes, opts.steps);
    return 8.0 * std::numbers::pi * n * I / (gamma * gamma);
}

inline double action_gap_ratio(const Potential& q, int n, const SpectrumOptions& sopts = {},
                               const ActionOptions& aopts = {}) {
    const Spectrum s = periodic_spectrum(q, n, sopts);
    return action_gap_ratio(q, n, s, aopts);
}

/// Birkhoff coordinate moduli |z_n| = sqrt(2 I_n), n = 1..K.
inline std::vector<double> modulus_map(const Potential& q, int K, const SpectrumOptions& sopts = {},
                                       const ActionOptions& aopts = {}) {
    if (K < 1) throw std::invalid_argument("modulus_map: K must be >= 1");
    const Spectrum s = periodic_spectrum(q, K, sopts);
    const ActionSequence a = all_actions(q, s, aopts);
    std::vector<double> moduli;
    moduli.reserve(a.values.size());
    for (double I : a.values) moduli.push_back(std::sqrt(2.0 * I));
    return moduli;
}

/// Action of a single gap computed from scratch; the focal functional for
/// finite-difference gradients (avoids solving for the whole spectrum).
inline double single_gap_action(const Potential& q, int n, const SpectrumOptions& sopts = {},
                                const ActionOptions& aopts = {}) {
    const auto [lo, hi] = find_gap(q, n, sopts);
    Spectrum s;
    s.eigenvalues.assign(static_cast<std::size_t>(2 * n + 1), 0.0);
    s.eigenvalues[static_cast<std::size_t>(2 * n - 1)] = lo;
    s.eigenvalues[static_cast<std::size_t>(2 * n)] = hi;
    if (hi - lo < aopts.tol_gap * std::max(1.0, std::fabs(hi))) return 0.0;
    return action(q, n, s, aopts.nodes, aopts.steps);
}

}  // namespace gapflow

#endif
