#ifndef GAPFLOW_POTENTIAL_HPP
#define GAPFLOW_POTENTIAL_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "gapflow/types.hpp"

namespace gapflow {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Real periodic function on T = R/Z stored as a finite Fourier series,
///   q(x) = mean + sum_n (A_n cos(2 pi n x) + B_n sin(2 pi n x)).
/// The mean is the Casimir [q] of the Gardner bracket.
struct Potential {
    double mean = 0.0;
    std::vector<double> cos_coeffs;  // A_1..A_K
    std::vector<double> sin_coeffs;  // B_1..B_K

    int modes() const { return static_cast<int>(cos_coeffs.size()); }

    double operator()(double x) const {
        double v = mean;
        for (int n = 1; n <= modes(); ++n) {
            const double a = two_pi * n * x;
            v += cos_coeffs[n - 1] * std::cos(a) + sin_coeffs[n - 1] * std::sin(a);
        }
        return v;
    }

    double derivative(double x) const {
        double v = 0.0;
        for (int n = 1; n <= modes(); ++n) {
            const double w = two_pi * n;
            v += w * (-cos_coeffs[n - 1] * std::sin(w * x) + sin_coeffs[n - 1] * std::cos(w * x));
        }
        return v;
    }

    Potential zero_mean() const {
        Potential p = *this;
        p.mean = 0.0;
        return p;
    }
};

/// The L2-gradient dF/dq of a functional F, in the same coefficient representation.
using GradientFunction = Potential;

inline Potential from_fourier(double mean, std::vector<double> cos_coeffs,
                              std::vector<double> sin_coeffs) {
    if (cos_coeffs.size() != sin_coeffs.size())
        throw std::invalid_argument("from_fourier: cos/sin coefficient lists must have equal length");
    if (!std::isfinite(mean))
        throw std::invalid_argument("from_fourier: non-finite mean");
    for (double c : cos_coeffs)
        if (!std::isfinite(c)) throw std::invalid_argument("from_fourier: non-finite cosine coefficient");
    for (double c : sin_coeffs)
        if (!std::isfinite(c)) throw std::invalid_argument("from_fourier: non-finite sine coefficient");
    return Potential{mean, std::move(cos_coeffs), std::move(sin_coeffs)};
}

/// H^alpha_0 norm on the zero-mean leaf: ((1/2) sum n^{2 alpha} (A_n^2 + B_n^2))^{1/2}.
/// At alpha = 0 this is the L2 norm of the zero-mean part.
inline double sobolev_norm(const Potential& q, SobolevIndex alpha) {
    if (std::fabs(q.mean) > 1e-10)
        throw std::invalid_argument("sobolev_norm: potential must have zero mean (H^alpha_0 leaf)");
    double s = 0.0;
    for (int n = 1; n <= q.modes(); ++n) {
        const double a = q.cos_coeffs[n - 1], b = q.sin_coeffs[n - 1];
        s += std::pow(static_cast<double>(n), 2.0 * alpha.alpha) * (a * a + b * b);
    }
    return std::sqrt(0.5 * s);
}

/// L2 norm including the mean, used to normalize bracket residuals.
inline double l2_norm(const Potential& q) {
    double s = q.mean * q.mean;
    for (int n = 1; n <= q.modes(); ++n) {
        const double a = q.cos_coeffs[n - 1], b = q.sin_coeffs[n - 1];
        s += 0.5 * (a * a + b * b);
    }
    return std::sqrt(s);
}

/// Zero-mean potential with pair magnitude amplitude * n^-beta at mode n and
/// seed-deterministic phases. As a truncation proxy it lies in H^alpha exactly
/// when beta > alpha + 1/2.
inline Potential random_potential(double beta, double amplitude, int modes, std::uint64_t seed) {
    if (!(beta > 0.5)) throw std::invalid_argument("random_potential: beta must exceed 1/2");
    if (!(amplitude > 0.0)) throw std::invalid_argument("random_potential: amplitude must be positive");
    if (modes < 1) throw std::invalid_argument("random_potential: modes must be >= 1");
    // splitmix64 stream; fixed bit-level mapping to phases so outputs are
    // identical across standard library implementations.
    std::uint64_t state = seed;
    auto next = [&state]() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    };
    std::vector<double> a(modes), b(modes);
    for (int n = 1; n <= modes; ++n) {
        const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;  // [0,1)
        const double phase = two_pi * u;
        const double mag = amplitude * std::pow(static_cast<double>(n), -beta);
        a[n - 1] = mag * std::cos(phase);
        b[n - 1] = mag * std::sin(phase);
    }
    return Potential{0.0, std::move(a), std::move(b)};
}

/// Periodic trapezoid rule; exact for trigonometric polynomials of degree < nodes.
inline double periodic_quadrature(const std::function<double(double)>& f, int nodes) {
    double s = 0.0;
    const double h = 1.0 / nodes;
    for (int i = 0; i < nodes; ++i) s += f(i * h);
    return s * h;
}

/// KdV Hamiltonian H(q) = int_T ((q')^2/2 + q^3) dx.
inline double kdv_hamiltonian(const Potential& q) {
    const int nodes = 3 * q.modes() + 4;  // exact for the cubic term
    return periodic_quadrature(
        [&q](double x) {
            const double d = q.derivative(x);
            const double v = q(x);
            return 0.5 * d * d + v * v * v;
        },
        nodes);
}

/// Gardner bracket {F,G} = int_T (dF/dq) d/dx (dG/dq) dx, exact in coefficients:
///   sum_n pi n (A_n^F B_n^G - B_n^F A_n^G).
/// Antisymmetric; constants (the Casimir direction) bracket to zero.
inline double gardner_bracket(const GradientFunction& grad_f, const GradientFunction& grad_g) {
    const int K = std::min(grad_f.modes(), grad_g.modes());
    double s = 0.0;
    for (int n = 1; n <= K; ++n) {
        s += std::numbers::pi * n *
             (grad_f.cos_coeffs[n - 1] * grad_g.sin_coeffs[n - 1] -
              grad_f.sin_coeffs[n - 1] * grad_g.cos_coeffs[n - 1]);
    }
    return s;
}

/// Central finite differences of F along the constant direction and the
/// orthonormal directions sqrt(2) cos(2 pi n x), sqrt(2) sin(2 pi n x),
/// assembled into the coefficient representation of the L2-gradient dF/dq.
inline GradientFunction l2_gradient_fd(const std::function<double(const Potential&)>& F,
                                       const Potential& q, double h, int modes) {
    if (!(h > 0.0)) throw std::invalid_argument("l2_gradient_fd: h must be positive");
    if (modes < 0) throw std::invalid_argument("l2_gradient_fd: modes must be >= 0");
    Potential base = q;
    if (base.modes() < modes) {
        base.cos_coeffs.resize(modes, 0.0);
        base.sin_coeffs.resize(modes, 0.0);
    }
    const double sqrt2 = std::numbers::sqrt2;

    GradientFunction g;
    g.cos_coeffs.assign(static_cast<std::size_t>(modes), 0.0);
    g.sin_coeffs.assign(static_cast<std::size_t>(modes), 0.0);

    {
        Potential plus = base, minus = base;
        plus.mean += h;
        minus.mean -= h;
        g.mean = (F(plus) - F(minus)) / (2.0 * h);
    }
    for (int n = 1; n <= modes; ++n) {
        {
            Potential plus = base, minus = base;
            plus.cos_coeffs[n - 1] += h * sqrt2;
            minus.cos_coeffs[n - 1] -= h * sqrt2;
            g.cos_coeffs[n - 1] = sqrt2 * (F(plus) - F(minus)) / (2.0 * h);
        }
        {
            Potential plus = base, minus = base;
            plus.sin_coeffs[n - 1] += h * sqrt2;
            minus.sin_coeffs[n - 1] -= h * sqrt2;
            g.sin_coeffs[n - 1] = sqrt2 * (F(plus) - F(minus)) / (2.0 * h);
        }
    }
    return g;
}

}  // namespace gapflow

#endif
