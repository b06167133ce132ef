#ifndef GAPFLOW_FLOQUET_HPP
#define GAPFLOW_FLOQUET_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "gapflow/potential.hpp"

namespace gapflow {

using Mat2 = std::array<std::array<double, 2>, 2>;

inline Mat2 mat_mul(const Mat2& a, const Mat2& b) {
    return Mat2{{{a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]},
                 {a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]}}};
}

inline Mat2 mat_add(const Mat2& a, const Mat2& b) {
    return Mat2{{{a[0][0] + b[0][0], a[0][1] + b[0][1]}, {a[1][0] + b[1][0], a[1][1] + b[1][1]}}};
}

inline double mat_det(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

/// Fundamental solution of -y'' + q y = lambda y over one period, with its
/// entrywise lambda-derivative. Columns are the canonical solutions
/// (y(0), y'(0)) = (1,0) and (0,1); rows are value / derivative at x = 1.
struct FloquetResult {
    double lambda = 0.0;
    Mat2 m{};           // monodromy matrix
    Mat2 m_dlambda{};   // d m / d lambda
    double delta = 0.0;          // discriminant: trace of m
    double delta_dlambda = 0.0;  // trace of m_dlambda
};

namespace detail {

// cosh(sqrt(x)) and sinh(sqrt(x))/sqrt(x) as entire functions of x, with
// stable evaluation through x = 0, plus their derivatives in x.
struct TracelessExp {
    double c, s, dc, ds;  // c(x), s(x), c'(x), s'(x)
};

inline TracelessExp traceless_exp_coeffs(double x) {
    TracelessExp r{};
    if (std::fabs(x) < 1e-6) {
        // c = sum x^k/(2k)!, s = sum x^k/(2k+1)!
        r.c = 1.0 + x * (1.0 / 2.0 + x * (1.0 / 24.0 + x / 720.0));
        r.s = 1.0 + x * (1.0 / 6.0 + x * (1.0 / 120.0 + x / 5040.0));
        r.dc = 1.0 / 2.0 + x * (1.0 / 12.0 + x / 240.0);
        r.ds = 1.0 / 6.0 + x * (1.0 / 60.0 + x / 1680.0);
    } else if (x > 0.0) {
        const double u = std::sqrt(x);
        r.c = std::cosh(u);
        r.s = std::sinh(u) / u;
        r.dc = 0.5 * r.s;
        r.ds = (r.c - r.s) / (2.0 * x);
    } else {
        const double u = std::sqrt(-x);
        r.c = std::cos(u);
        r.s = std::sin(u) / u;
        r.dc = 0.5 * r.s;
        r.ds = (r.c - r.s) / (2.0 * x);
    }
    return r;
}

}  // namespace detail

/// One-period transfer matrix of the Hill equation y'' = (q(x) - lambda) y,
/// by a fourth-order Magnus scheme on a fixed grid. Each step exponentiates a
/// traceless matrix, so det(m) = 1 up to rounding for any step count; for
/// constant q the result is exact.
inline FloquetResult monodromy(const Potential& q, double lambda, int steps) {
    if (steps < 64) throw std::invalid_argument("monodromy: steps must be >= 64");
    if (!std::isfinite(lambda)) throw std::invalid_argument("monodromy: non-finite lambda");

    const double h = 1.0 / steps;
    const double gauss_off = h * std::numbers::sqrt3 / 6.0;  // Gauss(2) offset from midpoint

    Mat2 m{{{1.0, 0.0}, {0.0, 1.0}}};
    Mat2 dm{{{0.0, 0.0}, {0.0, 0.0}}};

    for (int i = 0; i < steps; ++i) {
        const double xm = (i + 0.5) * h;
        const double v1 = q(xm - gauss_off) - lambda;
        const double v2 = q(xm + gauss_off) - lambda;
        const double vbar = 0.5 * (v1 + v2);
        const double d = std::numbers::sqrt3 * h * h * (v1 - v2) / 12.0;

        // Omega = [[d, h], [h*vbar, -d]];  Omega^2 = x2 * I
        const double x2 = d * d + h * h * vbar;
        const auto e = detail::traceless_exp_coeffs(x2);

        const Mat2 E{{{e.c + e.s * d, e.s * h}, {e.s * h * vbar, e.c - e.s * d}}};
        // d/dlambda: dOmega = [[0,0],[-h,0]], dx2 = -h^2
        const double dx2 = -h * h;
        const Mat2 dE{{{e.dc * dx2 + e.ds * dx2 * d, e.ds * dx2 * h},
                       {e.ds * dx2 * h * vbar - e.s * h, e.dc * dx2 - e.ds * dx2 * d}}};

        dm = mat_add(mat_mul(E, dm), mat_mul(dE, m));
        m = mat_mul(E, m);
    }

    FloquetResult r;
    r.lambda = lambda;
    r.m = m;
    r.m_dlambda = dm;
    r.delta = m[0][0] + m[1][1];
    r.delta_dlambda = dm[0][0] + dm[1][1];
    if (!std::isfinite(r.delta) || !std::isfinite(r.delta_dlambda))
        throw std::runtime_error("monodromy: non-finite state during integration (lambda = " +
                                 std::to_string(lambda) + ")");
    return r;
}

/// Periodic eigenvalues of -d^2/dx^2 + q on [0,2], listed ascending.
struct Spectrum {
    std::string q_id;
    std::vector<double> eigenvalues;  // lambda_0 .. lambda_{2K}

    int gaps() const { return (static_cast<int>(eigenvalues.size()) - 1) / 2; }
    double lambda_lo(int k) const { return eigenvalues[static_cast<std::size_t>(2 * k - 1)]; }
    double lambda_hi(int k) const { return eigenvalues[static_cast<std::size_t>(2 * k)]; }
};

/// Gap lengths gamma_k = lambda_{2k} - lambda_{2k-1}, k = 1..K; entries below
/// the (relative) snap tolerance are set to exact zero.
struct GapSequence {
    std::vector<double> gammas;

    double at(int k) const {
        if (k < 1 || k > static_cast<int>(gammas.size()))
            throw std::out_of_range("GapSequence: index out of range");
        return gammas[static_cast<std::size_t>(k - 1)];
    }
    int size() const { return static_cast<int>(gammas.size()); }
};

struct SpectrumOptions {
    int steps = 1024;
    double tol_eig = 1e-10;
    double tol_gap = 1e-9;  // relative snap tolerance for closed gaps
    // A gap counts as closed when the discriminant extremum exceeds |2| by
    // less than this; roughly twice the rounding noise of the Magnus product.
    double disc_floor = 1e-13;
};

namespace detail {

inline int steps_for(double lambda, double mean, int base) {
    // keep at least ~16 integration steps per oscillation wavelength
    const double lm = std::max(0.0, lambda - mean);
    return std::max(base, static_cast<int>(std::ceil(3.0 * std::sqrt(lm))));
}

struct DiscEval {
    const Potential& q;
    double mean;
    int base_steps;

    double delta(double lambda) const {
        return monodromy(q, lambda, steps_for(lambda, mean, base_steps)).delta;
    }
    FloquetResult full(double lambda) const {
        return monodromy(q, lambda, steps_for(lambda, mean, base_steps));
    }
};

// Bisection to a tight bracket, then guarded Newton. f must change sign
// across [a, b]; fd provides (f, f') when with_newton is set.
inline double refine_root(const std::function<double(double)>& f,
                          const std::function<std::pair<double, double>(double)>& fd, double a,
                          double b, double fa, double fb) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw std::runtime_error("refine_root: endpoints do not bracket a sign change");
    const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    while (b - a > 1e-10 * scale) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    double x = 0.5 * (a + b);
    for (int it = 0; it < 5; ++it) {
        const auto [fx, dfx] = fd(x);
        if (dfx == 0.0) break;
        const double step = fx / dfx;
        const double xn = x - step;
        if (xn <= a || xn >= b) break;  // Newton left the bracket
        x = xn;
        if (std::fabs(step) < 1e-15 * scale) break;
    }
    return x;
}

}  // namespace detail

/// Lowest periodic eigenvalue lambda_0: the bottom root of Delta(lambda) = 2.
inline double ground_eigenvalue(const Potential& q, const SpectrumOptions& opts = {}) {
    detail::DiscEval disc{q, q.mean, opts.steps};
    auto f = [&](double lam) { return disc.delta(lam) - 2.0; };
    auto fd = [&](double lam) {
        const auto r = disc.full(lam);
        return std::pair<double, double>{r.delta - 2.0, r.delta_dlambda};
    };
    // Delta > 2 below the spectrum; Delta < 2 inside the first band.
    double b = 0.25 * std::numbers::pi * std::numbers::pi + q.mean;
    double fb = f(b);
    double width = 1.0;
    double a = q.mean - width;
    double fa = f(a);
    for (int it = 0; fa <= 0.0 && it < 60; ++it) {
        width *= 2.0;
        a = q.mean - width;
        fa = f(a);
    }
    if (fa <= 0.0) throw std::runtime_error("ground_eigenvalue: failed to bracket lambda_0");
    if (fb >= 0.0) {
        // potential strong enough to push lambda_0 past the free-operator band point
        double step = 1.0;
        while (fb >= 0.0) {
            b += step;
            step *= 2.0;
            fb = f(b);
            if (b > a + 1e6) throw std::runtime_error("ground_eigenvalue: failed to bracket lambda_0");
        }
    }
    return detail::refine_root(f, fd, a, b, fa, fb);
}

/// Endpoints of the k-th spectral gap (lambda_{2k-1}, lambda_{2k}), k >= 1.
/// A closed gap is returned as a coincident pair at the discriminant extremum.
inline std::pair<double, double> find_gap(const Potential& q, int k,
                                          const SpectrumOptions& opts = {}) {
    if (k < 1) throw std::invalid_argument("find_gap: k must be >= 1");
    detail::DiscEval disc{q, q.mean, opts.steps};
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    // u >= 0 exactly on the k-th gap, u < 0 in the adjacent bands
    auto u = [&](double lam) { return sign * disc.delta(lam) / 2.0 - 1.0; };
    auto ud = [&](double lam) {
        const auto r = disc.full(lam);
        return std::pair<double, double>{sign * r.delta / 2.0 - 1.0, sign * r.delta_dlambda / 2.0};
    };

    const double pi = std::numbers::pi;
    const double wa = (k - 0.5) * pi * (k - 0.5) * pi + q.mean;  // inside band k
    const double wb = (k + 0.5) * pi * (k + 0.5) * pi + q.mean;  // inside band k+1

    // coarse scan for the discriminant extremum inside the gap
    const int grid = 48;
    std::vector<double> lam(grid + 1), uv(grid + 1);
    int imax = 0;
    for (int i = 0; i <= grid; ++i) {
        lam[i] = wa + (wb - wa) * i / grid;
        uv[i] = u(lam[i]);
        if (uv[i] > uv[imax]) imax = i;
    }
    if (imax == 0 || imax == grid)
        throw std::runtime_error("find_gap: failed to bracket gap " + std::to_string(k) +
                                 " within the scan window");

    // refine the extremum: bisection on the sign of Delta' between the
    // neighbors of the grid maximum
    double a = lam[imax - 1], b = lam[imax + 1];
    double da = ud(a).second, db = ud(b).second;
    double lam_star, u_star;
    if ((da > 0.0) == (db > 0.0)) {
        // derivative did not change sign on the bracket; fall back to the grid point
        lam_star = lam[imax];
        u_star = uv[imax];
    } else {
        for (int it = 0; it < 80 && b - a > 1e-12 * std::max(1.0, std::fabs(b)); ++it) {
            const double mid = 0.5 * (a + b);
            const double dm = ud(mid).second;
            if ((dm > 0.0) == (da > 0.0)) {
                a = mid;
                da = dm;
            } else {
                b = mid;
                db = dm;
            }
        }
        lam_star = 0.5 * (a + b);
        u_star = u(lam_star);
    }

    if (u_star <= opts.disc_floor) return {lam_star, lam_star};  // closed gap

    // outward walk to band points with u < 0, then root refinement
    auto bracket_left = [&]() -> std::pair<double, double> {
        for (int i = imax; i >= 0; --i)
            if (lam[i] < lam_star && uv[i] < 0.0) return {lam[i], uv[i]};
        throw std::runtime_error("find_gap: no left band point for gap " + std::to_string(k));
    };
    auto bracket_right = [&]() -> std::pair<double, double> {
        for (int i = imax; i <= grid; ++i)
            if (lam[i] > lam_star && uv[i] < 0.0) return {lam[i], uv[i]};
        throw std::runtime_error("find_gap: no right band point for gap " + std::to_string(k));
    };
    auto fu = std::function<double(double)>(u);
    auto fud = std::function<std::pair<double, double>(double)>(ud);
    const auto [la, ula] = bracket_left();
    const auto [lb, ulb] = bracket_right();
    const double lo = detail::refine_root(fu, fud, la, lam_star, ula, u_star);
    const double hi = detail::refine_root(fu, fud, lam_star, lb, u_star, ulb);
    return {lo, hi};
}

/// Periodic spectrum lambda_0..lambda_{2K} of -d^2/dx^2 + q on [0,2]:
/// the union of the roots of Delta = 2 and Delta = -2 for the period-1
/// discriminant, ascending.
inline Spectrum periodic_spectrum(const Potential& q, int K, const SpectrumOptions& opts = {}) {
    if (K < 1) throw std::invalid_argument("periodic_spectrum: K must be >= 1");
    Spectrum s;
    s.eigenvalues.reserve(static_cast<std::size_t>(2 * K + 1));
    s.eigenvalues.push_back(ground_eigenvalue(q, opts));
    for (int k = 1; k <= K; ++k) {
        const auto [lo, hi] = find_gap(q, k, opts);
        s.eigenvalues.push_back(lo);
        s.eigenvalues.push_back(hi);
    }
    return s;
}

inline GapSequence gap_lengths(const Spectrum& s, double tol_gap = 1e-9) {
    GapSequence g;
    g.gammas.reserve(static_cast<std::size_t>(s.gaps()));
    for (int k = 1; k <= s.gaps(); ++k) {
        double gamma = s.lambda_hi(k) - s.lambda_lo(k);
        if (gamma < tol_gap * std::max(1.0, std::fabs(s.lambda_hi(k)))) gamma = 0.0;
        g.gammas.push_back(gamma);
    }
    return g;
}

}  // namespace gapflow

#endif
