#ifndef GAPFLOW_DEFORMATION_HPP
#define GAPFLOW_DEFORMATION_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gapflow/birkhoff.hpp"
#include "gapflow/types.hpp"

namespace gapflow {

/// Time-t map of the angle-gradient field on mode k,
///   (x_k, y_k) / (x_k^2 + y_k^2),
/// in closed form: the action moves linearly, I_k(t) = I_k(0) + t, the angle
/// and every other mode are unchanged. Defined for t > -I_k(0).
inline BirkhoffVector flow_exact(const BirkhoffVector& z, int k, double t) {
    const auto& p = z.at(k);
    const double r2 = p[0] * p[0] + p[1] * p[1];
    if (r2 == 0.0)
        throw std::domain_error("flow_exact: vector field undefined at I_k = 0 (mode " +
                                std::to_string(k) + ")");
    const double I0 = 0.5 * r2;
    if (t <= -I0)
        throw std::domain_error("flow_exact: flow leaves the domain, action reaches zero (t <= -I_k)");
    BirkhoffVector out = z;
    const double scale = std::sqrt((r2 + 2.0 * t) / r2);
    out.pairs[static_cast<std::size_t>(k - 1)] = {p[0] * scale, p[1] * scale};
    return out;
}

/// Fixed-step RK4 integration of the planar field on mode k; agrees with
/// flow_exact to O(steps^-4). All other modes are passed through untouched.
inline BirkhoffVector flow_numeric(const BirkhoffVector& z, int k, double t, int steps) {
    if (steps < 16) throw std::invalid_argument("flow_numeric: steps must be >= 16");
    const auto& p = z.at(k);
    const double r2 = p[0] * p[0] + p[1] * p[1];
    if (r2 == 0.0)
        throw std::domain_error("flow_numeric: vector field undefined at I_k = 0 (mode " +
                                std::to_string(k) + ")");
    if (t <= -0.5 * r2)
        throw std::domain_error(
            "flow_numeric: trajectory action would reach zero within the requested time");
    double x = p[0], y = p[1];
    const double h = t / steps;
    auto fx = [](double u, double v) { return u / (u * u + v * v); };
    auto fy = [](double u, double v) { return v / (u * u + v * v); };
    for (int i = 0; i < steps; ++i) {
        const double k1x = fx(x, y), k1y = fy(x, y);
        const double k2x = fx(x + 0.5 * h * k1x, y + 0.5 * h * k1y);
        const double k2y = fy(x + 0.5 * h * k1x, y + 0.5 * h * k1y);
        const double k3x = fx(x + 0.5 * h * k2x, y + 0.5 * h * k2y);
        const double k3y = fy(x + 0.5 * h * k2x, y + 0.5 * h * k2y);
        const double k4x = fx(x + h * k3x, y + h * k3y);
        const double k4y = fy(x + h * k3x, y + h * k3y);
        x += h * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0;
        y += h * (k1y + 2.0 * k2y + 2.0 * k3y + k4y) / 6.0;
        if (!std::isfinite(x) || !std::isfinite(y))
            throw std::runtime_error("flow_numeric: non-finite state during integration");
    }
    BirkhoffVector out = z;
    out.pairs[static_cast<std::size_t>(k - 1)] = {x, y};
    return out;
}

struct DampingStage {
    int n = 0;
    double threshold = 0.0;  // stage bound on 2 I_n
    bool damped = false;
    ActionSequence post_actions;   // all actions after this stage
    double weighted_norm_sq = 0.0; // ||z||^2_{alpha + 1/2} after this stage
};

struct DampingReport {
    double epsilon = 0.0;
    double alpha = 0.0;
    std::optional<int> N_star;  // first stage with ||z||_{alpha+1/2} < 2 eps
    std::vector<DampingStage> stages;
};

/// The recursive action-damping sequence: stage n leaves the vector alone when
/// 2 I_n already sits below the stage threshold eps^2 / (n^{1+2 alpha} 2^n),
/// and otherwise shifts mode n along the angle-gradient flow until 2 I_n
/// equals half the threshold. Later modes are never touched by earlier stages.
inline DampingReport damping_sequence(const BirkhoffVector& z0, SobolevIndex alpha,
                                      double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("damping_sequence: epsilon must be positive");
    for (const auto& p : z0.pairs)
        if (!std::isfinite(p[0]) || !std::isfinite(p[1]))
            throw std::invalid_argument("damping_sequence: non-finite input vector");

    DampingReport report;
    report.epsilon = epsilon;
    report.alpha = alpha.alpha;

    BirkhoffVector z = z0;
    for (int n = 1; n <= z.size(); ++n) {
        const double threshold =
            epsilon * epsilon /
            (std::pow(static_cast<double>(n), 1.0 + 2.0 * alpha.alpha) * std::pow(2.0, n));
        DampingStage stage;
        stage.n = n;
        stage.threshold = threshold;
        const auto& p = z.at(n);
        const double twoI = p[0] * p[0] + p[1] * p[1];
        if (twoI >= threshold) {
            // drive 2 I_n to threshold/2; the flow time stays inside (-I_n, 0)
            z = flow_exact(z, n, threshold / 4.0 - 0.5 * twoI);
            stage.damped = true;
        }
        stage.post_actions = actions_of(z);
        stage.weighted_norm_sq = seq_norm_sq_shifted(z, alpha);
        if (!report.N_star && stage.weighted_norm_sq < 4.0 * epsilon * epsilon)
            report.N_star = n;
        report.stages.push_back(std::move(stage));
    }
    return report;
}

struct NormBoundCheck {
    bool pass = true;
    int failed_stage = 0;  // 0 when pass
    std::string reason;
    std::vector<double> slack;  // per stage: bound RHS minus recomputed LHS
};

/// Recomputes, from first principles, the per-stage inequality
///   ||z(q_n)||^2_{alpha+1/2} <= eps^2 sum_{j<=n} 2^-j + sum_{j>n} j^{1+2alpha} ||z_j^0||^2
/// together with the stage invariants (thresholds honored up to stage n,
/// modes beyond n untouched) and the internal consistency of the report.
inline NormBoundCheck verify_norm_bound(const DampingReport& report, const BirkhoffVector& z0) {
    NormBoundCheck check;
    const double alpha = report.alpha;
    const double eps2 = report.epsilon * report.epsilon;
    const ActionSequence initial = actions_of(z0);
    auto weight = [alpha](int j) { return std::pow(static_cast<double>(j), 1.0 + 2.0 * alpha); };

    auto fail = [&check](int stage, std::string why) {
        check.pass = false;
        check.failed_stage = stage;
        check.reason = std::move(why);
    };

    double partial_geom = 0.0;
    for (const auto& stage : report.stages) {
        const int n = stage.n;
        partial_geom += std::pow(2.0, -n);
        const int K = stage.post_actions.size();
        if (K != static_cast<int>(z0.pairs.size())) {
            fail(n, "stage action list length mismatch");
            break;
        }
        // recomputed weighted norm must match the recorded one
        double lhs = 0.0;
        for (int j = 1; j <= K; ++j) lhs += weight(j) * 2.0 * stage.post_actions.at(j);
        if (std::fabs(lhs - stage.weighted_norm_sq) > 1e-12 * std::max(1.0, std::fabs(lhs))) {
            fail(n, "recorded weighted norm inconsistent with stage actions");
            break;
        }
        // thresholds honored for all j <= n
        bool bad = false;
        for (int j = 1; j <= std::min(n, K); ++j) {
            const double tj = eps2 / (weight(j) * std::pow(2.0, j));
            if (2.0 * stage.post_actions.at(j) > tj * (1.0 + 1e-12)) {
                fail(n, "threshold violated at mode " + std::to_string(j));
                bad = true;
                break;
            }
        }
        if (bad) break;
        // modes beyond n untouched
        for (int j = n + 1; j <= K; ++j) {
            const double a0 = initial.at(j);
            if (std::fabs(stage.post_actions.at(j) - a0) > 1e-12 * std::max(1.0, a0)) {
                fail(n, "action at mode " + std::to_string(j) + " changed before its stage");
                bad = true;
                break;
            }
        }
        if (bad) break;
        double tail = 0.0;
        for (int j = n + 1; j <= K; ++j) tail += weight(j) * 2.0 * initial.at(j);
        const double rhs = eps2 * partial_geom + tail;
        check.slack.push_back(rhs - lhs);
        if (lhs > rhs * (1.0 + 1e-12) + 1e-15) {
            fail(n, "norm bound violated");
            break;
        }
    }
    return check;
}

}  // namespace gapflow

#endif
