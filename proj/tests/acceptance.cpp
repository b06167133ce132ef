// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Runs against the library plus (for the determinism criterion) the
// command-line binary.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <future>
#include <numbers>
#include <string>
#include <vector>

#include "dense_oracle.hpp"
#include "gapflow/actions.hpp"
#include "gapflow/deformation.hpp"
#include "gapflow/floquet.hpp"
#include "gapflow/io.hpp"
#include "gapflow/potential.hpp"
#include "gapflow/regularity.hpp"

using namespace gapflow;

namespace {

int failures = 0;

void report(int index, const char* name, bool pass, const std::string& detail) {
    std::printf("%s criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", index, name, detail.c_str());
    if (!pass) ++failures;
}

double chip(std::uint64_t& state) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(state >> 11) * 0x1.0p-52 - 1.0;
}

void criterion1_free_spectrum() {
    const Potential zero = from_fourier(0, {}, {});
    const Spectrum s = periodic_spectrum(zero, 10);
    double worst_eig = std::fabs(s.eigenvalues[0]);
    for (int k = 1; k <= 10; ++k) {
        const double exact = k * std::numbers::pi * k * std::numbers::pi;
        worst_eig = std::max(worst_eig, std::fabs(s.lambda_lo(k) - exact) / exact);
        worst_eig = std::max(worst_eig, std::fabs(s.lambda_hi(k) - exact) / exact);
    }
    const GapSequence g = gap_lengths(s);
    double worst_gap = 0.0;
    for (int k = 1; k <= 10; ++k) worst_gap = std::max(worst_gap, g.at(k));
    double worst_disc = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double lam = 4.0 * i;
        worst_disc = std::max(
            worst_disc, std::fabs(monodromy(zero, lam, 2048).delta - 2.0 * std::cos(std::sqrt(lam))));
    }
    const bool pass = worst_eig < 1e-8 && worst_gap < 1e-8 && worst_disc < 1e-8;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "max rel eig err %.2e, max gap %.2e, max disc err %.2e",
                  worst_eig, worst_gap, worst_disc);
    report(1, "free-operator spectrum and discriminant", pass, buf);
}

void criterion2_wronskian() {
    double worst = 0.0;
    for (unsigned seed = 1; seed <= 5; ++seed) {
        const Potential q = random_potential(1.0, 0.4, 8, seed);
        for (int i = 0; i < 100; ++i) {
            const double lam = -10.0 + 510.0 * i / 99.0;
            worst = std::max(worst, std::fabs(mat_det(monodromy(q, lam, 1024).m) - 1.0));
        }
    }
    char buf[80];
    std::snprintf(buf, sizeof(buf), "max |det - 1| = %.2e", worst);
    report(2, "Wronskian conservation", worst < 1e-9, buf);
}

void criterion3_perturbative_gap() {
    const Potential q = from_fourier(0, {0.2}, {0.0});
    const Spectrum s = periodic_spectrum(q, 1);
    const double gamma1 = gap_lengths(s).at(1);
    const auto oracle = testing::dense_spectrum(q, 3);
    const double gamma1_oracle = oracle[2] - oracle[1];
    const double rel = std::fabs(gamma1 - gamma1_oracle) / gamma1_oracle;
    char buf[120];
    std::snprintf(buf, sizeof(buf), "gamma_1 = %.6f, oracle %.6f, rel dev %.2e", gamma1,
                  gamma1_oracle, rel);
    report(3, "perturbative gap vs dense-matrix oracle", rel < 0.05 && std::fabs(gamma1 - 0.2) < 0.01,
           buf);
}

void criterion4_action_gap_ratio() {
    double worst = 0.0;
    for (unsigned seed : {1u, 2u, 3u}) {
        const Potential q = random_potential(1.5, 0.05, 8, seed);
        const Spectrum s = periodic_spectrum(q, 8);
        const GapSequence g = gap_lengths(s);
        for (int n = 1; n <= 6; ++n) {
            if (g.at(n) == 0.0) continue;  // unresolvable
            worst = std::max(worst, std::fabs(action_gap_ratio(q, n, s) - 1.0));
        }
    }
    char buf[80];
    std::snprintf(buf, sizeof(buf), "max |8 pi n I_n / gamma_n^2 - 1| = %.2e", worst);
    report(4, "action-gap normalization ratio", worst <= 0.05, buf);
}

void criterion5_zero_equivalence() {
    bool pass = true;
    int checked = 0;
    std::vector<Potential> cases = {from_fourier(0, {}, {}), from_fourier(0, {0.2}, {0.0}),
                                    from_fourier(0.3, {0.1, 0.0}, {0.0, 0.05}),
                                    random_potential(1.5, 0.05, 6, 1),
                                    random_potential(2.5, 0.05, 6, 2)};
    for (const auto& q : cases) {
        const Spectrum s = periodic_spectrum(q, 6);
        const GapSequence g = gap_lengths(s);
        const ActionSequence a = all_actions(q, s);
        for (int n = 1; n <= 6; ++n, ++checked)
            if ((a.at(n) == 0.0) != (g.at(n) == 0.0)) pass = false;
    }
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%d gap/action pairs checked", checked);
    report(5, "I_n = 0 exactly when gamma_n = 0", pass, buf);
}

void criterion6_poisson_commutativity() {
    const Potential q = from_fourier(0, {0.2, 0.0}, {0.0, 0.1});
    SpectrumOptions sopts;
    ActionOptions aopts;
    aopts.nodes = 96;
    GradientFunction g[3];
    for (int n = 1; n <= 3; ++n) {
        auto F = [&sopts, &aopts, n](const Potential& p) {
            return single_gap_action(p, n, sopts, aopts);
        };
        g[n - 1] = l2_gradient_fd(F, q, 4e-3, 6);
    }
    double worst = 0.0;
    for (auto [m, n] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}}) {
        const double b = std::fabs(gardner_bracket(g[m - 1], g[n - 1]));
        worst = std::max(worst, b / (l2_norm(g[m - 1]) * l2_norm(g[n - 1])));
    }
    char buf[80];
    std::snprintf(buf, sizeof(buf), "max normalized |{I_m, I_n}| = %.2e", worst);
    report(6, "Poisson commutativity of the actions", worst <= 1e-5, buf);
}

void criterion7_flow_agreement() {
    std::uint64_t state = 7;
    double worst_xy = 0.0, worst_lin = 0.0;
    bool off_mode_exact = true;
    for (int trial = 0; trial < 20; ++trial) {
        BirkhoffVector z;
        for (int j = 0; j < 5; ++j) z.pairs.push_back({chip(state), chip(state)});
        const int k = 1 + static_cast<int>((chip(state) + 1.0) * 2.49);
        const double Ik = actions_of(z).at(k);
        if (Ik < 1e-3) continue;
        const double t = -0.9 * Ik + (chip(state) + 1.0) * 0.5;
        const BirkhoffVector exact = flow_exact(z, k, t);
        const BirkhoffVector numeric = flow_numeric(z, k, t, 512);
        worst_xy = std::max({worst_xy, std::fabs(exact.at(k)[0] - numeric.at(k)[0]),
                             std::fabs(exact.at(k)[1] - numeric.at(k)[1])});
        worst_lin = std::max(worst_lin, std::fabs(actions_of(exact).at(k) - Ik - t));
        for (int m = 1; m <= 5; ++m) {
            if (m == k) continue;
            if (exact.at(m) != z.at(m) || numeric.at(m) != z.at(m)) off_mode_exact = false;
        }
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "max |exact - numeric| = %.2e, max action-linearity err = %.2e",
                  worst_xy, worst_lin);
    report(7, "flow closed form vs numeric integration", worst_xy < 1e-6 && worst_lin < 1e-12 && off_mode_exact,
           buf);
}

void criterion8_damping_certificate() {
    std::uint64_t state = 99;
    bool pass = true;
    int runs = 0;
    for (int trial = 0; trial < 10; ++trial) {
        BirkhoffVector z;
        for (int k = 1; k <= 12; ++k) {
            const double decay = std::pow(static_cast<double>(k), -1.2);
            z.pairs.push_back({decay * chip(state), decay * chip(state)});
        }
        const ActionSequence initial = actions_of(z);
        for (double eps : {0.05, 0.1}) {
            for (double alpha : {-1.0, -0.5, 0.0}) {
                ++runs;
                const DampingReport rep = damping_sequence(z, SobolevIndex(alpha), eps);
                if (!verify_norm_bound(rep, z).pass) pass = false;
                for (const auto& stage : rep.stages) {
                    for (int j = 1; j <= stage.n; ++j) {
                        const double tj = eps * eps / (std::pow(static_cast<double>(j), 1.0 + 2.0 * alpha) *
                                                       std::pow(2.0, j));
                        if (2.0 * stage.post_actions.at(j) > tj * (1.0 + 1e-12)) pass = false;
                    }
                    for (int j = stage.n + 1; j <= 12; ++j)
                        if (stage.post_actions.at(j) != initial.at(j)) pass = false;
                }
                if (!rep.N_star) {
                    pass = false;
                    continue;
                }
                const auto& final_stage = rep.stages[static_cast<std::size_t>(*rep.N_star - 1)];
                if (!(std::sqrt(final_stage.weighted_norm_sq) < 2.0 * eps)) pass = false;
            }
        }
    }
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%d damping runs certified", runs);
    report(8, "damping recursion certificate", pass, buf);
}

void criterion9_regularity() {
    struct Case {
        double beta;
        unsigned seed;
    };
    std::vector<Case> cases;
    for (double beta : {1.0, 1.5, 2.0, 2.5})
        for (unsigned seed : {1u, 2u, 3u}) cases.push_back({beta, seed});
    std::vector<std::future<RegularityReport>> jobs;
    for (const auto& c : cases)
        jobs.push_back(std::async(std::launch::async, [c]() {
            return regularity_experiment(c.beta, 0.05, 24, c.seed);
        }));
    double worst_gap_dev = 0.0, worst_shift_dev = 0.0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const RegularityReport rep = jobs[i].get();
        worst_gap_dev = std::max(worst_gap_dev, std::fabs(rep.gap_fit.exponent - cases[i].beta));
        worst_shift_dev = std::max(
            worst_shift_dev, std::fabs(rep.modulus_fit.exponent - rep.gap_fit.exponent - 0.5));
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "max |gap exp - beta| = %.3f, max |modulus shift - 1/2| = %.3f",
                  worst_gap_dev, worst_shift_dev);
    report(9, "gap-decay regularity coherence", worst_gap_dev <= 0.25 && worst_shift_dev <= 0.15, buf);
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(GAPFLOW_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

void criterion10_determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "gapflow_acceptance";
    fs::create_directories(dir);
    const fs::path qpath = dir / "q.json";
    const fs::path zpath = dir / "z.json";
    write_file(qpath.string(), potential_to_json(random_potential(1.5, 0.05, 6, 7)));
    BirkhoffVector z;
    z.pairs = {{0.9, 0.2}, {0.4, 0.4}, {0.1, 0.3}};
    write_file(zpath.string(), birkhoff_to_json(z));

    bool pass = true;
    const std::vector<std::pair<std::string, std::string>> invocations = {
        {"spectrum --input " + qpath.string() + " --modes 4 --format csv", "spec"},
        {"actions --input " + qpath.string() + " --modes 4", "act"},
        {"damp --alpha -0.5 --epsilon 0.1 --input " + zpath.string(), "damp"},
        {"regularity --beta 1.5 --amplitude 0.05 --modes 8 --seed 3", "reg"},
    };
    for (const auto& [args, tag] : invocations) {
        const fs::path out1 = dir / (tag + "_1.out");
        const fs::path out2 = dir / (tag + "_2.out");
        if (run_cli(args + " --output " + out1.string()) != 0) pass = false;
        if (run_cli(args + " --output " + out2.string()) != 0) pass = false;
        if (read_file(out1.string()) != read_file(out2.string())) pass = false;
        if (read_file(out1.string()).empty()) pass = false;
    }
    // the guarded error path: ratio on the zero potential exits nonzero
    const fs::path zero = dir / "zero.json";
    write_file(zero.string(), potential_to_json(from_fourier(0, {}, {})));
    const int code = run_cli("ratio --input " + zero.string() + " --modes 2");
    if (code == 0) pass = false;

    report(10, "CLI determinism and guarded errors", pass,
           "4 commands x 2 runs byte-compared, zero-potential ratio rejected");
}

}  // namespace

int main() {
    criterion1_free_spectrum();
    criterion2_wronskian();
    criterion3_perturbative_gap();
    criterion4_action_gap_ratio();
    criterion5_zero_equivalence();
    criterion6_poisson_commutativity();
    criterion7_flow_agreement();
    criterion8_damping_certificate();
    criterion9_regularity();
    criterion10_determinism();
    if (failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
