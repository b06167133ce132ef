// gapflow command-line driver: spectra, gap lengths, KdV actions, Birkhoff
// moduli, bracket diagnostics, angle-gradient flows, action damping, and the
// gap-decay regularity experiment.

#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "gapflow/actions.hpp"
#include "gapflow/birkhoff.hpp"
#include "gapflow/deformation.hpp"
#include "gapflow/floquet.hpp"
#include "gapflow/io.hpp"
#include "gapflow/potential.hpp"
#include "gapflow/regularity.hpp"

namespace {

using namespace gapflow;

int thread_cap() {
    if (const char* env = std::getenv("GAPFLOW_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Deterministic fan-out over indices 0..count-1: results land by index.
void parallel_for(int count, const std::function<void(int)>& body) {
    const int workers = std::min(thread_cap(), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (int i = w; i < count; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

Spectrum spectrum_parallel(const Potential& q, int K, const SpectrumOptions& opts) {
    Spectrum s;
    s.eigenvalues.assign(static_cast<std::size_t>(2 * K + 1), 0.0);
    s.eigenvalues[0] = ground_eigenvalue(q, opts);
    std::vector<std::string> errors(static_cast<std::size_t>(K));
    parallel_for(K, [&](int i) {
        try {
            const auto [lo, hi] = find_gap(q, i + 1, opts);
            s.eigenvalues[static_cast<std::size_t>(2 * i + 1)] = lo;
            s.eigenvalues[static_cast<std::size_t>(2 * i + 2)] = hi;
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(i)] = e.what();
        }
    });
    for (const auto& e : errors)
        if (!e.empty()) throw std::runtime_error(e);
    return s;
}

void emit(const std::string& output_path, const std::string& content) {
    if (output_path.empty())
        std::cout << content;
    else
        write_file(output_path, content);
}

struct Config {
    std::string input, output, format = "csv";
    int modes = 8, steps = 1024, nodes = 64;
    double tol_eig = 1e-10, tol_gap = 1e-9;
    double alpha = -0.5, epsilon = 0.1, beta = 1.5, amplitude = 0.05;
    double time = 0.0;
    int mode_index = 1, flow_steps = 0;
    std::uint64_t seed = 1;

    SpectrumOptions spectrum_opts() const { return SpectrumOptions{steps, tol_eig, tol_gap}; }
    ActionOptions action_opts() const { return ActionOptions{nodes, steps, tol_gap}; }
};

std::string spectrum_json(const Spectrum& s, double tol_gap) {
    const GapSequence gaps = gap_lengths(s, tol_gap);
    std::ostringstream out;
    out << "{\"eigenvalues\": [";
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
        out << (i ? ", " : "") << fmt17(s.eigenvalues[i]);
    out << "], \"gammas\": [";
    for (int k = 1; k <= gaps.size(); ++k) out << (k > 1 ? ", " : "") << fmt17(gaps.at(k));
    out << "]}";
    return out.str();
}

int run(const Config& cfg, const std::string& command) {
    auto load_potential = [&cfg]() {
        if (cfg.input.empty()) throw CLI::ValidationError("--input is required for this command");
        return potential_from_json(read_file(cfg.input));
    };
    auto load_birkhoff = [&cfg]() {
        if (cfg.input.empty()) throw CLI::ValidationError("--input is required for this command");
        return birkhoff_from_json(read_file(cfg.input));
    };

    if (command == "spectrum" || command == "gaps") {
        const Potential q = load_potential();
        const Spectrum s = spectrum_parallel(q, cfg.modes, cfg.spectrum_opts());
        if (command == "gaps") {
            const GapSequence gaps = gap_lengths(s, cfg.tol_gap);
            std::ostringstream out;
            if (cfg.format == "csv") {
                out << "k,gamma\n";
                for (int k = 1; k <= gaps.size(); ++k) out << k << "," << fmt17(gaps.at(k)) << "\n";
            } else {
                out << "{\"gammas\": [";
                for (int k = 1; k <= gaps.size(); ++k)
                    out << (k > 1 ? ", " : "") << fmt17(gaps.at(k));
                out << "]}";
            }
            emit(cfg.output, out.str());
        } else {
            emit(cfg.output, cfg.format == "csv" ? spectrum_to_csv(s, cfg.tol_gap)
                                                 : spectrum_json(s, cfg.tol_gap));
        }
        return 0;
    }
    if (command == "actions" || command == "ratio" || command == "moduli") {
        const Potential q = load_potential();
        const Spectrum s = spectrum_parallel(q, cfg.modes, cfg.spectrum_opts());
        const ActionSequence acts = all_actions(q, s, cfg.action_opts());
        if (command == "ratio") {
            const GapSequence gaps = gap_lengths(s, cfg.tol_gap);
            std::ostringstream out;
            out << "n,ratio\n";
            for (int n = 1; n <= s.gaps(); ++n) {
                if (gaps.at(n) == 0.0)
                    throw std::runtime_error("ratio undefined at closed gap " + std::to_string(n));
                out << n << "," << fmt17(action_gap_ratio(q, n, s, cfg.action_opts())) << "\n";
            }
            emit(cfg.output, out.str());
        } else if (command == "moduli") {
            std::ostringstream out;
            out << "{\"moduli\": [";
            for (std::size_t i = 0; i < acts.values.size(); ++i)
                out << (i ? ", " : "") << fmt17(std::sqrt(2.0 * acts.values[i]));
            out << "]}";
            emit(cfg.output, out.str());
        } else {
            emit(cfg.output, actions_to_csv(s, acts, cfg.tol_gap));
        }
        return 0;
    }
    if (command == "brackets") {
        const Potential q = load_potential();
        const int top = std::min(cfg.modes, 3);
        std::vector<GradientFunction> grads(static_cast<std::size_t>(top));
        for (int n = 1; n <= top; ++n) {
            auto F = [&cfg, n](const Potential& p) {
                return single_gap_action(p, n, cfg.spectrum_opts(), cfg.action_opts());
            };
            grads[static_cast<std::size_t>(n - 1)] =
                l2_gradient_fd(F, q, 1e-4, std::max(2 * top, q.modes()));
        }
        std::ostringstream out;
        out << "{\"pairs\": [";
        bool first = true;
        for (int m = 1; m <= top; ++m) {
            for (int n = m + 1; n <= top; ++n) {
                const double b = gardner_bracket(grads[static_cast<std::size_t>(m - 1)],
                                                 grads[static_cast<std::size_t>(n - 1)]);
                const double scale = l2_norm(grads[static_cast<std::size_t>(m - 1)]) *
                                     l2_norm(grads[static_cast<std::size_t>(n - 1)]);
                out << (first ? "" : ", ") << "{\"m\": " << m << ", \"n\": " << n
                    << ", \"bracket\": " << fmt17(b) << ", \"normalized\": "
                    << fmt17(scale > 0.0 ? b / scale : 0.0) << "}";
                first = false;
            }
        }
        out << "]}";
        emit(cfg.output, out.str());
        return 0;
    }
    if (command == "flow") {
        const BirkhoffVector z = load_birkhoff();
        const BirkhoffVector out = cfg.flow_steps > 0
                                       ? flow_numeric(z, cfg.mode_index, cfg.time, cfg.flow_steps)
                                       : flow_exact(z, cfg.mode_index, cfg.time);
        emit(cfg.output, birkhoff_to_json(out));
        return 0;
    }
    if (command == "damp") {
        const BirkhoffVector z = load_birkhoff();
        const DampingReport report = damping_sequence(z, SobolevIndex(cfg.alpha), cfg.epsilon);
        const NormBoundCheck check = verify_norm_bound(report, z);
        if (!check.pass)
            throw std::runtime_error("damping norm bound failed at stage " +
                                     std::to_string(check.failed_stage) + ": " + check.reason);
        emit(cfg.output, damping_report_to_json(report));
        return 0;
    }
    if (command == "regularity") {
        const RegularityReport report = regularity_experiment(cfg.beta, cfg.amplitude, cfg.modes,
                                                          cfg.seed, cfg.spectrum_opts(),
                                                          cfg.action_opts());
        emit(cfg.output, regularity_report_to_json(report));
        return 0;
    }
    throw CLI::ValidationError("unknown command");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical toolkit for Hill spectra, KdV actions and Birkhoff coordinates"};
    app.require_subcommand(1);

    Config cfg;
    std::string command;
    for (const char* name : {"spectrum", "gaps", "actions", "ratio", "moduli", "brackets", "flow",
                             "damp", "regularity"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--input", cfg.input, "input JSON file");
        sub->add_option("--output", cfg.output, "output file (default: stdout)");
        sub->add_option("--format", cfg.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--modes", cfg.modes, "number of gaps / modes K")->check(CLI::PositiveNumber);
        sub->add_option("--steps", cfg.steps, "monodromy integration steps")
            ->check(CLI::Range(64, 1 << 22));
        sub->add_option("--nodes", cfg.nodes, "quadrature nodes for actions")
            ->check(CLI::Range(32, 1 << 16));
        sub->add_option("--tol-eig", cfg.tol_eig, "eigenvalue residual tolerance")
            ->check(CLI::PositiveNumber);
        sub->add_option("--tol-gap", cfg.tol_gap, "closed-gap snap tolerance (relative)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--alpha", cfg.alpha, "Sobolev index")->check(CLI::Range(-1.0, 1.0));
        sub->add_option("--epsilon", cfg.epsilon, "damping epsilon")->check(CLI::PositiveNumber);
        sub->add_option("--beta", cfg.beta, "coefficient decay exponent");
        sub->add_option("--amplitude", cfg.amplitude, "potential amplitude");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--mode", cfg.mode_index, "flow mode index k")->check(CLI::PositiveNumber);
        sub->add_option("--time", cfg.time, "flow time t");
        sub->add_option("--flow-steps", cfg.flow_steps, "RK4 steps for the numeric flow (0: exact)");
        sub->callback([&command, name]() { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return run(cfg, command);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
