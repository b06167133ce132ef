#ifndef GAPFLOW_IO_HPP
#define GAPFLOW_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "gapflow/actions.hpp"
#include "gapflow/birkhoff.hpp"
#include "gapflow/deformation.hpp"
#include "gapflow/floquet.hpp"
#include "gapflow/potential.hpp"
#include "gapflow/regularity.hpp"

namespace gapflow {

/// 17 significant digits: enough to round-trip any double exactly.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---- Potential JSON: {"mean": r, "cos": [...], "sin": [...]} ----

inline std::string potential_to_json(const Potential& q) {
    std::ostringstream out;
    out << "{\"mean\": " << fmt17(q.mean) << ", \"cos\": [";
    for (int n = 1; n <= q.modes(); ++n) out << (n > 1 ? ", " : "") << fmt17(q.cos_coeffs[n - 1]);
    out << "], \"sin\": [";
    for (int n = 1; n <= q.modes(); ++n) out << (n > 1 ? ", " : "") << fmt17(q.sin_coeffs[n - 1]);
    out << "]}";
    return out.str();
}

inline Potential potential_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (!j.contains("mean") || !j.contains("cos") || !j.contains("sin"))
        throw std::invalid_argument("potential JSON must carry \"mean\", \"cos\" and \"sin\"");
    return from_fourier(j.at("mean").get<double>(), j.at("cos").get<std::vector<double>>(),
                        j.at("sin").get<std::vector<double>>());
}

// ---- Birkhoff JSON: {"pairs": [[x, y], ...]} ----

inline std::string birkhoff_to_json(const BirkhoffVector& z) {
    std::ostringstream out;
    out << "{\"pairs\": [";
    for (int k = 1; k <= z.size(); ++k) {
        const auto& p = z.at(k);
        out << (k > 1 ? ", " : "") << "[" << fmt17(p[0]) << ", " << fmt17(p[1]) << "]";
    }
    out << "]}";
    return out.str();
}

inline BirkhoffVector birkhoff_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (!j.contains("pairs")) throw std::invalid_argument("Birkhoff JSON must carry \"pairs\"");
    BirkhoffVector z;
    for (const auto& p : j.at("pairs")) {
        if (!p.is_array() || p.size() != 2)
            throw std::invalid_argument("Birkhoff JSON pairs must be [x, y] arrays");
        z.pairs.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return z;
}

// ---- Spectrum CSV: "k,lambda_lo,lambda_hi,gamma" ----

inline std::string spectrum_to_csv(const Spectrum& s, double tol_gap = 1e-9) {
    const GapSequence gaps = gap_lengths(s, tol_gap);
    std::ostringstream out;
    out << "k,lambda_lo,lambda_hi,gamma\n";
    out << "0," << fmt17(s.eigenvalues[0]) << "," << fmt17(s.eigenvalues[0]) << ",\n";
    for (int k = 1; k <= s.gaps(); ++k)
        out << k << "," << fmt17(s.lambda_lo(k)) << "," << fmt17(s.lambda_hi(k)) << ","
            << fmt17(gaps.at(k)) << "\n";
    return out.str();
}

// ---- Actions CSV: "n,gamma,action,ratio"; ratio empty for closed gaps ----

inline std::string actions_to_csv(const Spectrum& s, const ActionSequence& actions,
                                  double tol_gap = 1e-9) {
    const GapSequence gaps = gap_lengths(s, tol_gap);
    std::ostringstream out;
    out << "n,gamma,action,ratio\n";
    for (int n = 1; n <= s.gaps(); ++n) {
        const double gamma = gaps.at(n);
        const double I = actions.at(n);
        out << n << "," << fmt17(gamma) << "," << fmt17(I) << ",";
        if (gamma > 0.0) out << fmt17(8.0 * std::numbers::pi * n * I / (gamma * gamma));
        out << "\n";
    }
    return out.str();
}

// ---- DampingReport JSON ----

inline std::string damping_report_to_json(const DampingReport& report) {
    std::ostringstream out;
    out << "{\"epsilon\": " << fmt17(report.epsilon) << ", \"alpha\": " << fmt17(report.alpha)
        << ", \"N_star\": ";
    if (report.N_star)
        out << *report.N_star;
    else
        out << "null";
    out << ", \"stages\": [";
    bool first = true;
    for (const auto& stage : report.stages) {
        out << (first ? "" : ", ") << "{\"n\": " << stage.n
            << ", \"threshold\": " << fmt17(stage.threshold)
            << ", \"damped\": " << (stage.damped ? "true" : "false")
            << ", \"norm_sq\": " << fmt17(stage.weighted_norm_sq) << "}";
        first = false;
    }
    out << "]}";
    return out.str();
}

// ---- regularity report JSON ----

inline void append_fit_json(std::ostringstream& out, const char* name, const DecayFit& fit) {
    out << "\"" << name << "\": {\"exponent\": " << fmt17(fit.exponent)
        << ", \"r_squared\": " << fmt17(fit.r_squared) << ", \"lo\": " << fit.lo
        << ", \"hi\": " << fit.hi << ", \"points\": " << fit.points << "}";
}

inline std::string regularity_report_to_json(const RegularityReport& report) {
    std::ostringstream out;
    out << "{\"beta\": " << fmt17(report.beta) << ", \"amplitude\": " << fmt17(report.amplitude)
        << ", \"modes\": " << report.K << ", \"seed\": " << report.seed
        << ", \"degenerate\": " << (report.degenerate ? "true" : "false");
    if (!report.degenerate) {
        out << ", ";
        append_fit_json(out, "coefficient_fit", report.coeff_fit);
        out << ", ";
        append_fit_json(out, "gap_fit", report.gap_fit);
        out << ", ";
        append_fit_json(out, "modulus_fit", report.modulus_fit);
        out << ", ";
        append_fit_json(out, "shifted_modulus_fit", report.shifted_modulus_fit);
        out << ", \"excluded\": [";
        for (std::size_t i = 0; i < report.excluded.size(); ++i)
            out << (i ? ", " : "") << report.excluded[i];
        out << "]";
    }
    out << ", \"coefficient_class\": \"" << report.coeff_class << "\", \"gap_class\": \""
        << report.gap_class << "\"}";
    return out.str();
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace gapflow

#endif
