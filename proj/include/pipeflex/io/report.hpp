#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pipeflex/analysis/spectrum.hpp"
#include "pipeflex/analysis/sweep.hpp"
#include "pipeflex/io/csv.hpp"
#include "pipeflex/model/constants.hpp"

namespace pipeflex::io {

/// Everything the `constants` command reports for one configuration.
struct ConstantsReport {
    std::string config_hash;
    VelocityBounds bounds;
    AssumptionCheck assumptions;
    std::optional<StabilityConstants> certificate;
    std::string certificate_error;
};

inline ConstantsReport build_constants_report(const SimulationConfig& c)
{
    ConstantsReport r;
    r.config_hash = fingerprint(canonical_text(c));
    r.bounds = compute_bounds(c.profile);
    r.assumptions = check_assumptions(c.params, r.bounds);
    try {
        r.certificate = compute_decay_certificate(c.params, r.bounds);
    } catch (const CertificateError& e) {
        r.certificate_error = e.what();
    }
    return r;
}

inline nlohmann::ordered_json to_json(const ConstantsReport& r)
{
    nlohmann::ordered_json j;
    j["config_hash"] = r.config_hash;
    j["bounds"] = {{"sup_V2", r.bounds.sup_V2},
                   {"inf_V2", r.bounds.inf_V2},
                   {"sup_absV", r.bounds.sup_absV},
                   {"sup_absVtV", r.bounds.sup_absVtV}};
    j["assumptions"] = {{"holds", r.assumptions.holds},
                        {"T1", r.assumptions.T1},
                        {"T2", r.assumptions.T2},
                        {"T_star", r.assumptions.T_star},
                        {"margin", r.assumptions.margin},
                        {"failure", to_string(r.assumptions.failure)}};
    if (r.certificate) {
        const auto& k = *r.certificate;
        j["certificate"] = {{"P", k.P},
                            {"alpha1_sandwich", k.alpha1_sandwich},
                            {"xi1", k.xi1},
                            {"xi2", k.xi2},
                            {"literal_xi1", k.sandwich.literal_xi1},
                            {"literal_xi2", k.sandwich.literal_xi2},
                            {"delta", k.delta},
                            {"alpha1_decay", k.alpha1_decay},
                            {"gamma0", k.gamma0},
                            {"gamma1", k.gamma1},
                            {"vartheta", k.vartheta},
                            {"k1", k.k1},
                            {"k0", k.k0}};
    } else {
        j["certificate"] = nullptr;
        j["certificate_error"] = r.certificate_error;
    }
    return j;
}

inline std::string render_text(const ConstantsReport& r)
{
    std::string s = hash_comment(r.config_hash) + "\n";
    auto kv = [&](const char* k, double v) { s += std::string("  ") + k + ": " + format_double(v) + "\n"; };
    s += "bounds:\n";
    kv("sup_V2", r.bounds.sup_V2);
    kv("inf_V2", r.bounds.inf_V2);
    kv("sup_absV", r.bounds.sup_absV);
    kv("sup_absVtV", r.bounds.sup_absVtV);
    s += "assumptions:\n";
    s += std::string("  holds: ") + (r.assumptions.holds ? "true" : "false") + "\n";
    kv("T1", r.assumptions.T1);
    kv("T2", r.assumptions.T2);
    kv("T_star", r.assumptions.T_star);
    kv("margin", r.assumptions.margin);
    s += std::string("  failure: ") + to_string(r.assumptions.failure) + "\n";
    s += "certificate:\n";
    if (!r.certificate) {
        s += "  available: false\n  reason: " + r.certificate_error + "\n";
        return s;
    }
    const auto& k = *r.certificate;
    s += "  available: true\n";
    kv("P", k.P);
    kv("alpha1_sandwich", k.alpha1_sandwich);
    kv("xi1", k.xi1);
    kv("xi2", k.xi2);
    kv("literal_xi1", k.sandwich.literal_xi1);
    kv("literal_xi2", k.sandwich.literal_xi2);
    kv("delta", k.delta);
    kv("alpha1_decay", k.alpha1_decay);
    kv("gamma0", k.gamma0);
    kv("gamma1", k.gamma1);
    kv("vartheta", k.vartheta);
    kv("k1", k.k1);
    kv("k0", k.k0);
    return s;
}

inline nlohmann::ordered_json to_json(const SpectrumReport& r, const std::string& config_hash)
{
    nlohmann::ordered_json j;
    j["config_hash"] = config_hash;
    j["t"] = r.t;
    j["spectral_abscissa"] = r.spectral_abscissa;
    j["characteristic_frequency"] = r.characteristic_frequency;
    j["unstable"] = r.unstable;
    auto ev = nlohmann::ordered_json::array();
    for (const auto& z : r.eigenvalues) ev.push_back({z.real(), z.imag()});
    j["eigenvalues"] = ev;
    return j;
}

inline std::string render_text(const SpectrumReport& r, const std::string& config_hash)
{
    std::string s = hash_comment(config_hash) + "\n";
    s += "t: " + format_double(r.t) + "\n";
    s += "spectral_abscissa: " + format_double(r.spectral_abscissa) + "\n";
    s += "characteristic_frequency: " + format_double(r.characteristic_frequency) + "\n";
    s += std::string("unstable: ") + (r.unstable ? "true" : "false") + "\n";
    s += "eigenvalues (re, im):\n";
    for (const auto& z : r.eigenvalues) s += "  " + format_double(z.real()) + ", " + format_double(z.imag()) + "\n";
    return s;
}

inline constexpr const char* sweep_header =
    "T,certified,T_star,margin,k1,spectral_abscissa,unstable,decay_rate,growth_rate,diverged,error";

inline std::string render_sweep(const SweepReport& r, const std::string& config_hash)
{
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("nan"); };
    auto quoted = [](const std::string& s) {
        std::string out = "\"";
        for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return out + "\"";
    };
    std::string s = hash_comment(config_hash) + "\n# k1_monotone=" + (r.k1_monotone ? "true" : "false") + "\n" +
                    sweep_header + "\n";
    for (const auto& row : r.rows) {
        s += format_double(row.T) + "," + (row.certified ? "1" : "0") + "," + format_double(row.T_star) + "," +
             format_double(row.margin) + "," + format_double(row.k1) + "," + format_double(row.spectral_abscissa) +
             "," + (row.unstable ? "1" : "0") + "," + opt(row.decay_rate) + "," + opt(row.growth_rate) + "," +
             (row.diverged ? "1" : "0") + "," + quoted(row.error) + "\n";
    }
    return s;
}

} // namespace pipeflex::io
