#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pipeflex/analysis/decay.hpp"
#include "pipeflex/analysis/spectrum.hpp"
#include "pipeflex/model/constants.hpp"
#include "pipeflex/timestep/simulate.hpp"

namespace pipeflex {

struct SweepRow {
    double T = 0.0;
    bool certified = false;     ///< decay certificate available
    double T_star = 0.0;
    double margin = 0.0;        ///< T - T_star
    double k1 = 0.0;            ///< certified rate, 0 when not certified
    std::string certificate_note;
    double spectral_abscissa = 0.0;
    bool unstable = false;
    std::optional<double> decay_rate;  ///< fitted from E over the second half
    std::optional<double> growth_rate; ///< -(fitted rate) of ||state||^2; +inf on divergence
    bool diverged = false;
    std::string error; ///< row failure, the sweep continues
};

struct SweepReport {
    std::vector<SweepRow> rows; ///< sorted by T
    bool k1_monotone = true;    ///< certified k1 non-decreasing in T over certified rows
};

/// Worker count: PIPEFLEX_THREADS when set to a positive integer, else the
/// machine parallelism.
inline unsigned sweep_threads()
{
    if (const char* env = std::getenv("PIPEFLEX_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

inline SweepRow sweep_row(const SimulationConfig& base, double T)
{
    SweepRow row;
    row.T = T;
    try {
        SimulationConfig cfg = base;
        cfg.params.T = T;
        cfg.keep_states = false;
        cfg.validate();

        const auto bounds = compute_bounds(cfg.profile);
        const auto check = check_assumptions(cfg.params, bounds);
        row.T_star = check.T_star;
        row.margin = T - check.T_star;
        try {
            const auto k = compute_decay_certificate(cfg.params, bounds);
            row.certified = true;
            row.k1 = k.k1;
        } catch (const CertificateError& e) {
            row.certificate_note = e.what();
        }

        const fem::HermiteSpace space(cfg.n_elements, cfg.params.L);
        const auto spec = frozen_spectrum(space, cfg.params, cfg.profile, 0.0);
        row.spectral_abscissa = spec.spectral_abscissa;
        row.unstable = spec.unstable;

        std::optional<Trajectory> tr;
        try {
            tr = simulate(cfg);
        } catch (const DivergenceError&) {
            row.diverged = true;
            row.growth_rate = std::numeric_limits<double>::infinity();
        }
        if (tr) {
            const auto t = sample_times(*tr);
            std::vector<double> nsq;
            nsq.reserve(tr->size());
            for (const auto& s : tr->samples) nsq.push_back(s.norm_sq);
            try {
                row.growth_rate = -fit_log_linear(t, nsq, second_half(t)).rate;
            } catch (const InsufficientData&) {
            }
            try {
                row.decay_rate = fit_decay(*tr).rate;
            } catch (const InsufficientData&) {
            }
        }
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

/// One row per tension value; rows run concurrently and are keyed by T.
inline SweepReport tension_sweep(const SimulationConfig& base, std::vector<double> T_values,
                                 unsigned threads = sweep_threads())
{
    if (T_values.empty()) throw InvalidArgument("sweep needs at least one T value");
    for (double T : T_values)
        if (!(std::isfinite(T) && T > 0.0)) throw InvalidArgument("sweep T values must be > 0");
    std::sort(T_values.begin(), T_values.end());

    SweepReport report;
    report.rows.resize(T_values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < T_values.size();) report.rows[i] = sweep_row(base, T_values[i]);
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(T_values.size())));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& r : report.rows) {
        if (!r.certified) continue;
        if (r.k1 < prev) report.k1_monotone = false;
        prev = r.k1;
    }
    return report;
}

} // namespace pipeflex
