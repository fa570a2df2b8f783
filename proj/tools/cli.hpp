#pragma once

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pipeflex/analysis/spectrum.hpp"
#include "pipeflex/analysis/sweep.hpp"
#include "pipeflex/analysis/verify.hpp"
#include "pipeflex/io/config.hpp"
#include "pipeflex/io/csv.hpp"
#include "pipeflex/io/plot.hpp"
#include "pipeflex/io/report.hpp"

namespace pipeflex::cli {

enum ExitCode : int { ok = 0, usage = 1, config = 2, divergence = 3, verification = 4 };

namespace detail {

inline int simulate_cmd(const io::RunConfig& rc, const std::string& csv, const std::string& plots, std::ostream& out,
                        std::ostream& err)
{
    auto emit = [&](const Trajectory& tr) {
        io::write_timeseries(tr, csv);
        out << "wrote " << csv << " (" << tr.size() << " samples)\n";
        if (!plots.empty())
            for (const auto& p : io::write_energy_plots(io::read_timeseries(csv), plots)) out << "wrote " << p << "\n";
    };
    auto sim = rc.sim;
    sim.keep_states = false;
    try {
        emit(simulate(sim));
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << "\n";
        emit(e.partial());
        return divergence;
    }
    return ok;
}

inline int constants_cmd(const io::RunConfig& rc, const std::string& report, std::ostream& out)
{
    const auto r = io::build_constants_report(rc.sim);
    if (report == "machine")
        out << io::to_json(r).dump(2) << "\n";
    else
        out << io::render_text(r);
    return ok;
}

inline int sweep_cmd(const io::RunConfig& rc, const std::string& csv, std::ostream& out, std::ostream& err)
{
    if (!rc.sweep) {
        err << "error: config has no [sweep] section\n";
        return config;
    }
    const auto report = tension_sweep(rc.sim, rc.sweep->T_values);
    io::write_text(csv, io::render_sweep(report, fingerprint(canonical_text(rc.sim))));
    int failed = 0;
    for (const auto& row : report.rows) failed += !row.error.empty();
    out << "wrote " << csv << " (" << report.rows.size() << " rows, " << failed << " failed)\n";
    if (!report.k1_monotone) out << "warning: certified k1 is not monotone in T\n";
    return ok;
}

inline int eigen_cmd(const io::RunConfig& rc, double t, const std::string& report, std::ostream& out)
{
    const fem::HermiteSpace space(rc.sim.n_elements, rc.sim.params.L);
    const auto r = frozen_spectrum(space, rc.sim.params, rc.sim.profile, t);
    const auto hash = fingerprint(canonical_text(rc.sim));
    if (report == "machine")
        out << io::to_json(r, hash).dump(2) << "\n";
    else
        out << io::render_text(r, hash);
    return ok;
}

inline int verify_cmd(std::ostream& out)
{
    bool all = true;
    for (const auto& c : run_verification()) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
        all = all && c.passed;
    }
    return all ? ok : verification;
}

} // namespace detail

/// Runs the command line; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Beam conveying fluid: simulation and stability analysis", "pipeflex"};
    app.require_subcommand(1);

    std::string config_path, csv, plots, report = "human";
    double time = 0.0;
    auto add_config = [&](CLI::App* sub) { sub->add_option("config", config_path, "INI configuration")->required(); };
    auto add_report = [&](CLI::App* sub) {
        sub->add_option("--report", report, "human or machine")->check(CLI::IsMember({"human", "machine"}));
    };

    auto* simulate = app.add_subcommand("simulate", "Integrate and write the functional time series");
    add_config(simulate);
    simulate->add_option("-o,--output", csv, "CSV path (overrides [output] csv)");
    simulate->add_option("--plots", plots, "SVG path prefix (overrides [output] plots)");
    auto* constants = app.add_subcommand("constants", "Stability threshold and decay certificate");
    add_config(constants);
    add_report(constants);
    auto* sweep = app.add_subcommand("sweep", "Tension sweep");
    add_config(sweep);
    sweep->add_option("-o,--output", csv, "CSV path")->required();
    auto* eigen = app.add_subcommand("eigen", "Frozen-coefficient spectrum");
    add_config(eigen);
    eigen->add_option("--time", time, "frozen time")->check(CLI::NonNegativeNumber);
    add_report(eigen);
    auto* verify = app.add_subcommand("verify", "Built-in oracle suite");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return usage;
    }

    try {
        if (verify->parsed()) return detail::verify_cmd(out);
        const auto rc = io::load_config(config_path);
        if (simulate->parsed())
            return detail::simulate_cmd(rc, csv.empty() ? rc.csv_path : csv, plots.empty() ? rc.plot_prefix : plots,
                                        out, err);
        if (constants->parsed()) return detail::constants_cmd(rc, report, out);
        if (sweep->parsed()) return detail::sweep_cmd(rc, csv, out, err);
        if (eigen->parsed()) return detail::eigen_cmd(rc, time, report, out);
    } catch (const io::ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return config;
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << "\n";
        return divergence;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return divergence;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return config;
    }
    return usage;
}

} // namespace pipeflex::cli
