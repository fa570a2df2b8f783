#pragma once

#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pipeflex/error.hpp"
#include "pipeflex/timestep/simulate.hpp"

namespace pipeflex::io {

/// Rejected configuration. `key` is "section.name" (or empty for syntax
/// errors), `line` is 1-based, 0 when the key is absent from the file.
class ConfigError : public Error {
public:
    ConfigError(std::string key, int line, const std::string& message)
    : Error(format(key, line, message)), key_(std::move(key)), line_(line) {}
    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    static std::string format(const std::string& key, int line, const std::string& message)
    {
        std::string out = line > 0 ? "line " + std::to_string(line) + ": " : std::string();
        if (!key.empty()) out += key + ": ";
        return out + message;
    }
    std::string key_;
    int line_;
};

struct SweepSpec {
    std::vector<double> T_values;
};

struct RunConfig {
    SimulationConfig sim;
    std::string csv_path = "timeseries.csv";
    std::string plot_prefix; ///< empty: no plots
    std::optional<SweepSpec> sweep;
};

namespace detail {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

inline std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// Flat "[section]" / "key = value" reader; '#' and ';' start comments.
class IniTable {
public:
    explicit IniTable(const std::string& text)
    {
        static const std::set<std::string> sections{"beam", "fluid", "initial", "numerics", "output", "sweep"};
        std::istringstream in(text);
        std::string raw, section;
        int line = 0;
        while (std::getline(in, raw)) {
            ++line;
            std::string_view s = raw;
            if (const auto c = s.find_first_of("#;"); c != std::string_view::npos) s = s.substr(0, c);
            s = trim(s);
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']') throw ConfigError("", line, "malformed section header");
                section = std::string(trim(s.substr(1, s.size() - 2)));
                if (!sections.count(section)) throw ConfigError(section, line, "unknown section");
                if (!section_lines_.emplace(section, line).second)
                    throw ConfigError(section, line, "duplicate section");
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string_view::npos) throw ConfigError("", line, "expected key = value");
            if (section.empty()) throw ConfigError("", line, "key outside of a section");
            const std::string key = section + "." + std::string(trim(s.substr(0, eq)));
            if (entries_.count(key)) throw ConfigError(key, line, "duplicate key");
            entries_[key] = Entry{std::string(trim(s.substr(eq + 1))), line, false};
        }
    }

    bool has_section(const std::string& s) const { return section_lines_.count(s) > 0; }
    bool has(const std::string& key) const { return entries_.count(key) > 0; }
    int line(const std::string& key) const
    {
        const auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    const std::string& text(const std::string& key)
    {
        const auto it = entries_.find(key);
        if (it == entries_.end()) throw ConfigError(key, 0, "missing required key");
        it->second.used = true;
        return it->second.value;
    }

    double number(const std::string& key) { return parse_number(key, text(key)); }
    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    int integer(const std::string& key, int fallback)
    {
        if (!has(key)) return fallback;
        const std::string& v = text(key);
        int out = 0;
        const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || p != v.data() + v.size())
            throw ConfigError(key, line(key), "expected an integer, got '" + v + "'");
        return out;
    }

    std::vector<double> list(const std::string& key)
    {
        std::vector<double> out;
        std::string_view rest = text(key);
        while (true) {
            const auto comma = rest.find(',');
            const auto item = trim(rest.substr(0, comma));
            if (item.empty()) throw ConfigError(key, line(key), "empty list item");
            out.push_back(parse_number(key, std::string(item)));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        return out;
    }

    /// Throws on the first key that no reader asked for.
    void reject_unused() const
    {
        const Entry* first = nullptr;
        std::string name;
        for (const auto& [k, e] : entries_)
            if (!e.used && (!first || e.line < first->line)) {
                first = &e;
                name = k;
            }
        if (first) throw ConfigError(name, first->line, "unknown key");
    }

private:
    double parse_number(const std::string& key, const std::string& v) const
    {
        double out = 0.0;
        const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
            throw ConfigError(key, line(key), "expected a finite number, got '" + v + "'");
        return out;
    }

    std::map<std::string, Entry> entries_;
    std::map<std::string, int> section_lines_;
};

inline FieldSpec read_field(IniTable& ini, const std::string& name, const std::string& fallback,
                            const BeamParams& p, double V0)
{
    const std::string base = "initial." + name;
    const std::string kind = ini.has(base) ? ini.text(base) : fallback;
    const double amplitude = ini.number(base + "_amplitude", 0.1);
    if (kind == "zero") return ZeroField{};
    if (kind == "sine") return SineMode{ini.integer(base + "_mode", 1), amplitude};
    if (kind == "polynomial") return PolynomialField{ini.list(base + "_coeffs")};
    if (kind == "compatible" && name == "displacement") {
        try {
            return compatible_polynomial(p.EI, p.T - 2.0 * p.m_f * V0 * V0, p.L, amplitude);
        } catch (const InvalidArgument& e) {
            throw ConfigError(base, ini.line(base), e.what());
        }
    }
    throw ConfigError(base, ini.line(base), "unknown field kind '" + kind + "'");
}

} // namespace detail

/// Parses and validates the flat INI configuration.
inline RunConfig parse_config(const std::string& text)
{
    detail::IniTable ini(text);
    RunConfig rc;
    auto& c = rc.sim;

    auto& p = c.params;
    p.m_p = ini.number("beam.m_p");
    p.EI = ini.number("beam.EI");
    p.T = ini.number("beam.T");
    p.c = ini.number("beam.c");
    p.L = ini.number("beam.L");
    p.m_f = ini.number("fluid.m_f");
    try {
        p.validate();
    } catch (const InvalidArgument& e) {
        const std::string what = e.what();
        const std::string field = what.substr(0, what.find(' '));
        const std::string key = (field == "m_f" ? "fluid." : "beam.") + field;
        throw ConfigError(key, ini.line(key), what);
    }

    c.n_elements = ini.integer("numerics.n_elements", 32);
    c.dt = ini.number("numerics.dt", 1e-3);
    c.t_end = ini.number("numerics.t_end", 10.0);
    c.output_stride = ini.integer("numerics.output_stride", 10);
    if (c.n_elements < 2) throw ConfigError("numerics.n_elements", ini.line("numerics.n_elements"), "must be >= 2");
    if (!(c.dt > 0.0)) throw ConfigError("numerics.dt", ini.line("numerics.dt"), "must be > 0");
    if (!(c.t_end > c.dt)) throw ConfigError("numerics.t_end", ini.line("numerics.t_end"), "must exceed dt");
    if (c.output_stride < 1)
        throw ConfigError("numerics.output_stride", ini.line("numerics.output_stride"), "must be >= 1");

    const std::string kind = ini.text("fluid.velocity");
    const double horizon = ini.number("fluid.horizon", c.t_end);
    VelocitySpec spec;
    if (kind == "constant") {
        spec = ConstantVelocity{ini.number("fluid.V0")};
    } else if (kind == "sinusoidal_offset") {
        spec = SinusoidalVelocity{ini.number("fluid.V0"), ini.number("fluid.A"), ini.number("fluid.omega")};
    } else if (kind == "smooth_ramp") {
        spec = SmoothRampVelocity{ini.number("fluid.V_start"), ini.number("fluid.V_end"),
                                  ini.number("fluid.ramp_start"), ini.number("fluid.ramp_end")};
    } else if (kind == "spline_table") {
        spec = SplineTableVelocity{ini.list("fluid.knot_t"), ini.list("fluid.knot_V")};
    } else {
        throw ConfigError("fluid.velocity", ini.line("fluid.velocity"), "unknown velocity kind '" + kind + "'");
    }
    try {
        c.profile = VelocityProfile(std::move(spec), horizon);
    } catch (const InvalidArgument& e) {
        throw ConfigError("fluid.velocity", ini.line("fluid.velocity"), e.what());
    }

    const double V0 = c.profile.eval(0.0).V;
    c.ic.displacement = detail::read_field(ini, "displacement", "compatible", p, V0);
    c.ic.velocity = detail::read_field(ini, "velocity", "zero", p, V0);

    if (ini.has("output.csv")) rc.csv_path = ini.text("output.csv");
    if (ini.has("output.plots")) rc.plot_prefix = ini.text("output.plots");

    if (ini.has_section("sweep")) {
        SweepSpec sw;
        if (ini.has("sweep.T_values")) {
            sw.T_values = ini.list("sweep.T_values");
        } else {
            const double lo = ini.number("sweep.T_min"), hi = ini.number("sweep.T_max");
            const int count = ini.integer("sweep.T_count", 0);
            if (count < 2 || !(hi > lo))
                throw ConfigError("sweep.T_count", ini.line("sweep.T_count"), "needs T_count >= 2 and T_max > T_min");
            for (int k = 0; k < count; ++k) sw.T_values.push_back(lo + (hi - lo) * k / (count - 1));
        }
        for (double T : sw.T_values)
            if (!(T > 0.0)) throw ConfigError("sweep.T_values", ini.line("sweep.T_values"), "T values must be > 0");
        rc.sweep = std::move(sw);
    }

    ini.reject_unused();
    try {
        c.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError("", 0, e.what());
    }
    return rc;
}

/// INI text that parses back to the same configuration. Compatible initial
/// displacements are written as their polynomial coefficients.
inline std::string render_config(const RunConfig& rc)
{
    const auto& c = rc.sim;
    std::string out;
    auto num = [](double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    auto list = [&](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
        return s;
    };
    auto kv = [&](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
    out += "[beam]\n";
    kv("m_p", num(c.params.m_p));
    kv("EI", num(c.params.EI));
    kv("T", num(c.params.T));
    kv("c", num(c.params.c));
    kv("L", num(c.params.L));
    out += "\n[fluid]\n";
    kv("m_f", num(c.params.m_f));
    kv("velocity", to_string(c.profile.kind()));
    std::visit(
        [&](const auto& v) {
            using S = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<S, ConstantVelocity>) {
                kv("V0", num(v.V0));
            } else if constexpr (std::is_same_v<S, SinusoidalVelocity>) {
                kv("V0", num(v.V0));
                kv("A", num(v.amplitude));
                kv("omega", num(v.omega));
            } else if constexpr (std::is_same_v<S, SmoothRampVelocity>) {
                kv("V_start", num(v.V_start));
                kv("V_end", num(v.V_end));
                kv("ramp_start", num(v.ramp_start));
                kv("ramp_end", num(v.ramp_end));
            } else {
                kv("knot_t", list(v.times));
                kv("knot_V", list(v.values));
            }
        },
        c.profile.spec());
    kv("horizon", num(c.profile.horizon()));
    out += "\n[initial]\n";
    auto field = [&](const std::string& name, const FieldSpec& f) {
        if (const auto* s = std::get_if<SineMode>(&f)) {
            kv(name, "sine");
            kv(name + "_mode", std::to_string(s->n));
            kv(name + "_amplitude", num(s->amplitude));
        } else if (const auto* p = std::get_if<PolynomialField>(&f); p && !p->coeffs.empty()) {
            kv(name, "polynomial");
            kv(name + "_coeffs", list(p->coeffs));
        } else {
            kv(name, "zero");
        }
    };
    field("displacement", c.ic.displacement);
    field("velocity", c.ic.velocity);
    out += "\n[numerics]\n";
    kv("n_elements", std::to_string(c.n_elements));
    kv("dt", num(c.dt));
    kv("t_end", num(c.t_end));
    kv("output_stride", std::to_string(c.output_stride));
    out += "\n[output]\n";
    kv("csv", rc.csv_path);
    if (!rc.plot_prefix.empty()) kv("plots", rc.plot_prefix);
    if (rc.sweep) {
        out += "\n[sweep]\n";
        kv("T_values", list(rc.sweep->T_values));
    }
    return out;
}

inline RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("", 0, "cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace pipeflex::io
