#pragma once

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pipeflex/error.hpp"
#include "pipeflex/timestep/simulate.hpp"

namespace pipeflex::io {

class IoError : public Error {
public:
    using Error::Error;
};

inline constexpr const char* timeseries_header = "t,E,G1,G2,G,Lcal,dEdt_analytic,dGdt_analytic,w_L,wt_L,V,Vt";
inline constexpr std::size_t timeseries_columns = 12;

inline std::string format_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string hash_comment(const std::string& hash) { return "# config_hash=" + hash; }

inline std::string render_timeseries(const Trajectory& tr)
{
    std::string out = hash_comment(tr.meta.config_hash) + "\n" + timeseries_header + "\n";
    for (const auto& s : tr.samples) {
        const std::array<double, timeseries_columns> row{s.t,     s.E,     s.G1,  s.G2,   s.G, s.Lcal,
                                                         s.dE_dt, s.dG_dt, s.w_L, s.wt_L, s.V, s.V_t};
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

inline void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

inline void write_timeseries(const Trajectory& tr, const std::string& path) { write_text(path, render_timeseries(tr)); }

struct Timeseries {
    std::string config_hash;
    std::vector<std::array<double, timeseries_columns>> rows;

    std::vector<double> column(std::size_t i) const
    {
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r.at(i));
        return out;
    }
};

inline Timeseries parse_timeseries(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    Timeseries ts;
    const std::string prefix = "# config_hash=";
    if (!std::getline(in, line) || line.rfind(prefix, 0) != 0) throw IoError("missing config hash comment");
    ts.config_hash = line.substr(prefix.size());
    if (!std::getline(in, line) || line != timeseries_header) throw IoError("unexpected CSV header");
    for (int n = 3; std::getline(in, line); ++n) {
        std::array<double, timeseries_columns> row{};
        const char* p = line.data();
        const char* end = p + line.size();
        for (std::size_t i = 0; i < row.size(); ++i) {
            const auto [q, ec] = std::from_chars(p, end, row[i]);
            if (ec != std::errc()) throw IoError("bad number on line " + std::to_string(n));
            p = q;
            if (i + 1 < row.size()) {
                if (p == end || *p != ',') throw IoError("expected 12 columns on line " + std::to_string(n));
                ++p;
            }
        }
        if (p != end) throw IoError("expected 12 columns on line " + std::to_string(n));
        ts.rows.push_back(row);
    }
    return ts;
}

inline Timeseries read_timeseries(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_timeseries(ss.str());
}

} // namespace pipeflex::io
