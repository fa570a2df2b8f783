#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "json.hpp"
#include "pipeflex/io/config.hpp"
#include "pipeflex/io/csv.hpp"
#include "pipeflex/io/plot.hpp"
#include "pipeflex/io/report.hpp"

using namespace pipeflex;
namespace fs = std::filesystem;

namespace {

const std::string minimal = R"([beam]
m_p = 1
EI = 1
T = 10
c = 3
L = 1

[fluid]
m_f = 0.25
velocity = constant
V0 = 1.5
)";

std::string replace(std::string s, const std::string& from, const std::string& to)
{
    const auto at = s.find(from);
    EXPECT_NE(at, std::string::npos) << from;
    return s.replace(at, from.size(), to);
}

io::ConfigError config_error(const std::string& text)
{
    try {
        io::parse_config(text);
    } catch (const io::ConfigError& e) {
        return e;
    }
    ADD_FAILURE() << "config was accepted";
    return io::ConfigError("", 0, "");
}

fs::path scratch_dir(const char* name)
{
    const auto d = fs::temp_directory_path() / ("pipeflex_" + std::string(name));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST(Config, MinimalConfigGetsDefaults)
{
    const auto rc = io::parse_config(minimal);
    EXPECT_EQ(rc.sim.n_elements, 32);
    EXPECT_EQ(rc.sim.dt, 1e-3);
    EXPECT_EQ(rc.sim.output_stride, 10);
    EXPECT_EQ(rc.sim.t_end, 10.0);
    EXPECT_EQ(rc.sim.profile.kind(), VelocityKind::Constant);
    EXPECT_EQ(rc.sim.profile.horizon(), 10.0);
    EXPECT_EQ(rc.sim.params.m_f, 0.25);
    EXPECT_EQ(rc.csv_path, "timeseries.csv");
    EXPECT_TRUE(rc.plot_prefix.empty());
    EXPECT_FALSE(rc.sweep.has_value());
    EXPECT_TRUE(std::holds_alternative<PolynomialField>(rc.sim.ic.displacement));
    EXPECT_TRUE(std::holds_alternative<ZeroField>(rc.sim.ic.velocity));
}

TEST(Config, EveryVelocityKind)
{
    const std::string head = minimal.substr(0, minimal.find("velocity"));
    auto rc = io::parse_config(head + "velocity = sinusoidal_offset\nV0 = 2\nA = 1\nomega = 3\nhorizon = 4\n");
    EXPECT_EQ(rc.sim.profile.kind(), VelocityKind::SinusoidalOffset);
    EXPECT_EQ(rc.sim.profile.horizon(), 4.0);
    rc = io::parse_config(head + "velocity = smooth_ramp\nV_start = 1\nV_end = 2\nramp_start = 1\nramp_end = 3\n");
    EXPECT_EQ(rc.sim.profile.kind(), VelocityKind::SmoothRamp);
    rc = io::parse_config(head + "velocity = spline_table\nknot_t = 0, 5, 10\nknot_V = 1, 1.5, 1.2\n");
    EXPECT_EQ(rc.sim.profile.kind(), VelocityKind::SplineTable);
    EXPECT_NEAR(rc.sim.profile.eval(5.0).V, 1.5, 1e-14);
}

TEST(Config, InitialAndNumericsSections)
{
    const auto rc = io::parse_config(minimal + R"(
[initial]
displacement = sine
displacement_mode = 2
displacement_amplitude = 0.05
velocity = polynomial
velocity_coeffs = 0, 1, -0.5

[numerics]
n_elements = 12
dt = 5e-4
t_end = 2
output_stride = 4

[output]
csv = out.csv
plots = out
)");
    const auto& sine = std::get<SineMode>(rc.sim.ic.displacement);
    EXPECT_EQ(sine.n, 2);
    EXPECT_EQ(sine.amplitude, 0.05);
    EXPECT_EQ(std::get<PolynomialField>(rc.sim.ic.velocity).coeffs, (std::vector<double>{0, 1, -0.5}));
    EXPECT_EQ(rc.sim.n_elements, 12);
    EXPECT_EQ(rc.sim.dt, 5e-4);
    EXPECT_EQ(rc.sim.t_end, 2.0);
    EXPECT_EQ(rc.sim.output_stride, 4);
    EXPECT_EQ(rc.csv_path, "out.csv");
    EXPECT_EQ(rc.plot_prefix, "out");
}

TEST(Config, SweepSpec)
{
    auto rc = io::parse_config(minimal + "[sweep]\nT_values = 5, 1, 3\n");
    EXPECT_EQ(rc.sweep->T_values, (std::vector<double>{5, 1, 3}));
    rc = io::parse_config(minimal + "[sweep]\nT_min = 1\nT_max = 2\nT_count = 3\n");
    EXPECT_EQ(rc.sweep->T_values, (std::vector<double>{1, 1.5, 2}));
    EXPECT_EQ(config_error(minimal + "[sweep]\nT_values = 1, -2\n").key(), "sweep.T_values");
}

TEST(Config, NegativeFluidMassNamesKey)
{
    const auto e = config_error(replace(minimal, "m_f = 0.25", "m_f = -1"));
    EXPECT_EQ(e.key(), "fluid.m_f");
    EXPECT_EQ(e.line(), 9);
    EXPECT_NE(std::string(e.what()).find("m_f"), std::string::npos);
}

TEST(Config, SignChangingVelocityRejected)
{
    const std::string head = minimal.substr(0, minimal.find("velocity"));
    for (const char* body : {"velocity = sinusoidal_offset\nV0 = 1\nA = 1\nomega = 2\n",
                             "velocity = sinusoidal_offset\nV0 = 1\nA = -3\nomega = 2\n",
                             "velocity = smooth_ramp\nV_start = 1\nV_end = -1\nramp_start = 0\nramp_end = 1\n",
                             "velocity = spline_table\nknot_t = 0, 5, 10\nknot_V = 1, -1, 1\n",
                             "velocity = constant\nV0 = 0\n"}) {
        const auto e = config_error(head + body);
        EXPECT_NE(std::string(e.what()).find("velocity sign not constant"), std::string::npos) << e.what();
        EXPECT_EQ(e.key(), "fluid.velocity");
    }
}

TEST(Config, UnknownKeyRejectedWithLine)
{
    const auto e = config_error(minimal + "Vzero = 3\n");
    EXPECT_EQ(e.key(), "fluid.Vzero");
    EXPECT_EQ(e.line(), 12);
    EXPECT_NE(std::string(e.what()).find("unknown key"), std::string::npos);
    // A key that belongs to another velocity kind is unknown here.
    EXPECT_EQ(config_error(minimal + "omega = 3\n").key(), "fluid.omega");
}

TEST(Config, SyntaxAndMissingKeyErrors)
{
    auto e = config_error(replace(minimal, "EI = 1\n", ""));
    EXPECT_EQ(e.key(), "beam.EI");
    EXPECT_NE(std::string(e.what()).find("missing"), std::string::npos);
    EXPECT_EQ(config_error(minimal + "[mesh]\n").key(), "mesh");
    EXPECT_EQ(config_error(minimal + "[beam]\n").line(), 12);
    EXPECT_EQ(config_error(minimal + "just words\n").line(), 12);
    EXPECT_EQ(config_error(replace(minimal, "T = 10", "T = ten")).key(), "beam.T");
    EXPECT_EQ(config_error(replace(minimal, "T = 10", "T = 10\nT = 11")).key(), "beam.T");
    EXPECT_EQ(config_error("m_p = 1\n" + minimal).line(), 1);
    EXPECT_EQ(config_error(minimal + "[numerics]\ndt = 0\n").key(), "numerics.dt");
    EXPECT_EQ(config_error(minimal + "[numerics]\noutput_stride = 1.5\n").key(), "numerics.output_stride");
    EXPECT_EQ(config_error(replace(minimal, "velocity = constant", "velocity = gusty")).key(), "fluid.velocity");
}

TEST(Config, CommentsAndWhitespace)
{
    const auto rc = io::parse_config("# header\n" + replace(minimal, "T = 10", "  T   =   12   ; inline"));
    EXPECT_EQ(rc.sim.params.T, 12.0);
}

TEST(Csv, ZeroTrajectoryLayout)
{
    auto cfg = fixture::config(fixture::params(1, 0.2, 1, 5, 1, 1), VelocityProfile::constant(1.0, 1.0), 4, 0.01,
                               0.02, 1);
    cfg.ic = {};
    const auto tr = simulate(cfg);
    ASSERT_EQ(tr.size(), 3u);
    const auto text = io::render_timeseries(tr);
    std::istringstream in(text);
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    ASSERT_EQ(lines.size(), 5u); // hash comment + header + 3 rows
    EXPECT_EQ(lines[0], "# config_hash=" + tr.meta.config_hash);
    EXPECT_EQ(lines[1], io::timeseries_header);
    for (std::size_t i = 2; i < lines.size(); ++i) EXPECT_EQ(std::count(lines[i].begin(), lines[i].end(), ','), 11);
    for (const auto& row : io::parse_timeseries(text).rows)
        for (std::size_t c = 1; c <= 9; ++c) EXPECT_EQ(row[c], 0.0);
}

TEST(Csv, RoundTripIsBitExact)
{
    const auto tr = simulate(fixture::damped_sinusoidal(6, 1e-3, 0.5, 7));
    const auto dir = scratch_dir("csv_roundtrip");
    io::write_timeseries(tr, (dir / "a.csv").string());
    const auto ts = io::read_timeseries((dir / "a.csv").string());
    EXPECT_EQ(ts.config_hash, tr.meta.config_hash);
    ASSERT_EQ(ts.rows.size(), tr.size());
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const auto& s = tr.samples[i];
        const double expect[] = {s.t, s.E, s.G1, s.G2, s.G, s.Lcal, s.dE_dt, s.dG_dt, s.w_L, s.wt_L, s.V, s.V_t};
        for (std::size_t c = 0; c < io::timeseries_columns; ++c)
            EXPECT_EQ(std::memcmp(&ts.rows[i][c], &expect[c], sizeof(double)), 0) << i << "," << c;
    }
}

TEST(Csv, MalformedInputRejected)
{
    EXPECT_THROW(io::parse_timeseries("t,E\n"), io::IoError);
    EXPECT_THROW(io::parse_timeseries("# config_hash=x\nt,E\n"), io::IoError);
    const std::string head = "# config_hash=x\n" + std::string(io::timeseries_header) + "\n";
    EXPECT_THROW(io::parse_timeseries(head + "1,2,3\n"), io::IoError);
    EXPECT_THROW(io::parse_timeseries(head + "1,2,3,4,5,6,7,8,9,10,11,12,13\n"), io::IoError);
    EXPECT_EQ(io::parse_timeseries(head + "1,2,3,4,5,6,7,8,9,10,11,12\n").rows.size(), 1u);
    EXPECT_THROW(io::write_timeseries(Trajectory{}, "/nonexistent-dir/x.csv"), io::IoError);
}

TEST(Csv, IdenticalConfigsGiveIdenticalBytes)
{
    const auto rc = io::parse_config(minimal + "[numerics]\nn_elements = 6\nt_end = 1\n");
    const auto a = io::render_timeseries(simulate(rc.sim));
    const auto b = io::render_timeseries(simulate(io::parse_config(minimal + "[numerics]\nn_elements = 6\nt_end = 1\n").sim));
    EXPECT_EQ(a, b);
    const auto c = io::render_timeseries(simulate(io::parse_config(minimal + "[numerics]\nn_elements = 6\nt_end = 1.001\n").sim));
    EXPECT_NE(a.substr(0, a.find('\n')), c.substr(0, c.find('\n')));
}

TEST(Plot, SvgCarriesHashAndData)
{
    const auto tr = simulate(fixture::damped_sinusoidal(4, 1e-3, 0.5, 10));
    const auto dir = scratch_dir("svg");
    io::write_timeseries(tr, (dir / "run.csv").string());
    const auto paths = io::write_energy_plots(io::read_timeseries((dir / "run.csv").string()), (dir / "run").string());
    ASSERT_EQ(paths.size(), 3u);
    for (const auto& p : paths) {
        const auto svg = slurp(p);
        EXPECT_EQ(svg.rfind("<!-- # config_hash=" + tr.meta.config_hash + " -->\n<svg", 0), 0u) << p;
        EXPECT_NE(svg.find("<polyline"), std::string::npos);
        EXPECT_EQ(svg.substr(svg.size() - 7), "</svg>\n");
    }
}

TEST(Plot, NonFiniteValuesSplitTheLine)
{
    io::LinePlot p{"t", "x", "y", {0, 1, 2, 3, 4}, {1, 2, std::nan(""), 3, 4}};
    const auto svg = io::render_svg(p, "h");
    std::size_t n = 0;
    for (auto at = svg.find("<polyline"); at != std::string::npos; at = svg.find("<polyline", at + 1)) ++n;
    EXPECT_EQ(n, 2u);
}

TEST(Report, ConstantsTextAndMachineForms)
{
    const auto rc = io::parse_config(minimal);
    const auto r = io::build_constants_report(rc.sim);
    const auto text = io::render_text(r);
    EXPECT_NE(text.find("holds: true"), std::string::npos);
    EXPECT_EQ(text.rfind("# config_hash=", 0), 0u);
    const auto j = nlohmann::json::parse(io::to_json(r).dump());
    EXPECT_TRUE(j["assumptions"]["holds"].get<bool>());
    EXPECT_GT(j["certificate"]["k1"].get<double>(), 0.0);
    EXPECT_EQ(j["certificate"]["k1"].get<double>(), r.certificate->k1);
}

TEST(Report, ConstantsWithoutCertificate)
{
    const auto rc = io::parse_config(replace(minimal, "T = 10", "T = 1"));
    const auto r = io::build_constants_report(rc.sim);
    EXPECT_FALSE(r.certificate.has_value());
    EXPECT_NE(io::render_text(r).find("holds: false"), std::string::npos);
    EXPECT_TRUE(io::to_json(r)["certificate"].is_null());
}

TEST(Report, SweepCsv)
{
    auto rc = io::parse_config(minimal + "[numerics]\nn_elements = 4\nt_end = 1\n");
    const auto sweep = tension_sweep(rc.sim, {2.0, 20.0}, 1);
    const auto text = io::render_sweep(sweep, "abc");
    std::istringstream in(text);
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    ASSERT_EQ(lines.size(), 5u);
    EXPECT_EQ(lines[0], "# config_hash=abc");
    EXPECT_EQ(lines[1], "# k1_monotone=true");
    EXPECT_EQ(lines[2], io::sweep_header);
    EXPECT_EQ(lines[3].rfind("2,0,", 0), 0u);
    EXPECT_EQ(lines[4].rfind("20,1,", 0), 0u);
}

TEST(Config, RenderParsesBackToSameConfig)
{
    const std::string head = minimal.substr(0, minimal.find("velocity"));
    const std::vector<std::string> texts{
        minimal,
        minimal + "[sweep]\nT_values = 1, 2.5\n[output]\nplots = p\n",
        head + "velocity = sinusoidal_offset\nV0 = 2\nA = 1\nomega = 0.1\n[initial]\ndisplacement = sine\n"
               "velocity = polynomial\nvelocity_coeffs = 0, 0.3\n",
        head + "velocity = smooth_ramp\nV_start = 1\nV_end = 2\nramp_start = 1\nramp_end = 3\n",
        head + "velocity = spline_table\nknot_t = 0, 5, 10\nknot_V = 1, 1.5, 1.2\n[initial]\ndisplacement = zero\n"};
    for (const auto& text : texts) {
        const auto a = io::parse_config(text);
        const auto b = io::parse_config(io::render_config(a));
        EXPECT_EQ(canonical_text(a.sim), canonical_text(b.sim)) << text;
        EXPECT_EQ(a.csv_path, b.csv_path);
        EXPECT_EQ(a.plot_prefix, b.plot_prefix);
        EXPECT_EQ(a.sweep.has_value(), b.sweep.has_value());
        if (a.sweep) {
            EXPECT_EQ(a.sweep->T_values, b.sweep->T_values);
        }
        EXPECT_EQ(io::render_config(b), io::render_config(a));
    }
}
