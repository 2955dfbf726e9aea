#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "chs/config.hpp"
#include "chs/io.hpp"

using chs::Domain;
using chs::Error;
using chs::ErrorCode;
using chs::RunConfig;
using chs::ScalarField;

namespace {

const char* kMinimal = R"(
[domain]
nx = 32

[potential]
kind = regular
lambda = 0.05
)";

const char* kFull = R"(
seed = 42

[domain]
ndim = 1
nx = 64
lx = 2.0

[potential]
kind = logarithmic
c = 0.8
lambda = 0.25

[noise]
kind = additive
amplitude = 0.4
decay = 2.0
mean_mode_sigma = 0.1

[time]
dt = 0.0005
t_final = 0.01
scheme = stabilized
snapshot_stride = 5

[initial]
kind = cosine
value = 0.1
amplitude = 0.2
mode = 2

[study]
name = lambda_refinement
schedule = 0.1, 0.03, 0.01
paths = 8

[output]
dir = out_test
)";

std::filesystem::path temp_dir() {
    auto p = std::filesystem::temp_directory_path() / "chs_io_test";
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("minimal config fills defaults and validates") {
    auto rc = chs::parse_config_text(kMinimal);
    CHECK(rc.simulation.domain.n[0] == 32);
    CHECK(rc.simulation.lambda == 0.05);
    CHECK(rc.simulation.dt == 1e-3);
    CHECK(rc.simulation.potential.name() == "regular");
    CHECK(rc.noise_kind == "silent");
}

TEST_CASE("full config resolves every block") {
    auto rc = chs::parse_config_text(kFull);
    CHECK(rc.simulation.seed == 42);
    CHECK(rc.simulation.domain.length[0] == 2.0);
    CHECK(rc.simulation.potential.name() == "logarithmic");
    CHECK(rc.simulation.noise.modes().size() == 16);
    CHECK(rc.simulation.noise.mean_mode_sigma() == 0.1);
    CHECK(rc.simulation.scheme == chs::SchemeKind::Stabilized);
    CHECK(rc.simulation.initial.mean() == doctest::Approx(0.1));
    CHECK(rc.schedule.size() == 3);
    CHECK(rc.n_paths == 8);
}

TEST_CASE("unknown keys and malformed values are rejected by name") {
    try {
        chs::parse_config_text("[noise]\nsigmaa = 1.0\n");
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find("noise.sigmaa") != std::string::npos);
    }
    CHECK_THROWS_AS(chs::parse_config_text("[bogus]\nx = 1\n"), Error);
    CHECK_THROWS_AS(chs::parse_config_text("[time]\ndt = fast\n"), Error);
    CHECK_THROWS_AS(chs::parse_config_text("[time]\ndt\n"), Error);
}

TEST_CASE("invalid dynamics configuration raises ValidationError") {
    try {
        chs::parse_config_text("[domain]\nnx = 32\n\n[time]\ndt = 0\n");
        FAIL("expected ValidationError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ValidationError);
    }
}

TEST_CASE("config echo round-trips to the same resolved configuration") {
    auto rc = chs::parse_config_text(kFull);
    auto rc2 = chs::parse_config_text(rc.echo());
    CHECK(rc.echo() == rc2.echo());
    CHECK(rc2.simulation.seed == rc.simulation.seed);
    CHECK(rc2.simulation.dt == rc.simulation.dt);
    CHECK(rc2.simulation.noise.hs_norm() == rc.simulation.noise.hs_norm());
}

TEST_CASE("snapshot files round-trip bit-exactly") {
    auto d = Domain::line(32, 1.0);
    auto f = ScalarField::from_function(d, [](double x, double) { return std::sin(3.0 * x); });
    const auto path = (temp_dir() / "snap.chs").string();
    chs::write_snapshot(path, f, 0.625);
    auto [g, t] = chs::read_snapshot(path, d);
    CHECK(t == 0.625);
    const auto a = f.physical();
    const auto b = g.physical();
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-15));

    CHECK_THROWS_AS(chs::read_snapshot(path, Domain::line(64, 1.0)), Error);
    CHECK_THROWS_AS(chs::read_snapshot((temp_dir() / "missing.chs").string(), d), Error);
}

TEST_CASE("series csv carries the documented header") {
    auto rc = chs::parse_config_text(kMinimal);
    auto rec = chs::run_trajectory(rc.simulation, 0);
    const std::string csv = chs::series_csv(rec, rc.simulation.potential, rc.simulation.lambda);
    CHECK(csv.rfind("t,mean,H_norm,V1_semi,V2_norm,dual_star,energy,j_integral,"
                    "jstar_integral,w_V1_semi,residual\n", 0) == 0);
    // one row per snapshot plus the header
    std::size_t lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == rec.size() + 1);
}

TEST_CASE("simulation artifacts: layout, determinism, snapshot count") {
    auto rc = chs::parse_config_text(kMinimal);
    rc.out_dir = (temp_dir() / "runs").string();
    rc.run_id = "demo";
    rc.simulation.t_final = rc.simulation.dt;  // exactly two snapshots
    auto paths = chs::emit_simulation(rc);
    CHECK(std::filesystem::exists(paths.config));
    CHECK(std::filesystem::exists(paths.series));
    CHECK(std::filesystem::exists(paths.report));
    std::size_t snaps = 0;
    for (auto& e : std::filesystem::directory_iterator(paths.snapshots)) {
        (void)e;
        ++snaps;
    }
    CHECK(snaps == 2);

    auto read_file = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    const std::string series1 = read_file(paths.series);
    auto paths2 = chs::emit_simulation(rc);
    CHECK(read_file(paths2.series) == series1);

    // echoed config reproduces the run configuration
    auto rc2 = chs::parse_config_file(paths.config);
    CHECK(rc2.simulation.dt == rc.simulation.dt);
}

TEST_CASE("study dispatch writes table and summary") {
    auto rc = chs::parse_config_text(kFull);
    rc.out_dir = (temp_dir() / "runs").string();
    rc.run_id = "study-demo";
    rc.simulation.t_final = 0.005;
    rc.n_paths = 4;
    bool passed = false;
    auto paths = chs::emit_study(rc, "lambda_refinement", &passed);
    CHECK(std::filesystem::exists(paths.series));
    CHECK(std::filesystem::exists(paths.report));
    std::ifstream in(paths.series);
    std::string header;
    std::getline(in, header);
    CHECK(header == "lambda_hi,lambda_lo,metric_mean,metric_se,blown_paths");
    CHECK_THROWS_AS(chs::emit_study(rc, "no_such_study", nullptr), Error);
}
