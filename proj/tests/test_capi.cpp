#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <string>

#include "chs.h"

namespace {

const char* kConfig = R"(
seed = 7

[domain]
nx = 32

[potential]
kind = regular
lambda = 0.1

[noise]
kind = additive
amplitude = 0.2
decay = 2.0

[time]
dt = 0.001
t_final = 0.01

[initial]
kind = cosine
amplitude = 0.2
mode = 1

[study]
schedule = 0.1, 0.03, 0.01
paths = 4
)";

std::string temp_out() {
    auto p = std::filesystem::temp_directory_path() / "chs_capi_test";
    std::filesystem::create_directories(p);
    return p.string();
}

}  // namespace

TEST_CASE("status names") {
    CHECK(std::string(chs_status_name(CHS_OK)) == "ok");
    CHECK(std::string(chs_status_name(CHS_ERR_PARSE)) == "parse_error");
    CHECK(std::string(chs_status_name(9999)) == "internal_error");
}

TEST_CASE("config lifecycle and error reporting") {
    char err[512] = {0};
    chs_config* cfg = chs_config_from_text(kConfig, err, sizeof err);
    REQUIRE(cfg != nullptr);
    CHECK(chs_config_set_seed(cfg, 99) == CHS_OK);
    CHECK(chs_config_set_paths(cfg, 8) == CHS_OK);
    CHECK(chs_config_set_paths(cfg, 0) == CHS_ERR_INVALID_ARGUMENT);
    CHECK(chs_config_set_out_dir(cfg, temp_out().c_str()) == CHS_OK);

    char echo[8192] = {0};
    const size_t n = chs_config_echo(cfg, echo, sizeof echo);
    CHECK(n > 0);
    CHECK(std::string(echo).find("seed = 99") != std::string::npos);
    chs_config_free(cfg);

    chs_config* bad = chs_config_from_text("[noise]\nsigmaa = 1\n", err, sizeof err);
    CHECK(bad == nullptr);
    CHECK(std::string(err).find("noise.sigmaa") != std::string::npos);
    CHECK(chs_config_from_file("/no/such/file.ini", err, sizeof err) == nullptr);
}

TEST_CASE("simulate through the c interface") {
    char err[512] = {0};
    chs_config* cfg = chs_config_from_text(kConfig, err, sizeof err);
    REQUIRE(cfg != nullptr);
    chs_config_set_out_dir(cfg, temp_out().c_str());
    char run_dir[1024] = {0};
    const int status = chs_run_simulate(cfg, run_dir, sizeof run_dir, err, sizeof err);
    CHECK(status == CHS_OK);
    CHECK(std::filesystem::exists(std::string(run_dir) + "/series.csv"));
    CHECK(std::filesystem::exists(std::string(run_dir) + "/config.echo"));
    chs_config_free(cfg);
}

TEST_CASE("study dispatch through the c interface") {
    char err[512] = {0};
    chs_config* cfg = chs_config_from_text(kConfig, err, sizeof err);
    REQUIRE(cfg != nullptr);
    chs_config_set_out_dir(cfg, temp_out().c_str());
    char run_dir[1024] = {0};
    int status = chs_run_study(cfg, "lambda_refinement", run_dir, sizeof run_dir, err,
                               sizeof err);
    CHECK(status == CHS_OK);
    CHECK(std::filesystem::exists(std::string(run_dir) + "/report.txt"));
    status = chs_run_study(cfg, "no_such_study", run_dir, sizeof run_dir, err, sizeof err);
    CHECK(status == CHS_ERR_VALIDATION);
    chs_config_free(cfg);
}

TEST_CASE("verification battery passes on a healthy build") {
    std::string report(32768, '\0');
    size_t full = 0;
    const int status = chs_run_verify(report.data(), report.size(), &full);
    CHECK(status == CHS_OK);
    report.resize(std::min(full, report.size()));
    CHECK(report.find("result: pass") != std::string::npos);
    CHECK(report.find("FAIL") == std::string::npos);
}
