// Command-line front end.  Talks to the library exclusively through the C
// interface so it exercises the same surface as any other client.

#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "chs.h"

namespace {

struct ConfigHandle {
    chs_config* cfg = nullptr;
    ~ConfigHandle() { chs_config_free(cfg); }
};

int fail(const std::string& msg, bool quiet) {
    if (!quiet) std::fprintf(stderr, "error: %s\n", msg.c_str());
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase-field simulation laboratory"};
    app.require_subcommand(0, 1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false, out_set = false, quiet = false;
    int n_paths = 0;
    app.add_option("--config", config_path, "configuration file");
    app.add_option("--seed", seed, "override the run seed")->each([&](const std::string&) {
        seed_set = true;
    });
    app.add_option("--out", out_dir, "output directory root")->each([&](const std::string&) {
        out_set = true;
    });
    app.add_option("--paths", n_paths, "Monte Carlo path count for studies");
    app.add_flag("--quiet", quiet, "suppress progress output");

    std::string command = "verify";
    app.add_option("command", command,
                   "simulate | study:<name> | verify (default verify)");

    CLI11_PARSE(app, argc, argv);

    char err[1024] = {0};

    if (command == "verify") {
        std::string report(16384, '\0');
        size_t full = 0;
        const int status = chs_run_verify(report.data(), report.size(), &full);
        report.resize(std::min(full, report.size() - 1));
        if (!quiet) std::fputs(report.c_str(), stdout);
        return status == CHS_OK ? 0 : 1;
    }

    if (config_path.empty()) return fail("--config is required for this command", quiet);
    ConfigHandle h;
    h.cfg = chs_config_from_file(config_path.c_str(), err, sizeof err);
    if (!h.cfg) return fail(err, quiet);
    if (seed_set) chs_config_set_seed(h.cfg, seed);
    if (n_paths > 0) chs_config_set_paths(h.cfg, n_paths);
    if (out_set) chs_config_set_out_dir(h.cfg, out_dir.c_str());

    char run_dir[4096] = {0};
    if (command == "simulate") {
        const int status = chs_run_simulate(h.cfg, run_dir, sizeof run_dir, err, sizeof err);
        if (status != CHS_OK) return fail(err, quiet);
        if (!quiet) std::printf("run: %s\n", run_dir);
        return 0;
    }
    if (command.rfind("study:", 0) == 0) {
        const std::string name = command.substr(6);
        const int status =
            chs_run_study(h.cfg, name.c_str(), run_dir, sizeof run_dir, err, sizeof err);
        if (!quiet && run_dir[0]) std::printf("run: %s\n", run_dir);
        if (status == CHS_OK) return 0;
        return fail(std::string(chs_status_name(status)) + ": " + err, quiet);
    }
    return fail("unknown command '" + command + "'", quiet);
}
