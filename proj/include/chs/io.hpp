// Run artifacts: binary field snapshots, the per-snapshot time series CSV and
// the run directory layout out/<run-id>/{config.echo, series.csv, snapshots/,
// report.txt}.

#ifndef CHS_IO_HPP
#define CHS_IO_HPP

#include <string>

#include "chs/config.hpp"
#include "chs/diagnostics.hpp"
#include "chs/stepper.hpp"

namespace chs {

// header "CHS1 <ndim> <n1> [<n2>] <t>" then little-endian doubles, row-major
// physical grid
void write_snapshot(const std::string& path, const ScalarField& field, double t);
std::pair<ScalarField, double> read_snapshot(const std::string& path, const Domain& expected);

std::string series_csv(const TrajectoryRecord& record, const PotentialModel& potential,
                       double lambda);

struct RunPaths {
    std::string root;       // out/<run-id>
    std::string config;     // config.echo
    std::string series;     // series.csv
    std::string snapshots;  // snapshots/
    std::string report;     // report.txt
};

RunPaths prepare_run_dir(const std::string& out_dir, const std::string& run_id);

// simulate: one trajectory, all artifacts; returns the run directory
RunPaths emit_simulation(const RunConfig& config);

// study dispatch by name; writes table CSV + summary into the run directory
RunPaths emit_study(const RunConfig& config, const std::string& name, bool* passed);

}  // namespace chs

#endif
