#include "chs/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace chs {

namespace {

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");

}  // namespace

void write_snapshot(const std::string& path, const ScalarField& field, double t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write snapshot '" + path + "'");
    const Domain& d = field.domain();
    std::string header = "CHS1 " + std::to_string(d.ndim) + " " + std::to_string(d.n[0]);
    if (d.ndim == 2) header += " " + std::to_string(d.n[1]);
    header += " " + format17(t) + "\n";
    out << header;
    const std::vector<double> v = field.physical();
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!out) throw Error(ErrorCode::IoError, "short write on snapshot '" + path + "'");
}

std::pair<ScalarField, double> read_snapshot(const std::string& path, const Domain& expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read snapshot '" + path + "'");
    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    std::string magic;
    int ndim = 0, n0 = 0, n1 = 1;
    double t = 0.0;
    hs >> magic >> ndim >> n0;
    if (ndim == 2) hs >> n1;
    hs >> t;
    if (magic != "CHS1" || hs.fail())
        throw Error(ErrorCode::ParseError, "malformed snapshot header in '" + path + "'");
    if (ndim != expected.ndim || n0 != expected.n[0] ||
        (ndim == 2 && n1 != expected.n[1]))
        throw Error(ErrorCode::DomainMismatch, "snapshot shape does not match the domain");
    std::vector<double> v(static_cast<std::size_t>(expected.size()));
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(v.size() * sizeof(double)))
        throw Error(ErrorCode::IoError, "snapshot '" + path + "' is truncated");
    return {ScalarField::from_physical(expected, v), t};
}

std::string series_csv(const TrajectoryRecord& record, const PotentialModel& potential,
                       double lambda) {
    std::string out = "t,mean,H_norm,V1_semi,V2_norm,dual_star,energy,j_integral,"
                      "jstar_integral,w_V1_semi,residual\n";
    for (std::size_t i = 0; i < record.size(); ++i) {
        const ScalarField& u = record.u[i];
        const double jint = quadrature_pointwise(
            u, [&](double v) { return potential.moreau(lambda, v); });
        const double jstar = quadrature_pointwise(u, [&](double v) {
            return potential.conjugate(potential.yosida(lambda, v));
        });
        const double row[] = {record.times[i],
                              u.mean(),
                              u.norm(NormKind::H),
                              u.norm(NormKind::V1Semi),
                              u.norm(NormKind::V2),
                              u.norm(NormKind::DualStar),
                              energy(u, potential, lambda),
                              jint,
                              jstar,
                              record.w[i].norm(NormKind::V1Semi),
                              residual(record, i)};
        for (std::size_t c = 0; c < std::size(row); ++c) {
            if (c) out += ',';
            out += format17(row[c]);
        }
        out += '\n';
    }
    return out;
}

RunPaths prepare_run_dir(const std::string& out_dir, const std::string& run_id) {
    namespace fs = std::filesystem;
    RunPaths p;
    p.root = out_dir + "/" + run_id;
    p.config = p.root + "/config.echo";
    p.series = p.root + "/series.csv";
    p.snapshots = p.root + "/snapshots";
    p.report = p.root + "/report.txt";
    std::error_code ec;
    fs::create_directories(p.snapshots, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create run directory '" + p.root + "'");
    return p;
}

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    out << text;
}

std::string default_run_id(const RunConfig& rc, const std::string& tag) {
    return tag + "-seed" + std::to_string(rc.simulation.seed);
}

}  // namespace

RunPaths emit_simulation(const RunConfig& config) {
    const std::string id =
        config.run_id.empty() ? default_run_id(config, "simulate") : config.run_id;
    RunPaths paths = prepare_run_dir(config.out_dir, id);
    write_text(paths.config, config.echo());

    const TrajectoryRecord rec = run_trajectory(config.simulation, 0);
    write_text(paths.series, series_csv(rec, config.simulation.potential,
                                        config.simulation.lambda));
    for (std::size_t i = 0; i < rec.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "u_%06zu.chs", i);
        write_snapshot(paths.snapshots + "/" + name, rec.u[i], rec.times[i]);
    }

    const EstimateReport rep = estimate_suite(rec, config.simulation.potential,
                                              config.simulation.lambda,
                                              ScalarField(config.simulation.domain));
    std::string report;
    report += "snapshots: " + std::to_string(rec.size()) + "\n";
    report += "sup_H_norm: " + format17(rec.estimates.sup_h_norm) + "\n";
    report += "est1: " + format17(rep.est1) + "\n";
    report += "est2: " + format17(rep.est2) + "\n";
    report += "est2_star: " + format17(rep.est2_star) + "\n";
    report += "sup_grad_sq: " + format17(rep.sup_grad_sq) + "\n";
    report += "sup_j_lambda: " + format17(rep.sup_j_lambda) + "\n";
    report += "sum_grad_w_sq: " + format17(rep.sum_grad_w_sq) + "\n";
    report += "mean_defect: " + format17(rep.mean_defect) + "\n";
    report += "residual_max: " + format17(rep.residual_max) + "\n";
    report += std::string("domain_violation: ") + (rep.flag_domain_violation ? "yes" : "no") +
              "\n";
    report += std::string("beta_domain_restricted: ") +
              (rep.flag_beta_domain_restricted ? "yes" : "no") + "\n";
    write_text(paths.report, report);
    return paths;
}

RunPaths emit_study(const RunConfig& config, const std::string& name, bool* passed) {
    const std::string id =
        config.run_id.empty() ? default_run_id(config, "study-" + name) : config.run_id;
    RunPaths paths = prepare_run_dir(config.out_dir, id);
    write_text(paths.config, config.echo());

    const StudySpec spec = config.study_spec();
    StudyTable table;
    if (name == "lambda_refinement")
        table = lambda_refinement(spec);
    else if (name == "epsilon_smoothing")
        table = epsilon_smoothing(spec);
    else if (name == "continuous_dependence")
        table = continuous_dependence(spec);
    else if (name == "picard_contraction")
        table = picard_contraction(spec);
    else if (name == "regularity_study")
        table = regularity_study(spec);
    else
        throw Error(ErrorCode::ValidationError, "unknown study '" + name + "'");

    write_text(paths.series, table.csv());
    write_text(paths.report, table.summary());
    if (passed) *passed = table.passed();
    return paths;
}

}  // namespace chs
