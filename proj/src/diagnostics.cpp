#include "chs/diagnostics.hpp"

#include <cmath>

namespace chs {

ScalarField chemical_potential(const ScalarField& u, const PotentialModel& potential,
                               double lambda, const ScalarField& g) {
    ScalarField w = u.laplacian() * -1.0;
    w += u.apply_pointwise([&](double v) { return potential.yosida(lambda, v); });
    w += u.apply_pointwise([&](double v) { return potential.perturbation(v); });
    if (!g.coeffs().empty()) w += g;
    return w;
}

double energy(const ScalarField& u, const PotentialModel& potential, double lambda) {
    const double semi = u.norm(NormKind::V1Semi);
    return 0.5 * semi * semi +
           quadrature_pointwise(u, [&](double v) { return potential.moreau(lambda, v); }) +
           quadrature_pointwise(u,
                                [&](double v) { return potential.perturbation_primitive(v); });
}

EstimateReport estimate_suite(const TrajectoryRecord& record, const PotentialModel& potential,
                              double lambda, const ScalarField& g) {
    EstimateReport rep;
    const RunningEstimates& e = record.estimates;
    rep.est1 = e.sup_h_norm * e.sup_h_norm + e.sum_v2_sq;
    rep.est2 = e.sum_beta_u;
    rep.est2_star = e.sum_jstar;
    rep.sup_grad_sq = e.sup_grad_sq;
    rep.sup_j_lambda = e.sup_j_lambda;
    rep.sum_grad_w_sq = e.sum_grad_w_sq;
    rep.mean_defect = e.mean_defect;
    rep.flag_domain_violation = record.domain_violation;
    rep.flag_beta_domain_restricted = !potential.domain_is_whole_line();

    for (std::size_t i = 0; i < record.size(); ++i) {
        rep.energy_trace.push_back(energy(record.u[i], potential, lambda));
        rep.w_seminorm_trace.push_back(record.w[i].norm(NormKind::V1Semi));
        rep.residual_max = std::max(rep.residual_max, residual(record, i));
    }
    (void)g;
    return rep;
}

MomentReport moment_check(const std::vector<TrajectoryRecord>& ensemble,
                          const PotentialModel& potential, double alpha) {
    MomentReport rep;
    rep.alpha = alpha;
    rep.n_paths = static_cast<int>(ensemble.size());
    rep.verifiable = potential.domain_is_whole_line();
    if (!rep.verifiable || ensemble.empty()) return rep;

    std::vector<double> per_path;
    per_path.reserve(ensemble.size());
    for (const TrajectoryRecord& rec : ensemble) {
        double acc = 0.0;
        for (double mv : rec.m) acc += potential.j(alpha * mv);
        per_path.push_back(acc / static_cast<double>(rec.m.size()));
    }
    double mean = 0.0;
    for (double v : per_path) mean += v;
    mean /= per_path.size();
    double var = 0.0;
    for (double v : per_path) var += (v - mean) * (v - mean);
    var = per_path.size() > 1 ? var / (per_path.size() - 1) : 0.0;
    rep.sample_mean = mean;
    rep.standard_error = std::sqrt(var / per_path.size());
    return rep;
}

}  // namespace chs
