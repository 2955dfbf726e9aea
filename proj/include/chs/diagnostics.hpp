// Estimate quantities tracked along trajectories and their internal checks.

#ifndef CHS_DIAGNOSTICS_HPP
#define CHS_DIAGNOSTICS_HPP

#include <vector>

#include "chs/domain.hpp"
#include "chs/potential.hpp"
#include "chs/stepper.hpp"

namespace chs {

// w = -Delta u + beta_lambda(u) + pi(u) + g
ScalarField chemical_potential(const ScalarField& u, const PotentialModel& potential,
                               double lambda, const ScalarField& g);

// F_lambda(u) = 1/2 ||grad u||_H^2 + int j_lambda(u) + int pihat(u)
double energy(const ScalarField& u, const PotentialModel& potential, double lambda);

struct EstimateReport {
    double est1 = 0.0;       // sup ||u||_H^2 + sum dt ||u||_V2^2
    double est2 = 0.0;       // sum dt int beta_lambda(u) u
    double est2_star = 0.0;  // sum dt int j*(beta_lambda(u))
    double sup_grad_sq = 0.0;
    double sup_j_lambda = 0.0;
    double sum_grad_w_sq = 0.0;
    double mean_defect = 0.0;
    double residual_max = 0.0;
    std::vector<double> energy_trace;
    std::vector<double> w_seminorm_trace;
    bool flag_domain_violation = false;
    bool flag_beta_domain_restricted = false;  // D(beta) != R: Theorems 1-4 hypotheses violated
};

EstimateReport estimate_suite(const TrajectoryRecord& record, const PotentialModel& potential,
                              double lambda, const ScalarField& g);

struct MomentReport {
    double alpha = 1.0;
    double sample_mean = 0.0;
    double standard_error = 0.0;
    int n_paths = 0;
    bool verifiable = true;  // false for non-polynomial j
};

// sample mean over the ensemble of the time-averaged j(alpha * m(t))
MomentReport moment_check(const std::vector<TrajectoryRecord>& ensemble,
                          const PotentialModel& potential, double alpha);

}  // namespace chs

#endif
