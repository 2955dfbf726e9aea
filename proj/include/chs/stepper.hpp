// Semi-implicit time integration of the regularized system.
//
// The fourth-order term is implicit and diagonal in the cosine basis; the
// regularized nonlinearity, the perturbation and the source are explicit.
// The mean mode is driven by the noise alone, so the discrete mean identity
// holds at machine precision.

#ifndef CHS_STEPPER_HPP
#define CHS_STEPPER_HPP

#include <cstdint>
#include <vector>

#include "chs/domain.hpp"
#include "chs/noise.hpp"
#include "chs/potential.hpp"

namespace chs {

enum class SchemeKind { LinearlyImplicit, Stabilized };

struct SimulationConfig {
    Domain domain;
    PotentialModel potential = PotentialModel::regular();
    double lambda = 1e-2;
    NoiseModel noise;
    ScalarField source;   // g; empty means zero
    ScalarField initial;  // u0
    double dt = 1e-3;
    double t_final = 0.1;
    SchemeKind scheme = SchemeKind::LinearlyImplicit;
    double stabilization = -1.0;  // s; negative selects the default C_pi + 1/lambda
    double stabilization_cap = 50.0;
    int snapshot_stride = 1;
    double blowup_guard = 1e8;
    std::uint64_t seed = 0;

    void validate() const;
    int steps() const;
    double stabilization_value() const;
};

// Per-step accumulators for the estimate suite (time sums carry the dt factor).
struct RunningEstimates {
    double sup_h_norm = 0.0;       // sup_n ||u_n||_H
    double sum_v2_sq = 0.0;        // sum dt ||u_n||_V2^2
    double sum_beta_u = 0.0;       // sum dt int beta_lambda(u_n) u_n
    double sum_jstar = 0.0;        // sum dt int j*(beta_lambda(u_n))
    double sup_grad_sq = 0.0;      // sup_n ||grad u_n||_H^2
    double sup_j_lambda = 0.0;     // sup_n int j_lambda(u_n)
    double sum_grad_w_sq = 0.0;    // sum dt ||grad w_n||_H^2
    double mean_defect = 0.0;      // sup_n |(u_n)_D - m(t_n)|
};

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<ScalarField> u;
    std::vector<ScalarField> xi;     // beta_lambda(u_n)
    std::vector<ScalarField> w;      // chemical potential
    std::vector<ScalarField> bw;     // accumulated B*W at the snapshot
    std::vector<ScalarField> drift;  // accumulated drift integral at the snapshot
    std::vector<double> m;           // (u0)_D + (B*W)_D
    RunningEstimates estimates;
    double dt = 0.0;
    int stride = 1;
    bool domain_violation = false;  // some state left the interior of D(beta)

    std::size_t size() const { return times.size(); }
};

// A_lambda u = Delta^2 u - Delta(beta_lambda(u) + pi(u) + g)
ScalarField apply_a_lambda(const ScalarField& u, const PotentialModel& potential, double lambda,
                           const ScalarField& g);

struct StepState {
    ScalarField u;
    ScalarField drift_integral;
    WienerAccumulator wiener;
    std::uint64_t step = 0;
};

StepState make_initial_state(const SimulationConfig& config);
void step(StepState& state, const SimulationConfig& config, std::uint64_t path_id);

// one step with an externally supplied noise increment (fixed-point iterations
// freeze the noise coefficient along a previous iterate)
void advance(StepState& state, const SimulationConfig& config, const ScalarField& noise);

TrajectoryRecord run_trajectory(const SimulationConfig& config, std::uint64_t path_id);

// dual-star norm of u_i - u_0 - drift_i - (B*W)_i at record index i
double residual(const TrajectoryRecord& record, std::size_t index);

}  // namespace chs

#endif
