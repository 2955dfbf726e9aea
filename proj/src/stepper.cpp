#include "chs/stepper.hpp"

#include <cmath>
#include <string>

#include "chs/diagnostics.hpp"

namespace chs {

void SimulationConfig::validate() const {
    domain.validate();
    if (!(dt > 0.0)) throw Error(ErrorCode::ValidationError, "dt must be > 0");
    if (!(t_final >= dt)) throw Error(ErrorCode::ValidationError, "T must be >= dt");
    if (lambda < 0.0) throw Error(ErrorCode::ValidationError, "lambda must be >= 0");
    if (lambda == 0.0 && !potential.beta_globally_lipschitz())
        throw Error(ErrorCode::ValidationError,
                    "lambda = 0 requires a globally Lipschitz beta");
    if (snapshot_stride < 1)
        throw Error(ErrorCode::ValidationError, "snapshot stride must be >= 1");
}

int SimulationConfig::steps() const {
    return static_cast<int>(std::llround(t_final / dt));
}

double SimulationConfig::stabilization_value() const {
    if (stabilization >= 0.0) return stabilization;
    const double inv_lambda = lambda > 0.0 ? 1.0 / lambda : 1.0;
    return std::min(potential.pi_lipschitz() + inv_lambda, stabilization_cap);
}

namespace {

// beta_lambda(u) on the grid; flags excursions outside the interior of D(beta)
ScalarField yosida_field(const ScalarField& u, const PotentialModel& p, double lambda,
                         bool* violated) {
    if (violated && !p.domain_is_whole_line()) {
        for (double v : u.physical())
            if (v <= p.domain_lo() || v >= p.domain_hi()) {
                *violated = true;
                break;
            }
    }
    return u.apply_pointwise([&](double v) { return p.yosida(lambda, v); });
}

ScalarField explicit_part(const ScalarField& u, const SimulationConfig& cfg, bool* violated) {
    ScalarField nl = yosida_field(u, cfg.potential, cfg.lambda, violated);
    nl += u.apply_pointwise([&](double v) { return cfg.potential.perturbation(v); });
    if (!cfg.source.coeffs().empty()) nl += cfg.source;
    return nl;
}

}  // namespace

ScalarField apply_a_lambda(const ScalarField& u, const PotentialModel& potential, double lambda,
                           const ScalarField& g) {
    ScalarField nl = u.apply_pointwise([&](double v) { return potential.yosida(lambda, v); });
    nl += u.apply_pointwise([&](double v) { return potential.perturbation(v); });
    if (!g.coeffs().empty()) nl += g;
    return u.bilaplacian() - nl.laplacian();
}

StepState make_initial_state(const SimulationConfig& config) {
    ScalarField u0 = config.initial.coeffs().empty() ? ScalarField(config.domain)
                                                     : config.initial;
    return StepState{u0, ScalarField(config.domain),
                     WienerAccumulator(config.domain, u0.mean()), 0};
}

void step(StepState& state, const SimulationConfig& config, std::uint64_t path_id) {
    const double t = static_cast<double>(state.step) * config.dt;
    const ScalarField noise =
        config.noise.modes().empty() && config.noise.mean_mode_sigma() == 0.0
            ? ScalarField(config.domain)
            : config.noise.sample_increment(state.u, config.dt, config.seed, path_id,
                                            state.step, t);
    advance(state, config, noise);
}

void advance(StepState& state, const SimulationConfig& config, const ScalarField& noise) {
    const Domain& d = config.domain;
    const double dt = config.dt;
    const double s = config.scheme == SchemeKind::Stabilized ? config.stabilization_value() : 0.0;

    bool violated = false;
    const ScalarField nl = explicit_part(state.u, config, &violated);

    ScalarField next(d);
    ScalarField drift_inc(d);
    for (int ky = 0; ky < d.n[1]; ++ky)
        for (int kx = 0; kx < d.n[0]; ++kx) {
            const std::size_t i = static_cast<std::size_t>(ky) * d.n[0] + kx;
            const double mu = d.eigenvalue(kx, ky);
            const double un = state.u.coeffs()[i];
            const double rhs = un + dt * (-mu) * (nl.coeffs()[i] - s * un) + noise.coeffs()[i];
            const double denom = 1.0 + dt * mu * mu + s * dt * mu;
            const double up = rhs / denom;
            next.coeffs()[i] = up;
            drift_inc.coeffs()[i] =
                dt * (-mu * mu * up - s * mu * up + (-mu) * (nl.coeffs()[i] - s * un));
        }

    state.u = next;
    state.drift_integral += drift_inc;
    state.wiener.add(noise);
    ++state.step;

    if (state.u.norm(NormKind::H) > config.blowup_guard)
        throw Error(ErrorCode::Blowup, "blowup guard tripped at step " +
                                           std::to_string(state.step) +
                                           " (dt too large for the explicit nonlinearity)");
}

TrajectoryRecord run_trajectory(const SimulationConfig& config, std::uint64_t path_id) {
    config.validate();
    const ScalarField g = config.source.coeffs().empty() ? ScalarField(config.domain)
                                                         : config.source;
    StepState state = make_initial_state(config);
    TrajectoryRecord rec;
    rec.dt = config.dt;
    rec.stride = config.snapshot_stride;

    const int n_steps = config.steps();
    auto observe = [&](bool snapshot) {
        const double t = static_cast<double>(state.step) * config.dt;
        bool violated = false;
        const ScalarField xi = yosida_field(state.u, config.potential, config.lambda, &violated);
        if (violated) rec.domain_violation = true;
        const ScalarField w = state.u.laplacian() * -1.0 + xi +
                              state.u.apply_pointwise([&](double v) {
                                  return config.potential.perturbation(v);
                              }) +
                              g;

        RunningEstimates& e = rec.estimates;
        const double hn = state.u.norm(NormKind::H);
        e.sup_h_norm = std::max(e.sup_h_norm, hn);
        const double gs = state.u.norm(NormKind::V1Semi);
        e.sup_grad_sq = std::max(e.sup_grad_sq, gs * gs);
        e.sup_j_lambda = std::max(
            e.sup_j_lambda, quadrature_pointwise(state.u, [&](double v) {
                return config.potential.moreau(config.lambda, v);
            }));
        e.mean_defect = std::max(e.mean_defect, std::abs(state.u.mean() - state.wiener.m()));
        if (state.step > 0) {
            const double v2 = state.u.norm(NormKind::V2);
            e.sum_v2_sq += config.dt * v2 * v2;
            e.sum_beta_u += config.dt * quadrature_pointwise(state.u, [&](double v) {
                                return config.potential.yosida(config.lambda, v) * v;
                            });
            e.sum_jstar += config.dt * quadrature_pointwise(state.u, [&](double v) {
                               return config.potential.conjugate(
                                   config.potential.yosida(config.lambda, v));
                           });
            const double wg = w.norm(NormKind::V1Semi);
            e.sum_grad_w_sq += config.dt * wg * wg;
        }

        if (snapshot) {
            rec.times.push_back(t);
            rec.u.push_back(state.u);
            rec.xi.push_back(xi);
            rec.w.push_back(w);
            rec.bw.push_back(state.wiener.bw);
            rec.drift.push_back(state.drift_integral);
            rec.m.push_back(state.wiener.m());
        }
    };

    observe(true);
    for (int n = 0; n < n_steps; ++n) {
        step(state, config, path_id);
        const bool snap = ((n + 1) % config.snapshot_stride == 0) || (n + 1 == n_steps);
        observe(snap);
    }
    return rec;
}

double residual(const TrajectoryRecord& record, std::size_t index) {
    if (index >= record.size())
        throw Error(ErrorCode::ValidationError, "residual: index past the end of the record");
    ScalarField defect = record.u[index];
    defect -= record.u[0];
    defect -= record.drift[index];
    defect -= record.bw[index];
    return defect.norm(NormKind::DualStar);
}

}  // namespace chs
