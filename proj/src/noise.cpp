#include "chs/noise.hpp"

#include <cmath>

namespace chs {

namespace {

// Stable mode key: independent of the grid resolution, so coupled runs on
// refined grids replay the same stream.
std::uint64_t mode_key(int kx, int ky) {
    return static_cast<std::uint64_t>(kx) + 4096ULL * static_cast<std::uint64_t>(ky);
}

}  // namespace

NoiseModel NoiseModel::silent(const Domain& d) {
    NoiseModel m;
    m.dom_ = d;
    return m;
}

NoiseModel NoiseModel::power_law(const Domain& d, double amplitude, double decay,
                                 double mean_mode_sigma, int truncation) {
    NoiseModel m;
    m.dom_ = d;
    m.sigma0_ = mean_mode_sigma;
    const int kmax_x = truncation > 0 ? truncation : d.n[0] / 4;
    const int kmax_y = d.ndim == 2 ? (truncation > 0 ? truncation : d.n[1] / 4) : 0;
    for (int ky = 0; ky <= kmax_y; ++ky)
        for (int kx = 0; kx <= kmax_x; ++kx) {
            if (kx == 0 && ky == 0) continue;
            const double mu = d.eigenvalue(kx, ky);
            m.modes_.push_back({kx, ky, amplitude * std::pow(1.0 + mu, -0.5 * decay)});
        }
    return m;
}

NoiseModel NoiseModel::single_mode(const Domain& d, int kx, int ky, double sigma) {
    NoiseModel m;
    m.dom_ = d;
    if (kx == 0 && ky == 0)
        m.sigma0_ = sigma;
    else
        m.modes_.push_back({kx, ky, sigma});
    return m;
}

NoiseModel NoiseModel::with_multiplicative(MultiplicativeLaw law) const {
    NoiseModel m = *this;
    m.law_ = std::move(law);
    m.sigma0_ = 0.0;  // range in H_0
    return m;
}

NoiseModel NoiseModel::with_mean_mode(double sigma0) const {
    if (law_.has_value())
        throw Error(ErrorCode::ValidationError,
                    "multiplicative noise cannot carry a mean-mode amplitude");
    NoiseModel m = *this;
    m.sigma0_ = sigma0;
    return m;
}

NoiseModel NoiseModel::smooth_covariance(double eps) const {
    if (eps < 0.0) throw Error(ErrorCode::ValidationError, "smoothing epsilon must be >= 0");
    NoiseModel m = *this;
    m.eps_ = eps;
    if (eps == 0.0) return m;
    for (NoiseMode& mode : m.modes_) {
        const double mu = dom_.eigenvalue(mode.kx, mode.ky);
        mode.sigma /= (1.0 + eps * mu) * (1.0 + eps * mu);
    }
    return m;
}

void NoiseModel::set_envelope(std::function<double(double)> envelope) {
    envelope_ = std::move(envelope);
}

double NoiseModel::hs_norm() const {
    double acc = sigma0_ * sigma0_;
    for (const NoiseMode& m : modes_) acc += m.sigma * m.sigma;
    return std::sqrt(acc);
}

double NoiseModel::hs_distance(const NoiseModel& other) const {
    if (modes_.size() != other.modes_.size())
        throw Error(ErrorCode::DomainMismatch, "covariances have different mode sets");
    double acc = (sigma0_ - other.sigma0_) * (sigma0_ - other.sigma0_);
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        const double d = modes_[i].sigma - other.modes_[i].sigma;
        acc += d * d;
    }
    return std::sqrt(acc);
}

double NoiseModel::growth_value(const ScalarField& u) const {
    if (!law_) return hs_norm();
    double acc = 0.0;
    for (const NoiseMode& m : modes_) {
        const double h = law_->h(u.coeff(m.kx, m.ky));
        acc += m.sigma * m.sigma * h * h;
    }
    return std::sqrt(acc);
}

double NoiseModel::growth_bound(const ScalarField& u) const {
    double f = std::abs(sigma0_);
    const double sup_h = law_ ? law_->bound : 1.0;
    for (const NoiseMode& m : modes_) f += std::abs(m.sigma);
    return f * sup_h + lipschitz_constant() * u.norm(NormKind::V1);
}

double NoiseModel::lipschitz_constant() const {
    if (!law_) return 0.0;
    double smax = 0.0;
    for (const NoiseMode& m : modes_) smax = std::max(smax, std::abs(m.sigma));
    return law_->lipschitz * smax;
}

double NoiseModel::lipschitz_defect(const ScalarField& u1, const ScalarField& u2) const {
    if (!law_)
        throw Error(ErrorCode::NotMultiplicative, "lipschitz_defect needs multiplicative noise");
    double num = 0.0;
    for (const NoiseMode& m : modes_) {
        const double dh = law_->h(u1.coeff(m.kx, m.ky)) - law_->h(u2.coeff(m.kx, m.ky));
        num += m.sigma * m.sigma * dh * dh / dom_.eigenvalue(m.kx, m.ky);
    }
    const ScalarField diff = u1 - u2;
    const double den = diff.norm(NormKind::DualStar);
    return den == 0.0 ? 0.0 : std::sqrt(num) / den;
}

ScalarField NoiseModel::sample_increment(const ScalarField& u, double dt, std::uint64_t seed,
                                         std::uint64_t path_id, std::uint64_t step,
                                         double t) const {
    if (!(dt > 0.0)) throw Error(ErrorCode::ValidationError, "sample_increment: dt must be > 0");
    if (u.domain() != dom_)
        throw Error(ErrorCode::DomainMismatch, "state and noise model domains differ");
    const double env = envelope_ ? envelope_(t) : 1.0;
    const double sqdt = std::sqrt(dt);
    ScalarField out(dom_);
    for (const NoiseMode& m : modes_) {
        const double xi = standard_normal({seed, path_id, step, mode_key(m.kx, m.ky)});
        const double gain = law_ ? law_->h(u.coeff(m.kx, m.ky)) : env;
        out.set_coeff(m.kx, m.ky, m.sigma * gain * xi * sqdt);
    }
    if (!law_ && sigma0_ != 0.0) {
        const double xi = standard_normal({seed, path_id, step, mode_key(0, 0)});
        out.set_coeff(0, 0, sigma0_ * env * xi * sqdt);
    }
    return out;
}

}  // namespace chs
