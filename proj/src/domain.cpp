#include "chs/domain.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <numbers>

namespace chs {

namespace {

bool is_pow2(int x) { return x >= 1 && (x & (x - 1)) == 0; }

// Per-shape FFTW plans.  Plan creation is not thread-safe, so each thread
// keeps its own cache; execution through the new-array interface is fine.
struct PlanPair {
    fftw_plan forward = nullptr;   // REDFT10 in each dimension
    fftw_plan backward = nullptr;  // REDFT01 in each dimension
    double* buf = nullptr;
    int size = 0;
};

PlanPair& plans_for(int ndim, int n0, int n1) {
    thread_local std::map<std::tuple<int, int, int>, PlanPair> cache;
    auto key = std::make_tuple(ndim, n0, n1);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    PlanPair p;
    p.size = n0 * n1;
    p.buf = fftw_alloc_real(p.size);
    if (ndim == 1) {
        p.forward = fftw_plan_r2r_1d(n0, p.buf, p.buf, FFTW_REDFT10, FFTW_ESTIMATE);
        p.backward = fftw_plan_r2r_1d(n0, p.buf, p.buf, FFTW_REDFT01, FFTW_ESTIMATE);
    } else {
        // row-major (ny, nx): x is the contiguous dimension
        p.forward = fftw_plan_r2r_2d(n1, n0, p.buf, p.buf, FFTW_REDFT10, FFTW_REDFT10,
                                     FFTW_ESTIMATE);
        p.backward = fftw_plan_r2r_2d(n1, n0, p.buf, p.buf, FFTW_REDFT01, FFTW_REDFT01,
                                      FFTW_ESTIMATE);
    }
    return cache.emplace(key, p).first->second;
}

}  // namespace

Domain Domain::line(int n, double length, bool dealias) {
    Domain d;
    d.ndim = 1;
    d.n[0] = n;
    d.n[1] = 1;
    d.length[0] = length;
    d.length[1] = 1.0;
    d.dealias = dealias;
    d.validate();
    return d;
}

Domain Domain::rect(int nx, int ny, double lx, double ly, bool dealias) {
    Domain d;
    d.ndim = 2;
    d.n[0] = nx;
    d.n[1] = ny;
    d.length[0] = lx;
    d.length[1] = ly;
    d.dealias = dealias;
    d.validate();
    return d;
}

void Domain::validate() const {
    if (ndim != 1 && ndim != 2)
        throw Error(ErrorCode::ValidationError, "domain: ndim must be 1 or 2");
    for (int d = 0; d < ndim; ++d) {
        if (!is_pow2(n[d]) || n[d] < 8)
            throw Error(ErrorCode::ValidationError,
                        "domain: resolution must be a power of two >= 8");
        if (!(length[d] > 0.0))
            throw Error(ErrorCode::ValidationError, "domain: extent must be positive");
    }
}

double Domain::node(int dim, int j) const {
    return (j + 0.5) * length[dim] / n[dim];
}

double Domain::eigenvalue(int kx, int ky) const {
    const double pi = std::numbers::pi;
    double mu = kx * pi / length[0] * (kx * pi / length[0]);
    if (ndim == 2) mu += ky * pi / length[1] * (ky * pi / length[1]);
    return mu;
}

bool Domain::operator==(const Domain& o) const {
    return ndim == o.ndim && n[0] == o.n[0] && n[1] == o.n[1] &&
           length[0] == o.length[0] && length[1] == o.length[1];
}

void ScalarField::check_domain(const ScalarField& o) const {
    if (dom_ != o.dom_)
        throw Error(ErrorCode::DomainMismatch, "fields live on different domains");
}

ScalarField ScalarField::from_spectral(const Domain& d, std::vector<double> coeffs) {
    if (static_cast<int>(coeffs.size()) != d.size())
        throw Error(ErrorCode::DomainMismatch, "coefficient count does not match domain");
    ScalarField f(d);
    f.c_ = std::move(coeffs);
    return f;
}

namespace {

// forward: grid values -> orthonormal-basis coefficients
std::vector<double> dct_forward(const Domain& d, const std::vector<double>& values) {
    PlanPair& p = plans_for(d.ndim, d.n[0], d.n[1]);
    std::memcpy(p.buf, values.data(), sizeof(double) * d.size());
    fftw_execute_r2r(p.forward, p.buf, p.buf);
    // REDFT10 along dim i yields X_k = 2 * sum_j f_j cos(...); undo the factor 2
    // and apply the quadrature weight (L_i/n_i) and basis normalization.
    std::vector<double> c(d.size());
    const int nx = d.n[0], ny = d.n[1];
    std::vector<double> wx(nx), wy(ny);
    for (int k = 0; k < nx; ++k)
        wx[k] = 0.5 * (k == 0 ? std::sqrt(d.length[0]) : std::sqrt(2.0 * d.length[0])) / nx;
    if (d.ndim == 2) {
        for (int k = 0; k < ny; ++k)
            wy[k] = 0.5 * (k == 0 ? std::sqrt(d.length[1]) : std::sqrt(2.0 * d.length[1])) / ny;
    } else {
        wy[0] = 1.0;
    }
    for (int ky = 0; ky < ny; ++ky)
        for (int kx = 0; kx < nx; ++kx)
            c[static_cast<std::size_t>(ky) * nx + kx] = p.buf[ky * nx + kx] * wx[kx] * wy[ky];
    return c;
}

// backward: orthonormal-basis coefficients -> grid values
std::vector<double> dct_backward(const Domain& d, const std::vector<double>& c) {
    const int nx = d.n[0], ny = d.n[1];
    PlanPair& p = plans_for(d.ndim, nx, ny);
    // REDFT01 computes Y_j = X_0 + 2 sum_{k>0} X_k cos(...), per dimension.
    std::vector<double> vx(nx), vy(ny);
    for (int k = 0; k < nx; ++k)
        vx[k] = k == 0 ? 1.0 / std::sqrt(d.length[0]) : 1.0 / std::sqrt(2.0 * d.length[0]);
    if (d.ndim == 2) {
        for (int k = 0; k < ny; ++k)
            vy[k] = k == 0 ? 1.0 / std::sqrt(d.length[1]) : 1.0 / std::sqrt(2.0 * d.length[1]);
    } else {
        vy[0] = 1.0;
    }
    for (int ky = 0; ky < ny; ++ky)
        for (int kx = 0; kx < nx; ++kx)
            p.buf[ky * nx + kx] = c[static_cast<std::size_t>(ky) * nx + kx] * vx[kx] * vy[ky];
    fftw_execute_r2r(p.backward, p.buf, p.buf);
    return std::vector<double>(p.buf, p.buf + d.size());
}

}  // namespace

ScalarField ScalarField::from_physical(const Domain& d, const std::vector<double>& values) {
    if (static_cast<int>(values.size()) != d.size())
        throw Error(ErrorCode::DomainMismatch, "value count does not match domain");
    ScalarField f(d);
    f.c_ = dct_forward(d, values);
    return f;
}

ScalarField ScalarField::constant(const Domain& d, double value) {
    ScalarField f(d);
    f.c_[0] = value * std::sqrt(d.volume());
    return f;
}

ScalarField ScalarField::from_function(const Domain& d,
                                       const std::function<double(double, double)>& f) {
    std::vector<double> v(d.size());
    for (int jy = 0; jy < d.n[1]; ++jy) {
        const double y = d.ndim == 2 ? d.node(1, jy) : 0.0;
        for (int jx = 0; jx < d.n[0]; ++jx)
            v[static_cast<std::size_t>(jy) * d.n[0] + jx] = f(d.node(0, jx), y);
    }
    return from_physical(d, v);
}

std::vector<double> ScalarField::physical() const { return dct_backward(dom_, c_); }

double ScalarField::mean() const { return c_[0] / std::sqrt(dom_.volume()); }

ScalarField ScalarField::laplacian() const {
    ScalarField out(dom_);
    for (int ky = 0; ky < dom_.n[1]; ++ky)
        for (int kx = 0; kx < dom_.n[0]; ++kx) {
            const std::size_t i = static_cast<std::size_t>(ky) * dom_.n[0] + kx;
            out.c_[i] = -dom_.eigenvalue(kx, ky) * c_[i];
        }
    return out;
}

ScalarField ScalarField::bilaplacian() const {
    ScalarField out(dom_);
    for (int ky = 0; ky < dom_.n[1]; ++ky)
        for (int kx = 0; kx < dom_.n[0]; ++kx) {
            const std::size_t i = static_cast<std::size_t>(ky) * dom_.n[0] + kx;
            const double mu = dom_.eigenvalue(kx, ky);
            out.c_[i] = mu * mu * c_[i];
        }
    return out;
}

ScalarField ScalarField::inverse_neumann() const {
    ScalarField out(dom_);
    for (int ky = 0; ky < dom_.n[1]; ++ky)
        for (int kx = 0; kx < dom_.n[0]; ++kx) {
            const std::size_t i = static_cast<std::size_t>(ky) * dom_.n[0] + kx;
            if (kx == 0 && ky == 0)
                out.c_[i] = 0.0;
            else
                out.c_[i] = c_[i] / dom_.eigenvalue(kx, ky);
        }
    return out;
}

ScalarField ScalarField::resolvent_power(double delta, int k) const {
    if (delta < 0.0 || k < 1)
        throw Error(ErrorCode::ValidationError, "resolvent_power: need delta >= 0, k >= 1");
    ScalarField out(dom_);
    for (int ky = 0; ky < dom_.n[1]; ++ky)
        for (int kx = 0; kx < dom_.n[0]; ++kx) {
            const std::size_t i = static_cast<std::size_t>(ky) * dom_.n[0] + kx;
            out.c_[i] = c_[i] / std::pow(1.0 + delta * dom_.eigenvalue(kx, ky), k);
        }
    return out;
}

double ScalarField::norm(NormKind kind) const {
    double acc = 0.0;
    const double mean_sq = mean() * mean();
    for (int ky = 0; ky < dom_.n[1]; ++ky)
        for (int kx = 0; kx < dom_.n[0]; ++kx) {
            const std::size_t i = static_cast<std::size_t>(ky) * dom_.n[0] + kx;
            const double mu = dom_.eigenvalue(kx, ky);
            const double c2 = c_[i] * c_[i];
            switch (kind) {
                case NormKind::H: acc += c2; break;
                case NormKind::V1Semi: acc += mu * c2; break;
                case NormKind::V1: acc += mu * c2; break;
                case NormKind::V2: acc += (1.0 + mu * mu) * c2; break;
                case NormKind::DualStar:
                    if (kx != 0 || ky != 0) acc += c2 / mu;
                    break;
            }
        }
    if (kind == NormKind::V1 || kind == NormKind::DualStar) acc += mean_sq;
    return std::sqrt(acc);
}

double ScalarField::norm_vs(double s) const {
    if (s < 0.0) throw Error(ErrorCode::ValidationError, "norm_vs: need s >= 0");
    double acc = 0.0;
    for (int ky = 0; ky < dom_.n[1]; ++ky)
        for (int kx = 0; kx < dom_.n[0]; ++kx) {
            const std::size_t i = static_cast<std::size_t>(ky) * dom_.n[0] + kx;
            acc += std::pow(1.0 + dom_.eigenvalue(kx, ky), s) * c_[i] * c_[i];
        }
    return std::sqrt(acc);
}

ScalarField ScalarField::apply_pointwise(const std::function<double(double)>& f) const {
    if (!dom_.dealias) {
        std::vector<double> v = physical();
        for (double& x : v) x = f(x);
        return from_physical(dom_, v);
    }
    // 3/2-rule: evaluate on a padded grid, transform back, truncate
    Domain fine = dom_;
    fine.dealias = false;
    fine.n[0] = dom_.n[0] * 3 / 2;
    if (dom_.ndim == 2) fine.n[1] = dom_.n[1] * 3 / 2;
    ScalarField padded(fine);
    for (int ky = 0; ky < dom_.n[1]; ++ky)
        for (int kx = 0; kx < dom_.n[0]; ++kx)
            padded.c_[static_cast<std::size_t>(ky) * fine.n[0] + kx] =
                c_[static_cast<std::size_t>(ky) * dom_.n[0] + kx];
    std::vector<double> v = padded.physical();
    for (double& x : v) x = f(x);
    ScalarField fv = from_physical(fine, v);
    ScalarField out(dom_);
    for (int ky = 0; ky < dom_.n[1]; ++ky)
        for (int kx = 0; kx < dom_.n[0]; ++kx)
            out.c_[static_cast<std::size_t>(ky) * dom_.n[0] + kx] =
                fv.c_[static_cast<std::size_t>(ky) * fine.n[0] + kx];
    return out;
}

double ScalarField::dot(const ScalarField& other) const {
    check_domain(other);
    double acc = 0.0;
    for (std::size_t i = 0; i < c_.size(); ++i) acc += c_[i] * other.c_[i];
    return acc;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    check_domain(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    check_domain(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (double& x : c_) x *= s;
    return *this;
}

double quadrature(const ScalarField& f) {
    return f.coeffs()[0] * std::sqrt(f.domain().volume());
}

double quadrature_pointwise(const ScalarField& f, const std::function<double(double)>& fn) {
    std::vector<double> v = f.physical();
    double acc = 0.0;
    for (double x : v) acc += fn(x);
    return acc * f.domain().cell_volume();
}

}  // namespace chs
