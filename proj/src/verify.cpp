#include "chs/verify.hpp"

#include <cmath>
#include <numbers>

#include "chs/diagnostics.hpp"
#include "chs/noise.hpp"
#include "chs/potential.hpp"
#include "chs/rng.hpp"
#include "chs/stepper.hpp"

namespace chs {

namespace {

struct Checker {
    std::string& report;
    bool ok = true;

    void check(const std::string& label, bool pass) {
        report += std::string(pass ? "PASS" : "FAIL") + "  " + label + "\n";
        ok = ok && pass;
    }
};

double uniform(std::uint64_t i, std::uint64_t lane, double lo, double hi) {
    return lo + (hi - lo) * to_unit(mix64(i * 2654435761ULL + lane));
}

void verify_potentials(Checker& c) {
    for (const auto& [name, p, lo, hi] :
         {std::tuple{"regular", PotentialModel::regular(), -4.0, 4.0},
          std::tuple{"logarithmic", PotentialModel::logarithmic(1.0), -2.0, 2.0}}) {
        bool res_ok = true, fenchel_ok = true, lip_ok = true;
        for (int i = 0; i < 2000; ++i) {
            const double lambda = uniform(i, 1, 0.25, 1.0);
            const double x = uniform(i, 2, lo, hi);
            const double r = p.resolvent(lambda, x);
            const double y = p.yosida(lambda, x);
            res_ok = res_ok && std::abs(r + lambda * p.beta0(r) - x) <= 1e-10;
            fenchel_ok = fenchel_ok && std::abs(p.j(r) + p.conjugate(y) - r * y) <= 1e-8;
            const double x2 = uniform(i, 3, lo, hi);
            lip_ok = lip_ok && std::abs(y - p.yosida(lambda, x2)) <=
                                   std::abs(x - x2) / lambda + 1e-10;
        }
        c.check(std::string(name) + ": resolvent equation residual <= 1e-10", res_ok);
        c.check(std::string(name) + ": fenchel equality along the resolvent", fenchel_ok);
        c.check(std::string(name) + ": yosida 1/lambda-Lipschitz", lip_ok);
    }
}

void verify_spectral(Checker& c) {
    auto d = Domain::line(128, 2.0);
    bool inv_ok = true, sym_ok = true, parseval_ok = true;
    for (int trial = 0; trial < 50; ++trial) {
        ScalarField f(d);
        for (int k = 0; k < d.size(); ++k)
            f.coeffs()[k] = uniform(trial * 1000 + k, 4, -1.0, 1.0) / (1.0 + k);
        const ScalarField nf = f.inverse_neumann();
        ScalarField recon = nf.laplacian() * -1.0;
        ScalarField target = f;
        target.set_coeff(0, 0, 0.0);  // f minus its mean
        inv_ok = inv_ok && (recon - target).norm(NormKind::H) <= 1e-12 * (1.0 + f.norm(NormKind::H));

        ScalarField g(d);
        for (int k = 0; k < d.size(); ++k)
            g.coeffs()[k] = uniform(trial * 1000 + k, 5, -1.0, 1.0) / (1.0 + k);
        sym_ok = sym_ok && std::abs(nf.dot(g) - f.inverse_neumann().dot(g)) <= 1e-12 &&
                 std::abs(f.inverse_neumann().dot(g) - g.inverse_neumann().dot(f)) <= 1e-12;

        const auto v = f.physical();
        double grid = 0.0;
        for (double x : v) grid += x * x;
        grid *= d.cell_volume();
        const double h = f.norm(NormKind::H);
        parseval_ok = parseval_ok && std::abs(h * h - grid) <= 1e-12 * (1.0 + h * h);
    }
    c.check("spectral: -Delta(N f) = f - mean to 1e-12", inv_ok);
    c.check("spectral: N is symmetric", sym_ok);
    c.check("spectral: Parseval identity", parseval_ok);
}

void verify_noise(Checker& c) {
    auto d = Domain::line(64, 1.0);
    auto nm = NoiseModel::power_law(d, 1.0, 2.0);
    auto a = nm.sample_increment(ScalarField(d), 0.01, 11, 2, 3);
    auto b = nm.sample_increment(ScalarField(d), 0.01, 11, 2, 3);
    c.check("noise: increments are reproducible", a.coeffs() == b.coeffs());

    double s2 = 0.0;
    const int n = 20000;
    const double sigma1 = nm.modes().front().sigma;
    for (int i = 0; i < n; ++i) {
        auto inc = nm.sample_increment(ScalarField(d), 0.01, 12, 0, static_cast<std::uint64_t>(i));
        s2 += inc.coeff(1) * inc.coeff(1);
    }
    const double var = s2 / n;
    c.check("noise: per-mode variance sigma^2 dt within 5%",
            std::abs(var - sigma1 * sigma1 * 0.01) <= 0.05 * sigma1 * sigma1 * 0.01);
}

void verify_stepper(Checker& c) {
    const double pi = std::numbers::pi;
    SimulationConfig cfg;
    cfg.domain = Domain::line(64, 1.0);
    cfg.potential = PotentialModel::regular();
    cfg.lambda = 0.1;
    cfg.noise = NoiseModel::power_law(cfg.domain, 0.5, 1.0).with_mean_mode(0.3);
    cfg.initial = ScalarField::from_function(cfg.domain, [&](double x, double) {
        return 0.3 + 0.2 * std::cos(pi * x);
    });
    cfg.dt = 1e-4;
    cfg.t_final = 0.01;
    auto rec = run_trajectory(cfg, 0);
    c.check("stepper: exact discrete mean law",
            rec.estimates.mean_defect <= 1e-12 * (1.0 + rec.estimates.sup_h_norm));
    double res = 0.0;
    for (std::size_t i = 0; i < rec.size(); ++i) res = std::max(res, residual(rec, i));
    c.check("stepper: integral-equation residual <= 1e-9", res <= 1e-9);

    SimulationConfig lin;
    lin.domain = cfg.domain;
    lin.potential = PotentialModel::linear();
    lin.lambda = 0.0;
    lin.noise = NoiseModel::silent(lin.domain);
    lin.initial = ScalarField::from_function(lin.domain,
                                             [&](double x, double) { return std::cos(pi * x); });
    lin.t_final = 0.02;
    const double mu = lin.domain.eigenvalue(1);
    const double a0 = lin.initial.coeff(1);
    double e1 = 0.0, e2 = 0.0;
    for (int lev = 0; lev < 2; ++lev) {
        lin.dt = 1e-4 / (1 << lev);
        auto r = run_trajectory(lin, 0);
        const double exact = a0 * std::exp(-(mu * mu + mu) * lin.t_final);
        (lev == 0 ? e1 : e2) = std::abs(r.u.back().coeff(1) - exact);
    }
    c.check("stepper: first-order decay of the linear benchmark error",
            e1 / e2 >= 1.7 && e1 / e2 <= 2.3);
}

}  // namespace

bool run_verification(std::string& report) {
    Checker c{report};
    verify_potentials(c);
    verify_spectral(c);
    verify_noise(c);
    verify_stepper(c);
    report += c.ok ? "result: pass\n" : "result: fail\n";
    return c.ok;
}

}  // namespace chs
