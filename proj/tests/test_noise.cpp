#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "chs/noise.hpp"
#include "chs/rng.hpp"

using chs::Domain;
using chs::Error;
using chs::MultiplicativeLaw;
using chs::NoiseKey;
using chs::NoiseModel;
using chs::ScalarField;

TEST_CASE("normal stream is a pure function of its key") {
    const NoiseKey k{7, 3, 11, 5};
    CHECK(chs::standard_normal(k) == chs::standard_normal(k));
    CHECK(chs::standard_normal(k) != chs::standard_normal({7, 4, 11, 5}));
    CHECK(chs::standard_normal(k) != chs::standard_normal({7, 3, 12, 5}));
    CHECK(chs::standard_normal(k) != chs::standard_normal({8, 3, 11, 5}));
}

TEST_CASE("normal stream has the right first two moments") {
    double s1 = 0.0, s2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = chs::standard_normal({42, 0, static_cast<std::uint64_t>(i), 0});
        s1 += x;
        s2 += x * x;
    }
    const double mean = s1 / n;
    const double var = s2 / n - mean * mean;
    // 5-sigma bands for the sample mean and a generous band for the variance
    CHECK(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(n)));
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("power-law covariance: amplitudes, truncation, hilbert-schmidt norm") {
    auto d = Domain::line(64, 1.0);
    auto nm = NoiseModel::power_law(d, 0.5, 2.0);
    CHECK(static_cast<int>(nm.modes().size()) == 16);  // k = 1..n/4
    double acc = 0.0;
    for (const auto& m : nm.modes()) {
        const double mu = d.eigenvalue(m.kx, m.ky);
        CHECK(m.sigma == doctest::Approx(0.5 / (1.0 + mu)));
        acc += m.sigma * m.sigma;
    }
    CHECK(nm.hs_norm() == doctest::Approx(std::sqrt(acc)));

    auto sm = nm.smooth_covariance(0.1);
    for (std::size_t i = 0; i < sm.modes().size(); ++i) {
        const double mu = d.eigenvalue(sm.modes()[i].kx, sm.modes()[i].ky);
        CHECK(sm.modes()[i].sigma ==
              doctest::Approx(nm.modes()[i].sigma / std::pow(1.0 + 0.1 * mu, 2)));
    }
    CHECK(sm.hs_norm() < nm.hs_norm());
    CHECK(nm.hs_distance(nm) == 0.0);
    CHECK(nm.hs_distance(sm) > 0.0);
}

TEST_CASE("additive increments: determinism and per-mode variance") {
    auto d = Domain::line(32, 1.0);
    auto nm = NoiseModel::single_mode(d, 3, 0, 0.7);
    auto u = ScalarField(d);
    const double dt = 0.01;
    auto a = nm.sample_increment(u, dt, 1, 0, 5);
    auto b = nm.sample_increment(u, dt, 1, 0, 5);
    for (int k = 0; k < 32; ++k) CHECK(a.coeff(k) == b.coeff(k));
    CHECK(a.coeff(0) == 0.0);
    CHECK(a.coeff(4) == 0.0);

    double s2 = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        auto inc = nm.sample_increment(u, dt, 9, 0, static_cast<std::uint64_t>(i));
        s2 += inc.coeff(3) * inc.coeff(3);
    }
    // Var = sigma^2 dt, chi^2 concentration gives ~1% at this sample size
    CHECK(s2 / n == doctest::Approx(0.7 * 0.7 * dt).epsilon(0.03));
}

TEST_CASE("increments are invariant under grid refinement") {
    auto coarse = Domain::line(32, 1.0);
    auto fine = Domain::line(128, 1.0);
    auto nc = NoiseModel::single_mode(coarse, 2, 0, 1.0);
    auto nf = NoiseModel::single_mode(fine, 2, 0, 1.0);
    auto a = nc.sample_increment(ScalarField(coarse), 0.1, 4, 2, 7);
    auto b = nf.sample_increment(ScalarField(fine), 0.1, 4, 2, 7);
    CHECK(a.coeff(2) == b.coeff(2));
}

TEST_CASE("mean mode channel") {
    auto d = Domain::line(32, 1.0);
    auto nm = NoiseModel::power_law(d, 1.0, 1.0).with_mean_mode(0.3);
    CHECK(nm.mean_mode_sigma() == 0.3);
    auto inc = nm.sample_increment(ScalarField(d), 0.01, 2, 0, 0);
    CHECK(inc.coeff(0) != 0.0);

    chs::WienerAccumulator acc(d, 0.25);
    acc.add(inc);
    CHECK(acc.m() == doctest::Approx(0.25 + inc.mean()));
}

TEST_CASE("multiplicative law: diagonal gain, zero mean mode, lipschitz bound") {
    auto d = Domain::line(32, 1.0);
    MultiplicativeLaw law{[](double v) { return std::tanh(v); }, 1.0, 1.0};
    auto nm = NoiseModel::power_law(d, 0.8, 1.0, 0.5).with_multiplicative(law);
    CHECK(nm.multiplicative());
    CHECK(nm.mean_mode_sigma() == 0.0);
    CHECK_THROWS_AS(nm.with_mean_mode(0.1), Error);

    auto u = ScalarField::from_function(d, [](double x, double) { return std::cos(3.1415926535897932 * x); });
    auto inc = nm.sample_increment(u, 0.01, 3, 0, 0);
    CHECK(inc.coeff(0) == 0.0);
    CHECK(inc.mean() == 0.0);

    // the per-mode gain is h applied to the state coefficient
    auto additive = NoiseModel::power_law(d, 0.8, 1.0);
    auto raw = additive.sample_increment(u, 0.01, 3, 0, 0);
    for (const auto& m : nm.modes())
        CHECK(inc.coeff(m.kx) == doctest::Approx(raw.coeff(m.kx) * std::tanh(u.coeff(m.kx))).scale(1.0));

    const double cb = nm.lipschitz_constant();
    double smax = 0.0;
    for (const auto& m : nm.modes()) smax = std::max(smax, std::abs(m.sigma));
    CHECK(cb == doctest::Approx(smax));

    auto u2 = u * 0.9;
    CHECK(nm.lipschitz_defect(u, u2) <= cb + 1e-12);
    CHECK_THROWS_AS(additive.lipschitz_defect(u, u2), Error);

    CHECK(nm.growth_value(u) <= nm.growth_bound(u) + 1e-12);
    CHECK(additive.growth_value(u) == additive.hs_norm());
}

TEST_CASE("time envelope scales additive increments") {
    auto d = Domain::line(32, 1.0);
    auto nm = NoiseModel::single_mode(d, 1, 0, 1.0);
    auto plain = nm.sample_increment(ScalarField(d), 0.01, 5, 0, 3, 2.0);
    nm.set_envelope([](double t) { return 1.0 + t; });
    auto scaled = nm.sample_increment(ScalarField(d), 0.01, 5, 0, 3, 2.0);
    CHECK(scaled.coeff(1) == doctest::Approx(3.0 * plain.coeff(1)));
}
