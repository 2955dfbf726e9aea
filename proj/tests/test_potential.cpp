#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "chs/potential.hpp"

using chs::Error;
using chs::ErrorCode;
using chs::GrowthKind;
using chs::PotentialModel;

namespace {

// Independent oracle: solve y + lambda*beta(y) = x by plain bisection.
double resolvent_oracle(const std::function<double(double)>& beta, double lambda, double x,
                        double lo, double hi) {
    auto G = [&](double y) { return y + lambda * beta(y) - x; };
    double a = lo, b = hi;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        if (G(m) > 0.0)
            b = m;
        else
            a = m;
    }
    return 0.5 * (a + b);
}

// Independent oracle: minimize |x-y|^2/(2 lambda) + j(y) on a fine grid.
double moreau_oracle(const std::function<double(double)>& j, double lambda, double x,
                     double lo, double hi) {
    double best = std::numeric_limits<double>::infinity();
    const int n = 800000;
    for (int i = 0; i <= n; ++i) {
        const double y = lo + (hi - lo) * i / n;
        const double jv = j(y);
        if (!std::isfinite(jv)) continue;
        best = std::min(best, (x - y) * (x - y) / (2.0 * lambda) + jv);
    }
    return best;
}

// Independent oracle: maximize y*t - j(t) on a fine grid.
double conjugate_oracle(const std::function<double(double)>& j, double y, double lo, double hi) {
    double best = -std::numeric_limits<double>::infinity();
    const int n = 800000;
    for (int i = 0; i <= n; ++i) {
        const double t = lo + (hi - lo) * i / n;
        const double jv = j(t);
        if (!std::isfinite(jv)) continue;
        best = std::max(best, y * t - jv);
    }
    return best;
}

}  // namespace

TEST_CASE("regular potential: resolvent against bisection oracle") {
    auto p = PotentialModel::regular();
    auto beta = [](double r) { return r * r * r; };
    for (double lambda : {1e-3, 1e-2, 0.1, 1.0})
        for (double x = -4.0; x <= 4.0; x += 0.37) {
            const double r = p.resolvent(lambda, x);
            const double o = resolvent_oracle(beta, lambda, x, -5.0, 5.0);
            CHECK(r == doctest::Approx(o).epsilon(1e-10));
            // defining equation to near machine precision
            CHECK(std::abs(r + lambda * beta(r) - x) <= 1e-12 * (1.0 + std::abs(x)));
        }
}

TEST_CASE("regular potential: yosida is monotone, 1/lambda-Lipschitz, below beta") {
    auto p = PotentialModel::regular();
    for (double lambda : {1e-2, 0.1, 1.0}) {
        double prev = -std::numeric_limits<double>::infinity();
        for (double x = -3.0; x <= 3.0; x += 0.05) {
            const double y = p.yosida(lambda, x);
            CHECK(y >= prev - 1e-12);
            prev = y;
            CHECK(std::abs(y) <= std::abs(p.beta0(x)) + 1e-10);
            const double y2 = p.yosida(lambda, x + 0.05);
            CHECK(std::abs(y2 - y) <= 0.05 / lambda + 1e-10);
        }
    }
}

TEST_CASE("regular potential: moreau envelope against grid minimization") {
    auto p = PotentialModel::regular();
    auto j = [](double r) { return 0.25 * r * r * r * r; };
    for (double lambda : {0.05, 0.5})
        for (double x : {-2.0, -0.7, 0.0, 0.31, 1.9}) {
            const double o = moreau_oracle(j, lambda, x, -4.0, 4.0);
            CHECK(p.moreau(lambda, x) == doctest::Approx(o).epsilon(1e-7));
            CHECK(p.moreau(lambda, x) <= j(x) + 1e-12);
        }
    // monotone in lambda
    for (double x : {-1.3, 0.4, 2.2})
        CHECK(p.moreau(0.5, x) <= p.moreau(0.05, x) + 1e-12);
}

TEST_CASE("regular potential: conjugate closed form and oracle") {
    auto p = PotentialModel::regular();
    auto j = [](double r) { return 0.25 * r * r * r * r; };
    for (double y : {-8.0, -1.0, 0.0, 0.5, 3.0, 20.0}) {
        const double closed = 0.75 * std::pow(std::abs(y), 4.0 / 3.0);
        CHECK(p.conjugate(y) == doctest::Approx(closed).epsilon(1e-12));
        CHECK(closed == doctest::Approx(conjugate_oracle(j, y, -6.0, 6.0)).epsilon(1e-6));
    }
}

TEST_CASE("regular potential: fenchel equality along the resolvent") {
    auto p = PotentialModel::regular();
    for (double lambda : {1e-2, 0.3})
        for (double x = -3.0; x <= 3.0; x += 0.23) {
            const double r = p.resolvent(lambda, x);
            const double y = p.yosida(lambda, x);
            CHECK(p.j(r) + p.conjugate(y) == doctest::Approx(r * y).epsilon(1e-9).scale(1.0));
        }
}

TEST_CASE("regular potential: derivative chain rule for the yosida approximation") {
    auto p = PotentialModel::regular();
    const double lambda = 0.07;
    for (double x : {-2.0, -0.4, 0.9, 1.7}) {
        const double h = 1e-6;
        const double fd = (p.yosida(lambda, x + h) - p.yosida(lambda, x - h)) / (2.0 * h);
        CHECK(p.yosida_derivative(lambda, x) == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("logarithmic potential: resolvent residual on the interior box") {
    auto p = PotentialModel::logarithmic(1.0);
    auto beta = [](double r) { return std::log((1.0 + r) / (1.0 - r)); };
    for (double lambda : {0.25, 0.5, 1.0})
        for (double x = -2.0; x <= 2.0; x += 0.19) {
            const double r = p.resolvent(lambda, x);
            CHECK(r > -1.0);
            CHECK(r < 1.0);
            CHECK(std::abs(r + lambda * beta(r) - x) <= 1e-10);
            const double o = resolvent_oracle(beta, lambda, x, -1.0 + 1e-15, 1.0 - 1e-15);
            CHECK(r == doctest::Approx(o).epsilon(1e-9));
        }
}

TEST_CASE("logarithmic potential: domain guards and fenchel equality") {
    auto p = PotentialModel::logarithmic(1.0);
    CHECK(!p.domain_is_whole_line());
    CHECK(p.domain_lo() == -1.0);
    CHECK(p.domain_hi() == 1.0);
    CHECK_THROWS_AS(p.beta0(1.5), Error);
    CHECK(std::isinf(p.j(1.2)));
    for (double x : {-1.6, -0.2, 0.8, 1.9}) {
        const double lambda = 0.5;
        const double r = p.resolvent(lambda, x);
        const double y = p.yosida(lambda, x);
        CHECK(p.j(r) + p.conjugate(y) == doctest::Approx(r * y).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("logarithmic potential: moreau envelope against grid minimization") {
    auto p = PotentialModel::logarithmic(1.0);
    auto j = [&](double r) { return p.j(r); };
    for (double x : {-1.8, -0.5, 0.0, 0.9, 2.5}) {
        const double lambda = 0.4;
        const double o = moreau_oracle(j, lambda, x, -1.0, 1.0);
        CHECK(p.moreau(lambda, x) == doctest::Approx(o).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("double obstacle: clamp resolvent, conjugate |y|, multivalued guards") {
    auto p = PotentialModel::double_obstacle(1.0);
    CHECK(!p.beta_single_valued());
    for (double lambda : {1e-3, 0.1, 2.0})
        for (double x : {-3.0, -1.0, -0.2, 0.7, 1.0, 4.4}) {
            CHECK(p.resolvent(lambda, x) == std::clamp(x, -1.0, 1.0));
            // yosida = lambda^{-1} distance to [-1,1], signed
            const double expect = (x - std::clamp(x, -1.0, 1.0)) / lambda;
            CHECK(p.yosida(lambda, x) == doctest::Approx(expect));
        }
    CHECK(p.conjugate(-2.5) == doctest::Approx(2.5));
    CHECK(p.conjugate(0.0) == 0.0);
    CHECK_THROWS_AS(p.beta_prime(0.5), Error);
    CHECK(p.j(0.3) == 0.0);
    CHECK(std::isinf(p.j(1.3)));
    // moreau envelope is the scaled squared distance to [-1,1]
    CHECK(p.moreau(0.5, 2.0) == doctest::Approx(1.0));
    CHECK(p.moreau(0.5, 0.3) == 0.0);
}

TEST_CASE("linear graph admits lambda = 0") {
    auto p = PotentialModel::linear();
    CHECK(p.beta_globally_lipschitz());
    CHECK(p.resolvent(0.0, 1.7) == 1.7);
    CHECK(p.yosida(0.0, -0.4) == -0.4);
    CHECK(p.resolvent(0.5, 3.0) == doctest::Approx(2.0));
    auto q = PotentialModel::regular();
    CHECK_THROWS_AS(q.resolvent(0.0, 1.0), Error);
}

TEST_CASE("custom piecewise graph: resolvent matches bisection, j by quadrature") {
    std::vector<std::pair<double, double>> bp = {{-2.0, -3.0}, {-1.0, -1.0}, {0.0, 0.0},
                                                 {1.0, 0.5},  {2.0, 4.0}};
    auto p = PotentialModel::custom_graph(bp, [](double r) { return -0.5 * r; }, 0.5);
    CHECK(p.beta_globally_lipschitz());
    auto beta = [&](double x) { return p.beta0(x); };
    for (double lambda : {0.2, 1.0})
        for (double x = -4.0; x <= 4.0; x += 0.41) {
            const double r = p.resolvent(lambda, x);
            const double o = resolvent_oracle(beta, lambda, x, -10.0, 10.0);
            CHECK(r == doctest::Approx(o).epsilon(1e-9).scale(1.0));
        }
    // j(1) = area under beta on [0,1] = trapezoid of (0,0)-(1,0.5)
    CHECK(p.j(1.0) == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(p.j(-1.0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK_THROWS_AS(PotentialModel::custom_graph({{0.0, 0.0}}, nullptr, 0.0), Error);
    CHECK_THROWS_AS(
        PotentialModel::custom_graph({{0.0, 1.0}, {1.0, 0.0}}, nullptr, 0.0), Error);
}

TEST_CASE("perturbation must honor its declared Lipschitz constant") {
    CHECK_THROWS_AS(PotentialModel::custom_function(
                        [](double r) { return r; }, [](double) { return 1.0; }, nullptr,
                        [](double r) { return 3.0 * r; }, 1.0),
                    Error);
}

TEST_CASE("growth classification") {
    auto reg = PotentialModel::regular();
    auto g = reg.classify_growth(-5.0, 5.0, 400);
    CHECK(g.kind == GrowthKind::QuadraticDerivative);
    CHECK(g.R >= 2.0);
    CHECK(g.R <= 3.5);

    auto fast = PotentialModel::custom_function(
        [](double r) { return r * std::exp(r * r); },
        [](double r) { return (1.0 + 2.0 * r * r) * std::exp(r * r); }, nullptr,
        [](double) { return 0.0; }, 0.0);
    auto gf = fast.classify_growth(-3.0, 3.0, 400);
    CHECK(gf.kind == GrowthKind::JDominated);

    auto obst = PotentialModel::double_obstacle(1.0);
    CHECK(obst.classify_growth(-2.0, 2.0, 100).kind == GrowthKind::Unclassified);
}

TEST_CASE("symmetry ratio near 1 for even potentials") {
    CHECK(PotentialModel::regular().symmetry_ratio(3.0, 50) == doctest::Approx(1.0));
    CHECK(PotentialModel::logarithmic(1.0).symmetry_ratio(0.99, 50) == doctest::Approx(1.0));
}

TEST_CASE("yosida converges to beta as lambda drops") {
    auto p = PotentialModel::regular();
    for (double x : {-1.5, 0.3, 2.0}) {
        const double b = p.beta0(x);
        double prev_err = std::numeric_limits<double>::infinity();
        for (double lambda : {1e-1, 1e-2, 1e-3, 1e-4}) {
            const double err = std::abs(p.yosida(lambda, x) - b);
            CHECK(err <= prev_err + 1e-14);
            prev_err = err;
        }
        CHECK(prev_err <= 5e-3 * (1.0 + std::abs(b)));
    }
}
