#include "chs/potential.hpp"

#include <algorithm>
#include <cmath>

namespace chs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * eps)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, eps * 0.5, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, eps * 0.5, depth - 1);
}

double integral(const std::function<double(double)>& f, double a, double b) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    return adaptive_simpson(f, a, b, f(a), f(m), f(b), 1e-12, 24);
}

}  // namespace

void PotentialModel::check_pi_lipschitz() const {
    if (!pi_) return;
    for (int i = 0; i < 200; ++i) {
        const double x = -5.0 + 10.0 * (i + 0.13) / 200.0;
        const double y = x + 0.05 * (1 + (i % 7));
        if (std::abs(pi_(x) - pi_(y)) > c_pi_ * std::abs(x - y) + 1e-12)
            throw Error(ErrorCode::ValidationError,
                        "perturbation violates its declared Lipschitz constant");
    }
}

PotentialModel PotentialModel::regular() {
    PotentialModel m;
    m.kind_ = PotentialKind::Regular;
    m.j_ = [](double r) { return 0.25 * r * r * r * r; };
    m.beta_ = [](double r) { return r * r * r; };
    m.beta_prime_ = [](double r) { return 3.0 * r * r; };
    m.jstar_ = [](double y) { return 0.75 * std::pow(std::abs(y), 4.0 / 3.0); };
    m.pi_ = [](double r) { return -r; };
    m.pihat_ = [](double r) { return -0.5 * r * r; };
    m.c_pi_ = 1.0;
    m.c0_ = 0.0;
    m.check_pi_lipschitz();
    return m;
}

PotentialModel PotentialModel::linear() {
    PotentialModel m;
    m.kind_ = PotentialKind::Linear;
    m.globally_lipschitz_ = true;
    m.j_ = [](double r) { return 0.5 * r * r; };
    m.beta_ = [](double r) { return r; };
    m.beta_prime_ = [](double) { return 1.0; };
    m.jstar_ = [](double y) { return 0.5 * y * y; };
    m.resolvent_closed_ = [](double lambda, double x) { return x / (1.0 + lambda); };
    m.pi_ = [](double) { return 0.0; };
    m.pihat_ = [](double) { return 0.0; };
    m.c_pi_ = 0.0;
    m.c0_ = 0.0;
    return m;
}

PotentialModel PotentialModel::logarithmic(double c) {
    PotentialModel m;
    m.kind_ = PotentialKind::Logarithmic;
    m.lo_ = -1.0;
    m.hi_ = 1.0;
    m.j_ = [](double r) {
        if (std::abs(r) > 1.0) return kInf;
        // x ln x extended by 0 at x = 0
        auto xlx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
        return xlx(1.0 + r) + xlx(1.0 - r);
    };
    m.beta_ = [](double r) { return std::log((1.0 + r) / (1.0 - r)); };
    m.beta_prime_ = [](double r) { return 2.0 / ((1.0 + r) * (1.0 - r)); };
    m.jstar_ = [m](double y) {
        const double t = std::tanh(0.5 * y);
        return y * t - m.j_(t);
    };
    m.pi_ = [c](double r) { return -2.0 * c * r; };
    m.pihat_ = [c](double r) { return -c * r * r; };
    m.c_pi_ = 2.0 * c;
    m.c0_ = 0.0;
    m.check_pi_lipschitz();
    return m;
}

PotentialModel PotentialModel::double_obstacle(double c) {
    PotentialModel m;
    m.kind_ = PotentialKind::DoubleObstacle;
    m.single_valued_ = false;
    m.lo_ = -1.0;
    m.hi_ = 1.0;
    m.j_ = [](double r) { return std::abs(r) <= 1.0 ? 0.0 : kInf; };
    m.beta_ = [](double) { return 0.0; };  // minimal section inside [-1,1]
    m.jstar_ = [](double y) { return std::abs(y); };
    m.resolvent_closed_ = [](double, double x) { return std::clamp(x, -1.0, 1.0); };
    m.pi_ = [c](double r) { return -2.0 * c * r; };
    m.pihat_ = [c](double r) { return -c * r * r; };
    m.c_pi_ = 2.0 * c;
    m.c0_ = 0.0;
    m.check_pi_lipschitz();
    return m;
}

PotentialModel PotentialModel::custom_graph(std::vector<std::pair<double, double>> bp,
                                            std::function<double(double)> pi, double c_pi) {
    if (bp.size() < 2)
        throw Error(ErrorCode::ValidationError, "custom graph needs at least two breakpoints");
    for (std::size_t i = 1; i < bp.size(); ++i)
        if (!(bp[i].first > bp[i - 1].first) || bp[i].second < bp[i - 1].second)
            throw Error(ErrorCode::ValidationError,
                        "custom graph breakpoints must be strictly increasing in x and "
                        "nondecreasing in y");
    PotentialModel m;
    m.kind_ = PotentialKind::CustomGraph;
    auto eval = [bp](double x) {
        if (x <= bp.front().first) {
            const double s = (bp[1].second - bp[0].second) / (bp[1].first - bp[0].first);
            return bp.front().second + s * (x - bp.front().first);
        }
        if (x >= bp.back().first) {
            const std::size_t n = bp.size();
            const double s = (bp[n - 1].second - bp[n - 2].second) /
                             (bp[n - 1].first - bp[n - 2].first);
            return bp.back().second + s * (x - bp.back().first);
        }
        auto it = std::upper_bound(bp.begin(), bp.end(), x,
                                   [](double v, const auto& p) { return v < p.first; });
        const auto& r = *it;
        const auto& l = *(it - 1);
        return l.second + (r.second - l.second) / (r.first - l.first) * (x - l.first);
    };
    m.beta_ = eval;
    // slopes are bounded, so the graph is globally Lipschitz
    m.globally_lipschitz_ = true;
    m.j_ = [eval](double x) { return integral(eval, 0.0, x) - integral(eval, 0.0, 0.0); };
    m.pi_ = pi ? std::move(pi) : [](double) { return 0.0; };
    m.pihat_ = [m](double r) { return integral(m.pi_, 0.0, r); };
    m.c_pi_ = c_pi;
    m.c0_ = std::abs(m.pi_(0.0));
    m.check_pi_lipschitz();
    return m;
}

PotentialModel PotentialModel::custom_function(std::function<double(double)> beta,
                                               std::function<double(double)> beta_prime,
                                               std::function<double(double)> j,
                                               std::function<double(double)> pi, double c_pi) {
    PotentialModel m;
    m.kind_ = PotentialKind::CustomGraph;
    m.beta_ = std::move(beta);
    m.beta_prime_ = std::move(beta_prime);
    if (j)
        m.j_ = std::move(j);
    else
        m.j_ = [m](double x) { return integral(m.beta_, 0.0, x); };
    m.pi_ = pi ? std::move(pi) : [](double) { return 0.0; };
    m.pihat_ = [m](double r) { return integral(m.pi_, 0.0, r); };
    m.c_pi_ = c_pi;
    m.c0_ = std::abs(m.pi_(0.0));
    m.check_pi_lipschitz();
    return m;
}

double PotentialModel::j(double x) const { return j_(x); }

double PotentialModel::beta0(double x) const {
    if (x < lo_ || x > hi_)
        throw Error(ErrorCode::DomainViolation, "argument outside the domain of beta");
    return beta_(x);
}

double PotentialModel::beta_prime(double x) const {
    if (!single_valued_)
        throw Error(ErrorCode::NotDifferentiable, "beta is multivalued");
    if (beta_prime_) return beta_prime_(x);
    const double h = 1e-6 * (1.0 + std::abs(x));
    const double sl = (beta_(x) - beta_(x - h)) / h;
    const double sr = (beta_(x + h) - beta_(x)) / h;
    if (std::abs(sl - sr) > 1e-3 * (1.0 + std::max(std::abs(sl), std::abs(sr))) + 1e-6)
        throw Error(ErrorCode::NotDifferentiable, "beta has a kink here");
    return 0.5 * (sl + sr);
}

double PotentialModel::resolvent(double lambda, double x) const {
    if (lambda < 0.0) throw Error(ErrorCode::ValidationError, "resolvent: lambda must be >= 0");
    if (!std::isfinite(x)) throw Error(ErrorCode::ValidationError, "resolvent: x must be finite");
    if (lambda == 0.0) {
        if (!globally_lipschitz_)
            throw Error(ErrorCode::ValidationError,
                        "lambda = 0 requires a globally Lipschitz beta");
        return x;
    }
    if (resolvent_closed_) return resolvent_closed_(lambda, x);

    auto G = [&](double y) { return y + lambda * beta_(y) - x; };

    double a = std::max(lo_, std::min(x, 0.0));
    double b = std::min(hi_, std::max(x, 0.0));
    int guard = 0;
    while (a > lo_ && G(a) > 0.0) {
        a = std::max(lo_, a - 2.0 * std::max(1.0, std::abs(a)));
        if (++guard > 200) throw Error(ErrorCode::NonConvergence, "resolvent bracket search failed");
    }
    while (b < hi_ && G(b) < 0.0) {
        b = std::min(hi_, b + 2.0 * std::max(1.0, std::abs(b)));
        if (++guard > 200) throw Error(ErrorCode::NonConvergence, "resolvent bracket search failed");
    }
    double ga = G(a), gb = G(b);
    if (gb < 0.0) return b;  // jump at the upper domain edge absorbs the rest
    if (ga > 0.0) return a;
    if (ga == 0.0) return a;
    if (gb == 0.0) return b;

    const double tol = 1e-12;
    double y = std::clamp(x, a, b);
    for (int it = 0; it < 100; ++it) {
        const double g = G(y);
        if (std::abs(g) <= tol) return y;
        if (g > 0.0) {
            b = y;
            gb = g;
        } else {
            a = y;
            ga = g;
        }
        double ynext;
        if (beta_prime_) {
            const double d = 1.0 + lambda * beta_prime_(y);
            ynext = y - g / d;
        } else if (std::isfinite(ga) && std::isfinite(gb)) {
            ynext = (a * gb - b * ga) / (gb - ga);  // regula falsi
        } else {
            ynext = 0.5 * (a + b);
        }
        if (!(ynext > a && ynext < b) || !std::isfinite(ynext)) ynext = 0.5 * (a + b);
        if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(y)))
            return std::abs(G(a)) < std::abs(G(b)) ? a : b;
        y = ynext;
    }
    if (std::abs(G(y)) <= 1e-9) return y;
    throw Error(ErrorCode::NonConvergence, "resolvent solve exceeded its iteration budget");
}

double PotentialModel::yosida(double lambda, double x) const {
    if (lambda == 0.0) {
        if (!globally_lipschitz_)
            throw Error(ErrorCode::ValidationError,
                        "lambda = 0 requires a globally Lipschitz beta");
        return beta_(x);
    }
    return (x - resolvent(lambda, x)) / lambda;
}

double PotentialModel::moreau(double lambda, double x) const {
    if (lambda == 0.0) return j_(x);
    const double y = resolvent(lambda, x);
    return (x - y) * (x - y) / (2.0 * lambda) + j_(y);
}

double PotentialModel::conjugate(double y) const {
    if (jstar_) return jstar_(y);
    auto phi = [&](double t) { return y * t - j_(t); };
    double a = std::max(lo_, -1.0), b = std::min(hi_, 1.0);
    // expand while the objective still increases towards an edge
    const double cap = 1e6;
    while (b < hi_ && b < cap && phi(b) >= phi(0.5 * b)) b = std::min(hi_, b * 2.0 + 1.0);
    while (a > lo_ && a > -cap && phi(a) >= phi(0.5 * a)) a = std::max(lo_, a * 2.0 - 1.0);
    if (b >= cap || a <= -cap) return kInf;  // Unbounded
    for (int it = 0; it < 300; ++it) {
        const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
        if (phi(m1) < phi(m2))
            a = m1;
        else
            b = m2;
        if (b - a < 1e-13 * (1.0 + std::abs(a) + std::abs(b))) break;
    }
    return phi(0.5 * (a + b));
}

double PotentialModel::yosida_derivative(double lambda, double x) const {
    const double r = resolvent(lambda, x);
    const double bp = beta_prime(r);
    if (lambda == 0.0) return bp;
    return bp / (1.0 + lambda * bp);
}

double PotentialModel::perturbation(double x) const { return pi_(x); }

double PotentialModel::perturbation_primitive(double x) const { return pihat_(x); }

GrowthClass PotentialModel::classify_growth(double lo, double hi, int n_samples) const {
    GrowthClass out;
    if (!single_valued_) return out;
    const double edge = std::max(std::abs(lo), std::abs(hi));
    double rq_all = 0.0, rq_inner = 0.0, rj_all = 0.0, rj_inner = 0.0;
    bool any = false;
    for (int i = 0; i < n_samples; ++i) {
        const double x = lo + (hi - lo) * (i + 0.5) / n_samples;
        if (x <= lo_ || x >= hi_) continue;
        double bp;
        try {
            bp = beta_prime(x);
        } catch (const Error&) {
            continue;  // kink: skip the sample
        }
        any = true;
        const double rq = bp / (1.0 + x * x);
        const double jv = j_(x);
        const double rj = std::isfinite(jv) ? bp / (1.0 + jv) : 0.0;
        rq_all = std::max(rq_all, rq);
        rj_all = std::max(rj_all, rj);
        if (std::abs(x) <= 0.5 * edge) {
            rq_inner = std::max(rq_inner, rq);
            rj_inner = std::max(rj_inner, rj);
        }
    }
    if (!any) return out;
    // The fitted constant must not be driven by the box edge, otherwise the
    // inequality is only an artifact of the bounded sample box.
    const double trend_q = rq_inner > 0.0 ? rq_all / rq_inner : kInf;
    const double trend_j = rj_inner > 0.0 ? rj_all / rj_inner : kInf;
    if (trend_q <= 2.0) {
        out.kind = GrowthKind::QuadraticDerivative;
        out.R = rq_all;
    } else if (trend_j <= std::max(4.0, trend_q / 10.0)) {
        out.kind = GrowthKind::JDominated;
        out.R = rj_all;
    }
    return out;
}

double PotentialModel::symmetry_ratio(double edge, int n_samples) const {
    double worst = 1.0;
    for (int i = 0; i < n_samples; ++i) {
        const double x = edge * (i + 1.0) / n_samples;
        const double jp = j_(std::min(x, hi_ - 1e-12 * (hi_ - lo_ < kInf ? 1.0 : 0.0)));
        const double jm = j_(std::max(-x, lo_));
        if (std::isfinite(jp) && std::isfinite(jm) && jm > 1e-14)
            worst = std::max(worst, jp / jm);
        if (std::isfinite(jp) && std::isfinite(jm) && jp > 1e-14)
            worst = std::max(worst, jm / jp);
    }
    return worst;
}

std::string PotentialModel::name() const {
    switch (kind_) {
        case PotentialKind::Regular: return "regular";
        case PotentialKind::Logarithmic: return "logarithmic";
        case PotentialKind::DoubleObstacle: return "double_obstacle";
        case PotentialKind::CustomGraph: return "custom";
        case PotentialKind::Linear: return "linear";
    }
    return "unknown";
}

}  // namespace chs
