// Double-well potentials psi = j + pihat with maximal monotone beta = dj.
//
// The convex part j may be singular (logarithmic, double obstacle) or any
// monotone graph supplied by the user; everything the solver needs is built
// from the scalar resolvent (I + lambda*beta)^{-1}: Yosida approximation,
// Moreau envelope, convex conjugate.

#ifndef CHS_POTENTIAL_HPP
#define CHS_POTENTIAL_HPP

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chs/error.hpp"

namespace chs {

enum class PotentialKind { Regular, Logarithmic, DoubleObstacle, CustomGraph, Linear };

enum class GrowthKind { QuadraticDerivative, JDominated, Unclassified };

struct GrowthClass {
    GrowthKind kind = GrowthKind::Unclassified;
    double R = 0.0;
};

class PotentialModel {
public:
    // psi_reg = (r^2-1)^2/4: j = r^4/4, beta = r^3, pi = -r
    static PotentialModel regular();
    // j = (1+r)ln(1+r) + (1-r)ln(1-r) on [-1,1], beta = ln((1+r)/(1-r)), pi = -2cr
    static PotentialModel logarithmic(double c);
    // j = indicator of [-1,1], beta = its subgradient, pi = -2cr
    static PotentialModel double_obstacle(double c);
    // j = r^2/2, beta = id; admits lambda = 0
    static PotentialModel linear();
    // piecewise-linear monotone graph through strictly increasing breakpoints,
    // extended beyond the ends with the terminal slopes
    static PotentialModel custom_graph(std::vector<std::pair<double, double>> breakpoints,
                                       std::function<double(double)> pi, double c_pi);
    // locally Lipschitz single-valued beta given as a function (j integrated numerically
    // unless provided)
    static PotentialModel custom_function(std::function<double(double)> beta,
                                          std::function<double(double)> beta_prime,
                                          std::function<double(double)> j,
                                          std::function<double(double)> pi, double c_pi);

    PotentialKind kind() const { return kind_; }
    bool beta_single_valued() const { return single_valued_; }
    bool beta_globally_lipschitz() const { return globally_lipschitz_; }
    bool domain_is_whole_line() const {
        return lo_ == -std::numeric_limits<double>::infinity() &&
               hi_ == std::numeric_limits<double>::infinity();
    }
    double domain_lo() const { return lo_; }
    double domain_hi() const { return hi_; }

    double j(double x) const;      // +inf outside D(j)
    double beta0(double x) const;  // minimal section of the graph
    double beta_prime(double x) const;

    double resolvent(double lambda, double x) const;
    double yosida(double lambda, double x) const;
    double moreau(double lambda, double x) const;
    double conjugate(double y) const;  // +inf when the sup diverges
    double yosida_derivative(double lambda, double x) const;

    double perturbation(double x) const;            // pi
    double perturbation_primitive(double x) const;  // pihat
    double pi_lipschitz() const { return c_pi_; }
    double pi_zero() const { return c0_; }

    bool has_closed_conjugate() const { return static_cast<bool>(jstar_); }

    GrowthClass classify_growth(double lo, double hi, int n_samples) const;

    // sup of j(x)/j(-x) over samples with |x| up to `edge` (symmetry hypothesis)
    double symmetry_ratio(double edge, int n_samples) const;

    std::string name() const;

private:
    PotentialModel() = default;
    void check_pi_lipschitz() const;

    PotentialKind kind_ = PotentialKind::Regular;
    bool single_valued_ = true;
    bool globally_lipschitz_ = false;
    double lo_ = -std::numeric_limits<double>::infinity();
    double hi_ = std::numeric_limits<double>::infinity();

    std::function<double(double)> j_;
    std::function<double(double)> beta_;        // minimal section
    std::function<double(double)> beta_prime_;  // optional
    std::function<double(double)> jstar_;       // optional closed form
    std::function<double(double, double)> resolvent_closed_;  // optional (lambda, x)

    std::function<double(double)> pi_;
    std::function<double(double)> pihat_;
    double c_pi_ = 0.0;
    double c0_ = 0.0;
};

}  // namespace chs

#endif
