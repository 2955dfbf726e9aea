// Rectangle domains with homogeneous-Neumann cosine spectra.
//
// Fields live in the orthonormal eigenbasis of the Neumann Laplacian on an
// interval or an axis-aligned rectangle, so -Delta, Delta^2, the inverse
// Neumann operator and the resolvent powers (I - delta*Delta)^{-k} are all
// diagonal.  Physical values sit on midpoint collocation nodes; the midpoint
// rule is exact for products of band-limited factors.

#ifndef CHS_DOMAIN_HPP
#define CHS_DOMAIN_HPP

#include <functional>
#include <vector>

#include "chs/error.hpp"

namespace chs {

struct Domain {
    int ndim = 1;
    int n[2] = {8, 1};
    double length[2] = {1.0, 1.0};
    bool dealias = false;  // 3/2-padded pointwise evaluation

    static Domain line(int n, double length = 1.0, bool dealias = false);
    static Domain rect(int nx, int ny, double lx, double ly, bool dealias = false);

    int size() const { return n[0] * n[1]; }
    double volume() const { return ndim == 1 ? length[0] : length[0] * length[1]; }
    double cell_volume() const { return volume() / size(); }
    double node(int dim, int j) const;  // midpoint coordinate
    double eigenvalue(int kx, int ky = 0) const;

    bool operator==(const Domain& o) const;
    bool operator!=(const Domain& o) const { return !(*this == o); }
    void validate() const;
};

enum class NormKind { H, V1Semi, V1, V2, DualStar };

class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const Domain& d) : dom_(d), c_(d.size(), 0.0) {}

    static ScalarField from_spectral(const Domain& d, std::vector<double> coeffs);
    static ScalarField from_physical(const Domain& d, const std::vector<double>& values);
    static ScalarField constant(const Domain& d, double value);
    // f(x) in 1D, f(x, 0) meaning: second coordinate passed as 0 in 1D
    static ScalarField from_function(const Domain& d,
                                     const std::function<double(double, double)>& f);

    const Domain& domain() const { return dom_; }
    const std::vector<double>& coeffs() const { return c_; }
    std::vector<double>& coeffs() { return c_; }
    double coeff(int kx, int ky = 0) const { return c_[static_cast<std::size_t>(ky) * dom_.n[0] + kx]; }
    void set_coeff(int kx, int ky, double v) { c_[static_cast<std::size_t>(ky) * dom_.n[0] + kx] = v; }
    std::vector<double> physical() const;

    double mean() const;
    ScalarField laplacian() const;
    ScalarField bilaplacian() const;
    ScalarField inverse_neumann() const;
    ScalarField resolvent_power(double delta, int k) const;
    double norm(NormKind kind) const;
    double norm_vs(double s) const;  // (1+mu)^s weighted norm
    ScalarField apply_pointwise(const std::function<double(double)>& f) const;

    double dot(const ScalarField& other) const;  // H scalar product

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double s);

    friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
    friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
    friend ScalarField operator*(ScalarField a, double s) { return a *= s; }
    friend ScalarField operator*(double s, ScalarField a) { return a *= s; }

private:
    void check_domain(const ScalarField& o) const;

    Domain dom_;
    std::vector<double> c_;
};

// integral of f over D (just the k=0 coefficient rescaled)
double quadrature(const ScalarField& f);

// integral of fn(f(x)) over D via collocation quadrature
double quadrature_pointwise(const ScalarField& f, const std::function<double(double)>& fn);

}  // namespace chs

#endif
