// Truncated cylindrical-Wiener noise through a Hilbert-Schmidt covariance.
//
// Additive noise carries per-mode amplitudes sigma_k (optionally smoothed by
// (I - eps*Delta)^{-2}); multiplicative noise acts diagonally through a bounded
// Lipschitz scalar h on the spectral coefficients of the state and takes
// values in the mean-zero subspace.

#ifndef CHS_NOISE_HPP
#define CHS_NOISE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "chs/domain.hpp"
#include "chs/rng.hpp"

namespace chs {

struct NoiseMode {
    int kx = 0;
    int ky = 0;
    double sigma = 0.0;  // after smoothing
};

struct MultiplicativeLaw {
    std::function<double(double)> h;  // bounded, globally Lipschitz
    double lipschitz = 0.0;           // L_h
    double bound = 0.0;               // sup |h|
};

class NoiseModel {
public:
    NoiseModel() = default;

    // power-law amplitudes sigma_k = amplitude * (1 + mu_k)^{-decay/2} up to
    // truncation K modes per dimension (K = n/4 when zero)
    static NoiseModel power_law(const Domain& d, double amplitude, double decay,
                                double mean_mode_sigma = 0.0, int truncation = 0);
    static NoiseModel single_mode(const Domain& d, int kx, int ky, double sigma);
    static NoiseModel silent(const Domain& d);

    NoiseModel with_multiplicative(MultiplicativeLaw law) const;
    NoiseModel with_mean_mode(double sigma0) const;

    // sigma_k -> sigma_k / (1 + eps*mu_k)^2
    NoiseModel smooth_covariance(double eps) const;

    bool multiplicative() const { return law_.has_value(); }
    const Domain& domain() const { return dom_; }
    const std::vector<NoiseMode>& modes() const { return modes_; }
    double mean_mode_sigma() const { return sigma0_; }
    double smoothing_epsilon() const { return eps_; }

    void set_envelope(std::function<double(double)> envelope);  // scalar factor of t

    // truncated Hilbert-Schmidt norm ||B||_{L2(U,H)} of the additive covariance
    double hs_norm() const;
    // truncated HS distance to another diagonal covariance on the same modes
    double hs_distance(const NoiseModel& other) const;

    // ||B(u)||_{L2(U,H)} for the current state (equals hs_norm() when additive)
    double growth_value(const ScalarField& u) const;
    // bound |f| + C_B ||u||_V1 of the growth condition, f = sum |sigma_k| * sup|h|
    double growth_bound(const ScalarField& u) const;
    // analytic Lipschitz constant of u -> B(u) in the L2(U,V1*) metric
    double lipschitz_constant() const;
    // sampled ratio ||B(u1)-B(u2)||_{L2(U,V1*)} / ||u1-u2||_{V1*}
    double lipschitz_defect(const ScalarField& u1, const ScalarField& u2) const;

    // one increment B(u) dW over a step of size dt
    ScalarField sample_increment(const ScalarField& u, double dt, std::uint64_t seed,
                                 std::uint64_t path_id, std::uint64_t step, double t = 0.0) const;

private:
    Domain dom_;
    std::vector<NoiseMode> modes_;  // k != 0 modes
    double sigma0_ = 0.0;           // mean mode amplitude (additive only)
    double eps_ = 0.0;
    std::optional<MultiplicativeLaw> law_;
    std::function<double(double)> envelope_;
};

// Running stochastic integral B*W and the mean channel m(t).
struct WienerAccumulator {
    explicit WienerAccumulator(const Domain& d, double initial_mean)
        : bw(d), m0(initial_mean) {}

    ScalarField bw;  // accumulated B*W
    double m0;       // (u0)_D

    void add(const ScalarField& increment) { bw += increment; }
    double mean_channel() const { return bw.mean(); }
    double m() const { return m0 + bw.mean(); }
};

}  // namespace chs

#endif
