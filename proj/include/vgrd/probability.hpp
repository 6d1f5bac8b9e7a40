#ifndef VGRD_PROBABILITY_HPP
#define VGRD_PROBABILITY_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "vgrd/covariance.hpp"

namespace vgrd {

enum class McMethod { plain, conditional };

struct McEstimate {
    double p_hat = 0.0;
    long long trials = 0;
    double ci95_half_width = 0.0;
    std::uint64_t seed = 0;
    McMethod method = McMethod::plain;
    // conditional route only: rho1^2 < rho0 flips the sign of the inner-bound
    // numerator; the integrand is clipped either way
    bool mixed_sign_regime = false;
};

// P(K >= diag(e)) for e_i ~ U[0,1] i.i.d., plain Monte Carlo over the unit
// cube. Per-trial counter-based streams keyed by (seed, trial index): results
// are bit-identical for fixed (seed, trials, params) regardless of threading.
McEstimate sdc_probability_mc(int n, double rho0, double rho1, long long trials,
                              std::uint64_t seed);
McEstimate sdc_probability_mc_serial(int n, double rho0, double rho1,
                                     long long trials, std::uint64_t seed);

// Rao-Blackwellized estimator (N >= 3): samples e_3..e_N, integrates e_1
// analytically and e_2 by adaptive quadrature. Same mean, lower variance.
McEstimate sdc_probability_cmc(int n, double rho0, double rho1, long long trials,
                               std::uint64_t seed);
McEstimate sdc_probability_cmc_serial(int n, double rho0, double rho1,
                                      long long trials, std::uint64_t seed);

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// least-squares fit of ln p_hat against N; slope ~ ln(1 - rho0)
DecayFit decay_rate_fit(const std::vector<std::pair<int, double>>& points);

// Backward test channel x = xhat + z with xhat ~ N(0, K - D*), z ~ N(0, D*):
// returns the empirical E[(x - xhat)(x - xhat)^T] from the given number of
// samples. Handles singular K - D* via spectral factorization.
Matrix test_channel_sim(const Matrix& k, const Matrix& d_star, long long samples,
                        std::uint64_t seed);

} // namespace vgrd

#endif // VGRD_PROBABILITY_HPP
