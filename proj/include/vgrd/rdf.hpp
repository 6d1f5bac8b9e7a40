#ifndef VGRD_RDF_HPP
#define VGRD_RDF_HPP

#include <stdexcept>

#include "vgrd/covariance.hpp"
#include "vgrd/sdc.hpp"

namespace vgrd {

// Recovered KKT multipliers for the Max-Det program and the residuals of the
// stationarity and complementary-slackness conditions.
struct KktReport {
    Matrix p_mult;                      // P >= 0, multiplier of K - D >= 0
    Vector q_mult;                      // q >= 0, multiplier of diag(D) <= e
    double stationarity_residual = 0.0; // ||D^{-1} - P - Q||_F
    double slack1_residual = 0.0;       // ||P (K - D)||_F
    double slack2_residual = 0.0;       // max_i |q_i (e_i - d_i)|
};

// Properties of the optimal reconstruction covariance K - D*.
struct ReconReport {
    Matrix recon_cov;
    int recon_rank = 0;
    double det_gap = 0.0;    // det(K - D*)
    int bound_active = 0;    // N - r(e - d*)
    int bound_inertia = 0;   // n_+(K - E)
    bool rank_bound_ok = false;     // recon_rank <= min(bound_active, bound_inertia)
    bool det_dichotomy_ok = false;  // full rank <=> SDC satisfied and inactive
};

struct RdfSolution {
    Matrix d_star;
    double rate_nats = 0.0;
    double rate_bits = 0.0;
    double hadamard_rate_nats = 0.0;
    double gap_nats = 0.0;
    bool fast_path = false; // SDC satisfied, D* = diag(e) immediately
    int newton_iterations = 0;
    double mu_final = 0.0;
    SdcReport sdc;
    KktReport kkt;
    ReconReport recon;
};

struct SolverOptions {
    double mu0 = 1.0;
    double mu_factor = 10.0;
    double mu_min = 1e-9;
    double newton_tol = 1e-10; // squared Newton decrement per stage
    int max_newton = 60;       // per barrier stage
    double kkt_tol = 1e-6;
    double sdc_tol = -1.0; // < 0: scale-aware default
    int max_n = 64;        // dense Newton limit for the non-SDC path
};

// non-convergence within max_newton iterations; carries the best iterate
struct MaxIterationsError : std::runtime_error {
    RdfSolution best;
    explicit MaxIterationsError(RdfSolution sol)
        : std::runtime_error("solve_maxdet: max Newton iterations exceeded"),
          best(std::move(sol)) {}
};

// 1/2 ln(det K / prod e_i), in nats. A lower bound on the RDF; may be
// negative when the SDC fails (returned raw).
double hadamard_rate(const Matrix& k, const DistortionConstraints& e);

// Closed-form RDF for a 2TC source, valid when the SDC holds (checked;
// throws SdcViolated otherwise). Nats.
double rdf_2tc_closed(const TwoTypeCorrelation& tc, const DistortionConstraints& e);

// Isotropic (rho0 = rho1 = rho) closed form. Nats.
double rdf_isotropic(int n, double rho, const DistortionConstraints& e);

struct AvgRate {
    double exact = 0.0;        // rdf_isotropic / N
    double leading_term = 0.0; // 1/2 ln((1-rho)/e_g), e_g geometric mean
    double correction = 0.0;   // exact - leading_term, Theta(log N / N)
};
AvgRate avg_rate_per_component(int n, double rho, const DistortionConstraints& e);

// Max-Det program (Lemma-1 formulation): maximize det D subject to
// diag(D) <= e and 0 < D <= K. SDC-satisfied instances return D* = diag(e)
// directly; otherwise a log-barrier interior-point method with damped Newton
// steps over the N(N+1)/2 free entries of D runs until mu < mu_min.
RdfSolution solve_maxdet(const Matrix& k, const DistortionConstraints& e,
                         const SolverOptions& opts = {});

// Multiplier recovery from a candidate D alone: q by rowwise least squares
// against P(K-D) = 0 on the active set, P = D^{-1} - Q projected onto the PSD
// cone. Residuals are reported for the recovered pair.
KktReport kkt_residuals(const Matrix& k, const DistortionConstraints& e, const Matrix& d);

// Rank/determinant diagnostics of K - D*; tol is the activity tolerance for
// |e_i - d_i|, the rank cutoff is 1e-7 * lambda_max(K).
ReconReport reconstruction_analysis(const Matrix& k, const DistortionConstraints& e,
                                    const RdfSolution& sol, double tol);

// Independent grid-search oracle for N in {2, 3}: exhaustive grid over the
// free entries of D followed by pattern-search refinement. Returns the rate
// in nats, accurate to O(resolution).
double brute_force_rdf(const Matrix& k, const DistortionConstraints& e,
                       double resolution);

constexpr double kLn2 = 0.69314718055994530941723212145818;
inline double nats_to_bits(double nats) { return nats / kLn2; }

} // namespace vgrd

#endif // VGRD_RDF_HPP
