#ifndef VGRD_COVARIANCE_HPP
#define VGRD_COVARIANCE_HPP

#include <utility>
#include <vector>

#include "vgrd/linalg.hpp"

namespace vgrd {

// Two-type-correlation covariance parameters: unit diagonal, correlation rho1
// between component 1 (central) and everyone else, rho0 among the rest.
struct TwoTypeCorrelation {
    int n = 2;
    double rho0 = 0.0;
    double rho1 = 0.0;

    // positive iff the full matrix is positive definite
    double pd_margin() const { return (n - 2) * rho0 + 1.0 - (n - 1) * rho1 * rho1; }

    void validate() const; // throws InvalidInput naming the violated inequality
};

// Eigenvalues (non-increasing) plus signature counts at tolerance tol.
struct Spectrum {
    Vector eigenvalues;
    int n_plus = 0;
    int n_minus = 0;
    int n_zero = 0;
    double tol = 0.0;
};

// Per-component distortion constraints e_i in (0,1], kept in original order
// together with the permutation to the sorted-peripheral order assumed by the
// 2TC results: position 0 (central) is fixed, positions 1..n-1 are sorted
// non-increasing (stable).
struct DistortionConstraints {
    Vector e;
    std::vector<int> perm;    // perm[k] = original index of the k-th sorted entry
    std::vector<int> clamped; // indices whose constraint was clamped to 1

    static DistortionConstraints from_vector(const Vector& e); // validates (0,1]

    int n() const { return static_cast<int>(e.size()); }
    double sorted(int k) const { return e[perm[static_cast<std::size_t>(k)]]; }
    Matrix diag_matrix() const;
};

Matrix build_2tc(const TwoTypeCorrelation& tc);

// Closed-form spectrum of the 2TC matrix: 1 - rho0 with multiplicity n-2 and
// the two extremes 1 + (n-2)rho0/2 +- sqrt((n-2)^2 rho0^2 + 4(n-1) rho1^2)/2.
Spectrum tc2_spectrum(const TwoTypeCorrelation& tc);

// Determinant of build_2tc(rho0, rho1) - diag(gamma) in closed arrowhead form.
// Throws SingularShift when some (1 - gamma_i) - rho0 is within 1e-12 of zero;
// callers then fall back to det_lu.
double arrowhead_det(double rho0, double rho1, const Vector& gamma);

// Variance normalization: K = V^{-1/2} Sigma V^{-1/2} with unit diagonal and
// e_i = min(dtilde_i / sigma_i^2, 1); clamped components are recorded.
std::pair<Matrix, DistortionConstraints> normalize_source(const Matrix& sigma_xt,
                                                          const Vector& dtilde);

Spectrum inertia(const Matrix& m, double tol);
Spectrum inertia(const Matrix& m); // tol = default_tol(m)

} // namespace vgrd

#endif // VGRD_COVARIANCE_HPP
