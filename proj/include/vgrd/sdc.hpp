#ifndef VGRD_SDC_HPP
#define VGRD_SDC_HPP

#include <optional>

#include "vgrd/covariance.hpp"

namespace vgrd {

enum class SdcRoute { eigen, scalar_2tc, scalar_fallback_eigen };

// which of the three 2TC scalar conditions failed first (E3 -> E2 -> E1)
enum class SdcCondition { none, e3, e2, e1 };

struct SdcReport {
    bool satisfied = false;
    bool active = false; // boundary case: lambda_min(K - E) within tol of 0
    SdcRoute route = SdcRoute::eigen;
    SdcCondition failed = SdcCondition::none;
    std::optional<Spectrum> inertia_of_gap; // filled on the eigen route
    double chi2 = 0.0, chi3 = 0.0;          // filled on the scalar route (N >= 3)
};

// Spectral route: satisfied iff lambda_min(K - diag(e)) >= -tol.
SdcReport sdc_eigen(const Matrix& k, const DistortionConstraints& e, double tol);
SdcReport sdc_eigen(const Matrix& k, const DistortionConstraints& e);

// chi_j = sum_{i=j..N} 1/(1 - rho0 - e_i) over the sorted order, j 1-based as
// in the 2TC conditions (j >= 2). Throws PoleError when a denominator is
// within 1e-12 of zero.
double chi(int j, double rho0, const DistortionConstraints& e);

// Scalar route for 2TC covariances (N >= 3; N == 2 delegates to sdc_eigen).
// Conditions are checked in the order E3, E2, E1 and the first failure is
// reported. Falls back to the eigen route at chi poles.
SdcReport sdc_2tc(const TwoTypeCorrelation& tc, const DistortionConstraints& e);
SdcReport sdc_2tc(const TwoTypeCorrelation& tc, const DistortionConstraints& e, double tol);

// Cholesky-shift predicate for sampling loops; equivalent to
// sdc_eigen(...).satisfied without the eigendecomposition cost.
bool sdc_holds_fast(const Matrix& k, const Vector& e, double tol);

} // namespace vgrd

#endif // VGRD_SDC_HPP
