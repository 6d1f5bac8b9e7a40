#include "vgrd/sdc.hpp"

#include <cmath>

#include "vgrd/errors.hpp"

namespace vgrd {

SdcReport sdc_eigen(const Matrix& k, const DistortionConstraints& e, double tol) {
    if (k.rows() != e.n())
        throw InvalidInput("sdc_eigen: dimension mismatch between K and e");
    Matrix gap = k;
    gap.diagonal() -= e.e;
    SdcReport r;
    r.route = SdcRoute::eigen;
    r.inertia_of_gap = inertia(gap, tol);
    const double lmin = r.inertia_of_gap->eigenvalues.minCoeff();
    r.satisfied = lmin >= -tol;
    r.active = std::abs(lmin) <= tol;
    return r;
}

SdcReport sdc_eigen(const Matrix& k, const DistortionConstraints& e) {
    Matrix gap = k;
    gap.diagonal() -= e.e;
    return sdc_eigen(k, e, default_tol(gap));
}

double chi(int j, double rho0, const DistortionConstraints& e) {
    const int n = e.n();
    if (j < 2 || j > n) throw InvalidInput("chi: index j must lie in [2, N]");
    double s = 0.0;
    for (int k = j - 1; k < n; ++k) {
        const double den = 1.0 - rho0 - e.sorted(k);
        if (std::abs(den) < 1e-12)
            throw PoleError("chi: denominator 1 - rho0 - e_i within 1e-12 of zero");
        s += 1.0 / den;
    }
    return s;
}

namespace {

SdcReport sdc_2tc_impl(const TwoTypeCorrelation& tc, const DistortionConstraints& e,
                       double tol) {
    tc.validate();
    if (e.n() != tc.n) throw InvalidInput("sdc_2tc: dimension mismatch");
    if (tc.n == 2) {
        // chi_3 is an empty sum at N=2; the eigen route is exact there
        SdcReport r = sdc_eigen(build_2tc(tc), e, tol);
        r.route = SdcRoute::scalar_fallback_eigen;
        return r;
    }

    SdcReport r;
    r.route = SdcRoute::scalar_2tc;
    try {
        const double e1 = e.sorted(0);
        const double e2 = e.sorted(1);
        const double e3 = e.sorted(2);

        const double bound3 = 1.0 - tc.rho0;
        if (e3 > bound3 + tol) {
            r.satisfied = false;
            r.failed = SdcCondition::e3;
            return r;
        }
        const double chi3 = chi(3, tc.rho0, e);
        r.chi3 = chi3;
        const double bound2 = 1.0 - chi3 * tc.rho0 * tc.rho0 / (1.0 + chi3 * tc.rho0);
        if (e2 > bound2 + tol) {
            r.satisfied = false;
            r.failed = SdcCondition::e2;
            return r;
        }
        const double chi2 = chi(2, tc.rho0, e);
        r.chi2 = chi2;
        const double bound1 =
            1.0 - chi2 * tc.rho1 * tc.rho1 / (1.0 + chi2 * tc.rho0);
        if (e1 > bound1 + tol) {
            r.satisfied = false;
            r.failed = SdcCondition::e1;
            return r;
        }
        r.satisfied = true;
        r.active = (e3 >= bound3 - tol) || (e2 >= bound2 - tol) || (e1 >= bound1 - tol);
        return r;
    } catch (const PoleError&) {
        SdcReport fb = sdc_eigen(build_2tc(tc), e, tol);
        fb.route = SdcRoute::scalar_fallback_eigen;
        return fb;
    }
}

} // namespace

SdcReport sdc_2tc(const TwoTypeCorrelation& tc, const DistortionConstraints& e,
                  double tol) {
    return sdc_2tc_impl(tc, e, tol);
}

SdcReport sdc_2tc(const TwoTypeCorrelation& tc, const DistortionConstraints& e) {
    return sdc_2tc_impl(tc, e, 1e-8);
}

bool sdc_holds_fast(const Matrix& k, const Vector& e, double tol) {
    Matrix gap = k;
    gap.diagonal() -= e;
    return is_psd_within(gap, tol);
}

} // namespace vgrd
