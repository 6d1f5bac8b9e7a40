#include "vgrd/covariance.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "vgrd/errors.hpp"

namespace vgrd {

void TwoTypeCorrelation::validate() const {
    if (n < 2) throw InvalidInput("TwoTypeCorrelation: n must be >= 2");
    if (!(rho0 >= 0.0 && rho0 < 1.0))
        throw InvalidInput("TwoTypeCorrelation: rho0 must lie in [0, 1)");
    if (!(rho1 >= 0.0 && rho1 < 1.0))
        throw InvalidInput("TwoTypeCorrelation: rho1 must lie in [0, 1)");
    if (!(pd_margin() > 0.0)) {
        std::ostringstream os;
        os << "TwoTypeCorrelation: positive definiteness requires (n-2)*rho0 + 1 - "
              "(n-1)*rho1^2 > 0, got "
           << pd_margin() << " for n=" << n << " rho0=" << rho0 << " rho1=" << rho1;
        throw InvalidInput(os.str());
    }
}

DistortionConstraints DistortionConstraints::from_vector(const Vector& e) {
    const int n = static_cast<int>(e.size());
    if (n < 1) throw InvalidInput("DistortionConstraints: empty vector");
    for (int i = 0; i < n; ++i) {
        if (!(e[i] > 0.0 && e[i] <= 1.0) || !std::isfinite(e[i])) {
            std::ostringstream os;
            os << "DistortionConstraints: e[" << i << "]=" << e[i]
               << " outside (0, 1]";
            throw InvalidInput(os.str());
        }
    }
    DistortionConstraints dc;
    dc.e = e;
    dc.perm.resize(static_cast<std::size_t>(n));
    std::iota(dc.perm.begin(), dc.perm.end(), 0);
    // component 0 is pinned; peripherals stable-sorted non-increasing
    std::stable_sort(dc.perm.begin() + 1, dc.perm.end(),
                     [&](int a, int b) { return e[a] > e[b]; });
    return dc;
}

Matrix DistortionConstraints::diag_matrix() const {
    return Matrix(e.asDiagonal());
}

Matrix build_2tc(const TwoTypeCorrelation& tc) {
    tc.validate();
    Matrix k = Matrix::Constant(tc.n, tc.n, tc.rho0);
    k.row(0).setConstant(tc.rho1);
    k.col(0).setConstant(tc.rho1);
    k.diagonal().setOnes();
    return k;
}

Spectrum tc2_spectrum(const TwoTypeCorrelation& tc) {
    tc.validate();
    const int n = tc.n;
    const double half_span =
        0.5 * std::sqrt(static_cast<double>(n - 2) * (n - 2) * tc.rho0 * tc.rho0 +
                        4.0 * (n - 1) * tc.rho1 * tc.rho1);
    const double center = 1.0 + 0.5 * (n - 2) * tc.rho0;
    std::vector<double> lam;
    lam.reserve(static_cast<std::size_t>(n));
    lam.push_back(center + half_span);
    for (int i = 0; i < n - 2; ++i) lam.push_back(1.0 - tc.rho0);
    lam.push_back(center - half_span);
    std::sort(lam.begin(), lam.end(), std::greater<>());

    Spectrum s;
    s.eigenvalues = Eigen::Map<const Vector>(lam.data(), n);
    s.tol = 1e-8 * std::max(1.0, std::abs(lam.front()));
    for (double v : lam) {
        if (v > s.tol)
            ++s.n_plus;
        else if (v < -s.tol)
            ++s.n_minus;
        else
            ++s.n_zero;
    }
    return s;
}

double arrowhead_det(double rho0, double rho1, const Vector& gamma) {
    const int n = static_cast<int>(gamma.size());
    if (n < 2) throw InvalidInput("arrowhead_det: need N >= 2");
    const double g1bar = 1.0 - gamma[0];
    double head = g1bar;
    double prod = 1.0;
    for (int i = 1; i < n; ++i) {
        const double shift = (1.0 - gamma[i]) - rho0;
        if (std::abs(shift) < 1e-12)
            throw SingularShift("arrowhead_det: shift (1-gamma_i)-rho0 within 1e-12 of zero");
        head += (rho0 * g1bar - rho1 * rho1) / shift;
        prod *= shift;
    }
    return head * prod;
}

std::pair<Matrix, DistortionConstraints> normalize_source(const Matrix& sigma_xt,
                                                          const Vector& dtilde) {
    const int n = static_cast<int>(sigma_xt.rows());
    if (!is_symmetric(sigma_xt, 1e-12 * std::max(1.0, inf_norm(sigma_xt))))
        throw InvalidInput("normalize_source: covariance must be symmetric and finite");
    if (dtilde.size() != n)
        throw InvalidInput("normalize_source: distortion vector dimension mismatch");
    for (int i = 0; i < n; ++i) {
        if (!(sigma_xt(i, i) > 0.0))
            throw InvalidInput("normalize_source: covariance diagonal must be positive");
        if (!(dtilde[i] > 0.0))
            throw InvalidInput("normalize_source: distortions must be positive");
    }
    const Vector inv_sd = sigma_xt.diagonal().cwiseSqrt().cwiseInverse();
    Matrix k = inv_sd.asDiagonal() * sigma_xt * inv_sd.asDiagonal();
    k = Matrix(0.5 * (k + k.transpose().eval())); // exact symmetry after scaling
    k.diagonal().setOnes();

    Vector e(n);
    std::vector<int> clamped;
    for (int i = 0; i < n; ++i) {
        const double raw = dtilde[i] / sigma_xt(i, i);
        if (raw > 1.0) {
            e[i] = 1.0;
            clamped.push_back(i);
        } else {
            e[i] = raw;
        }
    }
    auto dc = DistortionConstraints::from_vector(e);
    dc.clamped = std::move(clamped);
    return {std::move(k), std::move(dc)};
}

Spectrum inertia(const Matrix& m, double tol) {
    if (!(tol > 0.0)) throw InvalidInput("inertia: tol must be positive");
    if (!is_symmetric(m, 0.0))
        throw InvalidInput("inertia: matrix must be exactly symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    Spectrum s;
    s.eigenvalues = es.eigenvalues().reverse();
    s.tol = tol;
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
        const double v = s.eigenvalues[i];
        if (v > tol)
            ++s.n_plus;
        else if (v < -tol)
            ++s.n_minus;
        else
            ++s.n_zero;
    }
    return s;
}

Spectrum inertia(const Matrix& m) { return inertia(m, default_tol(m)); }

} // namespace vgrd
