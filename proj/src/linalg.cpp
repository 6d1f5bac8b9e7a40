#include "vgrd/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>

#include "vgrd/errors.hpp"

namespace vgrd {

bool is_symmetric(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = i + 1; j < m.cols(); ++j)
            if (std::abs(m(i, j) - m(j, i)) > tol) return false;
    return m.allFinite();
}

double inf_norm(const Matrix& m) {
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double default_tol(const Matrix& m) {
    return 1e-8 * std::max(1.0, inf_norm(m));
}

double logdet_spd(const Matrix& m) {
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success)
        throw InvalidInput("logdet_spd: matrix is not positive definite");
    return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

double det_lu(const Matrix& m) {
    return Eigen::PartialPivLU<Matrix>(m).determinant();
}

bool is_psd_within(const Matrix& m, double tol) {
    Matrix shifted = m;
    shifted.diagonal().array() += tol;
    return Eigen::LLT<Matrix>(shifted).info() == Eigen::Success;
}

double min_eigenvalue(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

Matrix psd_factor(const Matrix& m, double rel_cutoff) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    if (es.info() != Eigen::Success)
        throw InvalidInput("psd_factor: eigendecomposition failed");
    const Vector& lam = es.eigenvalues();
    const double lmax = std::max(0.0, lam.maxCoeff());
    const double cutoff = rel_cutoff * std::max(1e-300, lmax);
    if (lam.minCoeff() < -cutoff * 1e3 - 1e-12)
        throw InvalidInput("psd_factor: matrix is indefinite");
    Vector sq = lam.cwiseMax(0.0).cwiseSqrt();
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        if (lam[i] <= cutoff) sq[i] = 0.0;
    return es.eigenvectors() * sq.asDiagonal();
}

} // namespace vgrd
