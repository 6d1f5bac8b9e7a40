#ifndef VGRD_LINALG_HPP
#define VGRD_LINALG_HPP

#include <Eigen/Dense>

namespace vgrd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

bool is_symmetric(const Matrix& m, double tol = 0.0);

// infinity norm (max absolute row sum); bounds the spectral radius
double inf_norm(const Matrix& m);

// scale-aware zero tolerance: 1e-8 * max(1, ||m||_inf)
double default_tol(const Matrix& m);

// log det of a symmetric positive definite matrix; throws InvalidInput otherwise
double logdet_spd(const Matrix& m);

// determinant through LU with partial pivoting (sign preserved, may be ~0)
double det_lu(const Matrix& m);

// Cholesky-based predicate: true iff m + tol*I is numerically positive
// definite, i.e. lambda_min(m) > -tol up to rounding. O(n^3/3), no
// eigendecomposition; used in sampling hot loops.
bool is_psd_within(const Matrix& m, double tol);

double min_eigenvalue(const Matrix& m);

// factor F with F*F^T = m for symmetric PSD m, tolerating (near-)singular
// input: spectral factorization with eigenvalues below rel_cutoff*lambda_max
// treated as zero. Throws InvalidInput if m is indefinite beyond the cutoff.
Matrix psd_factor(const Matrix& m, double rel_cutoff = 1e-10);

} // namespace vgrd

#endif // VGRD_LINALG_HPP
