#pragma once

#include <Eigen/Dense>

#include <complex>

namespace segal {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Frobenius residual ||a - b|| divided by ||reference|| when the reference
/// is nonzero; plain ||a - b|| otherwise.
double relative_residual(const Matrix& difference, const Matrix& reference);

/// Smallest eigenvalue of the symmetric part of m.
double min_symmetric_eigenvalue(const Matrix& m);

/// 2-norm condition number; infinity for singular input.
double condition_number(const Matrix& m);

/// Block matrix [[a, b], [c, d]] with square n x n blocks.
Matrix block2x2(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d);

/// Standard symplectic matrix [[0, D], [-D, 0]] with D = diag(weights).
Matrix standard_symplectic(const Vector& weights);

/// Standard symplectic matrix with unit weights.
Matrix standard_symplectic(Eigen::Index n);

}  // namespace segal
