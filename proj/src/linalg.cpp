#include "segal_quant/linalg.hpp"

#include <limits>

namespace segal {

double relative_residual(const Matrix& difference, const Matrix& reference)
{
    const double ref = reference.norm();
    const double diff = difference.norm();
    return ref > 0.0 ? diff / ref : diff;
}

double min_symmetric_eigenvalue(const Matrix& m)
{
    if (m.size() == 0) {
        return 0.0;
    }
    const Matrix sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

double condition_number(const Matrix& m)
{
    if (m.size() == 0) {
        return std::numeric_limits<double>::infinity();
    }
    Eigen::BDCSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    if (smin <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return s(0) / smin;
}

Matrix block2x2(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d)
{
    const auto n = a.rows();
    Matrix out(2 * n, 2 * n);
    out.topLeftCorner(n, n) = a;
    out.topRightCorner(n, n) = b;
    out.bottomLeftCorner(n, n) = c;
    out.bottomRightCorner(n, n) = d;
    return out;
}

Matrix standard_symplectic(const Vector& weights)
{
    const auto n = weights.size();
    Matrix w = Matrix::Zero(2 * n, 2 * n);
    w.topRightCorner(n, n) = weights.asDiagonal();
    w.bottomLeftCorner(n, n) = -weights.asDiagonal().toDenseMatrix();
    return w;
}

Matrix standard_symplectic(Eigen::Index n)
{
    return standard_symplectic(Vector::Ones(n));
}

}  // namespace segal
