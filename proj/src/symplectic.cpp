#include "segal_quant/symplectic.hpp"

#include "segal_quant/errors.hpp"

#include <cmath>
#include <sstream>

namespace segal {

namespace {

constexpr double kSymmetryTolerance = 1e-13;
constexpr double kMaxFormCondition = 1e12;

void require_square(const Matrix& m, const char* what)
{
    if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
        std::ostringstream msg;
        msg << what << " must be a nonempty square matrix of even size, got " << m.rows() << "x"
            << m.cols();
        throw InputError(msg.str());
    }
}

}  // namespace

Metric::Metric(Matrix g) : Metric(g, Vector::Ones(g.rows() / 2)) {}

Metric::Metric(Matrix g, Vector weights) : g_(std::move(g)), weights_(std::move(weights))
{
    require_square(g_, "metric");
    if (weights_.size() != g_.rows() / 2) {
        throw InputError("metric weights must have one entry per mode");
    }
    if (relative_residual(g_ - g_.transpose(), g_) > kSymmetryTolerance) {
        throw MetricError("metric is not symmetric");
    }
    Eigen::LLT<Matrix> llt(0.5 * (g_ + g_.transpose()));
    if (llt.info() != Eigen::Success) {
        throw MetricError("metric is not positive definite");
    }
}

double Metric::pairing(const Vector& x, const Vector& y) const
{
    if (x.size() != size() || y.size() != size()) {
        throw InputError("metric pairing: dimension mismatch");
    }
    return x.dot(g_ * y);
}

double Metric::norm(const Vector& x) const
{
    return std::sqrt(pairing(x, x));
}

SymplecticForm::SymplecticForm(Matrix w) : w_(std::move(w))
{
    require_square(w_, "symplectic form");
    if (relative_residual(w_ + w_.transpose(), w_) > kSymmetryTolerance) {
        throw DegenerateFormError("symplectic form is not antisymmetric");
    }
}

double SymplecticForm::condition() const
{
    return condition_number(w_);
}

double SymplecticForm::evaluate(const Vector& x, const Vector& y) const
{
    if (x.size() != size() || y.size() != size()) {
        throw InputError("symplectic form: dimension mismatch");
    }
    return x.dot(w_ * y);
}

SymplecticForm SymplecticForm::standard(Eigen::Index modes)
{
    return SymplecticForm(standard_symplectic(modes));
}

SymplecticForm SymplecticForm::standard(const Vector& weights)
{
    return SymplecticForm(standard_symplectic(weights));
}

ComplexUnit::ComplexUnit(Matrix j) : j_(std::move(j))
{
    require_square(j_, "complex unit");
}

ComplexUnit ComplexUnit::standard(Eigen::Index modes)
{
    return ComplexUnit(standard_symplectic(modes));
}

ComplexUnit complex_unit_from(const Metric& g, const SymplecticForm& w)
{
    if (g.size() != w.size()) {
        throw InputError("complex_unit_from: metric and form sizes differ");
    }
    const double cond = w.condition();
    if (!(cond <= kMaxFormCondition)) {
        std::ostringstream msg;
        msg << "symplectic form is degenerate (condition number " << cond << ")";
        throw DegenerateFormError(msg.str());
    }
    Eigen::LLT<Matrix> llt(g.matrix());
    return ComplexUnit(llt.solve(w.matrix()));
}

NaturalComplexity is_naturally_complex(const ComplexUnit& j, double tol)
{
    const auto& m = j.matrix();
    const Matrix sq = m * m + Matrix::Identity(m.rows(), m.cols());
    const double residual = sq.norm();
    return {residual <= tol, residual};
}

double poisson_bracket_canonical(const SymplecticForm& w, Eigen::Index i, Eigen::Index j,
                                 BracketKind kind)
{
    const auto n = w.modes();
    if (i < 0 || j < 0 || i >= n || j >= n) {
        std::ostringstream msg;
        msg << "poisson bracket index out of range: (" << i << ", " << j << ") with n = " << n;
        throw InputError(msg.str());
    }
    switch (kind) {
    case BracketKind::PP:
        return w.matrix()(i, j);
    case BracketKind::QQ:
        return w.matrix()(n + i, n + j);
    case BracketKind::QP:
        return w.matrix()(i, n + j);
    }
    return 0.0;
}

Matrix standard_frame(const ComplexUnit& j, double tol)
{
    const auto check = is_naturally_complex(j, tol);
    if (!check.naturally_complex) {
        std::ostringstream msg;
        msg << "complex unit is not naturally complex: ||J^2 + I|| = " << check.residual;
        throw NotNaturallyComplexError(msg.str());
    }
    const auto& m = j.matrix();
    const auto n = m.rows() / 2;
    const double scale = m.norm();
    if (m.topLeftCorner(n, n).norm() > tol * scale || m.bottomRightCorner(n, n).norm() > tol * scale) {
        throw InputError("complexify requires J with vanishing diagonal blocks");
    }
    const Matrix t = m.topRightCorner(n, n);
    if (relative_residual(t - t.transpose(), t) > tol) {
        throw InputError("complexify requires a symmetric upper-right block of J");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (t + t.transpose()));
    if (eig.eigenvalues().minCoeff() <= 0.0) {
        throw InputError("complexify requires a positive definite upper-right block of J");
    }
    const Vector root = eig.eigenvalues().cwiseSqrt();
    const Matrix& v = eig.eigenvectors();
    const Matrix sqrt_t = v * root.asDiagonal() * v.transpose();
    const Matrix inv_sqrt_t = v * root.cwiseInverse().asDiagonal() * v.transpose();
    return block2x2(sqrt_t, Matrix::Zero(n, n), Matrix::Zero(n, n), inv_sqrt_t);
}

ComplexVector complexify_standard(const Vector& x)
{
    if (x.size() % 2 != 0) {
        throw InputError("complexify: phase-space vector must have even length");
    }
    const auto n = x.size() / 2;
    ComplexVector z(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        z(i) = std::complex<double>(x(i), -x(n + i));
    }
    return z;
}

ComplexVector complexify(const ComplexUnit& j, const Vector& x, double tol)
{
    if (x.size() != j.size()) {
        throw InputError("complexify: dimension mismatch");
    }
    const Matrix frame = standard_frame(j, tol);
    return complexify_standard(frame.partialPivLu().solve(x));
}

double weighted_norm_squared(const ComplexVector& z, const Vector& weights)
{
    if (z.size() != weights.size()) {
        throw InputError("weighted_norm_squared: dimension mismatch");
    }
    return weights.dot(z.cwiseAbs2());
}

std::complex<double> complex_pairing(const Metric& g, const SymplecticForm& w, const Vector& x,
                                     const Vector& y)
{
    if (g.size() != w.size()) {
        throw InputError("complex_pairing: metric and form sizes differ");
    }
    return {g.pairing(x, y), w.evaluate(x, y)};
}

}  // namespace segal
