#pragma once

#include "segal_quant/linalg.hpp"

#include <complex>

namespace segal {

/// Default tolerance for axiom residuals (relative Frobenius norm).
inline constexpr double kDefaultTolerance = 1e-10;

/// Symmetric positive definite scalar-product matrix G, (x, y) = x^T G y.
///
/// Quadrature weights, when present, are already folded into G; they are
/// kept alongside so consumers can form the weighted standard structure.
class Metric {
public:
    /// Throws MetricError if g is not symmetric to 1e-13 (relative) or not
    /// positive definite.
    explicit Metric(Matrix g);
    Metric(Matrix g, Vector weights);

    const Matrix& matrix() const noexcept { return g_; }
    const Vector& weights() const noexcept { return weights_; }
    Eigen::Index size() const noexcept { return g_.rows(); }

    double pairing(const Vector& x, const Vector& y) const;
    double norm(const Vector& x) const;

private:
    Matrix g_;
    Vector weights_;
};

/// Antisymmetric matrix W with omega(x, y) = x^T W y.
class SymplecticForm {
public:
    /// Throws DegenerateFormError if w is not square or not antisymmetric to
    /// 1e-13 (relative). Nondegeneracy is reported by condition(), not
    /// enforced here.
    explicit SymplecticForm(Matrix w);

    const Matrix& matrix() const noexcept { return w_; }
    Eigen::Index size() const noexcept { return w_.rows(); }
    Eigen::Index modes() const noexcept { return w_.rows() / 2; }
    double condition() const;
    double evaluate(const Vector& x, const Vector& y) const;

    static SymplecticForm standard(Eigen::Index modes);
    static SymplecticForm standard(const Vector& weights);

private:
    Matrix w_;
};

/// Real matrix J representing multiplication by i. Not guaranteed to square
/// to -1; see is_naturally_complex.
class ComplexUnit {
public:
    explicit ComplexUnit(Matrix j);

    const Matrix& matrix() const noexcept { return j_; }
    Eigen::Index size() const noexcept { return j_.rows(); }

    /// J_S = [[0, I], [-I, 0]].
    static ComplexUnit standard(Eigen::Index modes);

private:
    Matrix j_;
};

/// J = G^{-1} W, so that (x, J y)_G = omega(x, y). Throws DegenerateFormError
/// when cond(W) exceeds 1e12.
ComplexUnit complex_unit_from(const Metric& g, const SymplecticForm& w);

struct NaturalComplexity {
    bool naturally_complex = false;
    double residual = 0.0;  ///< ||J^2 + I||_F
};

NaturalComplexity is_naturally_complex(const ComplexUnit& j, double tol = kDefaultTolerance);

enum class BracketKind { PP, QQ, QP };

/// omega evaluated on canonical basis pairs: PP -> omega((e_i,0),(e_j,0)),
/// QQ -> omega((0,e_i),(0,e_j)), QP -> omega((e_i,0),(0,e_j)).
double poisson_bracket_canonical(const SymplecticForm& w, Eigen::Index i, Eigen::Index j,
                                 BracketKind kind);

/// Frame F with F^{-1} J F = J_S for J = [[0, T], [-T^{-1}, 0]], T symmetric
/// positive definite: F = diag(T^{1/2}, T^{-1/2}).
Matrix standard_frame(const ComplexUnit& j, double tol = kDefaultTolerance);

/// Complex coordinates z = p - i q of x in the standard frame of J. Satisfies
/// complexify(J x) = i complexify(x). Throws NotNaturallyComplexError when
/// ||J^2 + I|| > tol.
ComplexVector complexify(const ComplexUnit& j, const Vector& x, double tol = kDefaultTolerance);

/// z = p - i q for a point already in standard coordinates.
ComplexVector complexify_standard(const Vector& x);

/// sum_i w_i |z_i|^2.
double weighted_norm_squared(const ComplexVector& z, const Vector& weights);

/// (x, y)_G + i omega(x, y). Linear in the first argument, conjugate-linear
/// in the second, when scalars act through J.
std::complex<double> complex_pairing(const Metric& g, const SymplecticForm& w, const Vector& x,
                                     const Vector& y);

}  // namespace segal
