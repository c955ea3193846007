#include "segal_quant/realization.hpp"

#include "segal_quant/errors.hpp"

#include <cmath>
#include <random>

namespace segal {

Realization construct_unique_realization(const FrequencySpec& spec)
{
    const auto n = spec.dimension();
    const Vector& omega = spec.frequencies();
    const Vector& weights = spec.weights();
    const Vector inv_omega = omega.cwiseInverse();
    const Matrix zero = Matrix::Zero(n, n);

    Vector g_diag(2 * n);
    g_diag << weights.cwiseProduct(inv_omega), weights.cwiseProduct(omega);
    Matrix j = block2x2(zero, omega.asDiagonal(), -inv_omega.asDiagonal().toDenseMatrix(), zero);
    Vector h_diag(2 * n);
    h_diag << omega, omega;

    return Realization{spec, Metric(g_diag.asDiagonal(), weights), SymplecticForm::standard(weights),
                       ComplexUnit(std::move(j)), h_diag.asDiagonal()};
}

Vector CanonicalTransform::inverse_apply(const Vector& x) const
{
    // U = S R(alpha) with S diagonal, so U^{-1} = R(-alpha) S^{-1}.
    const auto n = entries.rows() / 2;
    Vector s(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        s(i) = std::hypot(entries(i, i), entries(i, n + i));
        s(n + i) = std::hypot(entries(n + i, i), entries(n + i, n + i));
    }
    return standard_rotation(n, -alpha) * s.cwiseInverse().cwiseProduct(x);
}

Matrix standard_rotation(Eigen::Index modes, double beta)
{
    const double c = std::cos(beta);
    const double s = std::sin(beta);
    const Matrix id = Matrix::Identity(modes, modes);
    return block2x2(c * id, -s * id, s * id, c * id);
}

CanonicalTransform canonical_transform(const FrequencySpec& spec, double alpha)
{
    const Vector root = spec.frequencies().cwiseSqrt();
    const Vector inv_root = root.cwiseInverse();
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);
    Matrix u = block2x2((c * root).asDiagonal(), (-s * root).asDiagonal(),
                        (s * inv_root).asDiagonal(), (c * inv_root).asDiagonal());
    return {alpha, std::move(u)};
}

Matrix standard_metric(const FrequencySpec& spec)
{
    Vector d(2 * spec.dimension());
    d << spec.weights(), spec.weights();
    return d.asDiagonal();
}

Matrix hamiltonian_from_generator(const Realization& r, const GeneratorMatrix& a, double tol)
{
    if (a.matrix().rows() != r.j.size()) {
        throw InputError("hamiltonian_from_generator: generator and realization sizes differ");
    }
    const Matrix h = r.j.matrix() * a.matrix();
    const double asym = relative_residual(h - h.transpose(), h);
    if (asym > tol) {
        throw InconsistencyError("J A is not symmetric (relative residual " + std::to_string(asym) +
                                 ")");
    }
    std::mt19937_64 rng(0x5e9a1u);
    std::normal_distribution<double> normal;
    for (int probe = 0; probe < 8; ++probe) {
        Vector x(h.rows());
        for (auto& v : x) {
            v = normal(rng);
        }
        const Vector lhs = a.matrix() * x;
        const Vector rhs = -r.j.matrix() * (h * x);
        if ((lhs - rhs).norm() > tol * std::max(1.0, lhs.norm())) {
            throw InconsistencyError("A x != -J H x on a random probe");
        }
    }
    return h;
}

}  // namespace segal
