#pragma once

#include "segal_quant/oscillator_model.hpp"
#include "segal_quant/symplectic.hpp"

namespace segal {

/// The unitary realization (G, W, J, H) of an oscillator spectrum:
///
///   G = D diag(Omega^{-1}, Omega)     W = [[0, D], [-D, 0]]
///   J = [[0, Omega], [-Omega^{-1}, 0]]   H = diag(Omega, Omega)
///
/// where D is the diagonal of quadrature weights (the identity for a purely
/// discrete spectrum). J^2 = -I, G J = W, [J, H] = 0 and A = -J H.
struct Realization {
    FrequencySpec spec;
    Metric g;
    SymplecticForm w;
    ComplexUnit j;
    Matrix h;

    Eigen::Index modes() const noexcept { return spec.dimension(); }
};

/// Built from the closed-form expressions; the constraint-solving route is
/// uniqueness_scan.
Realization construct_unique_realization(const FrequencySpec& spec);

/// U(alpha) = diag(Omega^{1/2}, Omega^{-1/2}) R(alpha): maps standard
/// coordinates x = (p, q) to realization coordinates X = (P, Q).
struct CanonicalTransform {
    double alpha = 0.0;
    Matrix entries;

    Vector apply(const Vector& x) const { return entries * x; }
    /// X -> x, exact blockwise inverse.
    Vector inverse_apply(const Vector& x) const;
};

CanonicalTransform canonical_transform(const FrequencySpec& spec, double alpha);

/// Blockwise rotation [[cos b, -sin b], [sin b, cos b]] on the standard space.
Matrix standard_rotation(Eigen::Index modes, double beta);

/// Weighted standard metric diag(D, D).
Matrix standard_metric(const FrequencySpec& spec);

/// H = J A. Throws InconsistencyError if J A is not symmetric within tol
/// (relative) or A x = -J H x fails on random probes.
Matrix hamiltonian_from_generator(const Realization& r, const GeneratorMatrix& a,
                                  double tol = kDefaultTolerance);

}  // namespace segal
