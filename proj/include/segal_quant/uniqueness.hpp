#pragma once

#include "segal_quant/oscillator_model.hpp"
#include "segal_quant/symplectic.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace segal {

/// Which symmetric metrics enter the linear constraint space.
///
/// Symmetric: G = [[L, M], [M, N]] with M = M^T as well; the dimension is
/// the sum of m(m+1)/2 over blocks of equal frequency.
/// General: every symmetric G; degenerate blocks then also admit an
/// antisymmetric off-diagonal part and the dimension is the sum of m^2.
enum class OffDiagonalBlock { Symmetric, General };

/// Frobenius-orthonormal basis of {S = S^T : S A + A^T S = 0} (restricted by
/// `form`). Singular values below linear_tol * sigma_max count as zero.
/// Throws StructuralError if the space is empty.
std::vector<Matrix> solve_metric_constraint(const GeneratorMatrix& a, double linear_tol = 1e-10,
                                            OffDiagonalBlock form = OffDiagonalBlock::Symmetric);

/// Same operation on an arbitrary square matrix (used to probe invalid A).
std::vector<Matrix> solve_metric_constraint(const Matrix& a, double linear_tol = 1e-10,
                                            OffDiagonalBlock form = OffDiagonalBlock::Symmetric);

struct AxiomCheck {
    std::string name;
    double value = 0.0;      ///< residual, or the raw quantity for positivity checks
    double tolerance = 0.0;
    bool pass = false;
};

struct AxiomReport {
    std::vector<AxiomCheck> checks;

    bool all_pass() const;
    /// Largest value among residual-type entries (positivity excluded).
    double max_residual() const;
    const AxiomCheck& at(std::string_view name) const;
};

/// Named residuals for (G, W, A): G-symmetry, G-positivity (min eigenvalue),
/// A-antisymmetry (G A + A^T G), W-antisymmetry, W-nondegeneracy
/// (1/cond(W), passes when cond <= 1e12), CCR (W vs ccr_target), J^2+I,
/// GJ-W and [J,H], with J = G^{-1} W and H = J A. Residuals are relative
/// Frobenius norms. An empty ccr_target means the unit-weight standard form.
AxiomReport verify_axioms(const Matrix& g, const Matrix& w, const Matrix& a,
                          double tol = kDefaultTolerance, const Matrix& ccr_target = Matrix());

struct ScanTolerances {
    double linear = 1e-10;
    double nonlinear = 1e-10;
};

struct ConstraintProblem {
    GeneratorMatrix a;
    SymplecticForm ccr_target;
    ScanTolerances tolerances{};
    int restarts = 64;
    std::uint64_t seed = 0;
    double cluster_radius = 1e-6;
    OffDiagonalBlock form = OffDiagonalBlock::Symmetric;
    int max_iterations = 200;
    /// 0 picks std::thread::hardware_concurrency().
    int threads = 0;

    /// Problem with the weighted standard form of `spec` as CCR target.
    static ConstraintProblem for_spec(const FrequencySpec& spec);
    void validate() const;
};

struct ScanSolution {
    Matrix g;
    Matrix j;
    AxiomReport axioms;
    int cluster_size = 0;
    int representative_restart = 0;
    double residual = 0.0;  ///< ||J^2 + I||_F of the representative
};

struct RestartOutcome {
    bool started = false;    ///< a positive definite start point was drawn
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
    Vector coefficients;
};

struct SolutionSet {
    std::vector<ScanSolution> solutions;
    std::vector<RestartOutcome> restarts;
    double cluster_radius = 0.0;
    int basis_dimension = 0;
    int converged = 0;
    /// Smallest distance between two representatives (infinity for <= 1).
    double min_separation = 0.0;
    /// min_separation > 10 * cluster_radius.
    bool well_separated = true;
};

/// Multi-start search over positive definite G in the linear constraint
/// space for J = G^{-1} W_ccr with J^2 = -I. Converged points are clustered
/// by Frobenius distance on (G, J). Deterministic for fixed (seed, restarts)
/// independently of the thread count. Throws ScanFailure if no restart
/// converges.
SolutionSet uniqueness_scan(const ConstraintProblem& problem);

/// Frobenius distance on the stacked pair (G, J).
double solution_distance(const Matrix& g1, const Matrix& j1, const Matrix& g2, const Matrix& j2);

}  // namespace segal
