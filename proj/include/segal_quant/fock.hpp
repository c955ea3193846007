#pragma once

#include "segal_quant/oscillator_model.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

namespace segal {

using Occupation = std::vector<int>;

/// Occupation-number basis of the symmetric Fock space truncated at total
/// occupation n_max. States are ordered by total occupation, then
/// lexicographically (ascending).
class FockBasis {
public:
    FockBasis(int modes, int n_max);

    int modes() const noexcept { return modes_; }
    int cutoff() const noexcept { return n_max_; }
    Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(states_.size()); }
    const std::vector<Occupation>& states() const noexcept { return states_; }
    const Occupation& state(Eigen::Index k) const { return states_.at(static_cast<std::size_t>(k)); }
    int total(Eigen::Index k) const;
    std::optional<Eigen::Index> index_of(const Occupation& n) const;
    /// Index of the state with one quantum in `mode` and none elsewhere.
    Eigen::Index one_particle_index(int mode) const;

private:
    int modes_;
    int n_max_;
    std::vector<Occupation> states_;
    std::map<Occupation, Eigen::Index> index_;
};

/// C(modes + n_max, modes); throws ResourceError when it does not fit in
/// 64 bits.
std::size_t fock_dimension(int modes, int n_max);

inline constexpr std::size_t kDefaultFockMemoryBudget = std::size_t{256} << 20;

struct FockSpace {
    FockBasis basis;
    std::vector<Matrix> annihilation;  ///< a_i, <n-1|a_i|n> = sqrt(n_i)
    std::vector<Matrix> creation;      ///< a_i^dagger = a_i^T
};

/// Throws InputError for modes < 1 or n_max < 1 and ResourceError when the
/// dense ladder matrices would exceed memory_budget bytes.
FockSpace build_fock(const FrequencySpec& spec, int n_max,
                     std::size_t memory_budget = kDefaultFockMemoryBudget);

/// dGamma(H): diagonal with sum_i n_i w_i; no zero-point offset.
Matrix second_quantized_hamiltonian(const FrequencySpec& spec, const FockBasis& basis);

/// Diagonal of dGamma(H) in basis order.
Vector second_quantized_spectrum(const FrequencySpec& spec, const FockBasis& basis);

/// Gamma(U_t) = diag(exp(-i t sum_i n_i w_i)).
ComplexMatrix evolution_group(const FrequencySpec& spec, const FockBasis& basis, double t);

/// One-particle block of a Fock-space operator, indexed by mode.
ComplexMatrix one_particle_block(const ComplexMatrix& op, const FockBasis& basis);

struct CcrResidual {
    double below_top = 0.0;  ///< max_ij ||([a_i, a_j^dag] - d_ij I) P_{<= n_max - 1}||_F
    double top_shell = 0.0;  ///< same quantity restricted to the top shell
};

CcrResidual ccr_residual(const FockSpace& fock);

}  // namespace segal
