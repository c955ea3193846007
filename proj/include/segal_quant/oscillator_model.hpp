#pragma once

#include "segal_quant/linalg.hpp"

#include <vector>

namespace segal {

/// Frequencies (and quadrature nodes) below this are rejected.
inline constexpr double kMinFrequency = 1e-8;

struct DiscreteFrequency {
    double omega = 0.0;
    int multiplicity = 1;
};

struct QuadratureNode {
    double node = 0.0;
    double weight = 0.0;
};

/// Positive oscillator spectrum: discrete frequencies with multiplicities
/// followed by a quadrature discretization of the continuous part.
///
/// Coordinates are laid out as the expanded discrete frequencies in the
/// order given (a multiplicity m contributes m consecutive coordinates),
/// then one coordinate per quadrature node. Discrete coordinates carry unit
/// weight; node coordinates carry their quadrature weight.
class FrequencySpec {
public:
    FrequencySpec(std::vector<DiscreteFrequency> discrete,
                  std::vector<QuadratureNode> continuous = {});

    /// Convenience: every frequency with multiplicity one.
    static FrequencySpec from_frequencies(const std::vector<double>& omegas);

    const std::vector<DiscreteFrequency>& discrete() const noexcept { return discrete_; }
    const std::vector<QuadratureNode>& continuous() const noexcept { return continuous_; }

    Eigen::Index dimension() const noexcept { return frequencies_.size(); }
    const Vector& frequencies() const noexcept { return frequencies_; }
    const Vector& weights() const noexcept { return weights_; }
    bool weighted() const noexcept { return !continuous_.empty(); }

    /// Sizes of the groups of coordinates sharing exactly the same frequency,
    /// in order of first appearance.
    std::vector<int> degenerate_blocks() const;

    friend bool operator==(const FrequencySpec&, const FrequencySpec&);

private:
    std::vector<DiscreteFrequency> discrete_;
    std::vector<QuadratureNode> continuous_;
    Vector frequencies_;
    Vector weights_;
};

/// Gauss-Legendre rule with `count` nodes on [a, b].
std::vector<QuadratureNode> gauss_legendre(double a, double b, int count);

/// Real (p, q) pair with p and q of equal length.
struct PhaseSpacePoint {
    Vector p;
    Vector q;

    Eigen::Index dimension() const noexcept { return p.size(); }
    /// Stacked (p; q).
    Vector stacked() const;
    static PhaseSpacePoint from_stacked(const Vector& x);
};

/// Classical generator [[0, -Omega^2], [I, 0]] in (p; q) ordering.
class GeneratorMatrix {
public:
    const Matrix& matrix() const noexcept { return entries_; }
    Eigen::Index modes() const noexcept { return entries_.rows() / 2; }

private:
    friend GeneratorMatrix build_generator(const FrequencySpec&);
    explicit GeneratorMatrix(Matrix entries) : entries_(std::move(entries)) {}
    Matrix entries_;
};

Vector omega_apply(const FrequencySpec& spec, const Vector& v);

GeneratorMatrix build_generator(const FrequencySpec& spec);

/// 1/2 (|p|^2 + |Omega q|^2) in the quadrature-weighted L2 norm; the
/// weights are all one for a purely discrete spectrum.
double classical_hamiltonian(const FrequencySpec& spec, const PhaseSpacePoint& x);

}  // namespace segal
