#include "segal_quant/oscillator_model.hpp"

#include "segal_quant/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace segal {

namespace {

void check_frequency(double value, const char* what)
{
    if (!std::isfinite(value)) {
        throw SpecError(std::string(what) + " is not finite");
    }
    if (value <= 0.0) {
        std::ostringstream msg;
        msg << "nonpositive frequency: " << what << " = " << value;
        throw SpecError(msg.str());
    }
    if (value < kMinFrequency) {
        std::ostringstream msg;
        msg << what << " = " << value << " is below the minimum frequency " << kMinFrequency;
        throw SpecError(msg.str());
    }
}

}  // namespace

FrequencySpec::FrequencySpec(std::vector<DiscreteFrequency> discrete,
                             std::vector<QuadratureNode> continuous)
    : discrete_(std::move(discrete)), continuous_(std::move(continuous))
{
    Eigen::Index n = 0;
    for (const auto& d : discrete_) {
        check_frequency(d.omega, "discrete frequency");
        if (d.multiplicity < 1) {
            throw SpecError("multiplicity must be a positive integer");
        }
        n += d.multiplicity;
    }
    for (std::size_t i = 0; i < discrete_.size(); ++i) {
        for (std::size_t j = i + 1; j < discrete_.size(); ++j) {
            if (discrete_[i].omega == discrete_[j].omega) {
                throw SpecError("discrete frequencies may repeat only through the multiplicity field");
            }
        }
    }
    for (const auto& c : continuous_) {
        check_frequency(c.node, "quadrature node");
        if (!std::isfinite(c.weight) || c.weight <= 0.0) {
            throw SpecError("quadrature weights must be strictly positive");
        }
    }
    std::vector<double> nodes;
    nodes.reserve(continuous_.size());
    for (const auto& c : continuous_) {
        nodes.push_back(c.node);
    }
    std::sort(nodes.begin(), nodes.end());
    if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
        throw SpecError("quadrature nodes must be pairwise distinct");
    }
    n += static_cast<Eigen::Index>(continuous_.size());
    if (n == 0) {
        throw SpecError("spectrum is empty");
    }

    frequencies_.resize(n);
    weights_.resize(n);
    Eigen::Index k = 0;
    for (const auto& d : discrete_) {
        for (int m = 0; m < d.multiplicity; ++m, ++k) {
            frequencies_(k) = d.omega;
            weights_(k) = 1.0;
        }
    }
    for (const auto& c : continuous_) {
        frequencies_(k) = c.node;
        weights_(k) = c.weight;
        ++k;
    }
}

FrequencySpec FrequencySpec::from_frequencies(const std::vector<double>& omegas)
{
    std::vector<DiscreteFrequency> discrete;
    discrete.reserve(omegas.size());
    for (double w : omegas) {
        discrete.push_back({w, 1});
    }
    return FrequencySpec(std::move(discrete));
}

std::vector<int> FrequencySpec::degenerate_blocks() const
{
    std::vector<double> seen;
    std::vector<int> counts;
    for (Eigen::Index i = 0; i < frequencies_.size(); ++i) {
        auto it = std::find(seen.begin(), seen.end(), frequencies_(i));
        if (it == seen.end()) {
            seen.push_back(frequencies_(i));
            counts.push_back(1);
        } else {
            ++counts[static_cast<std::size_t>(it - seen.begin())];
        }
    }
    return counts;
}

bool operator==(const FrequencySpec& a, const FrequencySpec& b)
{
    if (a.discrete_.size() != b.discrete_.size() || a.continuous_.size() != b.continuous_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.discrete_.size(); ++i) {
        if (a.discrete_[i].omega != b.discrete_[i].omega ||
            a.discrete_[i].multiplicity != b.discrete_[i].multiplicity) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.continuous_.size(); ++i) {
        if (a.continuous_[i].node != b.continuous_[i].node ||
            a.continuous_[i].weight != b.continuous_[i].weight) {
            return false;
        }
    }
    return true;
}

// Newton iteration on P_N from the Chebyshev-like initial guesses; the
// nodes come out in decreasing order on [-1, 1] and are reversed.
std::vector<QuadratureNode> gauss_legendre(double a, double b, int count)
{
    if (count < 1) {
        throw InputError("quadrature needs at least one node");
    }
    if (!(b > a)) {
        throw InputError("quadrature interval must satisfy a < b");
    }
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    std::vector<QuadratureNode> rule(static_cast<std::size_t>(count));
    const int m = (count + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int j = 0; j < count; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            dp = count * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule[static_cast<std::size_t>(i)] = {mid - half * x, half * w};
        rule[static_cast<std::size_t>(count - 1 - i)] = {mid + half * x, half * w};
    }
    return rule;
}

Vector PhaseSpacePoint::stacked() const
{
    Vector x(p.size() + q.size());
    x << p, q;
    return x;
}

PhaseSpacePoint PhaseSpacePoint::from_stacked(const Vector& x)
{
    if (x.size() % 2 != 0) {
        throw InputError("stacked phase-space vector must have even length");
    }
    const auto n = x.size() / 2;
    return {x.head(n), x.tail(n)};
}

Vector omega_apply(const FrequencySpec& spec, const Vector& v)
{
    if (v.size() != spec.dimension()) {
        throw InputError("omega_apply: vector length does not match the spectrum dimension");
    }
    return spec.frequencies().cwiseProduct(v);
}

GeneratorMatrix build_generator(const FrequencySpec& spec)
{
    const auto n = spec.dimension();
    Matrix a = Matrix::Zero(2 * n, 2 * n);
    a.topRightCorner(n, n) = (-spec.frequencies().array().square()).matrix().asDiagonal();
    a.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
    return GeneratorMatrix(std::move(a));
}

double classical_hamiltonian(const FrequencySpec& spec, const PhaseSpacePoint& x)
{
    const auto n = spec.dimension();
    if (x.p.size() != n || x.q.size() != n) {
        throw InputError("classical_hamiltonian: phase-space point does not match the spectrum dimension");
    }
    const Vector wq = spec.frequencies().cwiseProduct(x.q);
    const auto& w = spec.weights();
    return 0.5 * (w.dot(x.p.cwiseAbs2()) + w.dot(wq.cwiseAbs2()));
}

}  // namespace segal
