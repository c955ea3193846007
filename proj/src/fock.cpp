#include "segal_quant/fock.hpp"

#include "segal_quant/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace segal {

namespace {

void compositions(int remaining, int slot, Occupation& current, std::vector<Occupation>& out)
{
    const int last = static_cast<int>(current.size()) - 1;
    if (slot == last) {
        current[static_cast<std::size_t>(slot)] = remaining;
        out.push_back(current);
        return;
    }
    for (int k = 0; k <= remaining; ++k) {
        current[static_cast<std::size_t>(slot)] = k;
        compositions(remaining - k, slot + 1, current, out);
    }
}

}  // namespace

std::size_t fock_dimension(int modes, int n_max)
{
    // C(modes + n_max, n_max) built incrementally; each partial product is
    // itself a binomial coefficient, so the division is exact.
    unsigned __int128 c = 1;
    for (int k = 1; k <= n_max; ++k) {
        c = c * static_cast<unsigned>(modes + k) / static_cast<unsigned>(k);
        if (c > std::numeric_limits<std::uint64_t>::max()) {
            throw ResourceError("Fock dimension overflows 64 bits");
        }
    }
    return static_cast<std::size_t>(c);
}

FockBasis::FockBasis(int modes, int n_max) : modes_(modes), n_max_(n_max)
{
    if (modes < 1 || n_max < 1) {
        throw InputError("Fock basis needs at least one mode and n_max >= 1");
    }
    states_.reserve(fock_dimension(modes, n_max));
    Occupation current(static_cast<std::size_t>(modes), 0);
    for (int total = 0; total <= n_max; ++total) {
        compositions(total, 0, current, states_);
    }
    for (std::size_t k = 0; k < states_.size(); ++k) {
        index_.emplace(states_[k], static_cast<Eigen::Index>(k));
    }
}

int FockBasis::total(Eigen::Index k) const
{
    int sum = 0;
    for (int v : state(k)) {
        sum += v;
    }
    return sum;
}

std::optional<Eigen::Index> FockBasis::index_of(const Occupation& n) const
{
    auto it = index_.find(n);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

Eigen::Index FockBasis::one_particle_index(int mode) const
{
    if (mode < 0 || mode >= modes_) {
        throw InputError("mode index out of range");
    }
    Occupation n(static_cast<std::size_t>(modes_), 0);
    n[static_cast<std::size_t>(mode)] = 1;
    return *index_of(n);
}

FockSpace build_fock(const FrequencySpec& spec, int n_max, std::size_t memory_budget)
{
    const auto modes = static_cast<int>(spec.dimension());
    if (n_max < 1) {
        throw InputError("Fock cutoff n_max must be at least 1");
    }
    const std::size_t dim = fock_dimension(modes, n_max);
    const long double bytes = static_cast<long double>(dim) * dim * sizeof(double) * (2.0L * modes + 2.0L);
    if (bytes > static_cast<long double>(memory_budget)) {
        std::ostringstream msg;
        msg << "Fock space dimension " << dim << " (" << modes << " modes, n_max = " << n_max
            << ") needs about " << static_cast<double>(bytes) << " bytes, budget is " << memory_budget;
        throw ResourceError(msg.str());
    }

    FockSpace fock{FockBasis(modes, n_max), {}, {}};
    const auto size = fock.basis.size();
    for (int i = 0; i < modes; ++i) {
        Matrix a = Matrix::Zero(size, size);
        for (Eigen::Index col = 0; col < size; ++col) {
            Occupation n = fock.basis.state(col);
            const int ni = n[static_cast<std::size_t>(i)];
            if (ni == 0) {
                continue;
            }
            --n[static_cast<std::size_t>(i)];
            a(*fock.basis.index_of(n), col) = std::sqrt(static_cast<double>(ni));
        }
        fock.creation.push_back(a.transpose());
        fock.annihilation.push_back(std::move(a));
    }
    return fock;
}

Vector second_quantized_spectrum(const FrequencySpec& spec, const FockBasis& basis)
{
    if (spec.dimension() != basis.modes()) {
        throw InputError("spectrum and Fock basis have different mode counts");
    }
    Vector e(basis.size());
    for (Eigen::Index k = 0; k < basis.size(); ++k) {
        double sum = 0.0;
        const auto& n = basis.state(k);
        for (int i = 0; i < basis.modes(); ++i) {
            sum += n[static_cast<std::size_t>(i)] * spec.frequencies()(i);
        }
        e(k) = sum;
    }
    return e;
}

Matrix second_quantized_hamiltonian(const FrequencySpec& spec, const FockBasis& basis)
{
    return second_quantized_spectrum(spec, basis).asDiagonal();
}

ComplexMatrix evolution_group(const FrequencySpec& spec, const FockBasis& basis, double t)
{
    const Vector e = second_quantized_spectrum(spec, basis);
    ComplexVector phases(e.size());
    for (Eigen::Index k = 0; k < e.size(); ++k) {
        phases(k) = std::polar(1.0, -t * e(k));
    }
    return phases.asDiagonal();
}

ComplexMatrix one_particle_block(const ComplexMatrix& op, const FockBasis& basis)
{
    if (op.rows() != basis.size() || op.cols() != basis.size()) {
        throw InputError("operator does not act on this Fock basis");
    }
    const int n = basis.modes();
    ComplexMatrix block(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            block(i, j) = op(basis.one_particle_index(i), basis.one_particle_index(j));
        }
    }
    return block;
}

CcrResidual ccr_residual(const FockSpace& fock)
{
    const auto& basis = fock.basis;
    const auto size = basis.size();
    std::vector<Eigen::Index> lower;
    std::vector<Eigen::Index> top;
    for (Eigen::Index k = 0; k < size; ++k) {
        (basis.total(k) < basis.cutoff() ? lower : top).push_back(k);
    }
    CcrResidual out;
    const Matrix id = Matrix::Identity(size, size);
    const auto modes = static_cast<std::size_t>(basis.modes());
    for (std::size_t i = 0; i < modes; ++i) {
        for (std::size_t j = 0; j < modes; ++j) {
            Matrix c = fock.annihilation[i] * fock.creation[j] - fock.creation[j] * fock.annihilation[i];
            if (i == j) {
                c -= id;
            }
            double low = 0.0;
            for (auto k : lower) {
                low += c.col(k).squaredNorm();
            }
            double high = 0.0;
            for (auto k : top) {
                high += c.col(k).squaredNorm();
            }
            out.below_top = std::max(out.below_top, std::sqrt(low));
            out.top_shell = std::max(out.top_shell, std::sqrt(high));
        }
    }
    return out;
}

}  // namespace segal
