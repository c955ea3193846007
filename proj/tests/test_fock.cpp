#include "segal_quant/dynamics.hpp"
#include "segal_quant/errors.hpp"
#include "segal_quant/fock.hpp"
#include "segal_quant/realization.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace segal;

namespace {

// Binomial coefficient by the multiplicative formula in exact integers.
std::size_t choose(int n, int k)
{
    std::size_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
    }
    return r;
}

}  // namespace

TEST_CASE("single mode ladder")
{
    const auto fock = build_fock(FrequencySpec({{1.0, 1}}), 3);
    const Matrix& a = fock.annihilation[0];
    REQUIRE(a.rows() == 4);
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 1) = 1.0;
    expected(1, 2) = std::sqrt(2.0);
    expected(2, 3) = std::sqrt(3.0);
    CHECK(a == expected);
    CHECK(fock.creation[0] == a.transpose());
}

TEST_CASE("basis ordering and dimension")
{
    const FockBasis basis(2, 2);
    REQUIRE(basis.size() == 6);
    const std::vector<Occupation> expected{{0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}};
    CHECK(basis.states() == expected);
    CHECK(basis.index_of({1, 1}).value() == 4);
    CHECK_FALSE(basis.index_of({2, 1}).has_value());
    CHECK(basis.one_particle_index(0) == 2);
    CHECK(basis.one_particle_index(1) == 1);

    for (int n = 1; n <= 5; ++n) {
        for (int cutoff = 1; cutoff <= 6; ++cutoff) {
            CHECK(fock_dimension(n, cutoff) == choose(n + cutoff, n));
            CHECK(static_cast<std::size_t>(FockBasis(n, cutoff).size()) == choose(n + cutoff, n));
        }
    }
    CHECK_THROWS_AS(fock_dimension(200, 200), ResourceError);
}

TEST_CASE("ladder matrices match occupation-number arithmetic")
{
    const auto fock = build_fock(FrequencySpec::from_frequencies({1.0, 2.0, 3.0}), 3);
    const auto& basis = fock.basis;
    for (int i = 0; i < 3; ++i) {
        for (Eigen::Index col = 0; col < basis.size(); ++col) {
            Occupation lowered = basis.state(col);
            const int ni = lowered[static_cast<std::size_t>(i)];
            for (Eigen::Index row = 0; row < basis.size(); ++row) {
                double expected = 0.0;
                if (ni > 0) {
                    Occupation target = basis.state(col);
                    --target[static_cast<std::size_t>(i)];
                    if (basis.state(row) == target) {
                        expected = std::sqrt(double(ni));
                    }
                }
                CHECK(fock.annihilation[static_cast<std::size_t>(i)](row, col) == expected);
            }
        }
    }
}

TEST_CASE("CCR below the top shell")
{
    for (auto [n, cutoff] : {std::pair{1, 8}, std::pair{2, 5}, std::pair{3, 4}}) {
        std::vector<double> omegas;
        for (int i = 0; i < n; ++i) {
            omegas.push_back(1.0 + i);
        }
        const auto fock = build_fock(FrequencySpec::from_frequencies(omegas), cutoff);
        const auto res = ccr_residual(fock);
        CHECK(res.below_top <= 1e-12);
        CHECK(res.top_shell > 0.0);

        // [a_i, a_j^dag] acts diagonally with eigenvalue d_ij below the top shell.
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const Matrix c = fock.annihilation[i] * fock.creation[j] - fock.creation[j] * fock.annihilation[i];
                for (Eigen::Index k = 0; k < fock.basis.size(); ++k) {
                    if (fock.basis.total(k) < cutoff) {
                        CHECK(c(k, k) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
                    }
                }
            }
        }
    }
}

TEST_CASE("second-quantized Hamiltonian")
{
    const FrequencySpec two({{2.0, 1}});
    const FockBasis b1(1, 3);
    const Vector spectrum = second_quantized_spectrum(two, b1);
    CHECK(spectrum == Vector::LinSpaced(4, 0.0, 6.0));

    const auto spec = FrequencySpec::from_frequencies({1.0, 2.0});
    const auto fock = build_fock(spec, 2);
    const Vector s = second_quantized_spectrum(spec, fock.basis);
    std::vector<double> sorted(s.data(), s.data() + s.size());
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<double>{0, 1, 2, 2, 3, 4});

    Matrix number_sum = Matrix::Zero(fock.basis.size(), fock.basis.size());
    for (int i = 0; i < 2; ++i) {
        number_sum += spec.frequencies()(i) * fock.creation[i] * fock.annihilation[i];
    }
    CHECK((second_quantized_hamiltonian(spec, fock.basis) - number_sum).norm() <= 1e-13);

    // dGamma(H) commutes with the total number operator.
    Matrix number = Matrix::Zero(fock.basis.size(), fock.basis.size());
    for (int i = 0; i < 2; ++i) {
        number += fock.creation[i] * fock.annihilation[i];
    }
    const Matrix h = second_quantized_hamiltonian(spec, fock.basis);
    CHECK((h * number - number * h).norm() <= 1e-13);
}

TEST_CASE("second-quantized evolution")
{
    const FrequencySpec two({{2.0, 1}});
    const FockBasis b1(1, 3);
    const ComplexMatrix u = evolution_group(two, b1, std::numbers::pi / 2);
    const double expected[] = {1, -1, 1, -1};
    for (int k = 0; k < 4; ++k) {
        CHECK(std::abs(u(k, k) - expected[k]) <= 1e-15);
    }

    const auto spec = FrequencySpec::from_frequencies({0.4, 1.3, 2.2});
    const FockBasis basis(3, 3);
    const auto size = basis.size();
    CHECK(evolution_group(spec, basis, 0.0).isIdentity(0.0));
    const ComplexMatrix ut = evolution_group(spec, basis, 0.9);
    const ComplexMatrix us = evolution_group(spec, basis, -2.3);
    CHECK((ut * us - evolution_group(spec, basis, 0.9 - 2.3)).norm() <= 1e-12);
    CHECK((ut.adjoint() * ut - ComplexMatrix::Identity(size, size)).norm() <= 1e-12);

    // The one-particle block is the complex flow exp(-i Omega t).
    const auto r = construct_unique_realization(spec);
    const ComplexMatrix block = one_particle_block(ut, basis);
    for (int i = 0; i < 3; ++i) {
        Vector e = Vector::Zero(6);
        e(i) = std::sqrt(spec.frequencies()(i));  // U(0) e_i in the p block
        const ComplexVector z = complex_evolution(r, PhaseSpacePoint::from_stacked(e), 0.9);
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(block(k, i) - z(k)) <= 1e-12);
        }
    }
}

TEST_CASE("Fock input validation and memory budget")
{
    const auto spec = FrequencySpec::from_frequencies({1.0, 2.0});
    CHECK_THROWS_AS(build_fock(spec, 0), InputError);
    CHECK_THROWS_AS(FockBasis(0, 2), InputError);
    CHECK_THROWS_AS(build_fock(spec, 5, 1024), ResourceError);
    CHECK_NOTHROW(build_fock(spec, 5, kDefaultFockMemoryBudget));
}
