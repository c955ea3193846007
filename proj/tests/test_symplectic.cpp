#include "segal_quant/errors.hpp"
#include "segal_quant/realization.hpp"
#include "segal_quant/symplectic.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace segal;

namespace {

Matrix mat2(double a, double b, double c, double d)
{
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

Vector vec2(double a, double b)
{
    Vector v(2);
    v << a, b;
    return v;
}

Vector random_vector(std::mt19937_64& rng, Eigen::Index n)
{
    std::normal_distribution<double> normal;
    Vector v(n);
    for (auto& x : v) {
        x = normal(rng);
    }
    return v;
}

Matrix random_spd(std::mt19937_64& rng, Eigen::Index n)
{
    Matrix x(n, n);
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        x.data()[k] = std::normal_distribution<double>()(rng);
    }
    return x * x.transpose() + Matrix::Identity(n, n);
}

Matrix random_antisymmetric(std::mt19937_64& rng, Eigen::Index n)
{
    Matrix x(n, n);
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        x.data()[k] = std::normal_distribution<double>()(rng);
    }
    return x - x.transpose();
}

}  // namespace

TEST_CASE("complex_unit_from examples")
{
    const SymplecticForm ws(mat2(0, 1, -1, 0));
    const Matrix j = complex_unit_from(Metric(mat2(0.5, 0, 0, 2)), ws).matrix();
    CHECK((j - mat2(0, 2, -0.5, 0)).norm() == doctest::Approx(0.0));

    CHECK(complex_unit_from(Metric(Matrix::Identity(2, 2)), ws).matrix() == mat2(0, 1, -1, 0));

    const ComplexUnit wrong = complex_unit_from(Metric(mat2(1, 0, 0, 4)), ws);
    CHECK((wrong.matrix() - mat2(0, 1, -0.25, 0)).norm() <= 1e-16);
    const Matrix sq = wrong.matrix() * wrong.matrix();
    CHECK((sq + 0.25 * Matrix::Identity(2, 2)).norm() <= 1e-16);
}

TEST_CASE("metric and form validation")
{
    CHECK_THROWS_AS(Metric(mat2(1, 0, 0, 0)), MetricError);
    CHECK_THROWS_AS(Metric(mat2(1, 0.5, 0, 1)), MetricError);
    CHECK_THROWS_AS(Metric(mat2(-1, 0, 0, 1)), MetricError);
    CHECK_THROWS_AS(SymplecticForm(mat2(0, 1, 1, 0)), DegenerateFormError);
    CHECK_THROWS_AS(Metric(Matrix::Identity(3, 3)), InputError);

    Matrix w4 = Matrix::Zero(4, 4);
    w4(0, 2) = 1.0;
    w4(2, 0) = -1.0;
    w4(1, 3) = 1e-13;
    w4(3, 1) = -1e-13;
    CHECK_THROWS_AS(complex_unit_from(Metric(Matrix::Identity(4, 4)), SymplecticForm(w4)), DegenerateFormError);
}

TEST_CASE("is_naturally_complex")
{
    auto ok = is_naturally_complex(ComplexUnit(mat2(0, 2, -0.5, 0)), 1e-10);
    CHECK(ok.naturally_complex);
    CHECK(ok.residual == 0.0);

    auto bad = is_naturally_complex(ComplexUnit(mat2(0, 1, -0.25, 0)), 1e-10);
    CHECK_FALSE(bad.naturally_complex);
    CHECK(bad.residual == doctest::Approx((0.75 * Matrix::Identity(2, 2)).norm()).epsilon(1e-15));

    for (Eigen::Index n : {1, 2, 5, 17}) {
        const auto r = is_naturally_complex(ComplexUnit::standard(n));
        CHECK(r.naturally_complex);
        CHECK(r.residual == 0.0);
    }
}

TEST_CASE("canonical Poisson brackets of the standard form")
{
    const auto w = SymplecticForm::standard(2);
    CHECK(poisson_bracket_canonical(SymplecticForm::standard(1), 0, 0, BracketKind::QP) == 1.0);
    for (Eigen::Index i = 0; i < 2; ++i) {
        for (Eigen::Index j = 0; j < 2; ++j) {
            CHECK(poisson_bracket_canonical(w, i, j, BracketKind::PP) == 0.0);
            CHECK(poisson_bracket_canonical(w, i, j, BracketKind::QQ) == 0.0);
            CHECK(poisson_bracket_canonical(w, i, j, BracketKind::QP) == (i == j ? 1.0 : 0.0));
        }
    }
    CHECK(poisson_bracket_canonical(w, 0, 1, BracketKind::QP) == 0.0);
    CHECK_THROWS_AS(poisson_bracket_canonical(w, 2, 0, BracketKind::QP), InputError);
    CHECK_THROWS_AS(poisson_bracket_canonical(w, 0, -1, BracketKind::PP), InputError);
}

TEST_CASE("complexify on the standard structure uses z = p - i q")
{
    const auto js = ComplexUnit::standard(1);
    const auto z1 = complexify(js, vec2(1, 0));
    CHECK(z1(0) == std::complex<double>(1, 0));
    const auto z2 = complexify(js, vec2(0, 1));
    CHECK(z2(0) == std::complex<double>(0, -1));

    const Metric g(Matrix::Identity(2, 2));
    const auto w = SymplecticForm::standard(1);
    const Vector x = vec2(1, 0);
    const Vector y = vec2(0, 1);
    CHECK(complex_pairing(g, w, x, y) == std::complex<double>(0, 1));
    const auto self = complex_pairing(g, w, vec2(0.3, -1.2), vec2(0.3, -1.2));
    CHECK(self.imag() == 0.0);
    CHECK(self.real() == doctest::Approx(0.3 * 0.3 + 1.2 * 1.2));

    CHECK_THROWS_AS(complexify(ComplexUnit(mat2(0, 1, -0.25, 0)), x), NotNaturallyComplexError);
}

TEST_CASE("(x, J y)_G = omega(x, y) for random (G, W)")
{
    std::mt19937_64 rng(21);
    for (int pair = 0; pair < 10; ++pair) {
        const Eigen::Index size = 2 * (1 + pair % 4);
        const Metric g(random_spd(rng, size));
        const SymplecticForm w(random_antisymmetric(rng, size));
        const ComplexUnit j = complex_unit_from(g, w);
        for (int k = 0; k < 100; ++k) {
            const Vector x = random_vector(rng, size);
            const Vector y = random_vector(rng, size);
            const double lhs = g.pairing(x, j.matrix() * y);
            const double rhs = x.dot(w.matrix() * y);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, x.norm() * y.norm() * w.matrix().norm()));
        }
        const Matrix gj = g.matrix() * j.matrix();
        CHECK((gj + j.matrix().transpose() * g.matrix()).norm() <= 1e-12 * gj.norm());
    }
}

TEST_CASE("complexification of the constructed realization")
{
    std::mt19937_64 rng(8);
    const FrequencySpec specs[] = {
        FrequencySpec::from_frequencies({0.3, 1.0, 4.5}),
        FrequencySpec({{2.0, 2}}, {{0.5, 0.3}, {1.7, 0.9}}),
    };
    for (const auto& spec : specs) {
        const auto r = construct_unique_realization(spec);
        const auto n = spec.dimension();
        const Matrix gj = r.g.matrix() * r.j.matrix();
        CHECK((gj + r.j.matrix().transpose() * r.g.matrix()).norm() <= 1e-12 * gj.norm());
        for (int k = 0; k < 50; ++k) {
            const Vector x = random_vector(rng, 2 * n);
            const Vector y = random_vector(rng, 2 * n);
            const ComplexVector zx = complexify(r.j, x);
            const ComplexVector zy = complexify(r.j, y);

            // Multiplication by i is application of J.
            CHECK((complexify(r.j, r.j.matrix() * x) - std::complex<double>(0, 1) * zx).norm() <= 1e-12 * zx.norm());
            // Norm preservation with the quadrature weights.
            const double norm2 = r.g.pairing(x, x);
            CHECK(std::abs(weighted_norm_squared(zx, spec.weights()) - norm2) <= 1e-12 * norm2);

            const auto cxy = complex_pairing(r.g, r.w, x, y);
            const auto cyx = complex_pairing(r.g, r.w, y, x);
            CHECK(std::abs(cyx - std::conj(cxy)) <= 1e-12 * std::max(1.0, std::abs(cxy)));

            // (x, y)_C = sum_i w_i z_x conj(z_y): linear in the first argument.
            std::complex<double> via_z = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                via_z += spec.weights()(i) * zx(i) * std::conj(zy(i));
            }
            CHECK(std::abs(via_z - cxy) <= 1e-12 * std::max(1.0, std::abs(cxy)));

            const double a = 0.7;
            const double b = -1.3;
            const Vector scaled = a * x + b * r.j.matrix() * x;
            const auto lhs = complex_pairing(r.g, r.w, scaled, y);
            CHECK(std::abs(lhs - std::complex<double>(a, b) * cxy) <= 1e-11 * std::max(1.0, std::abs(lhs)));
        }
    }
}

TEST_CASE("standard frame conjugates J to J_S")
{
    const auto r = construct_unique_realization(FrequencySpec::from_frequencies({0.5, 2.0, 9.0}));
    const Matrix f = standard_frame(r.j);
    const Matrix conj = f.inverse() * r.j.matrix() * f;
    CHECK((conj - ComplexUnit::standard(3).matrix()).norm() <= 1e-13);

    // The sign-flipped unit is naturally complex but has no positive frame.
    CHECK_THROWS_AS(complexify(ComplexUnit(-r.j.matrix()), Vector::Ones(6)), InputError);
}
