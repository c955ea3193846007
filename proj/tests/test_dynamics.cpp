#include "oracles.hpp"

#include "segal_quant/dynamics.hpp"
#include "segal_quant/errors.hpp"
#include "segal_quant/realization.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace segal;

namespace {

constexpr double kPi = std::numbers::pi;

FrequencySpec random_spec(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> count(1, 4);
    std::uniform_int_distribution<int> mult(1, 2);
    std::uniform_real_distribution<double> log_omega(std::log(0.1), std::log(10.0));
    std::vector<DiscreteFrequency> discrete;
    const int k = count(rng);
    for (int i = 0; i < k; ++i) {
        discrete.push_back({std::exp(log_omega(rng)), mult(rng)});
    }
    return FrequencySpec(discrete);
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

}  // namespace

TEST_CASE("closed-form flow examples")
{
    const FrequencySpec two({{2.0, 1}});
    const auto phi = flow_closed_form(two, kPi / 4);
    Vector x(2);
    x << 2.0, 0.0;
    const Vector y = phi.apply(x);
    CHECK(std::abs(y(0)) <= 1e-15);
    CHECK(y(1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(classical_hamiltonian(two, PhaseSpacePoint::from_stacked(y)) == doctest::Approx(2.0).epsilon(1e-15));

    const auto full = flow_closed_form(two, kPi);
    CHECK((full.entries - Matrix::Identity(2, 2)).norm() <= 1e-15);
    CHECK(flow_closed_form(two, 0.0).entries == Matrix::Identity(2, 2));
}

TEST_CASE("flow_expm examples")
{
    const auto a1 = build_generator(FrequencySpec({{1.0, 1}}));
    CHECK((flow_expm(a1, kPi).entries + Matrix::Identity(2, 2)).norm() <= 1e-14);

    const FrequencySpec two({{2.0, 1}});
    CHECK((flow_expm(build_generator(two), 0.3).entries - flow_closed_form(two, 0.3).entries).norm() <= 1e-12);

    Matrix nil(2, 2);
    nil << 0, 0, 1, 0;
    Matrix expected(2, 2);
    expected << 1, 0, 1, 1;
    CHECK((flow_expm(nil, 1.0).entries - expected).norm() <= 1e-15);

    Matrix blowup = Matrix::Zero(2, 2);
    blowup(0, 0) = 1000.0;
    CHECK_THROWS_AS(flow_expm(blowup, 1.0), RangeError);
}

TEST_CASE("flow_expm agrees with a Taylor series oracle")
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> time(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix m(4, 4);
        for (Eigen::Index i = 0; i < m.size(); ++i) {
            m.data()[i] = std::normal_distribution<double>()(rng);
        }
        const double t = time(rng);
        const Matrix ref = oracle::taylor_expm(m * t);
        CHECK((flow_expm(m, t).entries - ref).norm() <= 1e-11 * ref.norm());
    }
}

TEST_CASE("closed form matches exp(A t) over random spectra")
{
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> time(-10.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto spec = random_spec(rng);
        const double t = time(rng);
        const Matrix closed = flow_closed_form(spec, t).entries;
        const Matrix expm = flow_expm(build_generator(spec), t).entries;
        CHECK((closed - expm).norm() <= 1e-10 * std::max(1.0, closed.norm()));
    }
}

TEST_CASE("flow is G-unitary, symplectic and a one-parameter group")
{
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> time(-10.0, 10.0);
    for (int trial = 0; trial < 30; ++trial) {
        const auto spec = random_spec(rng);
        const auto r = construct_unique_realization(spec);
        const double t = time(rng);
        const double s = time(rng);
        const Matrix phi = flow_closed_form(spec, t).entries;
        const Matrix& g = r.g.matrix();
        const Matrix& w = r.w.matrix();
        CHECK((phi.transpose() * g * phi - g).norm() <= 1e-10 * g.norm());
        CHECK((phi.transpose() * w * phi - w).norm() <= 1e-10 * w.norm());
        const Matrix composed = flow_closed_form(spec, s).entries * phi;
        const Matrix direct = flow_closed_form(spec, s + t).entries;
        CHECK((composed - direct).norm() <= 1e-10 * std::max(1.0, direct.norm()));
    }
}

TEST_CASE("flow is not unitary for the Euclidean metric when omega != 1")
{
    const FrequencySpec two({{2.0, 1}});
    const Matrix phi = flow_closed_form(two, 1.0).entries;
    CHECK((phi.transpose() * phi - Matrix::Identity(2, 2)).norm() > 0.5);
    const Matrix g = construct_unique_realization(two).g.matrix();
    CHECK((phi.transpose() * g * phi - g).norm() <= 1e-10);
}

TEST_CASE("finite-difference derivative of the flow converges at first order")
{
    const auto spec = FrequencySpec::from_frequencies({0.8, 2.5});
    const Matrix a = build_generator(spec).matrix();
    const Matrix id = Matrix::Identity(4, 4);
    auto err = [&](double h) { return ((flow_closed_form(spec, h).entries - id) / h - a).norm(); };
    const double h1 = 1e-2;
    const double h2 = 1e-3;
    const double slope = std::log(err(h1) / err(h2)) / std::log(h1 / h2);
    CHECK(slope == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("sin_over_omega series branch is continuous")
{
    CHECK(sin_over_omega(2.0, 0.0) == 0.0);
    CHECK(sin_over_omega(1e-8, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    for (double wt : {0.99e-4, 1.01e-4}) {
        const double w = 3.0;
        const double t = wt / w;
        CHECK(sin_over_omega(w, t) == doctest::Approx(std::sin(w * t) / w).epsilon(1e-14));
    }
}

TEST_CASE("evolve examples")
{
    const FrequencySpec two({{2.0, 1}});
    const auto r = construct_unique_realization(two);
    const PhaseSpacePoint x0{Vector::Constant(1, 2.0), Vector::Zero(1)};
    const PhaseSpacePoint probe{Vector::Zero(1), Vector::Ones(1)};
    const auto traj = evolve(r, x0, probe, {0.0, kPi / 4});
    REQUIRE(traj.states.size() == 2);
    CHECK(std::abs(traj.states[1].p(0)) <= 1e-15);
    CHECK(traj.states[1].q(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(traj.max_norm_drift() <= 1e-15);
    CHECK(traj.max_energy_drift() <= 1e-15);

    const auto period = evolve(r, x0, probe, {kPi});
    CHECK((period.states[0].stacked() - x0.stacked()).norm() <= 1e-14);

    const FrequencySpec one({{1.0, 1}});
    const auto r1 = construct_unique_realization(one);
    const PhaseSpacePoint y0{Vector::Constant(1, 0.6), Vector::Constant(1, -0.8)};
    for (const auto& state : evolve(r1, y0, y0, {0.3, 1.1, 7.0}).states) {
        CHECK(state.stacked().norm() == doctest::Approx(1.0).epsilon(1e-14));
    }

    CHECK_THROWS_AS(evolve(r, PhaseSpacePoint{Vector::Ones(2), Vector::Ones(2)}, probe, {1.0}), InputError);
}

TEST_CASE("conservation along evolution")
{
    std::mt19937_64 rng(43);
    std::vector<double> grid;
    for (int k = 0; k < 100; ++k) {
        grid.push_back(0.2 * k);
    }
    for (int trial = 0; trial < 10; ++trial) {
        const auto spec = random_spec(rng);
        const auto r = construct_unique_realization(spec);
        const auto n = spec.dimension();
        const auto x0 = PhaseSpacePoint::from_stacked(random_vector(rng, 2 * n));
        const auto y0 = PhaseSpacePoint::from_stacked(random_vector(rng, 2 * n));
        const auto traj = evolve(r, x0, y0, grid);
        const double scale = std::max(1.0, r.g.norm(x0.stacked()));
        CHECK(traj.max_norm_drift() <= 1e-10 * scale);
        CHECK(traj.max_symplectic_drift() <= 1e-10 * scale * std::max(1.0, y0.stacked().norm()));
        CHECK(traj.max_energy_drift() <= 1e-10 * scale * scale);
    }
}

TEST_CASE("complex evolution examples")
{
    const FrequencySpec two({{2.0, 1}});
    const auto r = construct_unique_realization(two);
    const PhaseSpacePoint x0{Vector::Constant(1, std::sqrt(2.0)), Vector::Zero(1)};
    const auto z0 = complex_evolution(r, x0, 0.0);
    CHECK(std::abs(z0(0) - std::complex<double>(1.0, 0.0)) <= 1e-15);
    const auto z = complex_evolution(r, x0, kPi / 4);
    CHECK(std::abs(z(0) - std::complex<double>(0.0, -1.0)) <= 1e-15);
}

TEST_CASE("real flow and complex evolution commute through U(0)")
{
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> time(-10.0, 10.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto spec = random_spec(rng);
        const auto r = construct_unique_realization(spec);
        const auto n = spec.dimension();
        const Vector x0 = random_vector(rng, 2 * n);
        const double t = time(rng);
        const auto u = canonical_transform(spec, 0.0);
        const ComplexVector via_real = complexify_standard(u.inverse_apply(flow_closed_form(spec, t).apply(x0)));
        const ComplexVector via_complex = complex_evolution(r, PhaseSpacePoint::from_stacked(x0), t);
        CHECK((via_real - via_complex).norm() <= 1e-11 * std::max(1.0, via_real.norm()));
    }
}

TEST_CASE("flow-domain check")
{
    const auto rule = gauss_legendre(0.1, 1000.0, 1000);
    const FrequencySpec spec({}, rule);
    std::vector<double> times;
    for (int k = 0; k <= 20; ++k) {
        times.push_back(0.05 * k);
    }
    const auto ok = check_flow_domain(omega_power(spec, -0.5), omega_power(spec, 0.5), spec, times);
    CHECK(ok.sup1 <= 1.0 + 1e-12);
    CHECK(ok.sup2 <= 1.0 + 1e-12);
    CHECK(ok.grid.size() == 1000);

    const Vector flat = Vector::Ones(spec.dimension());
    const auto bad = check_flow_domain(flat, flat, spec, {1.0});
    CHECK(bad.sup1 >= 100.0);

    CHECK_THROWS_AS(check_flow_domain(-flat, flat, spec, {1.0}), InputError);
    CHECK_THROWS_AS(check_flow_domain(Vector::Ones(3), flat, spec, {1.0}), InputError);
}
