#include "segal_quant/dynamics.hpp"

#include "segal_quant/errors.hpp"
#include "segal_quant/symplectic.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>

namespace segal {

double sin_over_omega(double omega, double t)
{
    const double x = omega * t;
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return t * (1.0 - x2 / 6.0 * (1.0 - x2 / 20.0));
    }
    return std::sin(x) / omega;
}

FlowOperator flow_closed_form(const FrequencySpec& spec, double t)
{
    const auto n = spec.dimension();
    Matrix phi = Matrix::Zero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double w = spec.frequencies()(i);
        const double c = std::cos(w * t);
        phi(i, i) = c;
        phi(i, n + i) = -w * std::sin(w * t);
        phi(n + i, i) = sin_over_omega(w, t);
        phi(n + i, n + i) = c;
    }
    return {t, std::move(phi)};
}

FlowOperator flow_expm(const Matrix& a, double t)
{
    if (a.rows() != a.cols()) {
        throw InputError("flow_expm: generator must be square");
    }
    if (!std::isfinite(t)) {
        throw RangeError("flow_expm: time is not finite");
    }
    const Matrix at = a * t;
    if (!at.allFinite()) {
        throw RangeError("flow_expm: A t is not finite");
    }
    Matrix phi = at.exp();
    if (!phi.allFinite()) {
        throw RangeError("flow_expm: matrix exponential overflowed");
    }
    return {t, std::move(phi)};
}

FlowOperator flow_expm(const GeneratorMatrix& a, double t)
{
    return flow_expm(a.matrix(), t);
}

double Trajectory::max_norm_drift() const
{
    double m = 0.0;
    for (const auto& s : log) {
        m = std::max(m, s.norm_drift);
    }
    return m;
}

double Trajectory::max_symplectic_drift() const
{
    double m = 0.0;
    for (const auto& s : log) {
        m = std::max(m, s.symplectic_drift);
    }
    return m;
}

double Trajectory::max_energy_drift() const
{
    double m = 0.0;
    for (const auto& s : log) {
        m = std::max(m, s.energy_drift);
    }
    return m;
}

Trajectory evolve(const Realization& r, const PhaseSpacePoint& x0, const PhaseSpacePoint& probe,
                  const std::vector<double>& t_grid)
{
    const auto n = r.modes();
    if (x0.p.size() != n || x0.q.size() != n || probe.p.size() != n || probe.q.size() != n) {
        throw InputError("evolve: phase-space point does not match the realization dimension");
    }
    const Vector x = x0.stacked();
    const Vector y = probe.stacked();
    const double norm0 = r.g.norm(x);
    const double pair0 = r.w.evaluate(x, y);
    const double energy0 = classical_hamiltonian(r.spec, x0);

    Trajectory traj;
    traj.times = t_grid;
    traj.states.reserve(t_grid.size());
    traj.log.reserve(t_grid.size());
    for (double t : t_grid) {
        const auto phi = flow_closed_form(r.spec, t);
        const Vector xt = phi.apply(x);
        const Vector yt = phi.apply(y);
        auto state = PhaseSpacePoint::from_stacked(xt);
        traj.log.push_back({t, std::abs(r.g.norm(xt) - norm0), std::abs(r.w.evaluate(xt, yt) - pair0),
                            std::abs(classical_hamiltonian(r.spec, state) - energy0)});
        traj.states.push_back(std::move(state));
    }
    return traj;
}

ComplexVector complex_evolution(const Realization& r, const PhaseSpacePoint& x0, double t)
{
    if (x0.p.size() != r.modes() || x0.q.size() != r.modes()) {
        throw InputError("complex_evolution: dimension mismatch");
    }
    const auto u0 = canonical_transform(r.spec, 0.0);
    ComplexVector z = complexify_standard(u0.inverse_apply(x0.stacked()));
    const Vector& omega = r.spec.frequencies();
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        z(i) *= std::polar(1.0, -omega(i) * t);
    }
    return z;
}

FlowDomainCheck check_flow_domain(const Vector& rho, const Vector& sigma, const FrequencySpec& spec,
                                  const std::vector<double>& t_grid)
{
    const auto n = spec.dimension();
    if (rho.size() != n || sigma.size() != n) {
        throw InputError("check_flow_domain: rho and sigma need one sample per spectrum coordinate");
    }
    if (!(rho.array() > 0.0).all() || !(sigma.array() > 0.0).all() || !rho.allFinite() ||
        !sigma.allFinite()) {
        throw InputError("check_flow_domain: rho and sigma must be positive at every node");
    }
    if (t_grid.empty()) {
        throw InputError("check_flow_domain: empty time grid");
    }
    FlowDomainCheck out;
    out.grid.assign(spec.frequencies().data(), spec.frequencies().data() + n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double k = spec.frequencies()(i);
        const double ratio = rho(i) / sigma(i);
        for (double t : t_grid) {
            const double s1 = std::abs(k * std::sin(k * t) * ratio);
            const double s2 = std::abs(sin_over_omega(k, t) / ratio);
            if (s1 > out.sup1) {
                out.sup1 = s1;
                out.sup1_node = k;
                out.sup1_time = t;
            }
            if (s2 > out.sup2) {
                out.sup2 = s2;
                out.sup2_node = k;
                out.sup2_time = t;
            }
        }
    }
    return out;
}

Vector omega_power(const FrequencySpec& spec, double exponent)
{
    return spec.frequencies().array().pow(exponent).matrix();
}

}  // namespace segal
