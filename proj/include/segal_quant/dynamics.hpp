#pragma once

#include "segal_quant/oscillator_model.hpp"
#include "segal_quant/realization.hpp"

#include <vector>

namespace segal {

/// Propagator phi_t = exp(A t) on the 2n-dimensional phase space.
struct FlowOperator {
    double t = 0.0;
    Matrix entries;

    Vector apply(const Vector& x) const { return entries * x; }
};

/// Per-frequency blocks [[cos wt, -w sin wt], [sin(wt)/w, cos wt]].
FlowOperator flow_closed_form(const FrequencySpec& spec, double t);

/// exp(A t) by scaling and squaring with a Pade approximant. Throws
/// RangeError if the result is not finite.
FlowOperator flow_expm(const Matrix& a, double t);
FlowOperator flow_expm(const GeneratorMatrix& a, double t);

/// sin(w t) / w, with a series branch for |w t| < 1e-4.
double sin_over_omega(double omega, double t);

struct InvariantSample {
    double t = 0.0;
    double norm_drift = 0.0;        ///< | ||x(t)||_G - ||x0||_G |
    double symplectic_drift = 0.0;  ///< | w(x(t), y(t)) - w(x0, y0) |
    double energy_drift = 0.0;      ///< | K(x(t)) - K(x0) |
};

struct Trajectory {
    std::vector<double> times;
    std::vector<PhaseSpacePoint> states;
    std::vector<InvariantSample> log;

    double max_norm_drift() const;
    double max_symplectic_drift() const;
    double max_energy_drift() const;
};

/// x(t) = phi_t x0 over t_grid, logging drift of the G-norm, of the
/// symplectic pairing with the co-evolved probe y0, and of the energy.
Trajectory evolve(const Realization& r, const PhaseSpacePoint& x0, const PhaseSpacePoint& probe,
                  const std::vector<double>& t_grid);

/// Evolution in the complex picture: z(t)_i = exp(-i w_i t) z0_i with
/// z0 = complexify(U(0)^{-1} x0).
ComplexVector complex_evolution(const Realization& r, const PhaseSpacePoint& x0, double t);

struct FlowDomainCheck {
    double sup1 = 0.0;          ///< sup |k sin(kt) rho/sigma|
    double sup1_node = 0.0;
    double sup1_time = 0.0;
    double sup2 = 0.0;          ///< sup |sin(kt)/k sigma/rho|
    double sup2_node = 0.0;
    double sup2_time = 0.0;
    std::vector<double> grid;   ///< nodes k used
};

/// Evaluates both boundedness quantities over spec nodes x t_grid; rho and
/// sigma hold one positive sample per spec coordinate. Throws InputError on
/// nonpositive samples or length mismatch.
FlowDomainCheck check_flow_domain(const Vector& rho, const Vector& sigma, const FrequencySpec& spec,
                                  const std::vector<double>& t_grid);

/// Samples k^exponent at every spec coordinate.
Vector omega_power(const FrequencySpec& spec, double exponent);

}  // namespace segal
