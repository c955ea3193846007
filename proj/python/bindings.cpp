#include "segal_quant/cli.hpp"
#include "segal_quant/dynamics.hpp"
#include "segal_quant/errors.hpp"
#include "segal_quant/fock.hpp"
#include "segal_quant/json_io.hpp"
#include "segal_quant/realization.hpp"
#include "segal_quant/uniqueness.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace segal;

namespace {

FrequencySpec make_spec(const std::vector<std::pair<double, int>>& discrete,
                        const std::vector<std::pair<double, double>>& continuous)
{
    std::vector<DiscreteFrequency> d;
    for (const auto& [omega, mult] : discrete) {
        d.push_back({omega, mult});
    }
    std::vector<QuadratureNode> c;
    for (const auto& [node, weight] : continuous) {
        c.push_back({node, weight});
    }
    return FrequencySpec(d, c);
}

py::dict axioms_to_dict(const AxiomReport& report)
{
    py::dict out;
    for (const auto& c : report.checks) {
        out[py::str(c.name)] = py::dict(py::arg("value") = c.value, py::arg("tolerance") = c.tolerance,
                                        py::arg("pass") = c.pass);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Unitary realization of decoupled harmonic oscillators";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<SpecError>(m, "SpecError", base);
    py::register_exception<InputError>(m, "InputError", base);
    py::register_exception<MetricError>(m, "MetricError", base);
    py::register_exception<DegenerateFormError>(m, "DegenerateFormError", base);
    py::register_exception<NotNaturallyComplexError>(m, "NotNaturallyComplexError", base);
    py::register_exception<InconsistencyError>(m, "InconsistencyError", base);
    py::register_exception<StructuralError>(m, "StructuralError", base);
    py::register_exception<ScanFailure>(m, "ScanFailure", base);
    py::register_exception<RangeError>(m, "RangeError", base);
    py::register_exception<ResourceError>(m, "ResourceError", base);
    py::register_exception<ConfigError>(m, "ConfigError", base);

    py::class_<FrequencySpec>(m, "FrequencySpec")
        .def(py::init(&make_spec), py::arg("discrete"), py::arg("continuous") = std::vector<std::pair<double, double>>{},
             "discrete: list of (omega, multiplicity); continuous: list of (node, weight)")
        .def_static("from_frequencies", &FrequencySpec::from_frequencies, py::arg("omegas"))
        .def_property_readonly("dimension", &FrequencySpec::dimension)
        .def_property_readonly("frequencies", &FrequencySpec::frequencies)
        .def_property_readonly("weights", &FrequencySpec::weights)
        .def("degenerate_blocks", &FrequencySpec::degenerate_blocks)
        .def("to_json", [](const FrequencySpec& s) { return spec_to_json(s).dump(); })
        .def_static("from_json", [](const std::string& text) { return spec_from_json(nlohmann::json::parse(text)); })
        .def("__eq__", [](const FrequencySpec& a, const FrequencySpec& b) { return a == b; })
        .def("__repr__", [](const FrequencySpec& s) { return "FrequencySpec(" + spec_to_json(s).dump() + ")"; });

    m.def("gauss_legendre", [](double a, double b, int count) {
        std::vector<std::pair<double, double>> out;
        for (const auto& q : gauss_legendre(a, b, count)) {
            out.emplace_back(q.node, q.weight);
        }
        return out;
    }, py::arg("a"), py::arg("b"), py::arg("count"));

    m.def("omega_apply", &omega_apply, py::arg("spec"), py::arg("v"));
    m.def("build_generator", [](const FrequencySpec& s) { return build_generator(s).matrix(); }, py::arg("spec"));
    m.def("classical_hamiltonian", [](const FrequencySpec& s, const Vector& p, const Vector& q) {
        return classical_hamiltonian(s, {p, q});
    }, py::arg("spec"), py::arg("p"), py::arg("q"));

    py::class_<Realization>(m, "Realization")
        .def_property_readonly("spec", [](const Realization& r) { return r.spec; })
        .def_property_readonly("G", [](const Realization& r) { return r.g.matrix(); })
        .def_property_readonly("W", [](const Realization& r) { return r.w.matrix(); })
        .def_property_readonly("J", [](const Realization& r) { return r.j.matrix(); })
        .def_property_readonly("H", [](const Realization& r) { return r.h; });

    m.def("construct_unique_realization", &construct_unique_realization, py::arg("spec"));
    m.def("canonical_transform", [](const FrequencySpec& s, double alpha) { return canonical_transform(s, alpha).entries; },
          py::arg("spec"), py::arg("alpha") = 0.0);
    m.def("complex_unit_from", [](const Matrix& g, const Matrix& w) {
        return complex_unit_from(Metric(g), SymplecticForm(w)).matrix();
    }, py::arg("G"), py::arg("W"));
    m.def("complexify", [](const Matrix& j, const Vector& x) { return complexify(ComplexUnit(j), x); },
          py::arg("J"), py::arg("x"));

    m.def("verify_axioms", [](const Matrix& g, const Matrix& w, const Matrix& a, double tol,
                              const std::optional<Matrix>& ccr_target) {
        return axioms_to_dict(verify_axioms(g, w, a, tol, ccr_target.value_or(Matrix())));
    }, py::arg("G"), py::arg("W"), py::arg("A"), py::arg("tol") = kDefaultTolerance,
       py::arg("ccr_target") = py::none(), "ccr_target defaults to the unit-weight standard form");
    m.def("standard_symplectic", [](const Vector& weights) { return standard_symplectic(weights); },
          py::arg("weights"), "[[0, D], [-D, 0]] with D = diag(weights)");

    m.def("solve_metric_constraint", [](const FrequencySpec& s, double linear_tol, bool general) {
        return solve_metric_constraint(build_generator(s), linear_tol,
                                       general ? OffDiagonalBlock::General : OffDiagonalBlock::Symmetric);
    }, py::arg("spec"), py::arg("linear_tol") = 1e-10, py::arg("general_off_diagonal") = false);

    m.def("uniqueness_scan", [](const FrequencySpec& s, int restarts, std::uint64_t seed, double cluster_radius,
                                bool general, int threads) {
        auto problem = ConstraintProblem::for_spec(s);
        problem.restarts = restarts;
        problem.seed = seed;
        problem.cluster_radius = cluster_radius;
        problem.form = general ? OffDiagonalBlock::General : OffDiagonalBlock::Symmetric;
        problem.threads = threads;
        SolutionSet set;
        {
            py::gil_scoped_release release;
            set = uniqueness_scan(problem);
        }
        py::list solutions;
        for (const auto& sol : set.solutions) {
            solutions.append(py::dict(py::arg("G") = sol.g, py::arg("J") = sol.j,
                                      py::arg("cluster_size") = sol.cluster_size,
                                      py::arg("residual") = sol.residual,
                                      py::arg("axioms") = axioms_to_dict(sol.axioms)));
        }
        return py::dict(py::arg("solutions") = solutions, py::arg("converged") = set.converged,
                        py::arg("restarts") = static_cast<int>(set.restarts.size()),
                        py::arg("basis_dimension") = set.basis_dimension,
                        py::arg("min_separation") = set.min_separation);
    }, py::arg("spec"), py::arg("restarts") = 64, py::arg("seed") = 0, py::arg("cluster_radius") = 1e-6,
       py::arg("general_off_diagonal") = false, py::arg("threads") = 0);

    m.def("flow_closed_form", [](const FrequencySpec& s, double t) { return flow_closed_form(s, t).entries; },
          py::arg("spec"), py::arg("t"));
    m.def("flow_expm", [](const Matrix& a, double t) { return flow_expm(a, t).entries; }, py::arg("A"), py::arg("t"));

    m.def("evolve", [](const Realization& r, const Vector& x0, const Vector& probe, const std::vector<double>& t_grid) {
        const auto traj = evolve(r, PhaseSpacePoint::from_stacked(x0), PhaseSpacePoint::from_stacked(probe), t_grid);
        Matrix states(static_cast<Eigen::Index>(traj.states.size()), x0.size());
        for (std::size_t k = 0; k < traj.states.size(); ++k) {
            states.row(static_cast<Eigen::Index>(k)) = traj.states[k].stacked().transpose();
        }
        return py::dict(py::arg("states") = states, py::arg("max_norm_drift") = traj.max_norm_drift(),
                        py::arg("max_symplectic_drift") = traj.max_symplectic_drift(),
                        py::arg("max_energy_drift") = traj.max_energy_drift());
    }, py::arg("realization"), py::arg("x0"), py::arg("probe"), py::arg("t_grid"));

    m.def("complex_evolution", [](const Realization& r, const Vector& x0, double t) {
        return complex_evolution(r, PhaseSpacePoint::from_stacked(x0), t);
    }, py::arg("realization"), py::arg("x0"), py::arg("t"));

    m.def("check_flow_domain", [](const Vector& rho, const Vector& sigma, const FrequencySpec& s,
                                  const std::vector<double>& t_grid) {
        const auto c = check_flow_domain(rho, sigma, s, t_grid);
        return py::dict(py::arg("sup1") = c.sup1, py::arg("sup2") = c.sup2);
    }, py::arg("rho"), py::arg("sigma"), py::arg("spec"), py::arg("t_grid"));
    m.def("omega_power", &omega_power, py::arg("spec"), py::arg("exponent"));

    m.def("fock_dimension", &fock_dimension, py::arg("modes"), py::arg("n_max"));
    m.def("build_fock", [](const FrequencySpec& s, int n_max, std::size_t budget) {
        const auto fock = build_fock(s, n_max, budget);
        const auto ccr = ccr_residual(fock);
        return py::dict(py::arg("states") = fock.basis.states(), py::arg("annihilation") = fock.annihilation,
                        py::arg("spectrum") = second_quantized_spectrum(s, fock.basis),
                        py::arg("ccr_below_top") = ccr.below_top, py::arg("ccr_top_shell") = ccr.top_shell);
    }, py::arg("spec"), py::arg("n_max"), py::arg("memory_budget") = kDefaultFockMemoryBudget);
    m.def("evolution_group", [](const FrequencySpec& s, int n_max, double t) {
        return evolution_group(s, FockBasis(static_cast<int>(s.dimension()), n_max), t);
    }, py::arg("spec"), py::arg("n_max"), py::arg("t"));

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"segal-quant"};
        for (const auto& a : args) {
            argv.push_back(a.c_str());
        }
        return cli::run(static_cast<int>(argv.size()), argv.data());
    }, py::arg("args"), "Run the command-line tool in-process; returns the exit code.");
}
