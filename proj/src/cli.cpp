#include "segal_quant/cli.hpp"

#include "segal_quant/dynamics.hpp"
#include "segal_quant/errors.hpp"
#include "segal_quant/fock.hpp"
#include "segal_quant/json_io.hpp"
#include "segal_quant/realization.hpp"
#include "segal_quant/uniqueness.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

namespace segal::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where)
{
    if (!obj.is_object()) {
        throw ConfigError(where + " must be an object");
    }
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& item : obj.items()) {
        if (!keys.contains(item.key())) {
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
        }
    }
}

double positive_number(const json& v, const std::string& what)
{
    if (!v.is_number() || !(v.get<double>() > 0.0)) {
        throw ConfigError(what + " must be a positive number");
    }
    return v.get<double>();
}

int positive_int(const json& v, const std::string& what)
{
    if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 1'000'000'000) {
        throw ConfigError(what + " must be a positive integer");
    }
    return v.get<int>();
}

std::vector<double> time_grid(const json& v, const std::string& what)
{
    std::vector<double> grid;
    if (v.is_array()) {
        for (const auto& t : v) {
            if (!t.is_number()) {
                throw ConfigError(what + " entries must be numbers");
            }
            grid.push_back(t.get<double>());
        }
    } else if (v.is_object()) {
        reject_unknown(v, {"start", "stop", "count"}, what);
        if (!v.contains("start") || !v.contains("stop") || !v.contains("count")) {
            throw ConfigError(what + " needs start, stop and count");
        }
        if (!v["start"].is_number() || !v["stop"].is_number()) {
            throw ConfigError(what + " start/stop must be numbers");
        }
        const double start = v["start"].get<double>();
        const double stop = v["stop"].get<double>();
        const int count = positive_int(v["count"], what + ".count");
        for (int k = 0; k < count; ++k) {
            grid.push_back(count == 1 ? start : start + (stop - start) * k / (count - 1));
        }
    } else {
        throw ConfigError(what + " must be an array or {start, stop, count}");
    }
    if (grid.empty()) {
        throw ConfigError(what + " is empty");
    }
    for (double t : grid) {
        if (!std::isfinite(t)) {
            throw ConfigError(what + " entries must be finite");
        }
    }
    return grid;
}

WeightFunction weight_function(const json& v, const std::string& what)
{
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        const std::string prefix = "omega_pow:";
        if (s.rfind(prefix, 0) != 0) {
            throw ConfigError(what + " must be \"omega_pow:<exponent>\" or an array of samples");
        }
        try {
            std::size_t used = 0;
            const double e = std::stod(s.substr(prefix.size()), &used);
            if (used != s.size() - prefix.size() || !std::isfinite(e)) {
                throw std::invalid_argument(s);
            }
            return e;
        } catch (const std::logic_error&) {
            throw ConfigError(what + ": cannot parse exponent in '" + s + "'");
        }
    }
    return vector_from_json(v);
}

Vector sample(const WeightFunction& f, const FrequencySpec& spec)
{
    if (const auto* e = std::get_if<double>(&f)) {
        return omega_power(spec, *e);
    }
    return std::get<Vector>(f);
}

json weight_to_json(const WeightFunction& f)
{
    if (const auto* e = std::get_if<double>(&f)) {
        std::ostringstream s;
        s << "omega_pow:" << *e;
        return s.str();
    }
    return vector_to_json(std::get<Vector>(f));
}

PhaseSpacePoint checked_point(const json& v, const FrequencySpec& spec, const std::string& what)
{
    auto x = point_from_json(v);
    if (x.dimension() != spec.dimension()) {
        throw ConfigError(what + " has dimension " + std::to_string(x.dimension()) +
                          ", spectrum has " + std::to_string(spec.dimension()));
    }
    return x;
}

bool include_matrix(const Matrix& m, const CommandOptions& options)
{
    return options.full_matrices || m.rows() <= kMatrixReportLimit;
}

void attach_matrix(Report& r, const std::string& name, const Matrix& m, const CommandOptions& options)
{
    if (include_matrix(m, options)) {
        r.matrices[name] = matrix_to_json(m);
    } else {
        r.matrices[name] = {{"omitted", true}, {"rows", m.rows()}, {"cols", m.cols()}};
    }
}

class Stopwatch {
public:
    double elapsed_ms() const
    {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<double> default_verify_grid()
{
    return {0.25, 1.0, 3.0, 10.0};
}

Vector random_vector(std::mt19937_64& rng, Eigen::Index size)
{
    std::normal_distribution<double> normal;
    Vector v(size);
    for (auto& x : v) {
        x = normal(rng);
    }
    return v;
}

std::string format_row(const std::vector<double>& values)
{
    std::ostringstream s;
    s << std::setprecision(12);
    for (std::size_t i = 0; i < values.size(); ++i) {
        s << (i ? "\t" : "") << values[i];
    }
    s << '\n';
    return s.str();
}

}  // namespace

double default_tolerance_from_env()
{
    if (const char* env = std::getenv(kToleranceEnv)) {
        char* end = nullptr;
        const double tol = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(tol > 0.0) || !std::isfinite(tol)) {
            throw ConfigError(std::string(kToleranceEnv) + " must be a positive number");
        }
        return tol;
    }
    return kDefaultTolerance;
}

RunConfig parse_config(const json& doc, double default_tolerance)
{
    reject_unknown(doc, {"spec", "tolerance", "t_grid", "x0", "probe", "verify", "scan", "fock", "domain_check"},
                   "config");
    if (!doc.contains("spec")) {
        throw ConfigError("config needs a 'spec' block");
    }
    RunConfig cfg(spec_from_json(doc["spec"]));
    cfg.echo = doc;
    cfg.tolerance = doc.contains("tolerance") ? positive_number(doc["tolerance"], "tolerance")
                                              : default_tolerance;
    if (doc.contains("t_grid")) {
        cfg.t_grid = time_grid(doc["t_grid"], "t_grid");
    }
    if (doc.contains("x0")) {
        cfg.x0 = checked_point(doc["x0"], cfg.spec, "x0");
    }
    if (doc.contains("probe")) {
        cfg.probe = checked_point(doc["probe"], cfg.spec, "probe");
    }
    if (doc.contains("verify")) {
        const auto& v = doc["verify"];
        reject_unknown(v, {"metric_override"}, "verify");
        if (v.contains("metric_override")) {
            const auto& m = v["metric_override"];
            const auto size = 2 * cfg.spec.dimension();
            if (m.is_string()) {
                if (m.get<std::string>() != "identity") {
                    throw ConfigError("verify.metric_override must be \"identity\" or a matrix");
                }
                cfg.metric_override = Matrix::Identity(size, size);
            } else {
                cfg.metric_override = matrix_from_json(m);
                if (cfg.metric_override->rows() != size || cfg.metric_override->cols() != size) {
                    throw ConfigError("verify.metric_override must be " + std::to_string(size) + "x" +
                                      std::to_string(size));
                }
            }
        }
    }
    if (doc.contains("scan")) {
        const auto& s = doc["scan"];
        reject_unknown(s, {"restarts", "seed", "cluster_radius", "linear_tol", "nonlinear_tol", "match_tol",
                           "off_diagonal", "threads"},
                       "scan");
        if (s.contains("restarts")) {
            cfg.scan.restarts = positive_int(s["restarts"], "scan.restarts");
        }
        if (s.contains("seed")) {
            if (!s["seed"].is_number_integer() || s["seed"].get<long long>() < 0) {
                throw ConfigError("scan.seed must be a nonnegative integer");
            }
            cfg.scan.seed = s["seed"].get<std::uint64_t>();
        }
        if (s.contains("cluster_radius")) {
            cfg.scan.cluster_radius = positive_number(s["cluster_radius"], "scan.cluster_radius");
        }
        if (s.contains("linear_tol")) {
            cfg.scan.linear_tol = positive_number(s["linear_tol"], "scan.linear_tol");
        }
        if (s.contains("nonlinear_tol")) {
            cfg.scan.nonlinear_tol = positive_number(s["nonlinear_tol"], "scan.nonlinear_tol");
        }
        if (s.contains("match_tol")) {
            cfg.scan.match_tol = positive_number(s["match_tol"], "scan.match_tol");
        }
        if (s.contains("off_diagonal")) {
            const auto& form = s["off_diagonal"];
            if (!form.is_string() || (form != "symmetric" && form != "general")) {
                throw ConfigError("scan.off_diagonal must be \"symmetric\" or \"general\"");
            }
            cfg.scan.general_off_diagonal = form == "general";
        }
        if (s.contains("threads")) {
            if (!s["threads"].is_number_integer() || s["threads"].get<int>() < 0) {
                throw ConfigError("scan.threads must be a nonnegative integer");
            }
            cfg.scan.threads = s["threads"].get<int>();
        }
    }
    if (doc.contains("fock")) {
        const auto& f = doc["fock"];
        reject_unknown(f, {"n_max", "t", "memory_budget_mb"}, "fock");
        if (f.contains("n_max")) {
            cfg.fock.n_max = positive_int(f["n_max"], "fock.n_max");
        }
        if (f.contains("t")) {
            if (!f["t"].is_number()) {
                throw ConfigError("fock.t must be a number");
            }
            cfg.fock.t = f["t"].get<double>();
        }
        if (f.contains("memory_budget_mb")) {
            cfg.fock.memory_budget =
                static_cast<std::size_t>(positive_number(f["memory_budget_mb"], "fock.memory_budget_mb") * (1 << 20));
        }
    }
    if (doc.contains("domain_check")) {
        const auto& d = doc["domain_check"];
        reject_unknown(d, {"rho", "sigma", "t_grid", "bound"}, "domain_check");
        if (d.contains("rho")) {
            cfg.domain.rho = weight_function(d["rho"], "domain_check.rho");
        }
        if (d.contains("sigma")) {
            cfg.domain.sigma = weight_function(d["sigma"], "domain_check.sigma");
        }
        if (d.contains("t_grid")) {
            cfg.domain.t_grid = time_grid(d["t_grid"], "domain_check.t_grid");
        }
        if (d.contains("bound")) {
            cfg.domain.bound = positive_number(d["bound"], "domain_check.bound");
        }
        for (const auto* f : {&cfg.domain.rho, &cfg.domain.sigma}) {
            if (const auto* v = std::get_if<Vector>(f); v && v->size() != cfg.spec.dimension()) {
                throw ConfigError("domain_check samples need one entry per spectrum coordinate");
            }
        }
    }
    return cfg;
}

bool Report::pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckEntry& c) { return c.pass; });
}

void Report::add(std::string name, double residual, double tolerance)
{
    add(std::move(name), residual, tolerance, residual <= tolerance);
}

void Report::add(std::string name, double residual, double tolerance, bool verdict)
{
    checks.push_back({std::move(name), residual, tolerance, verdict});
}

json Report::to_json() const
{
    json entries = json::array();
    for (const auto& c : checks) {
        entries.push_back({{"name", c.name},
                           {"residual", std::isfinite(c.residual) ? json(c.residual) : json(nullptr)},
                           {"tolerance", c.tolerance},
                           {"pass", c.pass}});
    }
    return {{"version", kReportVersion}, {"command", command}, {"config", config}, {"checks", entries},
            {"pass", pass()},            {"data", data},       {"matrices", matrices}, {"timings", timings}};
}

Report cmd_verify(const RunConfig& config, const CommandOptions& options)
{
    Stopwatch clock;
    Report report;
    report.command = "verify";
    report.config = config.echo;
    const double tol = config.tolerance;

    const auto r = construct_unique_realization(config.spec);
    const auto a = build_generator(config.spec);
    const Matrix g = config.metric_override.value_or(r.g.matrix());
    const Matrix& w = r.w.matrix();
    const auto axioms = verify_axioms(g, w, a.matrix(), tol, w);
    for (const auto& c : axioms.checks) {
        report.add(c.name, c.value, c.tolerance, c.pass);
    }

    const auto grid = config.t_grid.empty() ? default_verify_grid() : config.t_grid;
    double unitarity = 0.0;
    double symplecticity = 0.0;
    double oracle = 0.0;
    const bool run_oracle = 2 * config.spec.dimension() <= 2 * kMatrixReportLimit;
    for (double t : grid) {
        const auto phi = flow_closed_form(config.spec, t);
        const Matrix& p = phi.entries;
        unitarity = std::max(unitarity, relative_residual(p.transpose() * g * p - g, g));
        symplecticity = std::max(symplecticity, relative_residual(p.transpose() * w * p - w, w));
        if (run_oracle) {
            oracle = std::max(oracle, relative_residual(p - flow_expm(a, t).entries, p));
        }
    }
    report.add("flow-unitarity", unitarity, tol);
    report.add("flow-symplecticity", symplecticity, tol);
    if (run_oracle) {
        report.add("flow-oracle", oracle, tol);
    }
    report.data["flow_oracle_evaluated"] = run_oracle;

    std::mt19937_64 rng(0);
    double energy = 0.0;
    for (int k = 0; k < 16; ++k) {
        const Vector x = random_vector(rng, 2 * config.spec.dimension());
        const double quadratic = 0.5 * x.dot(g * (r.h * x));
        const double classical = classical_hamiltonian(config.spec, PhaseSpacePoint::from_stacked(x));
        energy = std::max(energy, std::abs(quadratic - classical) / std::max(1.0, std::abs(classical)));
    }
    report.add("energy-identity", energy, tol);

    report.data["spec"] = spec_to_json(config.spec);
    report.data["metric_override"] = config.metric_override.has_value();
    report.data["t_grid"] = grid;
    attach_matrix(report, "G", g, options);
    attach_matrix(report, "W", w, options);
    attach_matrix(report, "J", r.j.matrix(), options);
    attach_matrix(report, "H", r.h, options);
    attach_matrix(report, "A", a.matrix(), options);
    report.timings["total_ms"] = clock.elapsed_ms();
    return report;
}

Report cmd_uniqueness(const RunConfig& config, const CommandOptions& options)
{
    Stopwatch clock;
    Report report;
    report.command = "uniqueness";
    report.config = config.echo;

    auto problem = ConstraintProblem::for_spec(config.spec);
    problem.restarts = config.scan.restarts;
    problem.seed = config.scan.seed;
    problem.cluster_radius = config.scan.cluster_radius;
    problem.tolerances = {config.scan.linear_tol, config.scan.nonlinear_tol};
    problem.form = config.scan.general_off_diagonal ? OffDiagonalBlock::General : OffDiagonalBlock::Symmetric;
    problem.threads = config.scan.threads;

    report.data["restarts"] = problem.restarts;
    report.data["seed"] = problem.seed;
    report.data["cluster_radius"] = problem.cluster_radius;
    report.data["off_diagonal"] = config.scan.general_off_diagonal ? "general" : "symmetric";
    SolutionSet set;
    try {
        set = uniqueness_scan(problem);
    } catch (const ScanFailure& e) {
        report.add("scan-converged", 0.0, 1.0, false);
        report.data["failure"] = e.what();
        report.timings["total_ms"] = clock.elapsed_ms();
        return report;
    }
    const auto formula = construct_unique_realization(config.spec);
    report.add("scan-converged", static_cast<double>(set.converged), 1.0, set.converged >= 1);
    const auto clusters = static_cast<double>(set.solutions.size());
    report.add("cluster-count", std::abs(clusters - 1.0), 0.0, set.solutions.size() == 1);
    report.add("clusters-separated", std::isfinite(set.min_separation) ? set.min_separation : 0.0,
               10.0 * set.cluster_radius, set.well_separated);

    json solutions = json::array();
    double worst_distance = 0.0;
    bool axioms_ok = true;
    double worst_axiom = 0.0;
    for (std::size_t k = 0; k < set.solutions.size(); ++k) {
        const auto& s = set.solutions[k];
        const double distance = solution_distance(s.g, s.j, formula.g.matrix(), formula.j.matrix());
        worst_distance = std::max(worst_distance, distance);
        axioms_ok = axioms_ok && s.axioms.all_pass();
        worst_axiom = std::max(worst_axiom, s.axioms.max_residual());
        json entry = {{"cluster_size", s.cluster_size},
                      {"representative_restart", s.representative_restart},
                      {"residual", s.residual},
                      {"distance_to_formula", distance},
                      {"axioms_pass", s.axioms.all_pass()}};
        if (include_matrix(s.g, options)) {
            entry["G"] = matrix_to_json(s.g);
            entry["J"] = matrix_to_json(s.j);
        }
        solutions.push_back(std::move(entry));
    }
    report.add("formula-distance", worst_distance, config.scan.match_tol);
    report.add("solution-axioms", worst_axiom, config.scan.nonlinear_tol, axioms_ok);

    json restarts = json::array();
    for (const auto& o : set.restarts) {
        restarts.push_back({{"started", o.started},
                            {"converged", o.converged},
                            {"iterations", o.iterations},
                            {"residual", o.residual}});
    }
    report.data["solutions"] = solutions;
    report.data["clusters"] = set.solutions.size();
    report.data["converged"] = set.converged;
    report.data["basis_dimension"] = set.basis_dimension;
    report.data["restart_log"] = restarts;
    attach_matrix(report, "G_formula", formula.g.matrix(), options);
    attach_matrix(report, "J_formula", formula.j.matrix(), options);
    report.timings["total_ms"] = clock.elapsed_ms();
    return report;
}

Report cmd_evolve(const RunConfig& config, const CommandOptions&)
{
    Stopwatch clock;
    Report report;
    report.command = "evolve";
    report.config = config.echo;
    if (!config.x0) {
        throw ConfigError("evolve needs an initial state 'x0'");
    }
    const auto grid = config.t_grid.empty() ? time_grid(json{{"start", 0.0}, {"stop", 10.0}, {"count", 100}}, "t_grid")
                                            : config.t_grid;
    const auto r = construct_unique_realization(config.spec);
    const PhaseSpacePoint probe = config.probe.value_or(PhaseSpacePoint{config.x0->q, config.x0->p});
    const auto traj = evolve(r, *config.x0, probe, grid);

    const double scale = std::max(1.0, classical_hamiltonian(config.spec, *config.x0));
    const double tol = config.tolerance;
    report.add("norm-drift", traj.max_norm_drift(), tol * std::max(1.0, r.g.norm(config.x0->stacked())));
    report.add("symplectic-drift", traj.max_symplectic_drift(),
               tol * std::max(1.0, r.g.norm(config.x0->stacked()) * r.g.norm(probe.stacked())));
    report.add("energy-drift", traj.max_energy_drift(), tol * scale);

    json rows = json::array();
    std::string table = "# t";
    const auto n = config.spec.dimension();
    for (Eigen::Index i = 0; i < n; ++i) {
        table += "\tp" + std::to_string(i);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        table += "\tq" + std::to_string(i);
    }
    table += "\tnorm_drift\tenergy_drift\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto& x = traj.states[k];
        const auto& log = traj.log[k];
        rows.push_back({{"t", log.t},
                        {"p", vector_to_json(x.p)},
                        {"q", vector_to_json(x.q)},
                        {"norm_drift", log.norm_drift},
                        {"symplectic_drift", log.symplectic_drift},
                        {"energy_drift", log.energy_drift}});
        std::vector<double> values{log.t};
        values.insert(values.end(), x.p.data(), x.p.data() + n);
        values.insert(values.end(), x.q.data(), x.q.data() + n);
        values.push_back(log.norm_drift);
        values.push_back(log.energy_drift);
        table += format_row(values);
    }
    report.data["trajectory"] = rows;
    report.data["probe"] = point_to_json(probe);
    report.table = std::move(table);
    report.timings["total_ms"] = clock.elapsed_ms();
    return report;
}

Report cmd_fock(const RunConfig& config, const CommandOptions& options)
{
    Stopwatch clock;
    Report report;
    report.command = "fock";
    report.config = config.echo;
    const auto fock = build_fock(config.spec, config.fock.n_max, config.fock.memory_budget);
    const auto& basis = fock.basis;
    const Vector spectrum = second_quantized_spectrum(config.spec, basis);
    const Matrix hamiltonian = spectrum.asDiagonal();

    const auto ccr = ccr_residual(fock);
    report.add("ccr-below-top-shell", ccr.below_top, 1e-12);

    double number_conservation = 0.0;
    double ladder_hamiltonian = 0.0;
    Matrix from_ladders = Matrix::Zero(basis.size(), basis.size());
    for (int i = 0; i < basis.modes(); ++i) {
        const Matrix number = fock.creation[static_cast<std::size_t>(i)] * fock.annihilation[static_cast<std::size_t>(i)];
        number_conservation = std::max(number_conservation, (hamiltonian * number - number * hamiltonian).norm());
        from_ladders += config.spec.frequencies()(i) * number;
    }
    ladder_hamiltonian = relative_residual(from_ladders - hamiltonian, hamiltonian);
    report.add("number-conservation", number_conservation, 1e-12);
    report.add("dGamma-vs-ladders", ladder_hamiltonian, config.tolerance);

    const double t = config.fock.t;
    const ComplexMatrix u = evolution_group(config.spec, basis, t);
    const double unitarity = (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
    report.add("evolution-unitarity", unitarity, 1e-12);

    const auto r = construct_unique_realization(config.spec);
    const auto u0 = canonical_transform(config.spec, 0.0);
    const auto n = config.spec.dimension();
    ComplexMatrix one_particle(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Vector e = Vector::Zero(2 * n);
        e(i) = 1.0;
        one_particle.col(i) = complex_evolution(r, PhaseSpacePoint::from_stacked(u0.apply(e)), t);
    }
    const double functoriality = (one_particle_block(u, basis) - one_particle).norm();
    report.add("one-particle-functoriality", functoriality, 1e-12);

    json states = json::array();
    std::string table = "# index\toccupation\tenergy\n";
    for (Eigen::Index k = 0; k < basis.size(); ++k) {
        states.push_back({{"occupation", basis.state(k)}, {"energy", spectrum(k)}});
        std::ostringstream row;
        row << k << "\t(";
        for (std::size_t i = 0; i < basis.state(k).size(); ++i) {
            row << (i ? "," : "") << basis.state(k)[i];
        }
        row << ")\t" << std::setprecision(12) << spectrum(k) << '\n';
        table += row.str();
    }
    report.data["dimension"] = basis.size();
    report.data["n_max"] = basis.cutoff();
    report.data["spectrum"] = vector_to_json(spectrum);
    report.data["states"] = states;
    report.data["ccr_top_shell_deviation"] = ccr.top_shell;
    json phases = json::array();
    for (Eigen::Index k = 0; k < u.rows(); ++k) {
        phases.push_back({u(k, k).real(), u(k, k).imag()});
    }
    report.data["phases"] = phases;
    report.data["t"] = t;
    if (include_matrix(hamiltonian, options)) {
        report.matrices["dGamma_H"] = matrix_to_json(hamiltonian);
    }
    report.table = std::move(table);
    report.timings["total_ms"] = clock.elapsed_ms();
    return report;
}

Report cmd_domain_check(const RunConfig& config, const CommandOptions&)
{
    Stopwatch clock;
    Report report;
    report.command = "domain-check";
    report.config = config.echo;
    const auto check = check_flow_domain(sample(config.domain.rho, config.spec),
                                         sample(config.domain.sigma, config.spec), config.spec,
                                         config.domain.t_grid);
    report.add("sup1-bounded", check.sup1, config.domain.bound);
    report.add("sup2-bounded", check.sup2, config.domain.bound);
    report.data["sup1"] = {{"value", check.sup1}, {"node", check.sup1_node}, {"t", check.sup1_time}};
    report.data["sup2"] = {{"value", check.sup2}, {"node", check.sup2_node}, {"t", check.sup2_time}};
    report.data["rho"] = weight_to_json(config.domain.rho);
    report.data["sigma"] = weight_to_json(config.domain.sigma);
    report.data["nodes"] = check.grid.size();
    report.data["t_grid"] = config.domain.t_grid;
    report.timings["total_ms"] = clock.elapsed_ms();
    return report;
}

int run(int argc, const char* const* argv)
{
    CLI::App app{"Construct and verify the unique unitary realization of decoupled harmonic oscillators",
                 "segal-quant"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string table_path;
    bool full_matrices = false;
    std::optional<std::uint64_t> seed;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"verify", "construct the realization and check every axiom and flow invariant"},
        {"uniqueness", "re-derive the realization by solving the constraint system from random starts"},
        {"evolve", "propagate a state and log norm, symplectic and energy drift"},
        {"fock", "build the truncated Fock space, dGamma(H) and Gamma(U_t)"},
        {"domain-check", "evaluate the flow-domain boundedness conditions"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "run configuration (JSON)")->required();
        sub->add_flag("--full-matrices", full_matrices, "include matrices larger than 64x64 in the report");
        sub->add_option("--seed", seed, "override scan.seed");
        sub->add_option("--out", out_path, "write the report here instead of stdout");
        sub->add_option("--table", table_path, "write the plain-text trajectory/spectrum table here");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitInvalidInput;
    }
    try {
        const std::string command = app.get_subcommands().front()->get_name();

        RunConfig config = [&]() -> RunConfig {
            std::ifstream in(config_path);
            if (!in) {
                throw ConfigError("cannot open config file '" + config_path + "'");
            }
            json doc;
            try {
                doc = json::parse(in);
            } catch (const json::parse_error& e) {
                throw ConfigError(std::string("config is not valid JSON: ") + e.what());
            }
            return parse_config(doc, default_tolerance_from_env());
        }();
        if (seed) {
            config.scan.seed = *seed;
            config.echo["scan"]["seed"] = *seed;
        }

        const CommandOptions options{full_matrices};
        Report report;
        if (command == "verify") {
            report = cmd_verify(config, options);
        } else if (command == "uniqueness") {
            report = cmd_uniqueness(config, options);
        } else if (command == "evolve") {
            report = cmd_evolve(config, options);
        } else if (command == "fock") {
            report = cmd_fock(config, options);
        } else {
            report = cmd_domain_check(config, options);
        }

        const std::string text = report.to_json().dump(2) + "\n";
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(out_path);
            if (!out) {
                throw ConfigError("cannot write report to '" + out_path + "'");
            }
            out << text;
        }
        if (!table_path.empty() && !report.table.empty()) {
            std::ofstream table(table_path);
            if (!table) {
                throw ConfigError("cannot write table to '" + table_path + "'");
            }
            table << report.table;
        }
        for (const auto& c : report.checks) {
            if (!c.pass) {
                std::cerr << "FAIL " << c.name << ": " << c.residual << " (tolerance " << c.tolerance << ")\n";
            }
        }
        return report.pass() ? kExitPass : kExitCheckFailed;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed config: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    }
}

}  // namespace segal::cli
