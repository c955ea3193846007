#include "segal_quant/uniqueness.hpp"

#include "segal_quant/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

namespace segal {

namespace {

constexpr double kMaxFormCondition = 1e12;
constexpr int kStartDraws = 64;

// Frobenius-isometric coordinates on symmetric m x m matrices.
struct SymmetricCoordinates {
    Eigen::Index m;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;

    explicit SymmetricCoordinates(Eigen::Index size) : m(size)
    {
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = i; j < m; ++j) {
                pairs.emplace_back(i, j);
            }
        }
    }

    /// Position of (i, j), i <= j, in `pairs`.
    Eigen::Index index(Eigen::Index i, Eigen::Index j) const
    {
        return i * m - i * (i - 1) / 2 + (j - i);
    }

    Matrix assemble(const Vector& theta) const
    {
        Matrix s = Matrix::Zero(m, m);
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            const auto [i, j] = pairs[k];
            if (i == j) {
                s(i, i) = theta(static_cast<Eigen::Index>(k));
            } else {
                s(i, j) = s(j, i) = theta(static_cast<Eigen::Index>(k)) / std::sqrt(2.0);
            }
        }
        return s;
    }
};

void normalize_sign(Matrix& b)
{
    double key = b.trace();
    if (std::abs(key) < 1e-12 * b.norm()) {
        for (Eigen::Index k = 0; k < b.size(); ++k) {
            if (std::abs(b.data()[k]) > 1e-12 * b.norm()) {
                key = b.data()[k];
                break;
            }
        }
    }
    if (key < 0.0) {
        b = -b;
    }
}

bool positive_definite(const Matrix& g)
{
    Eigen::LLT<Matrix> llt(g);
    return llt.info() == Eigen::Success;
}

Matrix combine(const std::vector<Matrix>& basis, const Vector& c)
{
    Matrix g = Matrix::Zero(basis.front().rows(), basis.front().cols());
    for (std::size_t k = 0; k < basis.size(); ++k) {
        g += c(static_cast<Eigen::Index>(k)) * basis[k];
    }
    return g;
}

double complex_residual(const Matrix& g, const Matrix& w)
{
    Eigen::LLT<Matrix> llt(g);
    const Matrix j = llt.solve(w);
    return (j * j + Matrix::Identity(g.rows(), g.cols())).norm();
}

// Root finding on F(G) = G + W G^{-1} W, which vanishes exactly when
// J = G^{-1} W squares to -1 (F = G (J^2 + I)). Levenberg-Marquardt in the
// coefficients of the constraint basis; iterates leaving the positive
// definite cone are rejected.
RestartOutcome solve_restart(const std::vector<Matrix>& basis, const Matrix& w, Vector c,
                             const ConstraintProblem& problem)
{
    RestartOutcome out;
    out.started = true;
    const auto d = static_cast<Eigen::Index>(basis.size());
    const auto m = w.rows();

    auto evaluate = [&](const Vector& coeffs, Matrix& g, Matrix& ginv, Vector& r) -> bool {
        g = combine(basis, coeffs);
        Eigen::LLT<Matrix> llt(g);
        if (llt.info() != Eigen::Success) {
            return false;
        }
        ginv = llt.solve(Matrix::Identity(m, m));
        const Matrix f = g + w * ginv * w;
        r = Eigen::Map<const Vector>(f.data(), f.size());
        return r.allFinite();
    };

    Matrix g;
    Matrix ginv;
    Vector r;
    if (!evaluate(c, g, ginv, r)) {
        out.started = false;
        return out;
    }
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    Matrix jac(m * m, d);
    double best_residual = complex_residual(g, w);

    int iter = 0;
    for (; iter < problem.max_iterations; ++iter) {
        for (Eigen::Index k = 0; k < d; ++k) {
            const Matrix& b = basis[static_cast<std::size_t>(k)];
            const Matrix df = b - w * ginv * b * ginv * w;
            jac.col(k) = Eigen::Map<const Vector>(df.data(), df.size());
        }
        const Matrix jtj = jac.transpose() * jac;
        const Vector grad = jac.transpose() * r;
        const Vector scale = jtj.diagonal().cwiseMax(1e-12 * std::max(1.0, jtj.diagonal().maxCoeff()));

        bool accepted = false;
        while (lambda < 1e16) {
            Matrix lhs = jtj;
            lhs.diagonal() += lambda * scale;
            const Vector step = lhs.ldlt().solve(-grad);
            const Vector trial = c + step;
            Matrix g_t;
            Matrix ginv_t;
            Vector r_t;
            if (evaluate(trial, g_t, ginv_t, r_t) && r_t.squaredNorm() < cost) {
                const double rel_step = step.norm() / std::max(1e-300, c.norm());
                c = trial;
                g = std::move(g_t);
                ginv = std::move(ginv_t);
                r = std::move(r_t);
                cost = r.squaredNorm();
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
                best_residual = complex_residual(g, w);
                if (rel_step < 1e-15) {
                    lambda = 1e16;
                }
                break;
            }
            lambda *= 4.0;
        }
        if (!accepted || lambda >= 1e16) {
            break;
        }
        if (best_residual <= 1e-3 * problem.tolerances.nonlinear && cost < 1e-28) {
            break;
        }
    }
    out.iterations = iter;
    out.residual = best_residual;
    out.converged = best_residual <= problem.tolerances.nonlinear;
    out.coefficients = std::move(c);
    return out;
}

}  // namespace

std::vector<Matrix> solve_metric_constraint(const GeneratorMatrix& a, double linear_tol,
                                            OffDiagonalBlock form)
{
    return solve_metric_constraint(a.matrix(), linear_tol, form);
}

std::vector<Matrix> solve_metric_constraint(const Matrix& a, double linear_tol, OffDiagonalBlock form)
{
    if (a.rows() != a.cols() || a.rows() == 0 || a.rows() % 2 != 0) {
        throw InputError("solve_metric_constraint: generator must be square of even size");
    }
    const auto m = a.rows();
    const auto n = m / 2;
    const SymmetricCoordinates coords(m);
    const auto params = static_cast<Eigen::Index>(coords.pairs.size());

    // Sparse rows of the linear map theta -> upper triangle of S A + A^T S
    // (plus the off-diagonal symmetry rows), as (column, value) lists.
    std::vector<std::vector<std::pair<Eigen::Index, double>>> rows(static_cast<std::size_t>(params));
    const double r2 = 1.0 / std::sqrt(2.0);
    for (Eigen::Index k = 0; k < params; ++k) {
        const auto [i, j] = coords.pairs[static_cast<std::size_t>(k)];
        const double s = i == j ? 1.0 : r2;
        // Entries of E = s (e_i e_j^T + e_j e_i^T) (or e_i e_i^T) times A
        // and A^T times E are confined to rows i, j and columns i, j.
        auto image = [&](Eigen::Index r, Eigen::Index c) {
            double v = 0.0;
            if (r == i) {
                v += s * a(j, c);
            }
            if (r == j && i != j) {
                v += s * a(i, c);
            }
            if (c == j) {
                v += s * a(i, r);
            }
            if (c == i && i != j) {
                v += s * a(j, r);
            }
            return v;
        };
        std::vector<Eigen::Index> touched;
        for (Eigen::Index t = 0; t < m; ++t) {
            for (Eigen::Index fixed : {i, j}) {
                const Eigen::Index p = std::min(fixed, t);
                const Eigen::Index q = std::max(fixed, t);
                const Eigen::Index row = coords.index(p, q);
                if (std::find(touched.begin(), touched.end(), row) != touched.end()) {
                    continue;
                }
                touched.push_back(row);
                const double v = image(p, q);
                if (v != 0.0) {
                    rows[static_cast<std::size_t>(row)].emplace_back(k, v);
                }
            }
        }
    }
    if (form == OffDiagonalBlock::Symmetric) {
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i + 1; j < n; ++j) {
                rows.push_back({{coords.index(i, n + j), r2}, {coords.index(j, n + i), -r2}});
            }
        }
    }

    // The map is block diagonal after permutation; solve each connected
    // block of coordinates densely.
    std::vector<Eigen::Index> parent(static_cast<std::size_t>(params));
    for (Eigen::Index k = 0; k < params; ++k) {
        parent[static_cast<std::size_t>(k)] = k;
    }
    auto find = [&](Eigen::Index x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (const auto& row : rows) {
        for (std::size_t t = 1; t < row.size(); ++t) {
            parent[static_cast<std::size_t>(find(row[t].first))] = find(row[0].first);
        }
    }
    std::vector<std::vector<Eigen::Index>> members;
    std::vector<Eigen::Index> component_of(static_cast<std::size_t>(params), -1);
    std::vector<Eigen::Index> local(static_cast<std::size_t>(params), -1);
    std::vector<Eigen::Index> root_slot(static_cast<std::size_t>(params), -1);
    for (Eigen::Index k = 0; k < params; ++k) {
        const auto root = static_cast<std::size_t>(find(k));
        if (root_slot[root] < 0) {
            root_slot[root] = static_cast<Eigen::Index>(members.size());
            members.emplace_back();
        }
        const auto c = root_slot[root];
        component_of[static_cast<std::size_t>(k)] = c;
        local[static_cast<std::size_t>(k)] = static_cast<Eigen::Index>(members[static_cast<std::size_t>(c)].size());
        members[static_cast<std::size_t>(c)].push_back(k);
    }
    std::vector<std::vector<std::size_t>> component_rows(members.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!rows[r].empty()) {
            component_rows[static_cast<std::size_t>(component_of[static_cast<std::size_t>(rows[r][0].first)])].push_back(r);
        }
    }

    struct Block {
        Vector sigma;
        Matrix v;
    };
    std::vector<Block> blocks;
    double sigma_max = 0.0;
    for (std::size_t c = 0; c < members.size(); ++c) {
        const auto cols = static_cast<Eigen::Index>(members[c].size());
        Matrix dense = Matrix::Zero(std::max<Eigen::Index>(static_cast<Eigen::Index>(component_rows[c].size()), 1), cols);
        for (std::size_t r = 0; r < component_rows[c].size(); ++r) {
            for (const auto& [k, v] : rows[component_rows[c][r]]) {
                dense(static_cast<Eigen::Index>(r), local[static_cast<std::size_t>(k)]) += v;
            }
        }
        Eigen::JacobiSVD<Matrix> svd(dense, Eigen::ComputeFullV);
        if (svd.singularValues().size() > 0) {
            sigma_max = std::max(sigma_max, svd.singularValues()(0));
        }
        blocks.push_back({svd.singularValues(), svd.matrixV()});
    }

    const double threshold = linear_tol * std::max(sigma_max, 1.0);
    std::vector<Matrix> basis;
    for (std::size_t c = 0; c < members.size(); ++c) {
        const auto& block = blocks[c];
        for (Eigen::Index k = 0; k < block.v.cols(); ++k) {
            const double s = k < block.sigma.size() ? block.sigma(k) : 0.0;
            if (s > threshold) {
                continue;
            }
            Vector theta = Vector::Zero(params);
            for (std::size_t t = 0; t < members[c].size(); ++t) {
                theta(members[c][t]) = block.v(static_cast<Eigen::Index>(t), k);
            }
            Matrix b = coords.assemble(theta);
            normalize_sign(b);
            basis.push_back(std::move(b));
        }
    }
    if (basis.empty()) {
        throw StructuralError("metric constraint has no nonzero symmetric solution");
    }
    return basis;
}

bool AxiomReport::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.pass; });
}

double AxiomReport::max_residual() const
{
    double worst = 0.0;
    for (const auto& c : checks) {
        if (c.name == "G-positivity" || c.name == "W-nondegeneracy") {
            continue;
        }
        if (!std::isfinite(c.value)) {
            return std::numeric_limits<double>::infinity();
        }
        worst = std::max(worst, c.value);
    }
    return worst;
}

const AxiomCheck& AxiomReport::at(std::string_view name) const
{
    for (const auto& c : checks) {
        if (c.name == name) {
            return c;
        }
    }
    throw InputError("no axiom check named " + std::string(name));
}

AxiomReport verify_axioms(const Matrix& g, const Matrix& w, const Matrix& a, double tol,
                          const Matrix& ccr_target)
{
    const auto m = g.rows();
    if (g.cols() != m || w.rows() != m || w.cols() != m || a.rows() != m || a.cols() != m ||
        m % 2 != 0 || m == 0) {
        throw InputError("verify_axioms: matrices must be square of one even size");
    }
    const Matrix target = ccr_target.size() == 0 ? standard_symplectic(m / 2) : ccr_target;
    if (target.rows() != m || target.cols() != m) {
        throw InputError("verify_axioms: CCR target has the wrong size");
    }
    const double inf = std::numeric_limits<double>::infinity();
    AxiomReport report;
    auto residual = [&](std::string name, double value) {
        report.checks.push_back({std::move(name), value, tol, value <= tol});
    };

    residual("G-symmetry", relative_residual(g - g.transpose(), g));
    const double min_eig = min_symmetric_eigenvalue(g);
    report.checks.push_back({"G-positivity", min_eig, 0.0, min_eig > 0.0});
    const Matrix ga = g * a;
    residual("A-antisymmetry", relative_residual(ga + a.transpose() * g, ga));
    residual("W-antisymmetry", relative_residual(w + w.transpose(), w));
    const double cond = condition_number(w);
    report.checks.push_back(
        {"W-nondegeneracy", std::isfinite(cond) ? 1.0 / cond : 0.0, 1.0 / kMaxFormCondition,
         cond <= kMaxFormCondition});
    residual("CCR", relative_residual(w - target, target));

    Eigen::FullPivLU<Matrix> lu(g);
    if (!lu.isInvertible()) {
        residual("J^2+I", inf);
        residual("GJ-W", inf);
        residual("[J,H]", inf);
        return report;
    }
    const Matrix j = lu.solve(w);
    const Matrix id = Matrix::Identity(m, m);
    residual("J^2+I", relative_residual(j * j + id, id));
    residual("GJ-W", relative_residual(g * j - w, w));
    const Matrix h = j * a;
    const Matrix jh = j * h;
    residual("[J,H]", relative_residual(jh - h * j, jh));
    return report;
}

ConstraintProblem ConstraintProblem::for_spec(const FrequencySpec& spec)
{
    return ConstraintProblem{build_generator(spec), SymplecticForm::standard(spec.weights())};
}

void ConstraintProblem::validate() const
{
    if (!(tolerances.linear > 0.0) || !(tolerances.nonlinear > 0.0)) {
        throw InputError("scan tolerances must be positive");
    }
    if (restarts < 1) {
        throw InputError("scan needs at least one restart");
    }
    if (!(cluster_radius > 0.0)) {
        throw InputError("cluster radius must be positive");
    }
    if (max_iterations < 1) {
        throw InputError("max_iterations must be positive");
    }
    if (ccr_target.size() != a.matrix().rows()) {
        throw InputError("CCR target and generator sizes differ");
    }
}

double solution_distance(const Matrix& g1, const Matrix& j1, const Matrix& g2, const Matrix& j2)
{
    return std::sqrt((g1 - g2).squaredNorm() + (j1 - j2).squaredNorm());
}

SolutionSet uniqueness_scan(const ConstraintProblem& problem)
{
    problem.validate();
    const Matrix& w = problem.ccr_target.matrix();
    const auto m = w.rows();
    if (problem.ccr_target.condition() > kMaxFormCondition) {
        throw DegenerateFormError("CCR target form is degenerate");
    }
    const auto basis = solve_metric_constraint(problem.a, problem.tolerances.linear, problem.form);
    const auto d = static_cast<Eigen::Index>(basis.size());

    // Start points are drawn sequentially so the scan does not depend on
    // how restarts are distributed over threads.
    std::mt19937_64 rng(problem.seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> log_scale(-3.0, 3.0);
    std::vector<std::optional<Vector>> starts(static_cast<std::size_t>(problem.restarts));
    for (auto& start : starts) {
        for (int draw = 0; draw < kStartDraws; ++draw) {
            Matrix x(m, m);
            for (Eigen::Index k = 0; k < x.size(); ++k) {
                x.data()[k] = normal(rng);
            }
            const Matrix spd = std::exp(log_scale(rng)) *
                               (x * x.transpose() / static_cast<double>(m) + 1e-3 * Matrix::Identity(m, m));
            Vector c(d);
            for (Eigen::Index k = 0; k < d; ++k) {
                c(k) = (spd.array() * basis[static_cast<std::size_t>(k)].array()).sum();
            }
            if (positive_definite(combine(basis, c))) {
                start = std::move(c);
                break;
            }
        }
    }

    SolutionSet result;
    result.cluster_radius = problem.cluster_radius;
    result.basis_dimension = static_cast<int>(d);
    result.restarts.resize(starts.size());

    unsigned threads = problem.threads > 0 ? static_cast<unsigned>(problem.threads)
                                           : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(starts.size()));
    auto worker = [&](unsigned offset) {
        for (std::size_t i = offset; i < starts.size(); i += threads) {
            if (starts[i]) {
                result.restarts[i] = solve_restart(basis, w, *starts[i], problem);
            }
        }
    };
    if (threads <= 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker, t);
        }
    }

    double best = std::numeric_limits<double>::infinity();
    int started = 0;
    for (std::size_t i = 0; i < result.restarts.size(); ++i) {
        const auto& outcome = result.restarts[i];
        started += outcome.started ? 1 : 0;
        if (outcome.started) {
            best = std::min(best, outcome.residual);
        }
        if (!outcome.converged) {
            continue;
        }
        ++result.converged;
        const Matrix g = combine(basis, outcome.coefficients);
        const Matrix j = Eigen::LLT<Matrix>(g).solve(w);
        bool placed = false;
        for (auto& cluster : result.solutions) {
            if (solution_distance(g, j, cluster.g, cluster.j) <= problem.cluster_radius) {
                ++cluster.cluster_size;
                if (outcome.residual < cluster.residual) {
                    cluster.g = g;
                    cluster.j = j;
                    cluster.residual = outcome.residual;
                    cluster.representative_restart = static_cast<int>(i);
                }
                placed = true;
                break;
            }
        }
        if (!placed) {
            result.solutions.push_back({g, j, {}, 1, static_cast<int>(i), outcome.residual});
        }
    }
    if (result.converged == 0) {
        std::ostringstream msg;
        msg << "uniqueness scan: none of " << problem.restarts << " restarts converged ("
            << started << " started, best ||J^2+I|| = " << best << ", basis dimension " << d << ")";
        throw ScanFailure(msg.str());
    }

    for (auto& s : result.solutions) {
        s.axioms = verify_axioms(s.g, w, problem.a.matrix(), problem.tolerances.nonlinear, w);
    }
    result.min_separation = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < result.solutions.size(); ++i) {
        for (std::size_t k = i + 1; k < result.solutions.size(); ++k) {
            const auto& a = result.solutions[i];
            const auto& b = result.solutions[k];
            result.min_separation = std::min(result.min_separation, solution_distance(a.g, a.j, b.g, b.j));
        }
    }
    result.well_separated = result.min_separation > 10.0 * problem.cluster_radius;
    return result;
}

}  // namespace segal
