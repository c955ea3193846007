#pragma once

#include "segal_quant/oscillator_model.hpp"
#include "segal_quant/symplectic.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace segal::cli {

inline constexpr const char* kReportVersion = "1.0";
inline constexpr const char* kToleranceEnv = "SEGAL_QUANT_TOLERANCE";
/// Matrices with more rows than this are left out of reports unless
/// full matrices are requested.
inline constexpr Eigen::Index kMatrixReportLimit = 64;

/// Exit codes.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalidInput = 2;

struct ScanConfig {
    int restarts = 64;
    std::uint64_t seed = 0;
    double cluster_radius = 1e-6;
    double linear_tol = 1e-10;
    double nonlinear_tol = 1e-10;
    double match_tol = 1e-8;
    bool general_off_diagonal = false;
    int threads = 0;
};

struct FockConfig {
    int n_max = 3;
    double t = 1.0;
    std::size_t memory_budget = std::size_t{256} << 20;
};

/// Either a power of the frequency ("omega_pow:<e>") or explicit samples.
using WeightFunction = std::variant<double, Vector>;

struct DomainCheckConfig {
    WeightFunction rho = -0.5;
    WeightFunction sigma = 0.5;
    std::vector<double> t_grid{1.0};
    double bound = 1.0 + 1e-12;
};

struct RunConfig {
    explicit RunConfig(FrequencySpec s) : spec(std::move(s)) {}

    FrequencySpec spec;
    double tolerance = kDefaultTolerance;
    std::vector<double> t_grid;
    std::optional<PhaseSpacePoint> x0;
    std::optional<PhaseSpacePoint> probe;
    std::optional<Matrix> metric_override;
    ScanConfig scan;
    FockConfig fock;
    DomainCheckConfig domain;
    nlohmann::json echo;
};

/// Throws ConfigError / SpecError on invalid documents. Unknown keys are
/// rejected at every level. default_tolerance applies when the document
/// has no "tolerance" key.
RunConfig parse_config(const nlohmann::json& doc, double default_tolerance = kDefaultTolerance);

/// Tolerance from the environment override, or kDefaultTolerance.
double default_tolerance_from_env();

struct CheckEntry {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct Report {
    std::string command;
    nlohmann::json config;
    std::vector<CheckEntry> checks;
    nlohmann::json data = nlohmann::json::object();
    nlohmann::json matrices = nlohmann::json::object();
    nlohmann::json timings = nlohmann::json::object();
    /// Plain-text table (trajectory or spectrum), empty when not applicable.
    std::string table;

    bool pass() const;
    void add(std::string name, double residual, double tolerance);
    /// Adds an entry with an explicit verdict (for checks that are not
    /// "residual <= tolerance").
    void add(std::string name, double residual, double tolerance, bool pass);
    nlohmann::json to_json() const;
};

struct CommandOptions {
    bool full_matrices = false;
};

Report cmd_verify(const RunConfig& config, const CommandOptions& options = {});
Report cmd_uniqueness(const RunConfig& config, const CommandOptions& options = {});
Report cmd_evolve(const RunConfig& config, const CommandOptions& options = {});
Report cmd_fock(const RunConfig& config, const CommandOptions& options = {});
Report cmd_domain_check(const RunConfig& config, const CommandOptions& options = {});

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace segal::cli
