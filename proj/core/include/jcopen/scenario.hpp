// scenario.hpp: declarative experiment runner behind the jcopen CLI.
//
// A scenario is a JSON object (see scenarios/README.md for the schema). Each
// detuning and each requested master equation becomes an independent job;
// jobs share nothing but their inputs, and all files are written by the
// coordinator once every job has finished.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jcopen/lindblad.hpp"
#include "jcopen/propagate.hpp"

namespace jcopen {

enum class ModelChoice { microscopic, phenomenological, both };

struct InitialState {
    enum class Kind { fock, coherent, single_excitation };
    Kind kind{Kind::fock};
    int n{0};
    Qubit qubit{Qubit::g};
    cplx alpha{0.0};
    cplx beta{0.0};
};

struct HusimiRequest {
    std::vector<double> times;
    int points{121};
    double extent{0.0};  // 0 -> |alpha| + 4
};

struct ScenarioConfig {
    std::string description;
    SystemParams params;
    std::vector<double> detunings;  // empty -> params.omega as given
    ModelChoice model{ModelChoice::microscopic};
    InitialState initial;
    double t_max{0.0};
    int n_points{0};
    Method method{Method::spectral};
    double dt{0.0};
    int n_max{0};  // 0 -> automatic
    std::vector<std::string> observables;
    std::optional<HusimiRequest> husimi;
    std::filesystem::path output{"out"};
    std::uint64_t seed{0};

    // Throws ConfigError naming the offending field.
    static ScenarioConfig from_json(const nlohmann::json& j);
    static ScenarioConfig load(const std::filesystem::path& path);
    nlohmann::json to_json() const;

    std::vector<double> time_grid() const;
    std::vector<MasterEquation> models() const;
    // One parameter set per detuning.
    std::vector<SystemParams> parameter_sets() const;
    // Explicit n_max, or a default that keeps the top two Fock levels empty.
    int truncation() const;
    Operator initial_density(const SpaceSpec& spec) const;
    std::uint64_t hash() const;
};

// Largest population on the two highest Fock levels.
double top_level_population(const Operator& rho, const SpaceSpec& spec);

struct JobSummary {
    double detuning{0.0};
    MasterEquation model{MasterEquation::microscopic};
    Method method_used{Method::spectral};
    Diagnostics diagnostics;
    double min_eigenvalue{0.0};
    double min_uncertainty_product{0.0};
    double max_top_population{0.0};
};

struct Manifest {
    std::vector<std::filesystem::path> files;
    std::vector<JobSummary> jobs;
    nlohmann::json json;
};

Liouvillian build_liouvillian(MasterEquation model, const SystemParams& params,
                              const SpaceSpec& spec);

// Propagates every job and writes one CSV per observable and detuning
// (columns gt,value[,value_phenomenological]), one CSV per Husimi snapshot,
// and manifest.json. Throws TruncationError if the top two Fock levels ever
// hold more than 1e-6.
Manifest run_scenario(const ScenarioConfig& config);

// Husimi snapshots only.
Manifest run_husimi(const ScenarioConfig& config);

// Steady state per job: steady_state.json plus the density matrices.
Manifest run_steady(const ScenarioConfig& config);

// Rate table CSV per detuning.
Manifest run_rates(const ScenarioConfig& config);

struct OracleEntry {
    double detuning{0.0};
    MasterEquation model{MasterEquation::microscopic};
    double max_trace_distance{0.0};
    bool pass{false};
};

struct OracleReport {
    double threshold{1e-6};
    std::vector<OracleEntry> entries;
    bool pass() const;
    nlohmann::json to_json() const;
};

// Numerical evolution against the closed-form single-excitation solutions.
// Requires zero temperature and a single-excitation initial state.
OracleReport compare_analytic(const ScenarioConfig& config);

} // namespace jcopen
