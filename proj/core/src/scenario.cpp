#include "jcopen/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

#include "jcopen/csv.hpp"
#include "jcopen/errors.hpp"
#include "jcopen/observables.hpp"

namespace jcopen {

using nlohmann::json;

namespace {

const json* find(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double number_at(const json& obj, const char* key, const std::string& path,
                 std::optional<double> fallback = std::nullopt) {
    const json* v = find(obj, key);
    if (!v) {
        if (fallback) return *fallback;
        throw ConfigError(path + key, "required number is missing");
    }
    if (!v->is_number()) throw ConfigError(path + key, "must be a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) throw ConfigError(path + key, "must be finite");
    return x;
}

int integer_at(const json& obj, const char* key, const std::string& path,
               std::optional<int> fallback = std::nullopt) {
    const json* v = find(obj, key);
    if (!v) {
        if (fallback) return *fallback;
        throw ConfigError(path + key, "required integer is missing");
    }
    if (!v->is_number_integer()) throw ConfigError(path + key, "must be an integer");
    return v->get<int>();
}

cplx complex_at(const json& obj, const char* key, const std::string& path) {
    const json* v = find(obj, key);
    if (!v) throw ConfigError(path + key, "required complex number is missing");
    if (v->is_number()) return {v->get<double>(), 0.0};
    if (v->is_array() && v->size() == 2 && (*v)[0].is_number() && (*v)[1].is_number()) {
        return {(*v)[0].get<double>(), (*v)[1].get<double>()};
    }
    throw ConfigError(path + key, "must be a number or a [re, im] pair");
}

Qubit qubit_at(const json& obj, const std::string& path) {
    const json* v = find(obj, "qubit");
    if (!v) return Qubit::g;
    if (*v == "g") return Qubit::g;
    if (*v == "e") return Qubit::e;
    throw ConfigError(path + "qubit", "must be \"g\" or \"e\"");
}

std::string shortest(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string model_choice_name(ModelChoice m) {
    switch (m) {
    case ModelChoice::microscopic: return "microscopic";
    case ModelChoice::phenomenological: return "phenomenological";
    case ModelChoice::both: return "both";
    }
    return "?";
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
    return out;
}

} // namespace

ScenarioConfig ScenarioConfig::from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("$", "scenario must be a JSON object");
    static const std::vector<std::string> known = {
        "description", "params", "detunings", "model", "initial_state", "t_max",
        "n_points", "method", "dt", "n_max", "observables", "husimi", "output", "seed"};
    for (const auto& [key, _] : j.items()) {
        if (!key.empty() && key[0] == '_') continue;  // annotations
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError(key, "unknown field");
        }
    }

    ScenarioConfig c;
    if (const json* d = find(j, "description")) {
        if (!d->is_string()) throw ConfigError("description", "must be a string");
        c.description = d->get<std::string>();
    }

    const json* params = find(j, "params");
    if (!params || !params->is_object()) throw ConfigError("params", "required object is missing");
    for (const auto& [key, _] : params->items()) {
        if (!key.empty() && key[0] == '_') continue;
        if (key != "omega0" && key != "omega" && key != "g" && key != "gamma" &&
            key != "nbar_at_omega") {
            throw ConfigError("params." + key, "unknown field");
        }
    }
    c.params.omega0 = number_at(*params, "omega0", "params.");
    c.params.g = number_at(*params, "g", "params.", 1.0);
    c.params.gamma = number_at(*params, "gamma", "params.");
    c.params.nbar_at_omega = number_at(*params, "nbar_at_omega", "params.", 0.0);

    if (const json* d = find(j, "detunings")) {
        if (!d->is_array() || d->empty()) {
            throw ConfigError("detunings", "must be a non-empty array of numbers");
        }
        for (const auto& x : *d) {
            if (!x.is_number()) throw ConfigError("detunings", "must contain numbers only");
            c.detunings.push_back(x.get<double>());
        }
        c.params.omega = number_at(*params, "omega", "params.", c.params.omega0 - c.detunings[0]);
    } else {
        c.params.omega = number_at(*params, "omega", "params.");
    }
    try {
        c.params.validate();
        for (const auto& p : c.parameter_sets()) p.validate();
    } catch (const ParameterError& e) {
        throw ConfigError("params", e.what());
    }

    const json* model = find(j, "model");
    if (!model) throw ConfigError("model", "required string is missing");
    if (*model == "microscopic") c.model = ModelChoice::microscopic;
    else if (*model == "phenomenological") c.model = ModelChoice::phenomenological;
    else if (*model == "both") c.model = ModelChoice::both;
    else throw ConfigError("model", "must be microscopic, phenomenological or both");

    const json* init = find(j, "initial_state");
    if (!init || !init->is_object()) throw ConfigError("initial_state", "required object is missing");
    const json* type = find(*init, "type");
    if (!type || !type->is_string()) throw ConfigError("initial_state.type", "required string");
    if (*type == "fock") {
        c.initial.kind = InitialState::Kind::fock;
        c.initial.n = integer_at(*init, "n", "initial_state.");
        if (c.initial.n < 0) throw ConfigError("initial_state.n", "must be >= 0");
        c.initial.qubit = qubit_at(*init, "initial_state.");
    } else if (*type == "coherent") {
        c.initial.kind = InitialState::Kind::coherent;
        c.initial.alpha = complex_at(*init, "alpha", "initial_state.");
        c.initial.qubit = qubit_at(*init, "initial_state.");
    } else if (*type == "single_excitation") {
        c.initial.kind = InitialState::Kind::single_excitation;
        c.initial.alpha = complex_at(*init, "alpha", "initial_state.");
        if (find(*init, "beta")) {
            c.initial.beta = complex_at(*init, "beta", "initial_state.");
        } else {
            const double rest = 1.0 - std::norm(c.initial.alpha);
            if (rest < -1e-12) throw ConfigError("initial_state.alpha", "|alpha| exceeds 1");
            c.initial.beta = std::sqrt(std::max(0.0, rest));
        }
        if (std::abs(std::norm(c.initial.alpha) + std::norm(c.initial.beta) - 1.0) > 1e-12) {
            throw ConfigError("initial_state", "|alpha|^2 + |beta|^2 must equal 1");
        }
    } else {
        throw ConfigError("initial_state.type", "must be fock, coherent or single_excitation");
    }

    c.t_max = number_at(j, "t_max", "");
    if (!(c.t_max > 0.0)) throw ConfigError("t_max", "must be positive");
    c.n_points = integer_at(j, "n_points", "");
    if (c.n_points < 2) throw ConfigError("n_points", "must be at least 2");

    if (const json* m = find(j, "method")) {
        if (*m == "rk4") c.method = Method::rk4;
        else if (*m == "spectral") c.method = Method::spectral;
        else throw ConfigError("method", "must be rk4 or spectral");
    }
    c.dt = number_at(j, "dt", "", 0.0);
    if (c.dt < 0.0) throw ConfigError("dt", "must be >= 0 (0 selects the default)");
    c.n_max = integer_at(j, "n_max", "", 0);
    if (c.n_max < 0) throw ConfigError("n_max", "must be >= 0 (0 selects the default)");

    if (const json* obs = find(j, "observables")) {
        if (!obs->is_array()) throw ConfigError("observables", "must be an array of names");
        for (std::size_t i = 0; i < obs->size(); ++i) {
            const json& name = (*obs)[i];
            const std::string path = "observables[" + std::to_string(i) + "]";
            if (!name.is_string() || !is_observable(name.get<std::string>())) {
                throw ConfigError(path, "unknown observable " + name.dump());
            }
            c.observables.push_back(name.get<std::string>());
        }
    }

    if (const json* h = find(j, "husimi")) {
        if (!h->is_object()) throw ConfigError("husimi", "must be an object");
        HusimiRequest req;
        const json* times = find(*h, "times");
        if (!times || !times->is_array() || times->empty()) {
            throw ConfigError("husimi.times", "must be a non-empty array");
        }
        for (const auto& t : *times) {
            if (!t.is_number() || t.get<double>() < 0.0) {
                throw ConfigError("husimi.times", "must contain non-negative numbers");
            }
            req.times.push_back(t.get<double>());
        }
        if (!std::is_sorted(req.times.begin(), req.times.end()) ||
            std::adjacent_find(req.times.begin(), req.times.end()) != req.times.end()) {
            throw ConfigError("husimi.times", "must be strictly increasing");
        }
        req.points = integer_at(*h, "points", "husimi.", 121);
        if (req.points < 2) throw ConfigError("husimi.points", "must be at least 2");
        req.extent = number_at(*h, "extent", "husimi.", 0.0);
        if (req.extent < 0.0) throw ConfigError("husimi.extent", "must be >= 0");
        c.husimi = req;
    }

    if (const json* out = find(j, "output")) {
        if (!out->is_string()) throw ConfigError("output", "must be a string path");
        c.output = out->get<std::string>();
    }
    if (const json* seed = find(j, "seed")) {
        if (!seed->is_number_unsigned() && !seed->is_number_integer()) {
            throw ConfigError("seed", "must be a non-negative integer");
        }
        c.seed = seed->get<std::uint64_t>();
    }
    return c;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("$", "cannot open " + path.string());
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError("$", std::string("invalid JSON: ") + e.what());
    }
    return from_json(j);
}

json ScenarioConfig::to_json() const {
    json j;
    j["description"] = description;
    j["params"] = {{"omega0", params.omega0},
                   {"omega", params.omega},
                   {"g", params.g},
                   {"gamma", params.gamma},
                   {"nbar_at_omega", params.nbar_at_omega}};
    if (!detunings.empty()) j["detunings"] = detunings;
    j["model"] = model_choice_name(model);
    json init;
    switch (initial.kind) {
    case InitialState::Kind::fock:
        init = {{"type", "fock"}, {"n", initial.n}, {"qubit", initial.qubit == Qubit::e ? "e" : "g"}};
        break;
    case InitialState::Kind::coherent:
        init = {{"type", "coherent"},
                {"alpha", {initial.alpha.real(), initial.alpha.imag()}},
                {"qubit", initial.qubit == Qubit::e ? "e" : "g"}};
        break;
    case InitialState::Kind::single_excitation:
        init = {{"type", "single_excitation"},
                {"alpha", {initial.alpha.real(), initial.alpha.imag()}},
                {"beta", {initial.beta.real(), initial.beta.imag()}}};
        break;
    }
    j["initial_state"] = init;
    j["t_max"] = t_max;
    j["n_points"] = n_points;
    j["method"] = to_string(method);
    j["dt"] = dt;
    j["n_max"] = n_max;
    j["observables"] = observables;
    if (husimi) {
        j["husimi"] = {{"times", husimi->times},
                       {"points", husimi->points},
                       {"extent", husimi->extent}};
    }
    j["output"] = output.string();
    j["seed"] = seed;
    return j;
}

std::vector<double> ScenarioConfig::time_grid() const {
    return linspace(0.0, t_max, n_points);
}

std::vector<MasterEquation> ScenarioConfig::models() const {
    switch (model) {
    case ModelChoice::microscopic: return {MasterEquation::microscopic};
    case ModelChoice::phenomenological: return {MasterEquation::phenomenological};
    case ModelChoice::both: return {MasterEquation::microscopic, MasterEquation::phenomenological};
    }
    return {};
}

std::vector<SystemParams> ScenarioConfig::parameter_sets() const {
    if (detunings.empty()) return {params};
    std::vector<SystemParams> out;
    for (double d : detunings) {
        SystemParams p = params;
        p.omega = params.omega0 - d;
        out.push_back(p);
    }
    return out;
}

int ScenarioConfig::truncation() const {
    if (n_max > 0) return n_max;
    const double nbar = params.nbar_at_omega;
    // Levels needed before the thermal ratio nbar/(1+nbar) falls below 1e-8.
    const int thermal = nbar > 0.0
                            ? static_cast<int>(std::ceil(std::log(1e-8) /
                                                         std::log(nbar / (1.0 + nbar))))
                            : 0;
    switch (initial.kind) {
    case InitialState::Kind::coherent:
        return default_coherent_truncation(initial.alpha);
    case InitialState::Kind::fock:
        return initial.n + static_cast<int>(initial.qubit) + 2 + thermal;
    case InitialState::Kind::single_excitation:
        return 3 + thermal;
    }
    return 1;
}

Operator ScenarioConfig::initial_density(const SpaceSpec& spec) const {
    switch (initial.kind) {
    case InitialState::Kind::fock:
        return projector(basis_state(spec, initial.n, initial.qubit));
    case InitialState::Kind::coherent:
        return projector(coherent_state(spec, initial.alpha, initial.qubit));
    case InitialState::Kind::single_excitation: {
        SingleExcitationInput in{initial.alpha, initial.beta, params};
        return projector(in.state(spec));
    }
    }
    throw ConfigError("initial_state", "unsupported kind");
}

std::uint64_t ScenarioConfig::hash() const {
    return fnv1a(to_json().dump());
}

double top_level_population(const Operator& rho, const SpaceSpec& spec) {
    double pop = 0.0;
    for (int n = std::max(0, spec.n_max() - 1); n <= spec.n_max(); ++n) {
        pop += rho(spec.index(n, Qubit::g), spec.index(n, Qubit::g)).real() +
               rho(spec.index(n, Qubit::e), spec.index(n, Qubit::e)).real();
    }
    return pop;
}

Liouvillian build_liouvillian(MasterEquation model, const SystemParams& params,
                              const SpaceSpec& spec) {
    if (model == MasterEquation::microscopic) {
        return build_microscopic_liouvillian(params, dressed_spectrum(params, spec), spec);
    }
    return build_phenomenological_liouvillian(params, spec);
}

namespace {

// Spectral decomposition when possible, rk4 in the frame rotating at omega
// otherwise.
class Propagation {
public:
    Propagation(const Liouvillian& l, const ScenarioConfig& cfg, const SystemParams& p)
        : l_(l), rk4_{cfg.dt, p.omega}, method_(cfg.method) {
        if (method_ == Method::spectral) {
            try {
                spectral_.emplace(l_);
            } catch (const DefectiveLiouvillianError&) {
                method_ = Method::rk4;
            }
        }
    }

    Method method() const { return method_; }

    Trajectory run(const Operator& rho0, std::span<const double> times) const {
        if (spectral_) return spectral_->evolve(rho0, times);
        return evolve_rk4(l_, rho0, times, rk4_);
    }

private:
    const Liouvillian& l_;
    Rk4Options rk4_;
    Method method_;
    std::optional<SpectralPropagator> spectral_;
};

struct JobResult {
    JobSummary summary;
    std::vector<std::vector<double>> series;  // per observable
    std::vector<PhaseGrid> husimi;
};

struct JobKey {
    int param_index;
    SystemParams params;
    MasterEquation model;
};

std::vector<JobKey> job_keys(const ScenarioConfig& cfg) {
    std::vector<JobKey> keys;
    const auto sets = cfg.parameter_sets();
    for (int i = 0; i < static_cast<int>(sets.size()); ++i) {
        for (MasterEquation m : cfg.models()) keys.push_back({i, sets[i], m});
    }
    return keys;
}

std::string detuning_suffix(const ScenarioConfig& cfg, const SystemParams& p) {
    if (cfg.detunings.size() <= 1) return "";
    return "_delta_" + shortest(p.detuning());
}

GridSpec husimi_grid(const ScenarioConfig& cfg, const HusimiRequest& req) {
    const double extent =
        req.extent > 0.0 ? req.extent : std::abs(cfg.initial.alpha) + 4.0;
    return GridSpec{-extent, extent, -extent, extent, req.points, req.points};
}

// Observables are reported in the frame rotating at the field frequency.
Trajectory field_frame(Trajectory traj, const SpaceSpec& spec, double omega) {
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        traj.states[i] = rotating_frame(traj.states[i], spec, omega * traj.times[i]);
    }
    return traj;
}

JobResult run_job(const ScenarioConfig& cfg, const JobKey& key, const SpaceSpec& spec,
                  bool series, bool snapshots) {
    const Liouvillian l = build_liouvillian(key.model, key.params, spec);
    const Operator rho0 = cfg.initial_density(spec);
    const Propagation prop(l, cfg, key.params);

    JobResult res;
    res.summary.detuning = key.params.detuning();
    res.summary.model = key.model;
    res.summary.method_used = prop.method();
    res.summary.min_eigenvalue = std::numeric_limits<double>::infinity();
    res.summary.min_uncertainty_product = std::numeric_limits<double>::infinity();

    auto inspect = [&](const Trajectory& traj) {
        const Diagnostics& d = traj.diagnostics;
        auto& s = res.summary.diagnostics;
        s.max_trace_drift = std::max(s.max_trace_drift, d.max_trace_drift);
        s.max_hermiticity_drift = std::max(s.max_hermiticity_drift, d.max_hermiticity_drift);
        for (const auto& rho : traj.states) {
            res.summary.min_eigenvalue = std::min(res.summary.min_eigenvalue, min_eigenvalue(rho));
            const Quadratures q = quadratures(rho, spec);
            res.summary.min_uncertainty_product =
                std::min(res.summary.min_uncertainty_product, q.q_var * q.p_var);
            res.summary.max_top_population =
                std::max(res.summary.max_top_population, top_level_population(rho, spec));
        }
    };

    if (series) {
        const auto times = cfg.time_grid();
        const Trajectory traj = field_frame(prop.run(rho0, times), spec, key.params.omega);
        inspect(traj);
        for (const auto& name : cfg.observables) {
            std::vector<double> values;
            values.reserve(traj.states.size());
            for (const auto& rho : traj.states) {
                values.push_back(evaluate_observable(name, rho, spec));
            }
            res.series.push_back(std::move(values));
        }
    }
    if (snapshots && cfg.husimi) {
        const Trajectory traj =
            field_frame(prop.run(rho0, cfg.husimi->times), spec, key.params.omega);
        inspect(traj);
        const GridSpec grid = husimi_grid(cfg, *cfg.husimi);
        for (const auto& rho : traj.states) res.husimi.push_back(husimi_q(rho, spec, grid));
    }
    if (res.summary.max_top_population >= 1e-6) {
        throw TruncationError("population " + std::to_string(res.summary.max_top_population) +
                              " on the two highest Fock levels (n_max=" +
                              std::to_string(spec.n_max()) + "); raise n_max");
    }
    return res;
}

std::vector<JobResult> run_jobs(const ScenarioConfig& cfg, const std::vector<JobKey>& keys,
                                const SpaceSpec& spec, bool series, bool snapshots) {
    std::vector<std::future<JobResult>> futures;
    for (const auto& key : keys) {
        futures.push_back(std::async(std::launch::async, run_job, std::cref(cfg), key,
                                     std::cref(spec), series, snapshots));
    }
    std::vector<JobResult> results;
    for (auto& f : futures) results.push_back(f.get());
    return results;
}

json summary_json(const JobSummary& s) {
    return {{"detuning", s.detuning},
            {"model", to_string(s.model)},
            {"method", to_string(s.method_used)},
            {"max_trace_drift", s.diagnostics.max_trace_drift},
            {"max_hermiticity_drift", s.diagnostics.max_hermiticity_drift},
            {"min_eigenvalue", s.min_eigenvalue},
            {"min_uncertainty_product", s.min_uncertainty_product},
            {"max_top_population", s.max_top_population}};
}

json manifest_header(const ScenarioConfig& cfg, const SpaceSpec& spec, const std::string& command) {
    char hash[17];
    std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(cfg.hash()));
    return {{"command", command},
            {"config_hash", hash},
            {"config", cfg.to_json()},
            {"n_max", spec.n_max()},
            {"method", to_string(cfg.method)}};
}

void finish_manifest(Manifest& m, const ScenarioConfig& cfg, json header) {
    json files = json::array();
    for (const auto& f : m.files) files.push_back(f.filename().string());
    json jobs = json::array();
    for (const auto& s : m.jobs) jobs.push_back(summary_json(s));
    header["files"] = files;
    header["jobs"] = jobs;
    m.json = header;
    const auto path = cfg.output / "manifest.json";
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path.string());
    os << m.json.dump(2) << '\n';
    m.files.push_back(path);
}

void write_husimi(Manifest& m, const ScenarioConfig& cfg, const std::vector<JobKey>& keys,
                  const std::vector<JobResult>& results) {
    for (std::size_t r = 0; r < results.size(); ++r) {
        for (std::size_t i = 0; i < results[r].husimi.size(); ++i) {
            const PhaseGrid& grid = results[r].husimi[i];
            csv::Table table{{"re_alpha", "im_alpha", "q"}, {}};
            for (std::size_t a = 0; a < grid.re_alpha.size(); ++a) {
                for (std::size_t b = 0; b < grid.im_alpha.size(); ++b) {
                    table.rows.push_back({grid.re_alpha[a], grid.im_alpha[b],
                                          grid.q(static_cast<Eigen::Index>(a),
                                                 static_cast<Eigen::Index>(b))});
                }
            }
            const auto path = cfg.output / ("husimi_" + to_string(keys[r].model) +
                                            detuning_suffix(cfg, keys[r].params) + "_t" +
                                            std::to_string(i) + ".csv");
            csv::write(path, table);
            m.files.push_back(path);
        }
    }
}

} // namespace

Manifest run_scenario(const ScenarioConfig& cfg) {
    const SpaceSpec spec(cfg.truncation());
    const auto keys = job_keys(cfg);
    const auto results = run_jobs(cfg, keys, spec, true, true);

    std::filesystem::create_directories(cfg.output);
    Manifest m;
    for (const auto& r : results) m.jobs.push_back(r.summary);

    const auto times = cfg.time_grid();
    const auto sets = cfg.parameter_sets();
    const bool both = cfg.model == ModelChoice::both;
    for (std::size_t o = 0; o < cfg.observables.size(); ++o) {
        for (int pi = 0; pi < static_cast<int>(sets.size()); ++pi) {
            csv::Table table;
            table.header = {"gt", "value"};
            if (both) table.header.push_back("value_phenomenological");
            std::vector<const JobResult*> cols;
            for (std::size_t r = 0; r < keys.size(); ++r) {
                if (keys[r].param_index == pi) cols.push_back(&results[r]);
            }
            for (std::size_t t = 0; t < times.size(); ++t) {
                std::vector<double> row{times[t]};
                for (const JobResult* col : cols) row.push_back(col->series[o][t]);
                table.rows.push_back(std::move(row));
            }
            const auto path =
                cfg.output / (cfg.observables[o] + detuning_suffix(cfg, sets[pi]) + ".csv");
            csv::write(path, table);
            m.files.push_back(path);
        }
    }
    write_husimi(m, cfg, keys, results);
    finish_manifest(m, cfg, manifest_header(cfg, spec, "evolve"));
    return m;
}

Manifest run_husimi(const ScenarioConfig& cfg) {
    if (!cfg.husimi) throw ConfigError("husimi", "required for the husimi command");
    const SpaceSpec spec(cfg.truncation());
    const auto keys = job_keys(cfg);
    const auto results = run_jobs(cfg, keys, spec, false, true);
    std::filesystem::create_directories(cfg.output);
    Manifest m;
    for (const auto& r : results) m.jobs.push_back(r.summary);
    write_husimi(m, cfg, keys, results);
    finish_manifest(m, cfg, manifest_header(cfg, spec, "husimi"));
    return m;
}

Manifest run_steady(const ScenarioConfig& cfg) {
    const SpaceSpec spec(cfg.truncation());
    const auto keys = job_keys(cfg);
    std::filesystem::create_directories(cfg.output);
    Manifest m;
    json states = json::array();
    for (const auto& key : keys) {
        const Liouvillian l = build_liouvillian(key.model, key.params, spec);
        const Operator rho = steady_state(l);
        json obs;
        for (const auto& name : observable_names()) {
            try {
                obs[name] = evaluate_observable(name, rho, spec);
            } catch (const SubspaceLeakError&) {
                obs[name] = nullptr;
            }
        }
        states.push_back({{"detuning", key.params.detuning()},
                          {"model", to_string(key.model)},
                          {"residual_norm", l.apply(rho).norm()},
                          {"min_eigenvalue", min_eigenvalue(rho)},
                          {"top_level_population", top_level_population(rho, spec)},
                          {"observables", obs}});
        csv::Table table{{"i", "j", "re", "im"}, {}};
        for (int j = 0; j < rho.cols(); ++j) {
            for (int i = 0; i < rho.rows(); ++i) {
                table.rows.push_back({double(i), double(j), rho(i, j).real(), rho(i, j).imag()});
            }
        }
        const auto path = cfg.output / ("steady_rho_" + to_string(key.model) +
                                        detuning_suffix(cfg, key.params) + ".csv");
        csv::write(path, table);
        m.files.push_back(path);
    }
    const auto path = cfg.output / "steady_state.json";
    std::ofstream(path) << states.dump(2) << '\n';
    m.files.push_back(path);
    finish_manifest(m, cfg, manifest_header(cfg, spec, "steady"));
    return m;
}

Manifest run_rates(const ScenarioConfig& cfg) {
    const SpaceSpec spec(cfg.truncation());
    std::filesystem::create_directories(cfg.output);
    Manifest m;
    for (const auto& p : cfg.parameter_sets()) {
        const RateTable table = build_rate_table(p, dressed_spectrum(p, spec));
        const auto path = cfg.output / ("rates" + detuning_suffix(cfg, p) + ".csv");
        std::ofstream os(path);
        if (!os) throw Error("cannot write " + path.string());
        write_rate_table_csv(os, table);
        m.files.push_back(path);
    }
    finish_manifest(m, cfg, manifest_header(cfg, spec, "rates"));
    return m;
}

bool OracleReport::pass() const {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.pass; });
}

json OracleReport::to_json() const {
    json arr = json::array();
    for (const auto& e : entries) {
        arr.push_back({{"detuning", e.detuning},
                       {"model", to_string(e.model)},
                       {"max_trace_distance", e.max_trace_distance},
                       {"pass", e.pass}});
    }
    return {{"threshold", threshold}, {"pass", pass()}, {"entries", arr}};
}

OracleReport compare_analytic(const ScenarioConfig& cfg) {
    if (cfg.params.nbar_at_omega != 0.0) {
        throw ConfigError("params.nbar_at_omega", "closed-form comparison needs zero temperature");
    }
    SingleExcitationInput input;
    switch (cfg.initial.kind) {
    case InitialState::Kind::single_excitation:
        input.alpha = cfg.initial.alpha;
        input.beta = cfg.initial.beta;
        break;
    case InitialState::Kind::fock:
        if (cfg.initial.n == 0 && cfg.initial.qubit == Qubit::e) {
            input.alpha = 1.0;
            input.beta = 0.0;
        } else if (cfg.initial.n == 1 && cfg.initial.qubit == Qubit::g) {
            input.alpha = 0.0;
            input.beta = 1.0;
        } else {
            throw ConfigError("initial_state", "must lie in the single-excitation manifold");
        }
        break;
    case InitialState::Kind::coherent:
        throw ConfigError("initial_state", "must lie in the single-excitation manifold");
    }

    const SpaceSpec spec(cfg.truncation());
    const auto times = cfg.time_grid();
    OracleReport report;
    for (const auto& key : job_keys(cfg)) {
        input.params = key.params;
        const Liouvillian l = build_liouvillian(key.model, key.params, spec);
        const Propagation prop(l, cfg, key.params);
        const Trajectory traj = prop.run(projector(input.state(spec)), times);
        double worst = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            const Operator exact = key.model == MasterEquation::microscopic
                                       ? analytic_microscopic(input, spec, times[i])
                                       : analytic_phenomenological(input, spec, times[i]);
            worst = std::max(worst, trace_distance(traj.states[i], exact));
        }
        report.entries.push_back({key.params.detuning(), key.model, worst, worst <= report.threshold});
    }
    if (!cfg.output.empty()) {
        std::filesystem::create_directories(cfg.output);
        std::ofstream(cfg.output / "oracle_report.json") << report.to_json().dump(2) << '\n';
    }
    return report;
}

} // namespace jcopen
