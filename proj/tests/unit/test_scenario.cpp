#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "jcopen/csv.hpp"
#include "jcopen/errors.hpp"
#include "jcopen/scenario.hpp"

using namespace jcopen;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json base_config() {
    return json::parse(R"({
        "params": {"omega0": 100.0, "g": 1.0, "gamma": 0.2, "nbar_at_omega": 0.0},
        "detunings": [0.0, 2.0],
        "model": "both",
        "initial_state": {"type": "fock", "n": 0, "qubit": "e"},
        "t_max": 5.0,
        "n_points": 11,
        "observables": ["ground_probability", "purity"]
    })");
}

std::string field_of(const json& j) {
    try {
        ScenarioConfig::from_json(j);
    } catch (const ConfigError& e) {
        return e.field;
    }
    return "";
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("jcopen_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

} // namespace

TEST(Config, ParsesAndRoundTrips) {
    const ScenarioConfig c = ScenarioConfig::from_json(base_config());
    EXPECT_EQ(c.detunings.size(), 2u);
    EXPECT_EQ(c.models().size(), 2u);
    EXPECT_EQ(c.time_grid().size(), 11u);
    EXPECT_DOUBLE_EQ(c.time_grid().back(), 5.0);
    const auto sets = c.parameter_sets();
    EXPECT_DOUBLE_EQ(sets[1].omega, 98.0);
    EXPECT_DOUBLE_EQ(sets[1].detuning(), 2.0);
    const ScenarioConfig again = ScenarioConfig::from_json(c.to_json());
    EXPECT_EQ(again.hash(), c.hash());
    EXPECT_EQ(c.truncation(), 3);
}

TEST(Config, ErrorsNameTheField) {
    json j = base_config();
    j["t_max"] = 0.0;
    EXPECT_EQ(field_of(j), "t_max");
    j = base_config();
    j["n_points"] = 1;
    EXPECT_EQ(field_of(j), "n_points");
    j = base_config();
    j["observables"][1] = "wigner";
    EXPECT_EQ(field_of(j), "observables[1]");
    j = base_config();
    j["params"].erase("gamma");
    EXPECT_EQ(field_of(j), "params.gamma");
    j = base_config();
    j["initial_state"]["type"] = "cat";
    EXPECT_EQ(field_of(j), "initial_state.type");
    j = base_config();
    j["method"] = "euler";
    EXPECT_EQ(field_of(j), "method");
    j = base_config();
    j["unexpected"] = 1;
    EXPECT_EQ(field_of(j), "unexpected");
    j = base_config();
    j["params"]["gamma"] = -1.0;
    EXPECT_EQ(field_of(j), "params");
    j = base_config();
    j["_note"] = "annotations are ignored";
    EXPECT_EQ(field_of(j), "");
}

TEST(Config, CoherentAndSingleExcitationStates) {
    json j = base_config();
    j["initial_state"] = {{"type", "coherent"}, {"alpha", {1.0, 1.0}}, {"qubit", "g"}};
    ScenarioConfig c = ScenarioConfig::from_json(j);
    EXPECT_EQ(c.initial.alpha, cplx(1.0, 1.0));
    EXPECT_EQ(c.truncation(), default_coherent_truncation(cplx(1.0, 1.0)));
    j["initial_state"] = {{"type", "single_excitation"}, {"alpha", 0.6}};
    c = ScenarioConfig::from_json(j);
    EXPECT_NEAR(std::abs(c.initial.beta), 0.8, 1e-15);
    j["initial_state"] = {{"type", "single_excitation"}, {"alpha", 0.6}, {"beta", 0.6}};
    EXPECT_EQ(field_of(j), "initial_state");
}

TEST(Config, ThermalMarginWidensTruncation) {
    json j = base_config();
    j["params"]["nbar_at_omega"] = 0.1;
    const ScenarioConfig c = ScenarioConfig::from_json(j);
    EXPECT_GT(c.truncation(), 3);
}

TEST(Csv, RoundTripIsExact) {
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    csv::Table t{{"gt", "value"}, {}};
    for (int i = 0; i < 200; ++i) t.rows.push_back({u(rng), u(rng) * 1e-9});
    t.rows.push_back({0.1, 1.0 / 3.0});
    const fs::path dir = scratch("csv");
    fs::create_directories(dir);
    csv::write(dir / "t.csv", t);
    const csv::Table back = csv::read(dir / "t.csv");
    ASSERT_EQ(back.header, t.header);
    ASSERT_EQ(back.rows.size(), t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        for (std::size_t k = 0; k < 2; ++k) {
            EXPECT_NEAR(back.rows[i][k], t.rows[i][k], 1e-12 * std::max(1.0, std::abs(t.rows[i][k])));
        }
    }
}

TEST(Runner, WritesSeriesAndManifest) {
    json j = base_config();
    j["output"] = scratch("runner").string();
    const ScenarioConfig c = ScenarioConfig::from_json(j);
    const Manifest m = run_scenario(c);
    EXPECT_EQ(m.jobs.size(), 4u);
    EXPECT_TRUE(fs::exists(c.output / "ground_probability_delta_0.csv"));
    EXPECT_TRUE(fs::exists(c.output / "purity_delta_2.csv"));
    EXPECT_TRUE(fs::exists(c.output / "manifest.json"));
    const csv::Table t = csv::read(c.output / "ground_probability_delta_2.csv");
    EXPECT_EQ(t.header, (std::vector<std::string>{"gt", "value", "value_phenomenological"}));
    EXPECT_EQ(t.rows.size(), 11u);
    EXPECT_NEAR(t.rows[0][1], 0.0, 1e-15);
    EXPECT_EQ(m.json["n_max"], 3);
    EXPECT_EQ(m.json["jobs"].size(), 4u);
    for (const auto& job : m.json["jobs"]) {
        EXPECT_LT(job["max_trace_drift"].get<double>(), 1e-9);
        EXPECT_GT(job["min_eigenvalue"].get<double>(), -1e-8);
    }
}

TEST(Runner, OutputIsDeterministic) {
    json j = base_config();
    j["output"] = scratch("det_a").string();
    run_scenario(ScenarioConfig::from_json(j));
    j["output"] = scratch("det_b").string();
    run_scenario(ScenarioConfig::from_json(j));
    for (const auto& entry : fs::directory_iterator(scratch("det_probe").parent_path() / "jcopen_test_det_a")) {
        if (entry.path().extension() != ".csv") continue;
        const fs::path other = fs::temp_directory_path() / "jcopen_test_det_b" / entry.path().filename();
        EXPECT_EQ(slurp(entry.path()), slurp(other)) << entry.path();
    }
}

TEST(Runner, TruncationGuardTrips) {
    json j = base_config();
    j["initial_state"] = {{"type", "fock"}, {"n", 2}, {"qubit", "e"}};
    j["n_max"] = 3;
    j["model"] = "phenomenological";
    j["output"] = scratch("guard").string();
    EXPECT_THROW(run_scenario(ScenarioConfig::from_json(j)), TruncationError);
}

TEST(Runner, HusimiSnapshots) {
    json j = base_config();
    j["initial_state"] = {{"type", "coherent"}, {"alpha", 1.0}, {"qubit", "g"}};
    j.erase("detunings");
    j["params"]["omega"] = 100.0;
    j["model"] = "microscopic";
    j["husimi"] = {{"times", {0.0, 2.5}}, {"points", 21}};
    j["output"] = scratch("husimi").string();
    const ScenarioConfig c = ScenarioConfig::from_json(j);
    run_husimi(c);
    const csv::Table t = csv::read(c.output / "husimi_microscopic_t1.csv");
    EXPECT_EQ(t.header, (std::vector<std::string>{"re_alpha", "im_alpha", "q"}));
    EXPECT_EQ(t.rows.size(), 21u * 21u);
}

TEST(Runner, SteadyAndRates) {
    json j = base_config();
    j["params"]["nbar_at_omega"] = 0.1;
    j["output"] = scratch("steady").string();
    const ScenarioConfig c = ScenarioConfig::from_json(j);
    run_steady(c);
    const json states = json::parse(slurp(c.output / "steady_state.json"));
    ASSERT_EQ(states.size(), 4u);
    for (const auto& s : states) EXPECT_LT(s["residual_norm"].get<double>(), 1e-10);
    run_rates(c);
    EXPECT_TRUE(fs::exists(c.output / "rates_delta_0.csv"));
    const csv::Table rates = csv::read(c.output / "rates_delta_2.csv");
    EXPECT_EQ(rates.header.size(), 16u);
}

TEST(Oracle, SingleExcitationReport) {
    json j = base_config();
    j["output"] = scratch("oracle").string();
    const OracleReport r = compare_analytic(ScenarioConfig::from_json(j));
    ASSERT_EQ(r.entries.size(), 4u);
    EXPECT_TRUE(r.pass());
    for (const auto& e : r.entries) EXPECT_LT(e.max_trace_distance, 1e-7);
}

TEST(Oracle, ClosedSystemLimit) {
    json j = base_config();
    j["params"]["gamma"] = 0.0;
    j["initial_state"] = {{"type", "single_excitation"}, {"alpha", {0.6, 0.0}}, {"beta", {0.0, 0.8}}};
    j["output"] = "";
    for (const auto& e : compare_analytic(ScenarioConfig::from_json(j)).entries) {
        EXPECT_LT(e.max_trace_distance, 1e-9);
    }
}

TEST(Oracle, RejectsUnsupportedInputs) {
    json j = base_config();
    j["params"]["nbar_at_omega"] = 0.1;
    EXPECT_THROW(compare_analytic(ScenarioConfig::from_json(j)), ConfigError);
    j = base_config();
    j["initial_state"] = {{"type", "fock"}, {"n", 2}, {"qubit", "g"}};
    EXPECT_THROW(compare_analytic(ScenarioConfig::from_json(j)), ConfigError);
}

TEST(Scenarios, ShippedConfigsParse) {
    int count = 0;
    for (const auto& entry : fs::directory_iterator(JCOPEN_SCENARIO_DIR)) {
        if (entry.path().extension() != ".json") continue;
        EXPECT_NO_THROW(ScenarioConfig::load(entry.path())) << entry.path();
        ++count;
    }
    EXPECT_GE(count, 12);
}
