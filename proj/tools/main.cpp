// jcopen: run a scenario file.
//
//   jcopen evolve|steady|husimi|oracle|rates <config> [--out DIR]
//          [--method rk4|spectral] [--dt X] [--nmax N]
//
// Exit codes: 0 ok, 2 config error, 3 physics guard, 4 oracle mismatch.

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "jcopen/errors.hpp"
#include "jcopen/scenario.hpp"

namespace {

enum Exit { ok = 0, config_error = 2, physics_guard = 3, oracle_mismatch = 4 };

struct Overrides {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::string> method;
    std::optional<double> dt;
    std::optional<int> nmax;
};

jcopen::ScenarioConfig load(const Overrides& o) {
    auto cfg = jcopen::ScenarioConfig::load(o.config);
    if (o.out) cfg.output = *o.out;
    if (o.method) cfg.method = *o.method == "rk4" ? jcopen::Method::rk4 : jcopen::Method::spectral;
    if (o.dt) {
        if (*o.dt <= 0.0) throw jcopen::ConfigError("--dt", "must be positive");
        cfg.dt = *o.dt;
    }
    if (o.nmax) {
        if (*o.nmax < 1) throw jcopen::ConfigError("--nmax", "must be >= 1");
        cfg.n_max = *o.nmax;
    }
    return cfg;
}

void print_manifest(const jcopen::Manifest& m) {
    for (const auto& f : m.files) std::cout << f.string() << '\n';
}

int run(const std::string& command, const Overrides& o) {
    const auto cfg = load(o);
    if (command == "evolve") print_manifest(jcopen::run_scenario(cfg));
    else if (command == "steady") print_manifest(jcopen::run_steady(cfg));
    else if (command == "husimi") print_manifest(jcopen::run_husimi(cfg));
    else if (command == "rates") print_manifest(jcopen::run_rates(cfg));
    else if (command == "oracle") {
        const auto report = jcopen::compare_analytic(cfg);
        std::cout << report.to_json().dump(2) << '\n';
        return report.pass() ? ok : oracle_mismatch;
    }
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Open Jaynes-Cummings dynamics under microscopic and phenomenological master equations"};
    app.require_subcommand(1);

    Overrides o;
    const std::map<std::string, std::string> commands = {
        {"evolve", "propagate and write observable time series"},
        {"steady", "compute the steady state of each job"},
        {"husimi", "write Husimi Q snapshots"},
        {"oracle", "compare against the closed-form single-excitation solutions"},
        {"rates", "dump the dressed-state rate table"}};
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("config", o.config, "scenario JSON file")->required();
        sub->add_option("--out", o.out, "output directory (overrides the config)");
        sub->add_option("--method", o.method, "propagation method")
            ->check(CLI::IsMember({"rk4", "spectral"}));
        sub->add_option("--dt", o.dt, "rk4 step in units of 1/g");
        sub->add_option("--nmax", o.nmax, "Fock truncation override");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, o);
    } catch (const jcopen::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const jcopen::ParameterError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const jcopen::Error& e) {
        std::cerr << "physics guard: " << e.what() << '\n';
        return physics_guard;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
