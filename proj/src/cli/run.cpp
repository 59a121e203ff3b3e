#include "chreduct/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "chreduct/errors.hpp"
#include "chreduct/registry.hpp"
#include "chreduct/report.hpp"

namespace chreduct::cli {

namespace {

using nlohmann::json;

struct RunConfig {
    std::string command;
    std::string system;
    std::vector<std::string> params;
    json params_json = json::object();
    std::string state;
    std::string control;
    std::string mu;
    std::string pair;
    std::vector<std::string> cases;
    std::string algebra;
    std::string config_path;
    std::string out_path;
    double t_end = 10.0;
    double dt = 1e-3;
    double tolerance = 0.0;  // 0 = check default
    double perturb = 0.0;
    std::uint64_t seed = 1;
    int n_samples = 0;  // 0 = check default
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto logger = std::make_shared<spdlog::logger>("chreduct", sink);
    logger->set_pattern("[%l] %v");
    const char* level = std::getenv("CHREDUCT_LOG");
    const std::string lv = level ? level : "error";
    if (lv == "debug") {
        logger->set_level(spdlog::level::debug);
    } else if (lv == "info") {
        logger->set_level(spdlog::level::info);
    } else {
        logger->set_level(spdlog::level::err);
    }
    return logger;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed JSON in '" + path + "': " + e.what());
    }
}

std::string json_text(const json& v) {
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_array()) {
        std::string s;
        for (const auto& x : v) {
            s += (s.empty() ? "" : ",") + format_real(x.get<double>());
        }
        return s;
    }
    if (v.is_number()) {
        return format_real(v.get<double>());
    }
    throw ConfigError("config value has unsupported type");
}

/// Config-file keys override flags.
void apply_config_file(RunConfig& cfg) {
    if (cfg.config_path.empty()) {
        return;
    }
    const json doc = read_json_file(cfg.config_path);
    if (!doc.is_object()) {
        throw ConfigError("config file must hold a JSON object");
    }
    try {
        for (const auto& [key, v] : doc.items()) {
            if (key == "system") {
                cfg.system = v.get<std::string>();
            } else if (key == "params") {
                if (!v.is_object()) {
                    throw ConfigError("config 'params' must be an object");
                }
                cfg.params_json.update(v);
            } else if (key == "state") {
                cfg.state = json_text(v);
            } else if (key == "control") {
                cfg.control = json_text(v);
            } else if (key == "mu") {
                cfg.mu = json_text(v);
            } else if (key == "pair") {
                cfg.pair = v.get<std::string>();
            } else if (key == "case") {
                cfg.cases = {v.get<std::string>()};
            } else if (key == "cases") {
                cfg.cases = v.get<std::vector<std::string>>();
            } else if (key == "algebra") {
                cfg.algebra = v.get<std::string>();
            } else if (key == "out") {
                cfg.out_path = v.get<std::string>();
            } else if (key == "t_end" || key == "t-end") {
                cfg.t_end = v.get<double>();
            } else if (key == "dt") {
                cfg.dt = v.get<double>();
            } else if (key == "tolerance") {
                cfg.tolerance = v.get<double>();
            } else if (key == "perturb") {
                cfg.perturb = v.get<double>();
            } else if (key == "seed") {
                cfg.seed = v.get<std::uint64_t>();
            } else if (key == "n_samples" || key == "n-samples") {
                cfg.n_samples = v.get<int>();
            } else {
                throw ConfigError("unknown config key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config file: ") + e.what());
    }
}

void validate(RunConfig& cfg) {
    cfg.params_json.update(parse_assignments(cfg.params));
    if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0)) {
        throw ConfigError("dt and t-end must be positive");
    }
    if (cfg.tolerance < 0.0) {
        throw ConfigError("tolerance must be positive");
    }
    if (cfg.n_samples < 0) {
        throw ConfigError("n-samples must be positive");
    }
}

OrderedJson config_echo(const RunConfig& cfg) {
    OrderedJson j;
    j["command"] = cfg.command;
    if (!cfg.system.empty()) {
        j["system"] = cfg.system;
    }
    if (!cfg.pair.empty()) {
        j["pair"] = cfg.pair;
    }
    if (!cfg.params_json.empty()) {
        j["params"] = OrderedJson::parse(cfg.params_json.dump());
    }
    if (!cfg.state.empty()) {
        j["state"] = cfg.state;
    }
    if (!cfg.control.empty()) {
        j["control"] = cfg.control;
    }
    if (!cfg.cases.empty()) {
        j["cases"] = cfg.cases;
    }
    j["t_end"] = cfg.t_end;
    j["dt"] = cfg.dt;
    j["tolerance"] = cfg.tolerance;
    j["seed"] = cfg.seed;
    j["n_samples"] = cfg.n_samples;
    return j;
}

/// Writes text to --out or the given stream. Throws on I/O failure.
struct OutputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(cfg.out_path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw OutputError("cannot write '" + cfg.out_path + "'");
    }
    f << text;
    f.flush();
    if (!f) {
        throw OutputError("write to '" + cfg.out_path + "' failed");
    }
}

int emit_report(const RunConfig& cfg, const std::vector<OrderedJson>& checks, std::ostream& out) {
    const OrderedJson doc = assemble_report(config_echo(cfg), checks);
    emit(cfg, dump_json(doc) + "\n", out);
    return doc["pass"].get<bool>() ? kPass : kCheckFailed;
}

ReducedState initial_state(const ReducedSystem& rs, const std::string& text) {
    if (text.empty()) {
        Vector x = Vector::Zero(rs.state_dim());
        x.head<3>().setOnes();
        if (rs.algebra->dim() == 6) {
            x[5] = 1.0;
        }
        x.tail(rs.rotor_dim).setConstant(0.1);
        return rs.unflatten(x);
    }
    const Vector x = parse_reals(text);
    if (x.size() != rs.state_dim()) {
        throw ConfigError("state for '" + rs.name + "' needs " + std::to_string(rs.state_dim()) + " values");
    }
    return rs.unflatten(x);
}

ReducedControlLaw constant_torque(const ReducedSystem& rs, const std::string& text) {
    if (text.empty()) {
        return {};
    }
    if (rs.rotor_dim == 0) {
        throw ConfigError("system '" + rs.name + "' has no rotors to control");
    }
    const Vector c = parse_reals(text);
    if (c.size() != rs.rotor_dim) {
        throw ConfigError("control needs one torque per rotor");
    }
    return rotor_control(rs, [c](const ReducedState&) { return c; });
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, spdlog::logger& log) {
    const ReducedSystem rs = make_system(cfg.system, cfg.params_json);
    const ReducedState s0 = initial_state(rs, cfg.state);
    const ReducedControlLaw u = constant_torque(rs, cfg.control);
    log.info("simulating {} to t={} with dt={}", rs.name, cfg.t_end, cfg.dt);
    const Trajectory traj = integrate_reduced(rs, u, s0, cfg.t_end, cfg.dt);
    std::ostringstream csv;
    write_csv(traj, csv);
    emit(cfg, csv.str(), out);
    return kPass;
}

int cmd_check_related(const RunConfig& cfg, std::ostream& out, spdlog::logger& log) {
    const ReducedSystem rs = make_system(cfg.system, cfg.params_json);
    const Vector mu = cfg.mu.empty() ? Vector(Eigen::Vector3d(1.0, 2.0, 3.0)) : parse_reals(cfg.mu);
    if (mu.size() != 3) {
        throw ConfigError("mu must have 3 entries");
    }
    const ReducedControlLaw u = constant_torque(rs, cfg.control);
    const EulerChartModel model = euler_chart_model(rs, u, mu);
    const int n = cfg.n_samples > 0 ? cfg.n_samples : 200;
    const auto samples = euler_level_samples(rs, mu, n, cfg.seed);

    // Reduced side, optionally perturbed by eps mu_0^4 as a negative control.
    const ReducedSystem reduced = cfg.perturb != 0.0 ? with_quartic_perturbation(rs, cfg.perturb) : rs;
    log.info("point-relatedness on {} samples", samples.size());
    const ResidualReport r = check_point_related(model.full, model.control, reduced, u, model.projection, samples,
                                                 model.level, cfg.tolerance > 0.0 ? cfg.tolerance : kRelatedTolerance);
    return emit_report(cfg, {r.to_json()}, out);
}

int cmd_check_orbit(const RunConfig& cfg, std::ostream& out, spdlog::logger& log) {
    const ReducedSystem rs = make_system(cfg.system, cfg.params_json);
    const ReducedState s0 = initial_state(rs, cfg.state);
    const ReducedControlLaw u = constant_torque(rs, cfg.control);
    log.info("orbit invariance for {} to t={}", rs.name, cfg.t_end);
    const Trajectory traj = integrate_reduced(rs, u, s0, cfg.t_end, cfg.dt);
    const ResidualReport r =
        check_orbit_invariance(rs, traj, cfg.tolerance > 0.0 ? cfg.tolerance : kOrbitDriftTolerance);
    return emit_report(cfg, {r.to_json()}, out);
}

int cmd_check_equiv(const RunConfig& cfg, std::ostream& out, spdlog::logger& log) {
    const EquivalencePair pair =
        make_pair(cfg.pair.empty() ? "rescaled-oscillator" : cfg.pair, cfg.params_json, cfg.seed,
                  cfg.n_samples > 0 ? cfg.n_samples : 200);
    log.info("equivalence check for {}", pair.name);
    EquivalenceReport r = verify_equivalence(pair.sys1, pair.sys2, pair.phi, pair.u2, pair.samples);
    OrderedJson j = r.to_json();
    if (!r.pass && !r.closed_loop_residual) {
        // record the synthesis verdict on the first sample
        try {
            solve_control(pair.sys1, pair.sys2, pair.phi, pair.u2, pair.samples.front());
            j["synthesis_error"] = nullptr;
        } catch (const MatchingViolation& e) {
            j["synthesis_error"] = e.what();
        }
    }
    return emit_report(cfg, {j}, out);
}

int cmd_check_hj(const RunConfig& cfg, std::ostream& out, spdlog::logger& log) {
    std::vector<HjCase> cases;
    if (cfg.cases.empty()) {
        cases = shipped_hj_cases();
    }
    for (const auto& path : cfg.cases) {
        cases.push_back(hj_case_from_json(read_json_file(path), std::filesystem::path(path).stem().string()));
    }
    log.info("Hamilton-Jacobi suite over {} cases", cases.size());
    const HjTable table = hj_equivalence_suite(cases);
    OrderedJson j = table.to_json();
    bool expected = true;
    for (const auto& row : table.rows) {
        expected = expected && row.matches_expected();
    }
    j["all_match_expected"] = expected;
    j["pass"] = table.pass() && expected;
    return emit_report(cfg, {j}, out);
}

int cmd_invariants(const RunConfig& cfg, std::ostream& out, spdlog::logger& log) {
    std::vector<AlgebraPtr> algebras;
    if (!cfg.algebra.empty()) {
        algebras.push_back(algebra_from_json(read_json_file(cfg.algebra)));
    } else {
        algebras = {so3(), se3(), direct_sum(so3(), abelian(2))};
    }
    const int n = cfg.n_samples > 0 ? cfg.n_samples : 100;
    std::vector<OrderedJson> checks;
    for (const auto& g : algebras) {
        log.info("invariants of {}", g->name());
        const AlgebraInvariants inv = check_invariants(*g, n, cfg.seed);
        OrderedJson j;
        j["check"] = "algebra-invariants";
        j["algebra"] = g->name();
        j["jacobi_residual"] = inv.jacobi;
        j["antisymmetry_residual"] = inv.antisymmetry;
        j["pairing_residual"] = inv.pairing;
        j["casimir_residual"] = inv.casimir;
        j["kks_antisymmetry_residual"] = inv.kks_antisymmetry;
        j["kks_bilinearity_residual"] = inv.kks_bilinearity;
        j["n_samples"] = n;
        j["pass"] = inv.jacobi < 1e-12 && inv.antisymmetry < 1e-12 && inv.pairing < 1e-12 && inv.casimir < 1e-10 &&
                    inv.kks_antisymmetry < 1e-12 && inv.kks_bilinearity < 1e-12;
        checks.push_back(j);
    }
    return emit_report(cfg, checks, out);
}

int cmd_list_systems(const RunConfig& cfg, std::ostream& out) {
    std::string text;
    for (const auto& n : system_names()) {
        text += n + "\n";
    }
    emit(cfg, text, out);
    return kPass;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--config", cfg.config_path, "JSON file whose keys override flags");
    sub->add_option("--out", cfg.out_path, "output path (default: stdout)");
    sub->add_option("--seed", cfg.seed, "seed for sample clouds");
}

void add_system(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--system", cfg.system, "registry name (see list-systems)");
    sub->add_option("--params", cfg.params, "key=v1,v2,... (repeatable)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    auto logger = make_logger(err);
    RunConfig cfg;

    CLI::App app{"Controlled Hamiltonian systems with symmetry: simulation and reduction checks", "chreduct"};
    app.require_subcommand(1);

    auto* simulate = app.add_subcommand("simulate", "integrate a shipped reduced system, write CSV");
    add_common(simulate, cfg);
    add_system(simulate, cfg);
    simulate->add_option("--state", cfg.state, "initial state (mu, theta, l) as comma list");
    simulate->add_option("--control", cfg.control, "constant rotor torques");
    simulate->add_option("--t-end", cfg.t_end);
    simulate->add_option("--dt", cfg.dt);

    auto* related = app.add_subcommand("check-related", "full vs reduced relatedness on a level set");
    add_common(related, cfg);
    add_system(related, cfg);
    related->add_option("--mu", cfg.mu, "momentum level (3 values)");
    related->add_option("--control", cfg.control, "constant rotor torques");
    related->add_option("--n-samples", cfg.n_samples);
    related->add_option("--tolerance", cfg.tolerance);
    related->add_option("--perturb", cfg.perturb, "add eps mu_0^4 to the reduced Hamiltonian");

    auto* orbit = app.add_subcommand("check-orbit", "Casimir drift along the reduced flow");
    add_common(orbit, cfg);
    add_system(orbit, cfg);
    orbit->add_option("--state", cfg.state);
    orbit->add_option("--control", cfg.control);
    orbit->add_option("--t-end", cfg.t_end);
    orbit->add_option("--dt", cfg.dt);
    orbit->add_option("--tolerance", cfg.tolerance);

    auto* equiv = app.add_subcommand("check-equiv", "controlled matching and control synthesis");
    add_common(equiv, cfg);
    equiv->add_option("--pair", cfg.pair, "rescaled-oscillator | rescaled-oscillator-forced | random-linear");
    equiv->add_option("--params", cfg.params);
    equiv->add_option("--n-samples", cfg.n_samples);

    auto* hj = app.add_subcommand("check-hj", "Hamilton-Jacobi bi-implication on case files");
    add_common(hj, cfg);
    hj->add_option("--case", cfg.cases, "case JSON (repeatable; default: shipped cases)");

    auto* invariants = app.add_subcommand("invariants", "Lie algebra invariants");
    add_common(invariants, cfg);
    invariants->add_option("--algebra", cfg.algebra, "algebra JSON (default: shipped algebras)");
    invariants->add_option("--n-samples", cfg.n_samples);

    auto* list = app.add_subcommand("list-systems", "print the system registry");
    list->add_option("--out", cfg.out_path);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) {
        rev.pop_back();  // program name
    }
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kPass;
    } catch (const CLI::ParseError& e) {
        err << "chreduct: " << e.what() << "\n";
        return kBadInput;
    }

    try {
        for (auto* sub : app.get_subcommands()) {
            cfg.command = sub->get_name();
        }
        apply_config_file(cfg);
        validate(cfg);
        if (cfg.command == "simulate") {
            return cmd_simulate(cfg, out, *logger);
        }
        if (cfg.command == "check-related") {
            return cmd_check_related(cfg, out, *logger);
        }
        if (cfg.command == "check-orbit") {
            return cmd_check_orbit(cfg, out, *logger);
        }
        if (cfg.command == "check-equiv") {
            return cmd_check_equiv(cfg, out, *logger);
        }
        if (cfg.command == "check-hj") {
            return cmd_check_hj(cfg, out, *logger);
        }
        if (cfg.command == "invariants") {
            return cmd_invariants(cfg, out, *logger);
        }
        return cmd_list_systems(cfg, out);
    } catch (const UnknownNameError& e) {
        err << "chreduct: " << e.what() << "\n";
        return kUnknownName;
    } catch (const OutputError& e) {
        err << "chreduct: " << e.what() << "\n";
        return kOutputError;
    } catch (const ConfigError& e) {
        err << "chreduct: " << e.what() << "\n";
        return kBadInput;
    } catch (const Error& e) {
        err << "chreduct: " << e.what() << "\n";
        return kCheckFailed;
    }
}

}  // namespace chreduct::cli
