#include "vsg/run.hpp"

#include "vsg/config.hpp"
#include "vsg/defaults.hpp"
#include "vsg/outputs.hpp"
#include "vsg/parallel.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <optional>

namespace vsg {

namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.output_dir) / name).string();
}

void emit_json(const RunConfig& cfg, const std::string& name, const json& doc) {
    validate_output(doc);
    const std::string path = out_path(cfg, name);
    write_text_file(path, to_output_text(doc));
    std::printf("wrote %s\n", path.c_str());
}

void emit_text(const RunConfig& cfg, const std::string& name, const std::string& text) {
    const std::string path = out_path(cfg, name);
    write_text_file(path, text);
    std::printf("wrote %s\n", path.c_str());
}

json grid_json(const GridParams& g) {
    return json{{"vg", g.vg}, {"rg", g.rg}, {"xg", g.xg}};
}

std::string csv_with_id(const Trajectory& tr, int id, bool header) {
    std::string out = header ? "traj_id,t,delta,domega\n" : "";
    char buf[112];
    for (const auto& s : tr.samples) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", id, s.t, s.state.delta,
                      s.state.domega);
        out += buf;
    }
    return out;
}

int cmd_equilibria(const RunConfig& cfg, double sag, const std::string& mode_name) {
    const GridParams g = sagged(cfg.grid, sag);
    const VpccMode mode =
        mode_name == "constant" ? VpccMode::ConstantVpcc : VpccMode::DroopCoupled;
    const auto eqs = find_equilibria(cfg.vsg, g, {-kPi, kPi}, mode);
    json list = json::array();
    for (const auto& e : eqs) list.push_back(equilibrium_json(e));
    emit_json(cfg, "equilibria.json",
              json{{"schema_version", kOutputSchemaVersion},
                   {"kind", "equilibria"},
                   {"mode", mode_name},
                   {"sag", sag},
                   {"grid", grid_json(g)},
                   {"equilibria", std::move(list)}});
    return 0;
}

int cmd_portrait(const RunConfig& cfg) {
    const PortraitSpec spec = cfg.portrait.value_or(PortraitSpec{});
    const GridParams g = sagged(cfg.grid, spec.sag);

    IntegratorConfig ic = cfg.integrator;
    ic.max_time = spec.max_time;
    ic.events.clear();
    ic.convergence.reset();

    const int total = spec.nx * spec.ny;
    std::vector<Trajectory> trajectories(total);
    parallel_for(total, [&](std::size_t k) {
        const int i = static_cast<int>(k) % spec.nx;
        const int j = static_cast<int>(k) / spec.nx;
        const double d = spec.nx == 1 ? spec.delta_min
                                      : spec.delta_min +
                                            (spec.delta_max - spec.delta_min) * i / (spec.nx - 1);
        const double w = spec.ny == 1 ? spec.domega_min
                                      : spec.domega_min +
                                            (spec.domega_max - spec.domega_min) * j / (spec.ny - 1);
        const VectorField rhs = [&](const PhaseState& s) { return forward_rhs(cfg.vsg, g, s); };
        trajectories[k] = integrate(rhs, {d, w}, ic);
    });

    std::string csv;
    json summary = json::array();
    for (int k = 0; k < total; ++k) {
        csv += csv_with_id(trajectories[k], k, k == 0);
        summary.push_back(json{{"id", k},
                               {"init", json::array({trajectories[k].samples.front().state.delta,
                                                     trajectories[k].samples.front().state.domega})},
                               {"samples", trajectories[k].samples.size()}});
    }
    emit_text(cfg, "portrait.csv", csv);
    emit_json(cfg, "portrait.json",
              json{{"schema_version", kOutputSchemaVersion},
                   {"kind", "portrait"},
                   {"grid", grid_json(g)},
                   {"trajectories", std::move(summary)}});
    return 0;
}

int cmd_doa(const RunConfig& cfg, double sag) {
    const GridParams g = sagged(cfg.grid, sag);
    const DoaBoundary b = estimate_doa(cfg.vsg, g, cfg.seeds);
    emit_text(cfg, "boundary.csv", boundary_csv(b));
    emit_json(cfg, "doa.json", boundary_json(b));
    return 0;
}

int cmd_simulate(const RunConfig& cfg) {
    if (cfg.scenarios.empty()) throw ConfigError("scenarios: none configured");
    json list = json::array();
    for (const auto& spec : cfg.scenarios) {
        FaultScenario sc;
        sc.vsg = cfg.vsg;
        sc.pre = cfg.grid;
        sc.fault = sagged(cfg.grid, spec.sag);
        sc.post = sagged(cfg.grid, spec.post_sag);
        sc.fault_time = spec.fault_time;
        sc.clearing = spec.clearing;
        const StabilityVerdict v = simulate_scenario(sc, cfg.integrator);
        const std::string csv_name = "scenario_" + spec.name + ".csv";
        emit_text(cfg, csv_name, to_csv(v.trajectory));
        json row = verdict_json(v);
        row["name"] = spec.name;
        row["sag"] = spec.sag;
        row["trajectory_csv"] = csv_name;
        list.push_back(std::move(row));
    }
    emit_json(cfg, "simulation.json",
              json{{"schema_version", kOutputSchemaVersion},
                   {"kind", "simulation"},
                   {"scenarios", std::move(list)}});
    return 0;
}

int cmd_cca(const RunConfig& cfg) {
    if (cfg.cca_sags.empty()) throw ConfigError("cca.sags: none configured");
    json results = json::array();
    for (double sag : cfg.cca_sags) {
        const GridParams fault = sagged(cfg.grid, sag);
        json row{{"sag", sag}};
        const FaultType type = classify_fault(cfg.vsg, cfg.grid, fault);
        row["fault_type"] = type == FaultType::TypeI ? "I" : type == FaultType::TypeII ? "II" : "III";
        const auto record = [&row](const char* key, auto&& fn) {
            try {
                row[key] = fn();
            } catch (const AnalysisError& e) {
                row[key] = nullptr;
                row[std::string(key) + "_note"] = e.what();
            }
        };
        record("eac", [&] { return cca_eac(cfg.vsg, cfg.grid, fault, cfg.grid); });
        record("doa", [&] { return cca_doa(cfg.vsg, cfg.grid, fault, cfg.grid); });
        record("bruteforce",
               [&] { return cca_bruteforce(cfg.vsg, cfg.grid, fault, cfg.grid, cfg.integrator); });
        results.push_back(std::move(row));
    }
    emit_json(cfg, "cca.json", json{{"schema_version", kOutputSchemaVersion},
                                    {"kind", "cca"},
                                    {"results", std::move(results)}});
    return 0;
}

struct SweepPoint {
    double value = 0.0;
    double area = 0.0;
    double sep_delta = 0.0;
    double uep_delta = 0.0;
    bool no_equilibrium = false;
    DoaBoundary boundary;
};

int cmd_sweep(const RunConfig& cfg) {
    if (!cfg.sweep) throw ConfigError("sweep: not configured");
    const SweepSpec& spec = *cfg.sweep;

    // Common window anchored at the base-grid attractor so areas compare.
    const auto base_eqs = find_equilibria(cfg.vsg, cfg.grid, {-kPi, kPi}, VpccMode::DroopCoupled);
    const Equilibrium* base_sep = find_sep(base_eqs);
    if (!base_sep) throw NoEquilibrium("base grid has no stable equilibrium");
    const PhaseWindow window{base_sep->delta0 - 2.0 * kPi, base_sep->delta0 + 2.0 * kPi, -150.0,
                             150.0};
    IntegratorConfig ic = cfg.integrator;
    ic.max_time = 5.0;

    std::vector<SweepPoint> points(spec.values.size());
    parallel_for(spec.values.size(), [&](std::size_t i) {
        SweepPoint& pt = points[i];
        pt.value = spec.values[i];
        VsgParams p = cfg.vsg;
        GridParams g = cfg.grid;
        if (spec.parameter == "damping_d") p.damping_d = pt.value;
        else if (spec.parameter == "inertia_2h") p.inertia_2h = pt.value;
        else if (spec.parameter == "droop_kq") p.droop_kq = pt.value;
        else if (spec.parameter == "p_ref") p.p_ref = pt.value;
        else if (spec.parameter == "sag") g.vg = cfg.grid.vg * pt.value;
        else {
            // rg_xg_ratio: vary the ratio holding |Z| fixed.
            const double z = std::hypot(cfg.grid.rg, cfg.grid.xg);
            g.xg = z / std::sqrt(1.0 + pt.value * pt.value);
            g.rg = pt.value * g.xg;
        }
        try {
            pt.boundary = estimate_doa(p, g, cfg.seeds, window, ic);
            pt.area = doa_area(pt.boundary);
            pt.sep_delta = pt.boundary.sep.delta0;
            pt.uep_delta = pt.boundary.uep.delta0;
        } catch (const NoEquilibrium&) {
            pt.no_equilibrium = true;
        }
    });

    std::string csv = "param_value,doa_area,sep_delta,uep_delta,no_equilibrium\n";
    json rows = json::array();
    char buf[160];
    for (std::size_t i = 0; i < points.size(); ++i) {
        const SweepPoint& pt = points[i];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%d\n", pt.value, pt.area,
                      pt.sep_delta, pt.uep_delta, pt.no_equilibrium ? 1 : 0);
        csv += buf;
        if (!pt.no_equilibrium) {
            emit_text(cfg, "sweep_" + spec.parameter + "_" + std::to_string(i) + ".csv",
                      boundary_csv(pt.boundary));
        }
        rows.push_back(json{{"value", pt.value},
                            {"area", pt.area},
                            {"sep_delta", pt.sep_delta},
                            {"uep_delta", pt.uep_delta},
                            {"no_equilibrium", pt.no_equilibrium}});
    }
    emit_text(cfg, "sweep_" + spec.parameter + ".csv", csv);
    emit_json(cfg, "sweep.json", json{{"schema_version", kOutputSchemaVersion},
                                      {"kind", "sweep"},
                                      {"parameter", spec.parameter},
                                      {"points", std::move(rows)}});
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Large-signal stability analysis of a grid-connected virtual synchronous "
                 "generator: equilibria, phase portraits, domain-of-attraction estimation and "
                 "critical clearing angles"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "JSON configuration file")->required();
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--override", overrides, "dotted-path config override, key=value");

    double sag = 1.0;
    std::string eq_mode = "droop";
    auto* eq = app.add_subcommand("equilibria", "list and classify equilibria");
    eq->add_option("--sag", sag, "grid voltage scale, per unit");
    eq->add_option("--mode", eq_mode, "droop | constant")
        ->check(CLI::IsMember({"droop", "constant"}));
    auto* portrait = app.add_subcommand("portrait", "grid of forward trajectories");
    auto* doa = app.add_subcommand("doa", "estimate the domain of attraction boundary");
    doa->add_option("--sag", sag, "grid voltage scale, per unit");
    auto* simulate = app.add_subcommand("simulate", "run the configured fault scenarios");
    auto* cca = app.add_subcommand("cca", "critical clearing angle by all three methods");
    auto* sweep = app.add_subcommand("sweep", "DOA boundary across a parameter sweep");

    std::vector<const char*> argv;
    argv.push_back("vsg-doa");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        const RunConfig base = load_config_file(config_path, overrides);
        RunConfig cfg = base;
        if (!out_dir.empty()) cfg.output_dir = out_dir;

        if (eq->parsed()) return cmd_equilibria(cfg, sag, eq_mode);
        if (portrait->parsed()) return cmd_portrait(cfg);
        if (doa->parsed()) return cmd_doa(cfg, sag);
        if (simulate->parsed()) return cmd_simulate(cfg);
        if (cca->parsed()) return cmd_cca(cfg);
        if (sweep->parsed()) return cmd_sweep(cfg);
        return 1;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const AnalysisError& e) {
        std::fprintf(stderr, "analysis error: %s\n", e.what());
        return 2;
    }
}

}  // namespace vsg
