#include "vsg/config.hpp"

#include "vsg/defaults.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace vsg {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

double require_positive(double v, const std::string& path) {
    if (!(v > 0.0)) fail(path, "must be > 0");
    return v;
}

double require_non_negative(double v, const std::string& path) {
    if (!(v >= 0.0)) fail(path, "must be >= 0");
    return v;
}

double number_at(const json& j, const std::string& key, const std::string& path, double fallback,
                 bool* present = nullptr) {
    if (!j.contains(key)) {
        if (present) *present = false;
        return fallback;
    }
    if (present) *present = true;
    if (!j.at(key).is_number()) fail(path + "." + key, "must be a number");
    return j.at(key).get<double>();
}

// Grid voltage with an explicit unit declaration.
double parse_voltage(const json& v, const std::string& path) {
    if (v.is_number()) fail(path, "must declare a unit: {\"value\":..,\"unit\":\"rms|amplitude|pu\"}");
    if (!v.is_object()) fail(path, "must be an object with value and unit");
    if (!v.contains("value") || !v.at("value").is_number()) fail(path + ".value", "must be a number");
    if (!v.contains("unit") || !v.at("unit").is_string()) fail(path + ".unit", "must be a string");
    const double value = v.at("value").get<double>();
    const std::string unit = v.at("unit").get<std::string>();
    if (unit == "rms") return rms_to_amplitude(value);
    if (unit == "amplitude") return value;
    if (unit == "pu") {
        if (!v.contains("base") || !v.at("base").is_number())
            fail(path + ".base", "per-unit voltage needs a numeric base amplitude");
        return value * v.at("base").get<double>();
    }
    fail(path + ".unit", "must be one of rms, amplitude, pu");
}

Clearing parse_clearing(const json& c, const std::string& path) {
    if (!c.is_object() || !c.contains("type") || !c.at("type").is_string())
        fail(path, "must be an object with a \"type\"");
    const std::string type = c.at("type").get<std::string>();
    if (type == "never") return Clearing::never();
    if (!c.contains("value") || !c.at("value").is_number())
        fail(path + ".value", "clearing needs a numeric value");
    const double value = c.at("value").get<double>();
    if (type == "at_angle") return Clearing::at_angle(value);
    if (type == "at_time") return Clearing::at_time(require_non_negative(value, path + ".value"));
    fail(path + ".type", "must be one of never, at_angle, at_time");
}

// Dotted-path override such as vsg.damping_d=1018.6; the value text is
// parsed as JSON when possible, otherwise taken as a string.
void apply_override(json& root, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) fail("--override", "expected key=value, got '" + spec + "'");
    const std::string key = spec.substr(0, eq);
    const std::string text = spec.substr(eq + 1);

    json value;
    try {
        value = json::parse(text);
    } catch (const json::exception&) {
        value = text;
    }

    json* node = &root;
    std::stringstream ss(key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    if (parts.empty()) fail("--override", "empty key in '" + spec + "'");
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) node = &((*node)[parts[i]]);
    (*node)[parts.back()] = value;
}

}  // namespace

RunConfig load_config(const std::string& json_text, const std::vector<std::string>& overrides) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    for (const auto& ov : overrides) apply_override(doc, ov);

    RunConfig cfg;

    const bool use_reference =
        doc.contains("defaults") && doc.at("defaults").is_string() &&
        (doc.at("defaults") == "paper" || doc.at("defaults") == "reference");
    if (doc.contains("defaults") && !use_reference)
        fail("defaults", "only \"paper\" (alias \"reference\") is understood");
    if (use_reference) {
        cfg.vsg = reference_vsg();
        cfg.grid = reference_grid();
    }

    if (doc.contains("vsg")) {
        const json& v = doc.at("vsg");
        if (!v.is_object()) fail("vsg", "must be an object");
        cfg.vsg.inertia_2h = number_at(v, "inertia_2h", "vsg", cfg.vsg.inertia_2h);
        cfg.vsg.damping_d = number_at(v, "damping_d", "vsg", cfg.vsg.damping_d);
        cfg.vsg.droop_kq = number_at(v, "droop_kq", "vsg", cfg.vsg.droop_kq);
        cfg.vsg.p_ref = number_at(v, "p_ref", "vsg", cfg.vsg.p_ref);
        cfg.vsg.q_ref = number_at(v, "q_ref", "vsg", cfg.vsg.q_ref);
        cfg.vsg.v0 = number_at(v, "v0", "vsg", cfg.vsg.v0);
        cfg.vsg.omega0 = number_at(v, "omega0", "vsg", cfg.vsg.omega0);
    } else if (!use_reference) {
        fail("vsg", "missing (or use \"defaults\": \"paper\")");
    }
    require_positive(cfg.vsg.inertia_2h, "vsg.inertia_2h");
    require_non_negative(cfg.vsg.damping_d, "vsg.damping_d");
    require_non_negative(cfg.vsg.droop_kq, "vsg.droop_kq");
    require_positive(cfg.vsg.v0, "vsg.v0");
    require_positive(cfg.vsg.omega0, "vsg.omega0");

    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        if (!g.is_object()) fail("grid", "must be an object");
        if (g.contains("voltage")) cfg.grid.vg = parse_voltage(g.at("voltage"), "grid.voltage");
        cfg.grid.rg = number_at(g, "rg", "grid", cfg.grid.rg);
        bool has_xg = false;
        const double xg = number_at(g, "xg", "grid", cfg.grid.xg, &has_xg);
        bool has_lg = false;
        const double lg = number_at(g, "lg", "grid", 0.0, &has_lg);
        if (has_xg && has_lg) fail("grid", "give either xg or lg, not both");
        cfg.grid.xg = has_lg ? cfg.vsg.omega0 * lg : xg;
    } else if (!use_reference) {
        fail("grid", "missing (or use \"defaults\": \"paper\")");
    }
    require_non_negative(cfg.grid.vg, "grid.voltage");
    require_non_negative(cfg.grid.rg, "grid.rg");
    require_positive(cfg.grid.xg, "grid.xg");

    if (doc.contains("integrator")) {
        const json& it = doc.at("integrator");
        if (!it.is_object()) fail("integrator", "must be an object");
        cfg.integrator.step =
            require_positive(number_at(it, "step", "integrator", cfg.integrator.step),
                             "integrator.step");
        cfg.integrator.max_time =
            require_positive(number_at(it, "max_time", "integrator", cfg.integrator.max_time),
                             "integrator.max_time");
        if (cfg.integrator.max_time < cfg.integrator.step)
            fail("integrator.max_time", "must be >= integrator.step");
        if (it.contains("window")) {
            const json& w = it.at("window");
            cfg.integrator.window.delta_min =
                number_at(w, "delta_min", "integrator.window", cfg.integrator.window.delta_min);
            cfg.integrator.window.delta_max =
                number_at(w, "delta_max", "integrator.window", cfg.integrator.window.delta_max);
            cfg.integrator.window.domega_min =
                number_at(w, "domega_min", "integrator.window", cfg.integrator.window.domega_min);
            cfg.integrator.window.domega_max =
                number_at(w, "domega_max", "integrator.window", cfg.integrator.window.domega_max);
            if (cfg.integrator.window.delta_min >= cfg.integrator.window.delta_max ||
                cfg.integrator.window.domega_min >= cfg.integrator.window.domega_max)
                fail("integrator.window", "must be a non-empty rectangle");
        }
    }

    if (doc.contains("seeds")) {
        const json& s = doc.at("seeds");
        if (!s.is_object()) fail("seeds", "must be an object");
        cfg.seeds.count = static_cast<int>(number_at(s, "count", "seeds", cfg.seeds.count));
        if (cfg.seeds.count < 4) fail("seeds.count", "must be >= 4");
        cfg.seeds.radius =
            require_positive(number_at(s, "radius", "seeds", cfg.seeds.radius), "seeds.radius");
        if (s.contains("mode")) {
            const std::string mode = s.at("mode").get<std::string>();
            if (mode == "ring")
                cfg.seeds.mode = SeedMode::Ring;
            else if (mode == "separatrix_pair")
                cfg.seeds.mode = SeedMode::SeparatrixPair;
            else
                fail("seeds.mode", "must be ring or separatrix_pair");
        }
    }

    if (doc.contains("scenarios")) {
        const json& list = doc.at("scenarios");
        if (!list.is_array()) fail("scenarios", "must be an array");
        int idx = 0;
        for (const auto& sc : list) {
            const std::string path = "scenarios[" + std::to_string(idx) + "]";
            ScenarioSpec spec;
            spec.name = sc.contains("name") ? sc.at("name").get<std::string>()
                                            : "scenario" + std::to_string(idx);
            spec.sag = number_at(sc, "sag", path, 1.0);
            if (!(spec.sag > 0.0) || spec.sag > 2.0) fail(path + ".sag", "must be in (0, 2]");
            spec.post_sag = number_at(sc, "post_sag", path, 1.0);
            spec.fault_time =
                require_non_negative(number_at(sc, "fault_time", path, 0.0), path + ".fault_time");
            if (sc.contains("clearing"))
                spec.clearing = parse_clearing(sc.at("clearing"), path + ".clearing");
            cfg.scenarios.push_back(spec);
            ++idx;
        }
    }

    if (doc.contains("portrait")) {
        const json& pt = doc.at("portrait");
        PortraitSpec spec;
        spec.delta_min = number_at(pt, "delta_min", "portrait", spec.delta_min);
        spec.delta_max = number_at(pt, "delta_max", "portrait", spec.delta_max);
        spec.domega_min = number_at(pt, "domega_min", "portrait", spec.domega_min);
        spec.domega_max = number_at(pt, "domega_max", "portrait", spec.domega_max);
        spec.nx = static_cast<int>(number_at(pt, "nx", "portrait", spec.nx));
        spec.ny = static_cast<int>(number_at(pt, "ny", "portrait", spec.ny));
        if (spec.nx < 1 || spec.ny < 1) fail("portrait.nx", "grid must be at least 1x1");
        spec.max_time =
            require_positive(number_at(pt, "max_time", "portrait", spec.max_time),
                             "portrait.max_time");
        spec.sag = number_at(pt, "sag", "portrait", spec.sag);
        cfg.portrait = spec;
    }

    if (doc.contains("sweep")) {
        const json& sw = doc.at("sweep");
        SweepSpec spec;
        if (!sw.contains("parameter") || !sw.at("parameter").is_string())
            fail("sweep.parameter", "must name a parameter");
        spec.parameter = sw.at("parameter").get<std::string>();
        const bool known = spec.parameter == "damping_d" || spec.parameter == "inertia_2h" ||
                           spec.parameter == "droop_kq" || spec.parameter == "p_ref" ||
                           spec.parameter == "sag" || spec.parameter == "rg_xg_ratio";
        if (!known)
            fail("sweep.parameter",
                 "must be one of damping_d, inertia_2h, droop_kq, p_ref, sag, rg_xg_ratio");
        if (!sw.contains("values") || !sw.at("values").is_array() || sw.at("values").empty())
            fail("sweep.values", "must be a non-empty array of numbers");
        for (const auto& v : sw.at("values")) {
            if (!v.is_number()) fail("sweep.values", "must be numbers");
            spec.values.push_back(v.get<double>());
        }
        cfg.sweep = spec;
    }

    if (doc.contains("cca")) {
        const json& c = doc.at("cca");
        if (!c.is_object() || !c.contains("sags") || !c.at("sags").is_array())
            fail("cca", "must be an object with a \"sags\" array");
        for (const auto& v : c.at("sags")) {
            if (!v.is_number()) fail("cca.sags", "must be numbers");
            cfg.cca_sags.push_back(v.get<double>());
        }
    }

    if (doc.contains("output_dir")) {
        if (!doc.at("output_dir").is_string()) fail("output_dir", "must be a string");
        cfg.output_dir = doc.at("output_dir").get<std::string>();
    }

    return cfg;
}

RunConfig load_config_file(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_config(ss.str(), overrides);
}

}  // namespace vsg
