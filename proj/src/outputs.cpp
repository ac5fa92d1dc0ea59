#include "vsg/outputs.hpp"

#include "vsg/errors.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace vsg {

using nlohmann::json;

std::string boundary_csv(const DoaBoundary& b) {
    std::string out = "branch_id,delta,domega\n";
    char buf[96];
    for (std::size_t k = 0; k < b.branches.size(); ++k) {
        for (const auto& v : b.branches[k]) {
            std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", k, v.x, v.y);
            out += buf;
        }
    }
    return out;
}

json equilibrium_json(const Equilibrium& e) {
    const char* kind = e.kind == EquilibriumKind::Sep   ? "sep"
                       : e.kind == EquilibriumKind::Uep ? "uep"
                                                        : "degenerate";
    return json{{"delta", e.delta0},
                {"kind", kind},
                {"vpcc", e.vpcc_at},
                {"eigenvalues",
                 json::array({json::array({e.lambda1.real(), e.lambda1.imag()}),
                              json::array({e.lambda2.real(), e.lambda2.imag()})})},
                {"real_pair", e.real_eigenvalues}};
}

json boundary_json(const DoaBoundary& b) {
    json branches = json::array();
    for (const auto& br : b.branches) {
        json line = json::array();
        for (const auto& v : br) line.push_back(json::array({v.x, v.y}));
        branches.push_back(std::move(line));
    }
    json polygon = json::array();
    for (const auto& v : b.polygon) polygon.push_back(json::array({v.x, v.y}));
    return json{{"schema_version", kOutputSchemaVersion},
                {"kind", "doa_boundary"},
                {"branches", std::move(branches)},
                {"polygon", std::move(polygon)},
                {"window",
                 {{"delta_min", b.window.delta_min},
                  {"delta_max", b.window.delta_max},
                  {"domega_min", b.window.domega_min},
                  {"domega_max", b.window.domega_max}}},
                {"sep", equilibrium_json(b.sep)},
                {"uep", equilibrium_json(b.uep)},
                {"area", doa_area(b)}};
}

json verdict_json(const StabilityVerdict& v) {
    const char* type = v.fault_type == FaultType::TypeI    ? "I"
                       : v.fault_type == FaultType::TypeII ? "II"
                                                           : "III";
    json out{{"fault_type", type},
             {"stable", v.stable},
             {"samples", v.trajectory.samples.size()},
             {"end_time", v.trajectory.samples.back().t}};
    if (v.final_sep)
        out["final_sep"] = equilibrium_json(*v.final_sep);
    else
        out["final_sep"] = nullptr;
    return out;
}

namespace {

void require_field(const json& doc, const char* field) {
    if (!doc.contains(field))
        throw ConfigError(std::string("output schema: missing field '") + field + "'");
}

}  // namespace

void validate_output(const json& doc) {
    require_field(doc, "schema_version");
    if (doc.at("schema_version") != kOutputSchemaVersion)
        throw ConfigError("output schema: unknown schema_version");
    require_field(doc, "kind");
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "doa_boundary") {
        for (const char* f : {"branches", "polygon", "window", "sep", "uep", "area"})
            require_field(doc, f);
    } else if (kind == "equilibria") {
        for (const char* f : {"grid", "equilibria"}) require_field(doc, f);
    } else if (kind == "simulation") {
        for (const char* f : {"scenarios"}) require_field(doc, f);
    } else if (kind == "cca") {
        for (const char* f : {"results"}) require_field(doc, f);
    } else if (kind == "sweep") {
        for (const char* f : {"parameter", "points"}) require_field(doc, f);
    } else if (kind == "portrait") {
        for (const char* f : {"grid", "trajectories"}) require_field(doc, f);
    } else {
        throw ConfigError("output schema: unknown kind '" + kind + "'");
    }
}

std::string to_output_text(const json& doc) { return doc.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << content;
}

}  // namespace vsg
