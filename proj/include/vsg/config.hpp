#pragma once

#include "vsg/doa.hpp"
#include "vsg/integrator.hpp"
#include "vsg/model.hpp"
#include "vsg/transient.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vsg {

struct ScenarioSpec {
    std::string name;
    double sag = 1.0;       ///< fault-on grid voltage, per unit of the base grid
    double post_sag = 1.0;  ///< post-clearing grid voltage, per unit
    double fault_time = 0.0;
    Clearing clearing = Clearing::never();
};

struct PortraitSpec {
    double delta_min = -1.0, delta_max = 3.0;
    double domega_min = -60.0, domega_max = 60.0;
    int nx = 5, ny = 5;
    double max_time = 2.0;
    double sag = 1.0;
};

struct SweepSpec {
    std::string parameter;  ///< damping_d | inertia_2h | droop_kq | p_ref | sag | rg_xg_ratio
    std::vector<double> values;
};

struct RunConfig {
    VsgParams vsg{};
    GridParams grid{};
    IntegratorConfig integrator{};
    SeedConfig seeds{};
    std::vector<ScenarioSpec> scenarios;
    std::optional<PortraitSpec> portrait;
    std::optional<SweepSpec> sweep;
    std::vector<double> cca_sags;
    std::string output_dir = "out";
};

/// Parses and validates a config document. `overrides` are dotted-path
/// assignments (e.g. "vsg.damping_d=1018.6") applied before validation.
/// Throws ConfigError naming the offending field.
RunConfig load_config(const std::string& json_text, const std::vector<std::string>& overrides);

/// Reads the file and delegates to load_config.
RunConfig load_config_file(const std::string& path, const std::vector<std::string>& overrides);

}  // namespace vsg
