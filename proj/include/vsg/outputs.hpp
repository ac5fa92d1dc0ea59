#pragma once

#include "vsg/doa.hpp"
#include "vsg/equilibrium.hpp"
#include "vsg/integrator.hpp"
#include "vsg/transient.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace vsg {

inline constexpr int kOutputSchemaVersion = 1;

/// branch_id,delta,domega rows at full precision.
std::string boundary_csv(const DoaBoundary& b);

nlohmann::json equilibrium_json(const Equilibrium& e);
nlohmann::json boundary_json(const DoaBoundary& b);
nlohmann::json verdict_json(const StabilityVerdict& v);

/// Validates an emitted document against the declared output schema:
/// schema_version plus the required fields for its "kind". Throws
/// ConfigError on the first violation.
void validate_output(const nlohmann::json& doc);

/// Serializes with a trailing newline; objects are emitted with sorted
/// keys, so equal documents produce identical bytes.
std::string to_output_text(const nlohmann::json& doc);

/// Creates parent directories as needed and writes the file atomically
/// enough for test use.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace vsg
