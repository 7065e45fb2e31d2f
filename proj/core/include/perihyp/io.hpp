#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "perihyp/diagnostics.hpp"
#include "perihyp/field.hpp"
#include "perihyp/solver.hpp"

namespace perihyp {

/// Metadata stamped into every emitted file (version, config hash, grid...).
using FileMeta = std::map<std::string, std::string>;

/// CSV with '#'-prefixed metadata lines, a fixed header
/// t_index,x_index,component,value, LF line endings and 17 significant digits.
void write_field_csv(const std::string& path, const Field& f, const FileMeta& meta);

/// JSON report with a "meta" object carrying the same metadata.
void write_json(const std::string& path, const nlohmann::ordered_json& body,
                const FileMeta& meta);

nlohmann::ordered_json report_to_json(const SolveReport& rep);
nlohmann::ordered_json resonance_to_json(const ResonanceTable& table);
nlohmann::ordered_json probe_to_json(const SmoothnessProbe& probe);

}  // namespace perihyp
