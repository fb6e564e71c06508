#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "ergopt/dynamics.hpp"
#include "ergopt/observable.hpp"

namespace ergopt {

using Json = nlohmann::json;

Json load_config_file(const std::string& path);

// --set path.to.key=value (value parsed as JSON, falling back to a string)
void apply_override(Json& doc, const std::string& assignment);

// Reject unknown keys anywhere and check the sections the subcommand needs.
void validate_config(const Json& doc, const std::string& subcommand);

ExpandingSystem make_system(const Json& system_spec);
Observable make_observable(const ExpandingSystem& sys, const Json& spec);
Point parse_point(const ExpandingSystem& sys, const Json& value);

// FNV-1a over the canonical (sorted-key) dump
std::string config_hash(const Json& doc);

// the published config schema plus per-subcommand output column notes
Json config_schema(const std::string& subcommand);

}  // namespace ergopt
