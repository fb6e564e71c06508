#include "ergopt/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>

namespace ergopt {

namespace {

const std::map<std::string, std::set<std::string>>& section_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"", {"system", "observable", "grid", "tolerances", "seed", "output_dir",
            "subaction", "orbits", "alpha", "shadow", "perturb", "gibbs", "sweep",
            "entropy", "bq", "morris", "returns"}},
      {"system", {"kind", "m", "symbols", "lambda", "depth", "matrix"}},
      {"grid", {"resolution", "depth"}},
      {"tolerances", {"subaction_tol", "gibbs_tol", "mather_tol"}},
      {"subaction", {"max_iter", "refine_pmax", "cascade"}},
      {"orbits", {"p_max"}},
      {"alpha", {"p_max", "beta_lo", "beta_hi"}},
      {"shadow", {"points", "periodic"}},
      {"perturb", {"epsilon", "delta", "gamma_delta", "M", "p_max", "beta_schedule",
                   "mass_threshold", "n_preorbits", "preorbit_depth", "h"}},
      {"gibbs", {"beta", "stabilized"}},
      {"sweep", {"beta_schedule", "test_functions", "orbit_radius", "candidate_pmax"}},
      {"entropy", {"samples", "L_max", "eps", "w", "k_max"}},
      {"bq", {"n_max", "K"}},
      {"morris", {"beta_size", "n", "p_max", "K"}},
      {"returns", {"Q", "N0", "N", "horizon", "q", "w"}},
  };
  return keys;
}

const std::map<std::string, std::set<std::string>>& observable_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"trig", {"type", "terms"}},
      {"constant", {"type", "value"}},
      {"piecewise", {"type", "breakpoints", "values"}},
      {"cylinder", {"type", "depth", "values"}},
      {"sum", {"type", "terms"}},
      {"scale", {"type", "factor", "inner"}},
      {"dist_to_orbit", {"type", "points", "exponent"}},
  };
  return keys;
}

void check_keys(const Json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ValidationError("unknown config key '" + it.key() + "' in " +
                            (where.empty() ? "the top level" : where));
}

void validate_observable_spec(const Json& spec, const std::string& where) {
  if (!spec.is_object()) throw ValidationError("observable spec must be an object at " + where);
  if (!spec.contains("type")) throw ValidationError("observable spec missing 'type' at " + where);
  const std::string type = spec.at("type").get<std::string>();
  auto it = observable_keys().find(type);
  if (it == observable_keys().end())
    throw ValidationError("unknown observable type '" + type + "' at " + where);
  check_keys(spec, it->second, where);
  if (type == "sum") {
    for (const auto& term : spec.value("terms", Json::array()))
      validate_observable_spec(term, where + ".terms[]");
  } else if (type == "scale") {
    if (spec.contains("inner")) validate_observable_spec(spec.at("inner"), where + ".inner");
  }
}

}  // namespace

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  Json doc;
  try {
    in >> doc;
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config root must be an object");
  return doc;
}

void apply_override(Json& doc, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ValidationError("--set expects path=value, got: " + assignment);
  std::string path = assignment.substr(0, eq);
  std::string raw = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(raw);
  } catch (const Json::parse_error&) {
    value = raw;  // bare string
  }
  Json* cursor = &doc;
  size_t start = 0;
  while (true) {
    size_t dot = path.find('.', start);
    std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty()) throw ValidationError("--set has an empty path segment: " + assignment);
    if (dot == std::string::npos) {
      (*cursor)[key] = value;
      return;
    }
    cursor = &(*cursor)[key];
    start = dot + 1;
  }
}

void validate_config(const Json& doc, const std::string& subcommand) {
  check_keys(doc, section_keys().at(""), "");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    auto sk = section_keys().find(key);
    if (sk != section_keys().end() && !sk->second.empty() && it.value().is_object() &&
        key != "observable")
      check_keys(it.value(), sk->second, key);
  }
  if (doc.contains("observable")) validate_observable_spec(doc.at("observable"), "observable");
  if (doc.contains("perturb") && doc.at("perturb").contains("h") &&
      !doc.at("perturb").at("h").is_null())
    validate_observable_spec(doc.at("perturb").at("h"), "perturb.h");
  if (doc.contains("sweep"))
    for (const auto& tf : doc.at("sweep").value("test_functions", Json::array()))
      validate_observable_spec(tf, "sweep.test_functions[]");

  static const std::map<std::string, std::vector<std::string>> required = {
      {"subaction", {"system", "observable"}}, {"alpha", {"system", "observable"}},
      {"maxorbit", {"system", "observable"}},  {"shadow", {"system", "shadow"}},
      {"perturb", {"system", "observable", "perturb"}},
      {"gibbs", {"system", "observable", "gibbs"}},
      {"sweep", {"system", "observable"}},     {"entropy", {"system"}},
      {"bq", {"system", "bq"}},                {"morris", {"system", "observable", "morris"}},
      {"returns", {"system", "returns"}},
  };
  auto req = required.find(subcommand);
  if (req == required.end()) throw ValidationError("unknown subcommand: " + subcommand);
  for (const auto& section : req->second)
    if (!doc.contains(section))
      throw ValidationError("subcommand '" + subcommand + "' needs config section '" +
                            section + "'");
}

ExpandingSystem make_system(const Json& spec) {
  if (!spec.is_object() || !spec.contains("kind"))
    throw ValidationError("system spec needs a 'kind'");
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "circle") return ExpandingSystem::circle_map(spec.value("m", 2));
  if (kind == "shift")
    return ExpandingSystem::full_shift(spec.value("symbols", 2), spec.value("lambda", 0.5),
                                       spec.value("depth", 40));
  if (kind == "sft") {
    if (!spec.contains("matrix")) throw ValidationError("sft system needs a 'matrix'");
    return ExpandingSystem::subshift(
        spec.at("matrix").get<std::vector<std::vector<int>>>(), spec.value("lambda", 0.5),
        spec.value("depth", 40));
  }
  throw ValidationError("unknown system kind: " + kind);
}

Point parse_point(const ExpandingSystem& sys, const Json& value) {
  Point p;
  if (value.is_number()) {
    p = Point::circle(value.get<double>());
  } else if (value.is_array()) {
    p = Point::word(value.get<std::vector<int>>());
  } else {
    throw ValidationError("point must be a number (circle) or symbol array (shift)");
  }
  sys.validate(p);
  return p;
}

Observable make_observable(const ExpandingSystem& sys, const Json& spec) {
  validate_observable_spec(spec, "observable");
  const std::string type = spec.at("type").get<std::string>();
  if (type == "trig") {
    std::vector<TrigTerm> terms;
    for (const auto& row : spec.at("terms")) {
      if (!row.is_array() || row.size() != 3)
        throw ValidationError("trig terms must be [k, cos_coef, sin_coef] triples");
      terms.push_back({row[0].get<int>(), row[1].get<double>(), row[2].get<double>()});
    }
    return Observable::trig(std::move(terms));
  }
  if (type == "constant") return Observable::constant(spec.at("value").get<double>());
  if (type == "piecewise")
    return Observable::piecewise_linear(spec.at("breakpoints").get<std::vector<double>>(),
                                        spec.at("values").get<std::vector<double>>());
  if (type == "cylinder")
    return Observable::cylinder(sys, spec.at("depth").get<int>(),
                                spec.at("values").get<std::vector<double>>());
  if (type == "sum") {
    std::vector<Observable> children;
    for (const auto& term : spec.at("terms")) children.push_back(make_observable(sys, term));
    return Observable::sum(std::move(children));
  }
  if (type == "scale")
    return Observable::scale(spec.at("factor").get<double>(),
                             make_observable(sys, spec.at("inner")));
  if (type == "dist_to_orbit") {
    std::vector<Point> points;
    for (const auto& v : spec.at("points")) points.push_back(parse_point(sys, v));
    return Observable::dist_to_set(sys, std::move(points), spec.value("exponent", 1));
  }
  throw ValidationError("unknown observable type: " + type);
}

std::string config_hash(const Json& doc) {
  const std::string dump = doc.dump();
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

Json config_schema(const std::string& subcommand) {
  Json schema;
  schema["config_sections"] = Json::object();
  for (const auto& [section, keys] : section_keys()) {
    if (section.empty()) continue;
    schema["config_sections"][section] = std::vector<std::string>(keys.begin(), keys.end());
  }
  schema["observable_types"] = Json::object();
  for (const auto& [type, keys] : observable_keys())
    schema["observable_types"][type] = std::vector<std::string>(keys.begin(), keys.end());

  static const std::map<std::string, Json> columns = {
      {"subaction", {{"u.csv", "node coordinate, sub-action value"}}},
      {"gibbs", {{"weights.csv", "node coordinate, measure weight, density, conjugate"}}},
      {"sweep",
       {{"sweep.csv",
         "beta, pressure, pressure_slope, integral_<i>..., diff_<i>..., orbit_mass_<j>..."}}},
      {"entropy",
       {{"brin_katok.csv", "L, ball fraction, -log(fraction)/L"},
        {"partition.csv", "k, partition entropy at level k"}}},
      {"bq", {{"bq.csv", "n, minimal distance integral, orbit period, orbit points"}}},
      {"returns", {{"returns.csv", "index, return time, gap to previous return"}}},
  };
  auto it = columns.find(subcommand);
  schema["outputs"] = (it != columns.end()) ? it->second : Json::object();
  schema["exit_codes"] = {{"0", "success"},
                          {"1", "validation error"},
                          {"2", "numerical non-convergence or overflow guard"},
                          {"3", "infeasible perturbation constants"}};
  return schema;
}

}  // namespace ergopt
