#include "hollowpca/experiments/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "hollowpca/experiments/harness.hpp"

namespace hollowpca::experiments {

namespace {

constexpr std::pair<ExperimentKind, std::string_view> kNames[] = {
    {ExperimentKind::HollowingDemo, "hollowing-demo"},
    {ExperimentKind::CsbmPhase, "csbm-phase"},
    {ExperimentKind::CsbmModifiedSparse, "csbm-modified-sparse"},
    {ExperimentKind::GmmRate, "gmm-rate"},
    {ExperimentKind::LpApprox, "lp-approx"},
    {ExperimentKind::KmeansMixture, "kmeans-mixture"},
};

[[noreturn]] void bad(const std::string& msg) { throw ConfigError(msg); }

double number(const json& v, const std::string& where) {
  if (!v.is_number()) bad(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad(where + ": value must be finite");
  return x;
}

const ParamSpec* find_param(const ExperimentSpec& spec, const std::string& name) {
  for (const auto& p : spec.params)
    if (p.name == name) return &p;
  return nullptr;
}

const OptionSpec* find_option(const ExperimentSpec& spec, const std::string& name) {
  for (const auto& o : spec.options)
    if (o.name == name) return &o;
  return nullptr;
}

void check_param_name(const ExperimentSpec& spec, const std::string& name, const std::string& where) {
  if (!find_param(spec, name))
    bad(where + ": unknown parameter '" + name + "' for experiment " + std::string(to_string(spec.kind)));
}

std::vector<double> axis_values(const json& v, const std::string& where) {
  std::vector<double> out;
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  } else if (v.is_object()) {
    for (const auto& [key, _] : v.items())
      if (key != "from" && key != "to" && key != "step") bad(where + ": range accepts only from/to/step");
    if (!v.contains("from") || !v.contains("to") || !v.contains("step")) bad(where + ": range needs from, to, step");
    const double from = number(v["from"], where + ".from");
    const double to = number(v["to"], where + ".to");
    const double step = number(v["step"], where + ".step");
    if (!(step > 0.0) || to < from) bad(where + ": range needs step > 0 and to >= from");
    const auto count = static_cast<long>(std::floor((to - from) / step + 1e-9)) + 1;
    if (count > 100000) bad(where + ": range has too many values");
    for (long k = 0; k < count; ++k) out.push_back(std::round((from + static_cast<double>(k) * step) * 1e12) / 1e12);
  } else {
    bad(where + ": expected a list of numbers or a {from, to, step} range");
  }
  if (out.empty()) bad(where + ": axis has no values");
  return out;
}

std::string describe(const GridPoint& p) {
  std::string s;
  for (const auto& [name, value] : p.values) {
    if (!s.empty()) s += ", ";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%g", name.c_str(), value);
    s += buf;
  }
  return s;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  for (const auto& [k, name] : kNames)
    if (k == kind) return name;
  return "unknown";
}

std::optional<ExperimentKind> parse_kind(std::string_view name) {
  for (const auto& [k, n] : kNames)
    if (n == name) return k;
  return std::nullopt;
}

double GridPoint::operator[](std::string_view name) const {
  for (const auto& [key, value] : values)
    if (key == name) return value;
  throw ConfigError("parameter '" + std::string(name) + "' is not defined for this experiment");
}

Index GridPoint::count(std::string_view name) const {
  const double v = (*this)[name];
  if (v != std::floor(v) || std::abs(v) > 1e15)
    throw ConfigError("parameter '" + std::string(name) + "' must be an integer");
  return static_cast<Index>(v);
}

const std::string& GridPoint::option(const std::string& name) const {
  const auto it = options.find(name);
  if (it == options.end()) throw ConfigError("option '" + name + "' is not defined for this experiment");
  return it->second;
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) bad("config must be a JSON object");
  static const std::set<std::string> known = {"schema_version", "experiment", "name",   "description",
                                              "seed",           "replicates", "output", "params",
                                              "grid",           "points",     "options", "paired_axes"};
  for (const auto& [key, _] : doc.items())
    if (!known.count(key)) bad("unknown top-level key '" + key + "'");

  ExperimentConfig cfg;
  if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer())
    bad("schema_version (integer) is required");
  cfg.schema_version = doc["schema_version"].get<int>();
  if (cfg.schema_version != kSchemaVersion)
    bad("unsupported schema_version " + std::to_string(cfg.schema_version) + " (expected " +
        std::to_string(kSchemaVersion) + ")");

  if (!doc.contains("experiment") || !doc["experiment"].is_string()) bad("experiment (string) is required");
  const auto kind = parse_kind(doc["experiment"].get<std::string>());
  if (!kind) bad("unknown experiment '" + doc["experiment"].get<std::string>() + "'");
  cfg.experiment = *kind;
  const ExperimentSpec& spec = spec_for(cfg.experiment);

  cfg.name = std::string(to_string(cfg.experiment));
  if (doc.contains("name")) {
    if (!doc["name"].is_string() || doc["name"].get<std::string>().empty()) bad("name must be a non-empty string");
    cfg.name = doc["name"].get<std::string>();
    if (cfg.name.find_first_of("/\\") != std::string::npos) bad("name must not contain path separators");
  }

  if (!doc.contains("seed") || !doc["seed"].is_number_integer() ||
      (!doc["seed"].is_number_unsigned() && doc["seed"].get<std::int64_t>() < 0))
    bad("seed (non-negative integer) is required");
  cfg.seed = doc["seed"].get<std::uint64_t>();

  if (!doc.contains("replicates") || !doc["replicates"].is_number_integer()) bad("replicates (integer) is required");
  cfg.replicates = doc["replicates"].get<Index>();
  if (cfg.replicates < 1) bad("replicates must be >= 1");

  if (doc.contains("output")) {
    if (!doc["output"].is_string()) bad("output must be a string");
    cfg.output = doc["output"].get<std::string>();
  }

  std::set<std::string> seen;
  if (doc.contains("params")) {
    if (!doc["params"].is_object()) bad("params must be an object");
    for (const auto& [key, value] : doc["params"].items()) {
      check_param_name(spec, key, "params");
      cfg.params.emplace_back(key, number(value, "params." + key));
      seen.insert(key);
    }
  }
  if (doc.contains("grid")) {
    if (!doc["grid"].is_object()) bad("grid must be an object of axes");
    for (const auto& [key, value] : doc["grid"].items()) {
      check_param_name(spec, key, "grid");
      if (!seen.insert(key).second) bad("parameter '" + key + "' is given more than once");
      cfg.grid.emplace_back(key, axis_values(value, "grid." + key));
    }
  }
  if (doc.contains("points")) {
    if (!doc["points"].is_array() || doc["points"].empty()) bad("points must be a non-empty array");
    std::set<std::string> point_keys;
    for (std::size_t i = 0; i < doc["points"].size(); ++i) {
      const json& p = doc["points"][i];
      const std::string where = "points[" + std::to_string(i) + "]";
      if (!p.is_object()) bad(where + ": expected an object");
      std::vector<std::pair<std::string, double>> point;
      for (const auto& [key, value] : p.items()) {
        check_param_name(spec, key, where);
        if (seen.count(key)) bad(where + ": parameter '" + key + "' is also fixed or a grid axis");
        point.emplace_back(key, number(value, where + "." + key));
        point_keys.insert(key);
      }
      cfg.points.push_back(std::move(point));
    }
    seen.insert(point_keys.begin(), point_keys.end());
  }
  if (doc.contains("options")) {
    if (!doc["options"].is_object()) bad("options must be an object");
    for (const auto& [key, value] : doc["options"].items()) {
      const OptionSpec* o = find_option(spec, key);
      if (!o) bad("unknown option '" + key + "' for experiment " + std::string(to_string(spec.kind)));
      if (!value.is_string()) bad("options." + key + " must be a string");
      const auto v = value.get<std::string>();
      if (std::find(o->allowed.begin(), o->allowed.end(), v) == o->allowed.end())
        bad("options." + key + ": '" + v + "' is not one of the allowed values");
      cfg.options[key] = v;
    }
  }
  if (doc.contains("paired_axes")) {
    if (!doc["paired_axes"].is_array()) bad("paired_axes must be an array of names");
    for (const auto& v : doc["paired_axes"]) {
      if (!v.is_string()) bad("paired_axes entries must be strings");
      const auto name = v.get<std::string>();
      const bool varies = std::any_of(cfg.grid.begin(), cfg.grid.end(), [&](const auto& a) { return a.first == name; }) ||
                          std::any_of(cfg.points.begin(), cfg.points.end(), [&](const auto& p) {
                            return std::any_of(p.begin(), p.end(), [&](const auto& kv) { return kv.first == name; });
                          });
      if (!varies) bad("paired axis '" + name + "' is not a grid axis or point parameter");
      cfg.paired_axes.push_back(name);
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(doc);
}

std::vector<GridPoint> expand_grid(const ExperimentConfig& cfg) {
  const ExperimentSpec& spec = spec_for(cfg.experiment);
  std::vector<std::vector<std::pair<std::string, double>>> points = cfg.points;
  if (points.empty()) points.emplace_back();

  std::vector<std::size_t> sizes;
  std::size_t axes_total = 1;
  for (const auto& [_, values] : cfg.grid) {
    sizes.push_back(values.size());
    axes_total *= values.size();
  }

  std::map<std::string, std::string> options;
  for (const auto& o : spec.options) options[o.name] = o.allowed.front();
  for (const auto& [k, v] : cfg.options) options[k] = v;

  std::vector<GridPoint> out;
  std::map<std::vector<double>, Index> streams;
  for (const auto& point : points) {
    for (std::size_t flat = 0; flat < axes_total; ++flat) {
      std::map<std::string, double> chosen;
      for (const auto& [k, v] : cfg.params) chosen[k] = v;
      for (const auto& [k, v] : point) chosen[k] = v;
      std::size_t rest = flat;
      for (std::size_t a = cfg.grid.size(); a-- > 0;) {
        chosen[cfg.grid[a].first] = cfg.grid[a].second[rest % sizes[a]];
        rest /= sizes[a];
      }
      GridPoint g;
      g.index = static_cast<Index>(out.size());
      g.options = options;
      std::vector<double> key;
      for (const auto& p : spec.params) {
        const auto it = chosen.find(p.name);
        const double v = it == chosen.end() ? p.fallback : it->second;
        g.values.emplace_back(p.name, v);
        if (std::find(cfg.paired_axes.begin(), cfg.paired_axes.end(), p.name) == cfg.paired_axes.end())
          key.push_back(v);
      }
      const auto [it, inserted] = streams.emplace(key, static_cast<Index>(streams.size()));
      g.stream = it->second;
      out.push_back(std::move(g));
    }
  }
  return out;
}

json resolved_config(const ExperimentConfig& cfg) {
  const ExperimentSpec& spec = spec_for(cfg.experiment);
  json doc;
  doc["schema_version"] = cfg.schema_version;
  doc["experiment"] = std::string(to_string(cfg.experiment));
  doc["name"] = cfg.name;
  doc["seed"] = cfg.seed;
  doc["replicates"] = cfg.replicates;
  doc["output"] = cfg.output;

  std::set<std::string> varying;
  for (const auto& [k, _] : cfg.grid) varying.insert(k);
  for (const auto& p : cfg.points)
    for (const auto& [k, _] : p) varying.insert(k);
  json params = json::object();
  for (const auto& p : spec.params) {
    if (varying.count(p.name)) continue;
    double v = p.fallback;
    for (const auto& [k, value] : cfg.params)
      if (k == p.name) v = value;
    params[p.name] = v;
  }
  doc["params"] = params;
  json grid = json::object();
  for (const auto& [k, values] : cfg.grid) grid[k] = values;
  doc["grid"] = grid;
  json points = json::array();
  for (const auto& p : cfg.points) {
    json obj = json::object();
    for (const auto& [k, v] : p) obj[k] = v;
    points.push_back(obj);
  }
  if (!points.empty()) doc["points"] = points;
  json options = json::object();
  for (const auto& o : spec.options) {
    const auto it = cfg.options.find(o.name);
    options[o.name] = it == cfg.options.end() ? o.allowed.front() : it->second;
  }
  doc["options"] = options;
  doc["paired_axes"] = cfg.paired_axes;
  return doc;
}

void validate(const ExperimentConfig& cfg) {
  const ExperimentSpec& spec = spec_for(cfg.experiment);
  for (const auto& point : expand_grid(cfg)) {
    try {
      spec.check(point);
    } catch (const Error& e) {
      throw ConfigError("grid point " + std::to_string(point.index) + " (" + describe(point) + "): " + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError("grid point " + std::to_string(point.index) + " (" + describe(point) + "): " + e.what());
    }
  }
}

}  // namespace hollowpca::experiments
