#include "config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace schrolab::cli {

const Json& default_config() {
  static const Json defaults = Json::parse(R"({
    "domain": {"d": 3, "M": 2.0, "n": 16},
    "potential": {"preset": "constant", "c": 1.0, "a": 1.0, "q": 0.0, "path": ""},
    "symbol": {"preset": "abs_coordinate", "axis": 0, "c": 1.0, "path": ""},
    "weight": {"preset": "one", "a": 0.5, "theta": 1.0, "delta": 0.5, "source": "spike", "path": ""},
    "input": {"preset": "random", "amplitude": 1.0, "at": [0.0, 0.0, 0.0], "width": 0.5, "seed": 11},
    "params": {"theta": 1.0, "p": 2.0, "q": 2.5, "N": 1.0, "delta": 0.25, "s": 0.0, "lambda": 1.0,
               "mode": "all-balls", "k_max": 6, "nu": 2.0, "mu": 1.0, "cap": 64.0, "epsilons": [0.05, 0.1, 0.2, 0.4],
               "threshold": 64.0},
    "sample": {"centers": 200, "radii": 24, "r_min": 0.0, "r_max": 0.0, "seed": 1, "pairs": 2000,
               "triples": 400},
    "rho": {"tol": 1e-3, "points_per_decade": 64, "kappa": 4.0, "fixed": 0.0, "probe": [0.0, 0.0, 0.0]},
    "experiment": {"resolutions": [8, 12, 16], "p": [2.0], "method": "exact-p2", "seeds": [1, 2, 3],
                   "tolerance": 2.0, "lower_bound_tolerance": 4.0, "weak_tolerance": 0.5, "lambdas": 41, "starts": 8, "iterations": 200,
                   "restarts": 64, "operator": "commutator"},
    "output": {"dir": "schrolab-out", "sidecars": true}
  })");
  return defaults;
}

namespace {

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  std::string item;
  while (std::getline(ss, item, '.')) parts.push_back(item);
  return parts;
}

bool same_kind(const Json& a, const Json& b) {
  if (a.is_number() && b.is_number()) return !(a.is_number_integer() && b.is_number_float());
  return a.type() == b.type();
}

void merge(Json& target, const Json& source, const Json& schema, const std::string& prefix) {
  require(source.is_object(), "config: expected an object at '" + (prefix.empty() ? "<root>" : prefix) + "'");
  for (auto it = source.begin(); it != source.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    require(schema.contains(it.key()), "config: unknown key '" + key + "'");
    const Json& expected = schema.at(it.key());
    if (expected.is_object()) {
      merge(target[it.key()], it.value(), expected, key);
    } else {
      require(same_kind(expected, it.value()), "config: wrong type for '" + key + "'");
      target[it.key()] = expected.is_number_float() ? Json(it.value().get<double>()) : it.value();
    }
  }
}

void apply_override(Json& config, const std::string& text) {
  const auto eq = text.find('=');
  require(eq != std::string::npos && eq > 0, "override must be key=value: '" + text + "'");
  const std::string path = text.substr(0, eq);
  const std::string raw = text.substr(eq + 1);
  const Json* schema = &default_config();
  Json* node = &config;
  const auto parts = split_path(path);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    require(schema->is_object() && schema->contains(parts[i]), "config: unknown key '" + path + "'");
    schema = &schema->at(parts[i]);
    node = &(*node)[parts[i]];
  }
  require(!schema->is_object(), "config: '" + path + "' is a section, not a value");
  Json value = Json::parse(raw, nullptr, false);
  if (value.is_discarded() || (schema->is_string() && !value.is_string())) value = raw;
  if (schema->is_number_float() && value.is_number()) value = value.get<double>();
  require(same_kind(*schema, value), "config: wrong type for '" + path + "'");
  *node = value;
}

const Json& lookup(const Json& config, const std::string& path) {
  const Json* node = &config;
  for (const auto& part : split_path(path)) {
    require(node->is_object() && node->contains(part), "config: missing key '" + path + "'");
    node = &node->at(part);
  }
  return *node;
}

}  // namespace

Json load_config(const std::string& text, const std::vector<std::string>& overrides) {
  Json config = default_config();
  if (!text.empty()) {
    Json doc;
    try {
      doc = Json::parse(text, nullptr, true, true);
    } catch (const Json::parse_error& e) {
      throw PreconditionError(std::string("config: parse error: ") + e.what());
    }
    merge(config, doc, default_config(), "");
  }
  for (const auto& o : overrides) apply_override(config, o);
  return config;
}

Json load_config_file(const std::string& path, const std::vector<std::string>& overrides) {
  if (path.empty()) return load_config("", overrides);
  std::ifstream in(path);
  require(static_cast<bool>(in), "config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_config(ss.str(), overrides);
}

std::string config_hash(const Json& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(config.dump())));
  return buf;
}

double get_double(const Json& config, const std::string& path) {
  const Json& v = lookup(config, path);
  require(v.is_number(), "config: '" + path + "' must be a number");
  return v.get<double>();
}

int get_int(const Json& config, const std::string& path) {
  const Json& v = lookup(config, path);
  require(v.is_number_integer(), "config: '" + path + "' must be an integer");
  return v.get<int>();
}

std::string get_string(const Json& config, const std::string& path) {
  const Json& v = lookup(config, path);
  require(v.is_string(), "config: '" + path + "' must be a string");
  return v.get<std::string>();
}

bool get_bool(const Json& config, const std::string& path) {
  const Json& v = lookup(config, path);
  require(v.is_boolean(), "config: '" + path + "' must be a boolean");
  return v.get<bool>();
}

std::vector<double> get_doubles(const Json& config, const std::string& path) {
  const Json& v = lookup(config, path);
  require(v.is_array(), "config: '" + path + "' must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    require(x.is_number(), "config: '" + path + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace schrolab::cli
