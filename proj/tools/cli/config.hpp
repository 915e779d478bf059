#pragma once

#include <string>
#include <vector>

#include "schrolab/report_json.hpp"

namespace schrolab::cli {

/// Every recognized key with its default value. A config file may only set
/// keys that appear here; the value type must match the default's type.
const Json& default_config();

/// Merges a config document (JSON, comments allowed) and key.path=value
/// overrides into the defaults. Throws PreconditionError naming the
/// offending key on anything unrecognized.
Json load_config(const std::string& text, const std::vector<std::string>& overrides);
Json load_config_file(const std::string& path, const std::vector<std::string>& overrides);

std::string config_hash(const Json& config);

/// Typed access with a readable error on mismatch.
double get_double(const Json& config, const std::string& path);
int get_int(const Json& config, const std::string& path);
std::string get_string(const Json& config, const std::string& path);
bool get_bool(const Json& config, const std::string& path);
std::vector<double> get_doubles(const Json& config, const std::string& path);

}  // namespace schrolab::cli
