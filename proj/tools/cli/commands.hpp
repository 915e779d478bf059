#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace schrolab::cli {

const std::vector<std::string>& subcommands();

/// Runs one subcommand on a merged config. Returns 0, or 1 when some cell
/// of a matrix run failed; errors propagate as exceptions.
int run(const std::string& subcommand, const Json& config, std::ostream& log);

/// Full front end: parses the config and overrides, runs, and maps
/// exceptions to exit statuses 1 (precondition) and 2 (inconsistency).
int run_guarded(const std::string& subcommand, const std::string& config_path,
                const std::vector<std::string>& overrides, std::ostream& log, std::ostream& err);

}  // namespace schrolab::cli
