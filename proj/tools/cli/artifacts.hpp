#pragma once

#include <chrono>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace schrolab::cli {

struct CsvRow {
  std::string cell;
  std::string quantity;
  double value = 0.0;
  std::string status;
};

/// Writes the artifacts of one subcommand under output.dir and prints one
/// summary line per artifact. Wall-clock timings go to a separate sidecar so
/// the JSON reports stay byte-identical across runs.
class Artifacts {
 public:
  Artifacts(const Json& config, std::string subcommand, std::ostream& log);

  void json(const std::string& name, Json result, const std::string& summary);
  void csv(const std::string& name, const std::vector<CsvRow>& rows);
  void binary(const std::string& name, const GridFunction& f);
  void binary_matrix(const std::string& name, const Domain& domain, std::span<const double> values);

  void phase(const std::string& label);
  void finish();

  [[nodiscard]] std::string path(const std::string& name, const std::string& ext) const;

 private:
  const Json& config_;
  std::string subcommand_;
  std::ostream& log_;
  std::string dir_;
  bool sidecars_;
  std::chrono::steady_clock::time_point start_;
  std::chrono::steady_clock::time_point last_;
  Json timings_ = Json::object();
};

std::string csv_number(double v);

}  // namespace schrolab::cli
