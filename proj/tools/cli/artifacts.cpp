#include "artifacts.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "presets.hpp"

namespace schrolab::cli {

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Artifacts::Artifacts(const Json& config, std::string subcommand, std::ostream& log)
    : config_(config),
      subcommand_(std::move(subcommand)),
      log_(log),
      dir_(get_string(config, "output.dir")),
      sidecars_(get_bool(config, "output.sidecars")),
      start_(std::chrono::steady_clock::now()),
      last_(start_) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  require(!ec, "output: cannot create directory '" + dir_ + "'");
}

std::string Artifacts::path(const std::string& name, const std::string& ext) const {
  std::string file = subcommand_;
  if (!name.empty()) file += "." + name;
  return (std::filesystem::path(dir_) / (file + ext)).string();
}

void Artifacts::json(const std::string& name, Json result, const std::string& summary) {
  Json doc;
  doc["subcommand"] = subcommand_;
  doc["config_hash"] = config_hash(config_);
  doc["seed"] = config_.at("sample").at("seed");
  doc["seeds"] = Json{{"sample", config_.at("sample").at("seed")},
                      {"input", config_.at("input").at("seed")},
                      {"experiment", config_.at("experiment").at("seeds")}};
  doc["grid"] = serialize(domain_from(config_));
  doc["config"] = config_;
  doc["result"] = std::move(result);
  const std::string file = path(name, ".json");
  std::ofstream out(file, std::ios::binary);
  require(static_cast<bool>(out), "output: cannot write '" + file + "'");
  out << doc.dump(2) << '\n';
  log_ << file << ": " << summary << '\n';
}

void Artifacts::csv(const std::string& name, const std::vector<CsvRow>& rows) {
  const std::string file = path(name, ".csv");
  std::ofstream out(file, std::ios::binary);
  require(static_cast<bool>(out), "output: cannot write '" + file + "'");
  out << "cell,quantity,value,status\n";
  std::size_t failing = 0;
  for (const auto& r : rows) {
    out << r.cell << ',' << r.quantity << ',' << csv_number(r.value) << ',' << r.status << '\n';
    if (r.status != "pass" && r.status != "info") ++failing;
  }
  log_ << file << ": " << rows.size() << " rows, " << failing << " not passing\n";
}

void Artifacts::binary(const std::string& name, const GridFunction& f) {
  if (!sidecars_) return;
  const std::string file = path(name, ".bin");
  write_binary_file(file, f);
  log_ << file << ": " << f.size() << " values\n";
}

void Artifacts::binary_matrix(const std::string& name, const Domain& domain, std::span<const double> values) {
  if (!sidecars_) return;
  const std::string file = path(name, ".bin");
  std::ofstream out(file, std::ios::binary);
  require(static_cast<bool>(out), "output: cannot write '" + file + "'");
  write_binary(out, domain, GridPayload::kMatrix, values);
  log_ << file << ": " << values.size() << " values\n";
}

void Artifacts::phase(const std::string& label) {
  const auto now = std::chrono::steady_clock::now();
  timings_[label] = std::chrono::duration<double>(now - last_).count();
  last_ = now;
}

void Artifacts::finish() {
  timings_["total"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  timings_["threads"] = thread_count();
  const std::string file = path("timing", ".json");
  std::ofstream out(file, std::ios::binary);
  if (out) out << timings_.dump(2) << '\n';
}

}  // namespace schrolab::cli
