#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "artifacts.hpp"
#include "presets.hpp"

namespace schrolab::cli {

namespace {

RegionMode mode_from(const Json& config) {
  const std::string m = get_string(config, "params.mode");
  if (m == "all-balls") return RegionMode::kAllBalls;
  if (m == "sub-critical") return RegionMode::kSubCritical;
  if (m == "cubes") return RegionMode::kCubes;
  throw PreconditionError("params.mode must be all-balls, sub-critical or cubes");
}

std::vector<std::uint64_t> experiment_seeds(const Json& config) {
  std::vector<std::uint64_t> out;
  for (double s : get_doubles(config, "experiment.seeds")) {
    require(s >= 0.0 && s == std::floor(s), "experiment.seeds must be nonnegative integers");
    out.push_back(static_cast<std::uint64_t>(s));
  }
  require(!out.empty(), "experiment.seeds is empty");
  return out;
}

std::vector<int> resolutions(const Json& config) {
  std::vector<int> out;
  for (double n : get_doubles(config, "experiment.resolutions")) out.push_back(static_cast<int>(n));
  require(!out.empty(), "experiment.resolutions is empty");
  return out;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

std::string key_of(const Json& config) { return get_string(config, "potential.preset") + config.at("potential").dump(); }

BlockOperator experiment_operator(const Json& config, const RieszOperator& r, const GridFunction& b) {
  const std::string op = get_string(config, "experiment.operator");
  if (op == "commutator") return commutator(r, b);
  if (op == "adjoint_commutator") return adjoint_commutator(r, b);
  if (op == "riesz") return riesz_block(r);
  if (op == "riesz_adjoint") return riesz_adjoint_block(r);
  throw PreconditionError("experiment.operator: unknown operator '" + op + "'");
}

PowerIterationOptions power_options(const Json& config, std::uint64_t seed) {
  PowerIterationOptions o;
  o.starts = get_int(config, "experiment.starts");
  o.iterations = get_int(config, "experiment.iterations");
  o.restarts = get_int(config, "experiment.restarts");
  o.seed = seed;
  return o;
}

// ---------------------------------------------------------------------------

int cmd_rho(const Json& config, Artifacts& art) {
  const Domain domain = domain_from(config);
  const Potential v = potential_from(config, domain);
  const auto field = rho_from(config, v, domain);
  art.phase("solve");
  const Point probe = point_from(config, "rho.probe", domain.dim());
  const std::size_t cell = domain.locate(probe);
  Json result{{"potential", v.name},
              {"field", serialize_summary(field)},
              {"probe", Json{{"point", serialize(probe, domain.dim())},
                             {"cell_center", serialize(domain.center(cell), domain.dim())},
                             {"rho", field.rho[cell]}}}};
  art.json("", result, "rho at probe " + fmt(field.rho[cell]) + ", range [" + fmt(field.rho.min()) + ", " +
                           fmt(field.rho.max()) + "]");
  art.binary("rho", field.rho);
  return 0;
}

int cmd_cover(const Json& config, Artifacts& art) {
  const Domain domain = domain_from(config);
  const Potential v = potential_from(config, domain);
  const auto field = rho_from(config, v, domain);
  art.phase("rho");
  const auto cover = build_critical_covering(field);
  art.phase("covering");
  art.json("", Json{{"potential", v.name}, {"field", serialize_summary(field)}, {"covering", serialize(cover, domain.dim())}},
           std::to_string(cover.balls.size()) + " balls, " + std::to_string(cover.uncovered) + " uncovered, N1 " +
               fmt(cover.n1));
  return 0;
}

int cmd_rh(const Json& config, Artifacts& art) {
  const Domain domain = domain_from(config);
  const Potential v = potential_from(config, domain);
  const double q = get_double(config, "params.q");
  const auto rep = rh_constant(v.sample(domain), q, sample_spec_from(config));
  art.json("", Json{{"potential", v.name}, {"rh", serialize(rep, domain.dim())}},
           "RH_" + fmt(q) + " constant " + fmt(rep.constant));
  return 0;
}

int cmd_doubling(const Json& config, Artifacts& art) {
  const Domain domain = domain_from(config);
  const Potential v = potential_from(config, domain);
  auto rep = doubling_exponent(v.sample(domain), make_ball_sample(domain, sample_spec_from(config)));
  rep.spec = sample_spec_from(config);
  art.json("", Json{{"potential", v.name}, {"doubling", serialize(rep)}},
           "mu " + fmt(rep.mu) + ", C " + fmt(rep.constant) + ", " + std::to_string(rep.violations) + " violations");
  return 0;
}

int cmd_bmo(const Json& config, Artifacts& art) {
  const Domain domain = domain_from(config);
  const Potential v = potential_from(config, domain);
  const auto field = rho_from(config, v, domain);
  art.phase("rho");
  const GridFunction b = symbol_from(config, domain);
  const double theta = get_double(config, "params.theta");
  const auto spec = sample_spec_from(config);
  const auto rep = bmo_theta_seminorm(b, field.rho, theta, spec);
  const auto jn = fit_jn(b, field.rho, YoungFunction::exp_minus_one(), make_ball_sample(domain, spec),
                         get_int(config, "params.k_max"), get_double(config, "params.cap"));
  art.phase("estimate");
  art.json("", Json{{"symbol", get_string(config, "symbol.preset")},
                    {"bmo", serialize(rep, domain.dim())},
                    {"john_nirenberg", serialize(jn)}},
           "[b]_" + fmt(theta) + " = " + fmt(rep.seminorm) + ", JN theta' " + fmt(jn.fit.exponent));
  return 0;
}

int cmd_weight(const Json& config, Artifacts& art) {
  const Domain domain = domain_from(config);
  const Potential v = potential_from(config, domain);
  const auto field = rho_from(config, v, domain);
  art.phase("rho");
  const auto w = weight_from(config, domain, field.rho);
  const double p = get_double(config, "params.p");
  const double theta = get_double(config, "params.theta");
  const RegionMode mode = mode_from(config);
  const auto spec = sample_spec_from(config);
  const auto ap = ap_constant(w.weight, p, theta, mode, field.rho, spec);
  Json result{{"weight", w.id}, {"ap", serialize(ap, domain.dim())}};
  if (p > 1.0) {
    result["openness"] = serialize(openness_scan(w.weight, p, theta, mode, field.rho,
                                                 get_doubles(config, "params.epsilons"),
                                                 get_double(config, "params.threshold"), make_ball_sample(domain, spec)));
  }
  if (w.built) result["beta_fit"] = serialize(w.construction.beta_fit);
  art.phase("estimate");
  art.json("", result, "A_" + fmt(p) + " constant " + fmt(ap.constant) + " at theta " + fmt(theta));
  art.binary("weight", w.weight);
  return 0;
}

int cmd_build_a1(const Json& config, Artifacts& art) {
  Json cfg = config;
  cfg["weight"]["preset"] = "a1";
  const Domain domain = domain_from(cfg);
  const Potential v = potential_from(cfg, domain);
  const auto field = rho_from(cfg, v, domain);
  art.phase("rho");
  const auto w = weight_from(cfg, domain, field.rho);
  const auto dom = fit_maximal_domination(w.weight, field.rho, ExponentLattice{0.0, 0.25, 12.0},
                                          get_double(cfg, "params.cap"));
  art.phase("build");
  art.json("", Json{{"weight", w.id},
                    {"theta", w.construction.theta},
                    {"delta", w.construction.delta},
                    {"beta_fit", serialize(w.construction.beta_fit)},
                    {"domination", Json{{"feasible", dom.feasible}, {"theta", dom.theta}, {"constant", dom.constant}}}},
           "beta " + fmt(w.construction.beta_fit.exponent) + ", domination theta' " + fmt(dom.theta));
  art.binary("weight", w.weight);
  return 0;
}

int cmd_operator(const Json& config, Artifacts& art) {
  const Domain domain = domain_from(config);
  const Potential v = potential_from(config, domain);
  const GridFunction vs = v.sample(domain);
  const auto r = build_riesz(vs);
  art.phase("factorize");
  const GridFunction f = input_from(config, domain, static_cast<std::uint64_t>(get_int(config, "input.seed")));
  const auto e = r->energy(f.values());
  const double rel = std::abs(e.gradient + e.potential - e.input) / e.input;
  const GridFunction b = symbol_from(config, domain);
  const auto tb = commutator(*r, b);
  const auto field = rho_from(config, v, domain);
  double split_residual = 0.0;
  for (int j = 0; j < domain.dim(); ++j) {
    const auto s = loc_glob_split(tb.block(j, 0), field.rho);
    split_residual = std::max(split_residual, (tb.block(j, 0) - s.local - s.global).cwiseAbs().maxCoeff());
  }
  art.phase("checks");
  Json comps = Json::array();
  for (int j = 0; j < domain.dim(); ++j) {
    comps.push_back(Json{{"component", j}, {"max_abs_kernel", kernel_matrix(*r, j).cwiseAbs().maxCoeff()}});
  }
  art.json("", Json{{"potential", v.name},
                    {"min_eigenvalue", r->min_eigenvalue()},
                    {"max_abs_entry", r->max_abs_entry()},
                    {"energy", Json{{"gradient", e.gradient}, {"potential", e.potential}, {"input", e.input},
                                    {"relative_error", rel}}},
                    {"commutator_max_abs_entry", tb.max_abs_entry()},
                    {"loc_glob_residual", split_residual},
                    {"components", comps}},
           "energy identity error " + fmt(rel) + ", lambda_min " + fmt(r->min_eigenvalue()));
  if (domain.size() <= 1024) {
    for (int j = 0; j < domain.dim(); ++j) {
      const Matrix k = kernel_matrix(*r, j);
      // Row-major flattening: entry (x, y) at x * N + y.
      const Matrix kt = k.transpose();
      art.binary_matrix("kernel" + std::to_string(j), domain, std::span<const double>(kt.data(), kt.size()));
    }
  }
  return 0;
}

int cmd_kernel_check(const Json& config, Artifacts& art) {
  const Domain domain = domain_from(config);
  const int d = domain.dim();
  const Potential v = potential_from(config, domain);
  const GridFunction vs = v.sample(domain);
  const auto r = build_riesz(vs);
  const auto classical = build_riesz(GridFunction::constant(domain, 0.0));
  const auto field = rho_from(config, v, domain);
  art.phase("factorize");
  KernelCheckOptions opt;
  opt.q = get_double(config, "params.q");
  Rng rng(static_cast<std::uint64_t>(get_int(config, "sample.seed")));
  const auto pairs = kernel_pairs(domain, static_cast<std::size_t>(get_int(config, "sample.pairs")),
                                  2.0 * domain.spacing(), rng);
  const auto triples = kernel_triples(domain, static_cast<std::size_t>(get_int(config, "sample.triples")), rng);
  const double n_exp = get_double(config, "params.N");
  const double theta = get_double(config, "params.theta");
  Json reports = Json::array();
  reports.push_back(serialize(decay_constant(*r, field.rho, n_exp, pairs, opt)));
  reports.push_back(serialize(smoothness_constant(*r, field.rho, n_exp, get_double(config, "params.delta"), triples, opt)));
  reports.push_back(serialize(classical_gap(*r, *classical, field.rho, pairs, opt)));
  art.phase("pointwise");

  Json hormander = Json::array();
  double s = get_double(config, "params.s");
  if (s <= 0.0 && opt.q > d / 2.0 && opt.q < d) s = hormander_exponent(opt.q, d);
  if (s > 1.0) {
    const auto inner = inner_cells(domain);
    for (int k = 0; k < 20; ++k) {
      const std::size_t x0 = inner[rng.index(inner.size())];
      const double radius = std::max(2.0 * domain.spacing(), field.rho[x0]);
      const auto near = cells_in(domain, Ball{domain.center(x0), radius * (1.0 - 1e-9)});
      const std::size_t y = near[rng.index(near.size())];
      const auto sums = hormander_partial_sums(*r, field.rho, x0, y, radius, theta, s);
      Json row = serialize(sums);
      row["x0"] = x0;
      row["y"] = y;
      row["r"] = radius;
      hormander.push_back(row);
    }
  }
  art.phase("hormander");
  art.json("", Json{{"potential", v.name}, {"s", s}, {"pointwise", reports}, {"hormander", hormander}},
           "decay constant " + fmt(reports[0]["constant"].is_number() ? reports[0]["constant"].get<double>() : kInf));
  return 0;
}

int cmd_czd(const Json& config, Artifacts& art) {
  const Domain domain = domain_from(config);
  const Potential v = potential_from(config, domain);
  const auto field = rho_from(config, v, domain);
  art.phase("rho");
  const GridFunction f = input_from(config, domain, static_cast<std::uint64_t>(get_int(config, "input.seed")));
  const auto cubes = decompose(f, field.rho, get_double(config, "params.lambda"), get_double(config, "params.theta"));
  const auto parts = split(f, cubes);
  double residual = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    residual = std::max(residual, std::abs(f[i] - parts.g[i] - parts.h[i] - parts.h_prime[i]));
  }
  art.phase("decompose");
  Json result = serialize(cubes, domain.dim());
  result["outside_ratio"] = cz_outside_ratio(f, field.rho, cubes);
  result["split_residual"] = residual;
  art.json("", result, std::to_string(cubes.cubes.size()) + " cubes from level " + std::to_string(cubes.start_level));
  art.binary("g", parts.g);
  art.binary("h", parts.h);
  art.binary("h_prime", parts.h_prime);
  return 0;
}

int cmd_verify_strong(const Json& config, Artifacts& art) {
  const auto ps = get_doubles(config, "experiment.p");
  const NormMethod method = parse_norm_method(get_string(config, "experiment.method"));
  const double tol = get_double(config, "experiment.tolerance");
  const double lb_tol = get_double(config, "experiment.lower_bound_tolerance");
  const std::uint64_t seed = experiment_seeds(config).front();
  const bool constant_b = symbol_is_constant(config);
  std::vector<CsvRow> rows;
  std::map<double, RefinementTable> tables;
  int status = 0;
  int cell_no = 0;
  OperatorCache cache;
  for (int n : resolutions(config)) {
    const std::string cell_n = "n=" + std::to_string(n);
    try {
      const Domain domain = domain_from(config, n);
      const Potential v = potential_from(config, domain);
      const auto r = cache.get(key_of(config), v.sample(domain));
      const auto field = rho_from(config, v, domain);
      const auto w = weight_from(config, domain, field.rho);
      const auto ap = ap_constant(w.weight, 2.0, get_double(config, "params.theta"), mode_from(config), field.rho,
                                  sample_spec_from(config));
      rows.push_back({cell_n, "weight_a2_constant", ap.constant, "info"});
      const BlockOperator t = experiment_operator(config, *r, symbol_from(config, domain));
      double riesz_reference = 0.0;
      if (constant_b) {
        riesz_reference = weighted_operator_norm(riesz_block(*r), 2.0, GridFunction::constant(domain, 1.0),
                                                 NormMethod::kRandomRestart, power_options(config, seed))
                              .value;
      }
      for (double p : ps) {
        const std::string cell = cell_n + ";p=" + fmt(p);
        const NormMethod m = p == 2.0 ? method : (method == NormMethod::kExactP2 ? NormMethod::kNonlinearPower : method);
        const auto est = weighted_operator_norm(t, p, w.weight, m, power_options(config, seed), w.id);
        const bool ok = std::isfinite(est.value) && !est.flagged;
        rows.push_back({cell, "norm", est.value, ok ? "pass" : "fail"});
        if (constant_b) {
          const double rel = est.value / riesz_reference;
          rows.push_back({cell, "norm_over_riesz", rel, rel <= 1e-10 ? "pass" : "fail"});
        }
        tables[p].rows.push_back({n, est.value});
        Json cell_doc{{"cell", cell},
                      {"n", n},
                      {"weight", w.id},
                      {"weight_ap", serialize(ap, domain.dim())},
                      {"estimate", serialize(est, true)}};
        if (w.built) cell_doc["beta_fit"] = serialize(w.construction.beta_fit);
        art.json("cell" + std::to_string(cell_no++), cell_doc, cell + " norm " + fmt(est.value));
      }
    } catch (const PreconditionError& e) {
      rows.push_back({cell_n, "error", 0.0, "error"});
      status = 1;
    }
    art.phase(cell_n);
  }
  Json summary = Json::array();
  for (auto& [p, table] : tables) {
    const double limit = p == 2.0 ? tol : lb_tol;
    bool zero = true;
    for (const auto& row : table.rows) zero = zero && row.value == 0.0;
    const double spread = zero ? 1.0 : table.spread();
    rows.push_back({"p=" + fmt(p), "refinement_spread", spread, spread < limit ? "pass" : "fail"});
    Json t = serialize(table);
    t["p"] = p;
    t["limit"] = limit;
    summary.push_back(t);
  }
  art.json("", Json{{"tables", summary}}, std::to_string(tables.size()) + " refinement tables");
  art.csv("", rows);
  return status;
}

int cmd_verify_weak(const Json& config, Artifacts& art) {
  const auto seeds = experiment_seeds(config);
  const double tol = get_double(config, "experiment.weak_tolerance");
  const auto lambdas = static_cast<std::size_t>(get_int(config, "experiment.lambdas"));
  std::vector<CsvRow> rows;
  std::map<std::uint64_t, std::vector<double>> per_seed;
  int status = 0;
  OperatorCache cache;
  Json cells = Json::array();
  for (int n : resolutions(config)) {
    const std::string cell_n = "n=" + std::to_string(n);
    try {
      const Domain domain = domain_from(config, n);
      const Potential v = potential_from(config, domain);
      const auto r = cache.get(key_of(config), v.sample(domain));
      const auto field = rho_from(config, v, domain);
      const auto w = weight_from(config, domain, field.rho);
      const BlockOperator t = experiment_operator(config, *r, symbol_from(config, domain));
      for (std::uint64_t seed : seeds) {
        const std::string cell = cell_n + ";seed=" + std::to_string(seed);
        const auto rep = weak_ratio_sweep(t, input_from(config, domain, seed), w.weight, lambdas);
        const bool ok = std::isfinite(rep.sup_ratio);
        rows.push_back({cell, "sup_ratio", rep.sup_ratio, ok ? "pass" : "fail"});
        rows.push_back({cell, "sup_ratio_inner", rep.sup_ratio_inner, "info"});
        per_seed[seed].push_back(rep.sup_ratio);
        cells.push_back(Json{{"cell", cell}, {"weight", w.id}, {"sweep", serialize(rep)}});
      }
    } catch (const PreconditionError& e) {
      rows.push_back({cell_n, "error", 0.0, "error"});
      status = 1;
    }
    art.phase(cell_n);
  }
  for (const auto& [seed, values] : per_seed) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double change = *hi == 0.0 ? 0.0 : (*lo > 0.0 ? *hi / *lo - 1.0 : kInf);
    rows.push_back({"seed=" + std::to_string(seed), "relative_change", change, change < tol ? "pass" : "fail"});
  }
  art.json("", Json{{"cells", cells}}, std::to_string(cells.size()) + " sweeps");
  art.csv("", rows);
  return status;
}

int cmd_report(const Json& config, Artifacts& art) {
  namespace fs = std::filesystem;
  const fs::path dir = get_string(config, "output.dir");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.path().extension() == ".csv" && name.rfind("report", 0) != 0) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<CsvRow> rows;
  Json sources = Json::array();
  for (const auto& file : files) {
    std::ifstream in(file);
    std::string line;
    std::getline(in, line);
    std::size_t pass = 0;
    std::size_t other = 0;
    while (std::getline(in, line)) {
      std::vector<std::string> fields;
      std::stringstream ss(line);
      std::string item;
      while (std::getline(ss, item, ',')) fields.push_back(item);
      if (fields.size() != 4) continue;
      const std::string source = file.stem().string();
      rows.push_back({source + ":" + fields[0], fields[1], std::strtod(fields[2].c_str(), nullptr), fields[3]});
      if (fields[3] == "pass" || fields[3] == "info") ++pass; else ++other;
    }
    sources.push_back(Json{{"file", file.filename().string()}, {"passing", pass}, {"not_passing", other}});
  }
  art.json("", Json{{"sources", sources}}, std::to_string(files.size()) + " aggregate files");
  art.csv("", rows);
  return 0;
}

using Command = std::function<int(const Json&, Artifacts&)>;

const std::map<std::string, Command>& command_table() {
  static const std::map<std::string, Command> table{
      {"rho", cmd_rho},
      {"cover", cmd_cover},
      {"rh", cmd_rh},
      {"doubling", cmd_doubling},
      {"bmo", cmd_bmo},
      {"weight", cmd_weight},
      {"build-a1", cmd_build_a1},
      {"operator", cmd_operator},
      {"kernel-check", cmd_kernel_check},
      {"czd", cmd_czd},
      {"verify-strong", cmd_verify_strong},
      {"verify-weak", cmd_verify_weak},
      {"report", cmd_report},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"rho",    "cover",    "rh",           "doubling", "bmo",
                                              "weight", "build-a1", "operator",     "kernel-check", "czd",
                                              "verify-strong", "verify-weak", "report"};
  return names;
}

int run(const std::string& subcommand, const Json& config, std::ostream& log) {
  const auto& table = command_table();
  const auto it = table.find(subcommand);
  require(it != table.end(), "unknown subcommand '" + subcommand + "'");
  Artifacts art(config, subcommand, log);
  const int status = it->second(config, art);
  art.finish();
  return status;
}

int run_guarded(const std::string& subcommand, const std::string& config_path,
                const std::vector<std::string>& overrides, std::ostream& log, std::ostream& err) {
  try {
    const Json config = load_config_file(config_path, overrides);
    return run(subcommand, config, log);
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const InconsistencyError& e) {
    err << "inconsistency: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace schrolab::cli
