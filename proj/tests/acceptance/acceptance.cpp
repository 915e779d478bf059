// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// on the command line to run a subset.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "oracles.hpp"
#include "schrolab/czd.hpp"
#include "schrolab/experiments.hpp"
#include "schrolab/kernel_analysis.hpp"
#include "schrolab/spaces.hpp"
#include "schrolab/weights.hpp"

using namespace schrolab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Shared state: Hermite fields and Riesz operators are reused between criteria.
OperatorCache& operators() {
  static OperatorCache cache;
  return cache;
}

const CriticalRadiusField& hermite_rho(const Domain& domain) {
  static std::map<std::string, CriticalRadiusField> fields;
  const std::string key = fmt("%d/%g/%d", domain.dim(), domain.half_width(), domain.cells_per_axis());
  auto it = fields.find(key);
  if (it == fields.end()) it = fields.emplace(key, critical_radius_field(Potential::hermite(domain.dim()), domain)).first;
  return it->second;
}

std::shared_ptr<const RieszOperator> hermite_riesz(const Domain& domain) {
  return operators().get("hermite", Potential::hermite(domain.dim()).sample(domain));
}

GridFunction abs_x1_squared(const Domain& d) {
  return sample(d, [](const Point& x) { return x[0] * x[0]; });
}

// A1-type weight (M^theta g)^delta from a narrow Gaussian source; the source is
// a physical function so the weight is comparable across resolutions.
A1Construction gaussian_a1_weight(const Domain& d, const GridFunction& rho) {
  const auto g = sample(d, [](const Point& x) { return std::exp(-norm(x, 3) * norm(x, 3) / (2 * 0.3 * 0.3)); });
  BallSampleSpec spec;
  spec.centers = 100;
  spec.radii = 12;
  return build_a1_weight(g, rho, 1.0, 0.5, make_ball_sample(d, spec), 64.0);
}

std::vector<double> random_vector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

// ---------------------------------------------------------------------------

Outcome ac1() {
  double worst = 0.0;
  double slowest = 0.0;
  int configs = 0;
  for (int dim : {1, 2, 3}) {
    const int n = dim == 1 ? 64 : (dim == 2 ? 32 : 16);
    const Domain d(dim, 2.0, n);
    for (const bool hermite : {false, true}) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto v = hermite ? Potential::hermite(dim).sample(d) : GridFunction::constant(d, 1.0);
      const auto r = build_riesz(v);
      Rng rng(1000 + 10 * dim + hermite);
      for (int seed = 0; seed < 50; ++seed) {
        const auto f = random_vector(rng, d.size());
        const auto parts = r->apply(f);
        CompensatedSum riesz;
        for (double x : parts) riesz.add(x * x);
        const auto e = r->energy(f);
        // The identity is exact for the staggered gradient; the collocated
        // components can only lose energy.
        worst = std::max(worst, std::abs(e.gradient + e.potential - e.input) / e.input);
        if (riesz.value() > e.input * (1 + 1e-10)) worst = std::max(worst, 1.0);
      }
      slowest = std::max(slowest, seconds_since(t0));
      ++configs;
    }
  }
  return {worst <= 1e-10 && slowest <= 120.0,
          fmt("%d configurations x 50 inputs, max relative error %.2e, slowest %.1fs", configs, worst, slowest)};
}

Outcome ac2() {
  const Domain d(3, 1.0, 32);
  const double target = std::sqrt(3.0 / (4.0 * std::numbers::pi));
  // Cells whose critical ball stays inside the box; near the boundary the
  // ball is clipped and rho is legitimately larger.
  std::vector<std::size_t> cells;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Point c = d.center(i);
    if (std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2])}) + 1.05 * target <= 1.0) cells.push_back(i);
  }
  RhoSolverOptions opt;
  opt.tol = 1e-3;
  const auto pts = critical_radius_cells(Potential::constant(3, 1.0), d, cells, opt);
  double worst = 0.0;
  for (const auto& p : pts) worst = std::max(worst, std::abs(p.rho / target - 1.0));
  return {worst < 0.01, fmt("%zu interior cells, max |rho/rho_exact - 1| = %.4f", cells.size(), worst)};
}

Outcome ac3() {
  auto band = [](const Domain& d, const std::vector<RhoPoint>& pts, const std::vector<std::size_t>& cells) {
    double lo = kInf;
    double hi = 0.0;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const double r = norm(d.center(cells[k]), 3);
      lo = std::min(lo, pts[k].rho * (1 + r));
      hi = std::max(hi, pts[k].rho * (1 + r));
    }
    return std::pair{lo, hi};
  };
  auto ball_cells = [](const Domain& d) {
    std::vector<std::size_t> cells;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (norm(d.center(i), 3) <= 5.0) cells.push_back(i);
    return cells;
  };
  const Domain coarse(3, 6.0, 32);
  const Domain fine(3, 6.0, 64);
  const auto cc = ball_cells(coarse);
  const auto fc = ball_cells(fine);
  const auto [lo1, hi1] = band(coarse, critical_radius_cells(Potential::hermite(3), coarse, cc), cc);
  const auto [lo2, hi2] = band(fine, critical_radius_cells(Potential::hermite(3), fine, fc), fc);
  const double move = std::max(std::abs(lo2 / lo1 - 1), std::abs(hi2 / hi1 - 1));
  return {hi1 / lo1 < 3.0 && move < 0.1,
          fmt("band [%.4f, %.4f] (ratio %.3f) at n=32, [%.4f, %.4f] at n=64, endpoints move %.1f%%", lo1, hi1,
              hi1 / lo1, lo2, hi2, 100 * move)};
}

Outcome ac4() {
  const Domain d(3, 6.0, 32);
  const auto& field = hermite_rho(d);
  Rng train_rng(41);
  Rng test_rng(42);
  const auto train = sample_pairs(d, 10000, train_rng);
  const auto test = sample_pairs(d, 10000, test_rng);
  const auto fit = fit_rho_regularity(field, train);
  const std::size_t held_out = count_rho_violations(field, test, fit.c0, fit.n0);
  return {fit.fitted && fit.violations == 0 && held_out == 0,
          fmt("c0 = %.4g, N0 = %.2f, training violations %zu, held-out violations %zu of %zu", fit.c0, fit.n0,
              fit.violations, held_out, test.size())};
}

Outcome ac5() {
  const auto t0 = std::chrono::steady_clock::now();
  // At M = 3 the cells are fine enough (h = 0.25) for the balls to hold
  // several cells each.
  const Domain d(3, 3.0, 24);
  const auto field = critical_radius_field(Potential::hermite(3), d);
  const auto cover = build_critical_covering(field, {1.0, 2.0, 4.0});
  const double secs = seconds_since(t0);
  std::string overlaps;
  for (const auto& o : cover.overlaps) overlaps += fmt(" %g:%zu", o.sigma, o.max_overlap);
  return {cover.uncovered == 0 && cover.violations == 0 && secs <= 60.0,
          fmt("%zu balls, %zu uncovered, overlaps%s, C = %.3g, N1 = %.2f, %zu violations, %.1fs", cover.balls.size(),
              cover.uncovered, overlaps.c_str(), cover.constant, cover.n1, cover.violations, secs)};
}

Outcome ac6() {
  const Domain d(3, 8.0, 32);
  const auto b = sample(d, [](const Point& x) { return std::abs(x[0]); });
  const auto rho = GridFunction::constant(d, 1.0);
  BallSampleSpec small;
  small.r_max = 2.0;
  BallSampleSpec large;
  large.r_max = 8.0;
  const double t0_small = bmo_theta_seminorm(b, rho, 0.0, small).seminorm;
  const double t0_large = bmo_theta_seminorm(b, rho, 0.0, large).seminorm;
  const double t1_small = bmo_theta_seminorm(b, rho, 1.0, small).seminorm;
  const double t1_large = bmo_theta_seminorm(b, rho, 1.0, large).seminorm;
  const double grow = t0_large / t0_small;
  const double change = std::abs(t1_large / t1_small - 1.0);
  return {grow >= 1.5 && change < 0.2,
          fmt("theta=0: %.4f -> %.4f (x%.3f); theta=1: %.4f -> %.4f (%.1f%%)", t0_small, t0_large, grow, t1_small,
              t1_large, 100 * change)};
}

Outcome ac7() {
  // Values are multiples of 2^-10 below 2^8, so every sum, average and
  // difference the decomposition forms is exact in binary floating point.
  const Domain d(1, 1.0, 1024);
  const auto rho = GridFunction::constant(d, 1.0);
  std::size_t mismatches = 0;
  std::size_t left_violations = 0;
  std::size_t outside_violations = 0;
  std::size_t identity_violations = 0;
  double worst_moment = 0.0;
  std::size_t total_cubes = 0;
  for (int seed = 1; seed <= 50; ++seed) {
    Rng rng(7000 + seed);
    std::vector<double> v(d.size());
    for (auto& x : v) {
      const double k = static_cast<double>(rng.index(512));
      x = rng.uniform() < 0.05 ? 1.0 + static_cast<double>(rng.index(100)) + k / 1024.0 : k / 1024.0;
      if (rng.uniform() < 0.5) x = -x;
    }
    const GridFunction f(d, v);
    const double theta = seed % 2 ? 0.0 : 1.0;
    const double lambda = 4.0;
    const auto cubes = decompose(f, rho, lambda, theta);
    int start = -1;
    const auto expect = oracle::cz_scan(f, rho, lambda, theta, &start);
    std::vector<oracle::Cube> got;
    for (const auto& c : cubes.cubes) got.push_back({c.cube.level, c.cube.index});
    std::sort(got.begin(), got.end());
    if (got != expect || start != cubes.start_level) ++mismatches;
    total_cubes += got.size();
    for (const auto& c : cubes.cubes)
      if (!(std::pow(1.0 + c.half_side / c.rho, theta) * lambda < c.average)) ++left_violations;
    if (cz_outside_ratio(f, rho, cubes) > 1.0) ++outside_violations;
    // Every cell outside the family: its single-cell cube is not selected.
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (cubes.owner[i] >= 0) continue;
      const DyadicCube cell{10, {static_cast<int>(i), 0, 0}};
      if (cz_selected(std::abs(f[i]), dyadic_region(d, cell).half_side, dyadic_rho(rho, cell), lambda, theta))
        ++outside_violations;
    }
    const auto s = split(f, cubes);
    for (std::size_t i = 0; i < d.size(); ++i)
      if (s.g[i] + s.h[i] + s.h_prime[i] != f[i]) ++identity_violations;
    for (const auto& c : cubes.cubes) {
      if (!c.sub_critical) continue;
      CompensatedSum integral;
      CompensatedSum mass;
      for (std::size_t i : dyadic_cells(d, c.cube)) {
        integral.add(s.h[i]);
        mass.add(std::abs(f[i]));
      }
      worst_moment = std::max(worst_moment, std::abs(integral.value()) / mass.value());
    }
  }
  return {mismatches == 0 && left_violations == 0 && outside_violations == 0 && identity_violations == 0 &&
              worst_moment <= 1e-10,
          fmt("50 inputs, %zu cubes; family mismatches %zu, left-inequality violations %zu, outside violations %zu, "
              "identity violations %zu, max relative moment %.1e",
              total_cubes, mismatches, left_violations, outside_violations, identity_violations, worst_moment)};
}

Outcome ac8() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Row {
    std::string weight;
    RefinementTable table;
    double class_constant = 0.0;
    bool member = true;
  };
  std::vector<Row> rows{{"one", {}, 0.0, true}, {"a1", {}, 0.0, true}, {"bracket_power(0.5)", {}, 0.0, true}};
  for (int n : {8, 12, 16}) {
    const Domain d(3, 3.0, n);
    const auto& rho = hermite_rho(d).rho;
    const auto r = hermite_riesz(d);
    const auto t = commutator(*r, abs_x1_squared(d));
    const auto a1 = gaussian_a1_weight(d, rho);
    const std::vector<GridFunction> weights{
        GridFunction::constant(d, 1.0), a1.weight,
        sample(d, [](const Point& x) { return std::sqrt(1.0 + norm(x, 3)); })};
    BallSampleSpec spec;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      // Class membership: A_2 with theta = 1 on sampled balls, plus the A1
      // envelope for the constructed weight.
      const double ap = ap_constant(weights[k], 2.0, 1.0, RegionMode::kAllBalls, rho, spec).constant;
      rows[k].class_constant = std::max(rows[k].class_constant, ap);
      rows[k].member = rows[k].member && std::isfinite(ap) && ap <= 64.0 && (k != 1 || a1.beta_fit.feasible);
      const auto est = weighted_operator_norm(t, 2.0, weights[k], NormMethod::kExactP2);
      rows[k].table.rows.push_back({n, est.value});
    }
  }
  bool pass = true;
  std::string detail;
  for (const auto& row : rows) {
    const double spread = row.table.spread();
    pass = pass && row.member && spread < 2.0;
    detail += fmt("%s: ", row.weight.c_str());
    for (const auto& r : row.table.rows) detail += fmt("%.4g ", r.value);
    detail += fmt("spread %.3f, A2 %.3g%s; ", spread, row.class_constant, row.member ? "" : " (not in class)");
  }
  const double secs = seconds_since(t0);
  detail += fmt("%.0fs", secs);
  return {pass && secs <= 600.0, detail};
}

GridFunction random_bump(const Domain& d, std::uint64_t seed) {
  Rng rng(seed);
  Point c{0.0, 0.0, 0.0};
  for (int a = 0; a < d.dim(); ++a) c[a] = rng.uniform(-0.5, 0.5) * d.half_width();
  const double w = 0.5 * rng.uniform(1.0, 2.0);
  const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
  return sample(d, [&](const Point& x) {
    const double r = distance(x, c, d.dim()) / w;
    return sign * std::exp(-r * r);
  });
}

Outcome ac9() {
  std::map<int, std::vector<std::vector<double>>> sups;  // n -> weight -> seed
  for (int n : {12, 16}) {
    const Domain d(3, 3.0, n);
    const auto& rho = hermite_rho(d).rho;
    const auto r = hermite_riesz(d);
    const auto t = commutator(*r, abs_x1_squared(d));
    const std::vector<GridFunction> weights{GridFunction::constant(d, 1.0), gaussian_a1_weight(d, rho).weight};
    for (const auto& w : weights) {
      std::vector<double> per_seed;
      for (int seed = 1; seed <= 20; ++seed)
        per_seed.push_back(weak_ratio_sweep(t, random_bump(d, 900 + seed), w).sup_ratio);
      sups[n].push_back(per_seed);
    }
  }
  double worst = 0.0;
  bool finite = true;
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t s = 0; s < 20; ++s) {
      const double a = sups[12][k][s];
      const double b = sups[16][k][s];
      finite = finite && std::isfinite(a) && std::isfinite(b) && a > 0.0;
      worst = std::max(worst, std::abs(b - a) / a);
    }
  }
  double hi = 0.0;
  for (const auto& v : sups[16]) hi = std::max(hi, *std::max_element(v.begin(), v.end()));
  return {finite && worst < 0.5,
          fmt("2 weights x 20 inputs, largest sup ratio %.4g, max change n=12 -> 16 %.1f%%", hi, 100 * worst)};
}

Outcome ac10() {
  // The box has to reach several critical radii past x0 before the annulus
  // sum settles; at M = 3 the last annulus is still 16% of the total.
  const Domain d(3, 4.0, 16);
  const auto& rho = hermite_rho(d).rho;
  const auto r = hermite_riesz(d);
  const double s = hormander_exponent(2.0, 3);
  const auto inner = inner_cells(d);
  Rng rng(10);
  std::size_t non_monotone = 0;
  double worst_tail = 0.0;
  int samples = 0;
  while (samples < 20) {
    const std::size_t x0 = inner[rng.index(inner.size())];
    const double radius = d.spacing() * rng.uniform(2.0, 3.0);
    std::vector<std::size_t> near;
    for (std::size_t i : cells_in(d, Ball{d.center(x0), radius}))
      if (i != x0 && distance(d.center(i), d.center(x0), 3) < radius) near.push_back(i);
    if (near.empty()) continue;
    const std::size_t y = near[rng.index(near.size())];
    const auto sums = hormander_partial_sums(*r, rho, x0, y, radius, 1.0, s);
    if (sums.partial.empty()) continue;
    for (std::size_t k = 1; k < sums.partial.size(); ++k)
      if (sums.partial[k] < sums.partial[k - 1]) ++non_monotone;
    worst_tail = std::max(worst_tail, sums.terms.back() / sums.partial.back());
    ++samples;
  }
  return {non_monotone == 0 && worst_tail < 0.1,
          fmt("20 samples, s = %g; non-monotone steps %zu, largest last increment %.2f%% of total", s, non_monotone,
              100 * worst_tail)};
}

GridFunction random_field(const Domain& d, Rng& rng) {
  // A few Gaussian bumps of random size and spread on a small noisy floor.
  std::vector<double> v(d.size());
  for (auto& x : v) x = 0.01 * std::abs(rng.normal());
  const int bumps = 1 + static_cast<int>(rng.index(4));
  for (int b = 0; b < bumps; ++b) {
    Point c{0, 0, 0};
    for (int a = 0; a < d.dim(); ++a) c[a] = rng.uniform(-d.half_width(), d.half_width());
    const double w = rng.uniform(0.1, 0.6);
    const double amp = std::exp(rng.normal());
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double r = distance(d.center(i), c, d.dim()) / w;
      v[i] += amp * std::exp(-r * r);
    }
  }
  return GridFunction(d, v);
}

Outcome ac11() {
  const Domain d(3, 2.0, 12);
  const auto& rho = hermite_rho(d).rho;
  const double theta = 1.0;
  auto ratios = [&](const GridFunction& f) {
    const auto m = m_theta(f, rho, theta);
    const double l1 = weighted_lp_norm(f, 1.0);
    std::vector<EnvelopeSample> out;
    for (double lambda : log_grid_count(1e-3 * m.max(), m.max(), 20))
      out.push_back({1.0, lambda * level_set_measure(m, lambda) / l1});
    return out;
  };
  Rng rng(1100);
  std::vector<EnvelopeSample> train;
  for (int k = 0; k < 50; ++k) {
    const auto r = ratios(random_field(d, rng));
    train.insert(train.end(), r.begin(), r.end());
  }
  const auto fit = fit_envelope(train, ExponentLattice{0.0, 0.25, 0.0}, 1e6);
  std::size_t violations = 0;
  double held_max = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto r = ratios(random_field(d, rng));
    violations += count_envelope_violations(r, 0.0, fit.constant);
    for (const auto& s : r) held_max = std::max(held_max, s.ratio);
  }
  return {fit.feasible && violations == 0,
          fmt("C = %.4g from 50 inputs x 20 levels; held-out max %.4g, %zu violations", fit.constant, held_max,
              violations)};
}

Outcome ac12() {
  const Domain d(3, 2.0, 12);
  const auto& rho = hermite_rho(d).rho;
  // Training balls are centered at every cell; the held-out balls use other
  // centers and a radius grid interleaved with the training one.
  BallSampleSpec train_spec;
  train_spec.centers = d.size();
  train_spec.seed = 1;
  BallSampleSpec test_spec;
  test_spec.seed = 2;
  test_spec.radii = 17;
  test_spec.r_min = 2.5 * d.spacing();
  test_spec.r_max = 0.9 * d.half_width();
  const auto train = make_ball_sample(d, train_spec);
  const auto test = make_ball_sample(d, test_spec);
  std::size_t held_out = 0;
  std::size_t infeasible = 0;
  std::size_t undominated = 0;
  double beta_max = 0.0;
  double theta_max = 0.0;
  for (int seed = 1; seed <= 10; ++seed) {
    // Sum of a few point masses of random weight.
    Rng rng(1200 + seed);
    std::vector<double> g(d.size(), 0.0);
    const int spikes = 1 + static_cast<int>(rng.index(3));
    for (int k = 0; k < spikes; ++k) g[rng.index(d.size())] += std::exp(rng.normal()) / d.cell_volume();
    const GridFunction source(d, g);
    for (double theta : {0.0, 1.0}) {
      for (double delta : {0.5, 0.7}) {
        const auto built = build_a1_weight(source, rho, theta, delta, train);
        if (!built.beta_fit.feasible) {
          ++infeasible;
          continue;
        }
        beta_max = std::max(beta_max, built.beta_fit.exponent);
        held_out += count_envelope_violations(a1_samples(built.weight, rho, test), built.beta_fit.exponent,
                                              built.beta_fit.constant);
        const auto dom = fit_maximal_domination(built.weight, rho, ExponentLattice{0.0, 0.25, 6.0}, 64.0);
        if (!dom.feasible) ++undominated;
        theta_max = std::max(theta_max, dom.theta);
      }
    }
  }
  return {held_out == 0 && infeasible == 0 && undominated == 0,
          fmt("40 constructions; infeasible beta fits %zu, held-out violations %zu, max beta %.2f, "
              "domination failures %zu, max theta' %.2f",
              infeasible, held_out, beta_max, undominated, theta_max)};
}

std::map<std::string, std::string> json_outputs(const std::string& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (e.path().extension() != ".json" || name.find(".timing.") != std::string::npos) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    out[name] = ss.str();
  }
  return out;
}

Outcome ac13() {
  const auto base = std::filesystem::temp_directory_path() / "schrolab_acceptance_determinism";
  std::map<std::string, std::string> runs[2];
  std::string failures;
  for (int pass = 0; pass < 2; ++pass) {
    // Both passes write to the same path so the echoed config is identical.
    const std::string out = (base / "out").string();
    std::filesystem::remove_all(out);
    const Json config = cli::load_config(
        "", {"domain.d=2", "domain.n=16", "domain.M=4", "sample.r_min=0.5", "sample.r_max=0.5", "potential.preset=hermite", "symbol.preset=square_coordinate",
             "weight.preset=a1", "input.preset=random_gaussian", "sample.centers=40", "sample.radii=8",
             "sample.pairs=400", "sample.triples=100", "experiment.resolutions=[8,12]", "experiment.p=[2,3]",
             "experiment.seeds=[1,2]", "output.dir=\"" + out + "\""});
    for (const auto& sub : cli::subcommands()) {
      std::ostringstream log;
      try {
        cli::run(sub, config, log);
      } catch (const std::exception& e) {
        failures += sub + ": " + e.what() + "; ";
      }
    }
    runs[pass] = json_outputs(out);
  }
  std::size_t differing = 0;
  for (const auto& [name, text] : runs[0]) {
    auto it = runs[1].find(name);
    if (it == runs[1].end() || it->second != text) ++differing;
  }
  if (runs[0].size() != runs[1].size()) ++differing;
  return {failures.empty() && differing == 0 && runs[0].size() >= cli::subcommands().size(),
          fmt("%zu subcommands, %zu JSON files, %zu differ%s%s", cli::subcommands().size(), runs[0].size(), differing,
              failures.empty() ? "" : "; errors: ", failures.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> checks{ac1, ac2, ac3,  ac4,  ac5,  ac6, ac7,
                                                     ac8, ac9, ac10, ac11, ac12, ac13};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t k = 0; k < checks.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = checks[k]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("AC%d %s %s [%.1fs]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
