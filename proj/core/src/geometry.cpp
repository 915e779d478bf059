#include "schrolab/geometry.hpp"

#include <algorithm>
#include <memory>
#include <map>
#include <numeric>

namespace schrolab {

Potential Potential::constant(int dim, double c) {
  require(c >= 0.0, "potential: constant must be nonnegative");
  Potential v;
  v.name = "constant";
  v.dim = dim;
  v.q = kInf;
  v.rule = [c](const Point&) { return c; };
  return v;
}

Potential Potential::hermite(int dim) {
  Potential v;
  v.name = "hermite";
  v.dim = dim;
  v.q = kInf;
  v.rule = [dim](const Point& x) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += x[a] * x[a];
    return s;
  };
  return v;
}

Potential Potential::power(int dim, double a, double c) {
  require(a >= 0.0, "potential: power exponent must be nonnegative");
  require(c >= 0.0, "potential: power coefficient must be nonnegative");
  Potential v;
  v.name = "power";
  v.dim = dim;
  v.q = kInf;
  v.rule = [dim, a, c](const Point& x) { return c * std::pow(norm(x, dim), a); };
  return v;
}

Potential Potential::table(const GridFunction& values, double q) {
  require(values.components() == 1, "potential: table must be scalar");
  require(values.min() >= 0.0, "potential: table has negative values");
  Potential v;
  v.name = "table";
  v.dim = values.domain().dim();
  v.q = q;
  auto shared = std::make_shared<GridFunction>(values);
  v.rule = [shared](const Point& x) { return (*shared)[shared->domain().locate(x)]; };
  return v;
}

GridFunction Potential::sample(const Domain& domain) const {
  require(domain.dim() == dim, "potential: dimension does not match the domain");
  GridFunction out = schrolab::sample(domain, rule);
  require(out.min() >= 0.0, "potential: negative value sampled");
  return out;
}

std::vector<std::size_t> stratified_cells(const Domain& domain, std::size_t count, Rng& rng) {
  require(count > 0, "sample: need at least one center");
  const std::size_t total = domain.size();
  count = std::min(count, total);
  std::vector<std::size_t> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t lo = k * total / count;
    const std::size_t hi = (k + 1) * total / count;
    out.push_back(lo + rng.index(hi - lo));
  }
  return out;
}

std::vector<Ball> make_ball_sample(const Domain& domain, const BallSampleSpec& spec) {
  const double r_min = spec.r_min > 0.0 ? spec.r_min : 2.0 * domain.spacing();
  const double r_max = spec.r_max > 0.0 ? spec.r_max : domain.half_width();
  require(r_min <= r_max, "ball sample: r_min exceeds r_max");
  require(spec.radii > 0, "ball sample: need at least one radius");
  Rng rng(spec.seed);
  const auto centers = stratified_cells(domain, spec.centers, rng);
  const auto radii = log_grid_count(r_min, r_max, spec.radii);
  std::vector<Ball> balls;
  balls.reserve(centers.size() * radii.size());
  for (std::size_t c : centers) {
    for (double r : radii) balls.push_back({domain.center(c), r});
  }
  return balls;
}

RHReport rh_constant(const GridFunction& v, double q, const BallSampleSpec& spec) {
  require(q >= 1.0 && std::isfinite(q), "rh_constant: q must be finite and >= 1");
  const auto balls = make_ball_sample(v.domain(), spec);
  std::vector<double> ratios(balls.size(), -1.0);
  parallel_for(balls.size(), [&](std::size_t b) {
    const auto cells = cells_in(v.domain(), balls[b]);
    if (cells.empty()) return;
    const double mean = cells_average(v, cells);
    if (!(mean > 0.0)) return;
    CompensatedSum s;
    for (std::size_t i : cells) s.add(std::pow(v[i] / mean, q));
    ratios[b] = std::pow(s.value() / static_cast<double>(cells.size()), 1.0 / q);
  });
  RHReport report;
  report.q = q;
  report.spec = spec;
  report.constant = 0.0;
  for (std::size_t b = 0; b < balls.size(); ++b) {
    if (ratios[b] < 0.0) {
      ++report.skipped;
      continue;
    }
    ++report.evaluated;
    if (ratios[b] > report.constant) {
      report.constant = ratios[b];
      report.witness = balls[b];
    }
  }
  require(report.evaluated > 0, "rh_constant: every sampled ball has zero mean");
  return report;
}

DoublingReport doubling_exponent(const GridFunction& v, const std::vector<Ball>& balls,
                                 const std::vector<double>& dilations) {
  require(!dilations.empty(), "doubling: empty dilation set");
  for (double t : dilations) require(t > 1.0, "doubling: dilations must exceed 1");
  const Domain& domain = v.domain();
  const int d = domain.dim();
  struct Obs {
    double log_t;
    double log_ratio;
    double t;
    double ratio;
  };
  std::vector<std::vector<Obs>> per_ball(balls.size());
  std::vector<char> skipped(balls.size(), 0);
  parallel_for(balls.size(), [&](std::size_t b) {
    const double base = ball_integral(v, balls[b]).value;
    if (!(base > 0.0)) {
      skipped[b] = 1;
      return;
    }
    for (double t : dilations) {
      const Ball big{balls[b].center, balls[b].radius * t};
      if (is_clipped(domain, big)) continue;
      const double ratio = ball_integral(v, big).value / base;
      per_ball[b].push_back({std::log(t), std::log(ratio), t, ratio});
    }
    if (per_ball[b].empty()) skipped[b] = 1;
  });
  std::vector<Obs> obs;
  DoublingReport report;
  report.dilations = dilations;
  for (std::size_t b = 0; b < balls.size(); ++b) {
    if (skipped[b]) {
      ++report.skipped;
      continue;
    }
    ++report.evaluated;
    obs.insert(obs.end(), per_ball[b].begin(), per_ball[b].end());
  }
  require(!obs.empty(), "doubling: no admissible (ball, dilation) pairs");
  CompensatedSum sx, sy, sxx, sxy;
  for (const auto& o : obs) {
    sx.add(o.log_t);
    sy.add(o.log_ratio);
  }
  const double n = static_cast<double>(obs.size());
  const double mx = sx.value() / n;
  const double my = sy.value() / n;
  for (const auto& o : obs) {
    sxx.add((o.log_t - mx) * (o.log_t - mx));
    sxy.add((o.log_t - mx) * (o.log_ratio - my));
  }
  report.slope = sxx.value() > 0.0 ? sxy.value() / sxx.value() : my / mx;
  report.mu = std::max(1.0, report.slope / d);
  CompensatedSum intercept;
  double needed = 0.0;
  for (const auto& o : obs) {
    intercept.add(o.log_ratio - d * report.mu * o.log_t);
    needed = std::max(needed, o.ratio / std::pow(o.t, d * report.mu));
  }
  report.constant = std::max(std::exp(intercept.value() / n), needed);
  for (const auto& o : obs) {
    if (o.ratio > report.constant * std::pow(o.t, d * report.mu)) ++report.violations;
  }
  return report;
}

namespace {

int refinement_factor(double r, const Domain& domain, const RhoSolverOptions& opt) {
  int m = static_cast<int>(std::ceil(opt.kappa * domain.spacing() / r - 1e-12));
  if (m < 1) m = 1;
  if (m % 2 == 0) ++m;
  return m;
}

// Mass of V over B(x, r) on the local lattice x + j h / m, restricted to the box.
double lattice_mass(const Potential& v, const Domain& domain, const Point& x, double r, int m) {
  const int d = domain.dim();
  const double step = domain.spacing() / m;
  const int reach = static_cast<int>(std::floor(r / step + 1e-12));
  const double r2 = r * r * (1.0 + 1e-12);
  CompensatedSum sum;
  std::array<int, kMaxDim> j{0, 0, 0};
  std::array<int, kMaxDim> hi{0, 0, 0};
  for (int a = 0; a < d; ++a) {
    j[a] = -reach;
    hi[a] = reach;
  }
  while (true) {
    double s2 = 0.0;
    Point p = x;
    for (int a = 0; a < d; ++a) {
      const double t = j[a] * step;
      s2 += t * t;
      p[a] = x[a] + t;
    }
    if (s2 <= r2 && domain.contains(p)) sum.add(v(p));
    int a = d - 1;
    while (a >= 0 && j[a] == hi[a]) {
      j[a] = -reach;
      --a;
    }
    if (a < 0) break;
    ++j[a];
  }
  return sum.value() * std::pow(step, d);
}

double phi_from_mass(double mass, double r, int d) { return mass * std::pow(r, 2.0 - d); }

// Largest value of r'^(d-2) over [r, r_max].
double phi_threshold(double r, double r_max, int d) {
  return d >= 2 ? std::pow(r_max, d - 2.0) : 1.0 / r;
}

// Masses for growing balls about a fixed center: entries sorted by squared
// distance, pulled lazily from a producer, with stored prefix sums so masses
// at any radius reached so far can be queried again during bisection.
class SortedMass {
 public:
  using Producer = std::function<bool(double& key, double& value)>;
  SortedMass(Producer producer, double cell_volume) : producer_(std::move(producer)), cell_volume_(cell_volume) {}

  double mass(double r) {
    const double r2 = r * r * (1.0 + 1e-12);
    while (!done_ && (keys_.empty() || keys_.back() <= r2)) {
      double key = 0.0;
      double value = 0.0;
      if (!producer_(key, value)) {
        done_ = true;
        break;
      }
      sum_.add(value);
      keys_.push_back(key);
      prefix_.push_back(sum_.value());
    }
    const auto it = std::upper_bound(keys_.begin(), keys_.end(), r2);
    const auto count = static_cast<std::size_t>(it - keys_.begin());
    return count == 0 ? 0.0 : prefix_[count - 1] * cell_volume_;
  }

 private:
  Producer producer_;
  double cell_volume_;
  bool done_ = false;
  CompensatedSum sum_;
  std::vector<double> keys_;
  std::vector<double> prefix_;
};

struct Offset {
  std::array<std::int16_t, kMaxDim> j;
  std::int32_t n2;
};

std::vector<Offset> offset_table(int d, int reach) {
  std::vector<Offset> table;
  const int r2 = reach * reach;
  const int lo = -reach;
  for (int a = lo; a <= reach; ++a) {
    for (int b = (d > 1 ? lo : 0); b <= (d > 1 ? reach : 0); ++b) {
      for (int c = (d > 2 ? lo : 0); c <= (d > 2 ? reach : 0); ++c) {
        const int n2 = a * a + b * b + c * c;
        if (n2 <= r2) {
          table.push_back({{static_cast<std::int16_t>(a), static_cast<std::int16_t>(b), static_cast<std::int16_t>(c)}, n2});
        }
      }
    }
  }
  std::stable_sort(table.begin(), table.end(), [](const Offset& p, const Offset& q) { return p.n2 < q.n2; });
  return table;
}

// Sub-cell masses for one center: one lazily sorted lattice per refinement
// factor m, all built from the same integer offset table.
class FineMass {
 public:
  FineMass(const Potential& v, const Domain& domain, const Point& x, const std::vector<Offset>& table,
           const RhoSolverOptions& opt)
      : v_(v), domain_(domain), x_(x), table_(table), opt_(opt) {}

  double mass(double r) {
    const int m = refinement_factor(r, domain_, opt_);
    auto it = lattices_.find(m);
    if (it == lattices_.end()) {
      const double step = domain_.spacing() / m;
      auto pos = std::make_shared<std::size_t>(0);
      SortedMass lattice(
          [this, step, pos](double& key, double& value) {
            if (*pos == table_.size()) return false;
            const Offset& o = table_[(*pos)++];
            Point p = x_;
            for (int a = 0; a < domain_.dim(); ++a) p[a] += o.j[a] * step;
            key = o.n2 * step * step;
            value = domain_.contains(p) ? v_(p) : 0.0;
            return true;
          },
          std::pow(step, domain_.dim()));
      it = lattices_.emplace(m, std::move(lattice)).first;
    }
    return it->second.mass(r);
  }

 private:
  const Potential& v_;
  const Domain& domain_;
  Point x_;
  const std::vector<Offset>& table_;
  const RhoSolverOptions& opt_;
  std::map<int, SortedMass> lattices_;
};

// m is the smallest odd integer >= kappa h / r, so r m / h < 3 kappa.
int fine_reach(const RhoSolverOptions& opt) { return static_cast<int>(std::ceil(3.0 * opt.kappa)) + 1; }

RhoPoint solve_rho(const Domain& domain, SortedMass& coarse, FineMass& fine, const std::vector<double>& grid,
                   const RhoSolverOptions& opt) {
  const int d = domain.dim();
  const double h = domain.spacing();
  const double r_max = grid.back();
  const double coarse_from = opt.kappa * h;

  auto phi = [&](double r) {
    if (r >= coarse_from) return phi_from_mass(coarse.mass(r), r, d);
    return phi_from_mass(fine.mass(r), r, d);
  };

  // Coarse regime, ascending: remember the last admissible grid point and stop
  // once the mass alone rules out every larger radius.
  std::ptrdiff_t last = -1;
  std::size_t first_coarse = grid.size();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid[k] >= coarse_from) {
      first_coarse = k;
      break;
    }
  }
  for (std::size_t k = first_coarse; k < grid.size(); ++k) {
    const double r = grid[k];
    const double mass = coarse.mass(r);
    if (phi_from_mass(mass, r, d) <= 1.0) last = static_cast<std::ptrdiff_t>(k);
    if (mass > phi_threshold(r, r_max, d)) break;
  }
  // Fine regime, descending: the first admissible point found is the largest.
  if (last < 0) {
    for (std::size_t k = first_coarse; k-- > 0;) {
      if (phi(grid[k]) <= 1.0) {
        last = static_cast<std::ptrdiff_t>(k);
        break;
      }
    }
  }
  RhoPoint out;
  if (last < 0) {
    out.rho = grid.front();
    out.below_scale = true;
    return out;
  }
  if (static_cast<std::size_t>(last) + 1 == grid.size()) {
    out.rho = grid.back();
    out.exceeds_box = true;
    return out;
  }
  double lo = grid[last];
  double hi = grid[last + 1];
  while (hi - lo > opt.tol * lo) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) <= 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.rho = lo;
  return out;
}

std::vector<double> rho_grid(const Domain& domain, const RhoSolverOptions& opt) {
  require(opt.tol > 0.0, "critical radius: tolerance must be positive");
  require(opt.kappa > 0.0 && opt.fine_floor >= 1.0, "critical radius: bad solver options");
  return log_grid(domain.spacing() / opt.fine_floor, 4.0 * domain.half_width(), opt.points_per_decade);
}

}  // namespace

double critical_phi(const Potential& v, const GridFunction& sampled, const Point& x, double r,
                    const RhoSolverOptions& options) {
  require(r > 0.0, "critical_phi: radius must be positive");
  const Domain& domain = sampled.domain();
  const int d = domain.dim();
  if (r >= options.kappa * domain.spacing()) {
    return phi_from_mass(ball_integral(sampled, Ball{x, r}).value, r, d);
  }
  return phi_from_mass(lattice_mass(v, domain, x, r, refinement_factor(r, domain, options)), r, d);
}

RhoPoint critical_radius(const Potential& v, const GridFunction& sampled, const Point& x,
                         const RhoSolverOptions& options) {
  const Domain& domain = sampled.domain();
  require(domain.contains(x), "critical_radius: point outside the box");
  const auto grid = rho_grid(domain, options);
  std::vector<std::pair<double, std::size_t>> order(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const double t = distance(domain.center(i), x, domain.dim());
    order[i] = {t * t, i};
  }
  std::sort(order.begin(), order.end());
  std::size_t pos = 0;
  SortedMass coarse(
      [&](double& key, double& value) {
        if (pos == order.size()) return false;
        key = order[pos].first;
        value = sampled[order[pos].second];
        ++pos;
        return true;
      },
      domain.cell_volume());
  const auto table = offset_table(domain.dim(), fine_reach(options));
  FineMass fine(v, domain, x, table, options);
  return solve_rho(domain, coarse, fine, grid, options);
}

std::vector<RhoPoint> critical_radius_cells(const Potential& v, const Domain& domain,
                                            const std::vector<std::size_t>& cells,
                                            const RhoSolverOptions& options) {
  const GridFunction sampled = v.sample(domain);
  const auto grid = rho_grid(domain, options);
  const int d = domain.dim();
  const double h = domain.spacing();
  const int reach = static_cast<int>(std::ceil(grid.back() / h));
  const auto table = offset_table(d, reach);
  const auto fine_table = offset_table(d, fine_reach(options));
  const int n = domain.cells_per_axis();
  std::vector<RhoPoint> points(cells.size());
  parallel_for(cells.size(), [&](std::size_t k) {
    const std::size_t cell = cells[k];
    const MultiIndex base = domain.multi_index(cell);
    std::size_t pos = 0;
    SortedMass coarse(
        [&](double& key, double& value) {
          if (pos == table.size()) return false;
          const Offset& o = table[pos++];
          MultiIndex idx = base;
          bool inside = true;
          for (int a = 0; a < d; ++a) {
            idx[a] += o.j[a];
            if (idx[a] < 0 || idx[a] >= n) inside = false;
          }
          key = o.n2 * h * h;
          value = inside ? sampled[domain.flat_index(idx)] : 0.0;
          return true;
        },
        domain.cell_volume());
    FineMass fine(v, domain, domain.center(cell), fine_table, options);
    points[k] = solve_rho(domain, coarse, fine, grid, options);
  });
  return points;
}

CriticalRadiusField critical_radius_field(const Potential& v, const Domain& domain,
                                          const RhoSolverOptions& options) {
  std::vector<std::size_t> all(domain.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const auto points = critical_radius_cells(v, domain, all, options);
  CriticalRadiusField field;
  field.options = options;
  std::vector<double> values(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    values[i] = points[i].rho;
    field.below_scale += points[i].below_scale ? 1 : 0;
    field.exceeds_box += points[i].exceeds_box ? 1 : 0;
  }
  field.rho = GridFunction(domain, std::move(values));
  ensure(field.rho.min() > 0.0, "critical radius: nonpositive value in the field");
  return field;
}

std::vector<PointPair> sample_pairs(const Domain& domain, std::size_t count, Rng& rng) {
  std::vector<PointPair> pairs(count);
  for (auto& p : pairs) {
    p.x = rng.index(domain.size());
    p.y = rng.index(domain.size());
  }
  return pairs;
}

double rho_pair_requirement(double rho_x, double rho_y, double dist, double n0) {
  const double t = 1.0 + dist / rho_x;
  const double left = rho_x * std::pow(t, -n0) / rho_y;
  const double right = rho_y / (rho_x * std::pow(t, n0 / (n0 + 1.0)));
  return std::max(left, right);
}

std::size_t count_rho_violations(const CriticalRadiusField& field, const std::vector<PointPair>& pairs,
                                 double c0, double n0, PointPair* witness) {
  const Domain& domain = field.rho.domain();
  std::size_t violations = 0;
  for (const auto& p : pairs) {
    const double rx = field.rho[p.x];
    const double ry = field.rho[p.y];
    const double dist = distance(domain.center(p.x), domain.center(p.y), domain.dim());
    const double t = 1.0 + dist / rx;
    const bool ok = rx * std::pow(t, -n0) / c0 <= ry && ry <= c0 * rx * std::pow(t, n0 / (n0 + 1.0));
    if (!ok) {
      if (witness && violations == 0) *witness = p;
      ++violations;
    }
  }
  return violations;
}

RhoRegularityReport fit_rho_regularity(const CriticalRadiusField& field, const std::vector<PointPair>& pairs,
                                       double c0_cap, double n0_max) {
  require(!pairs.empty(), "fit_rho_regularity: empty pair sample");
  const Domain& domain = field.rho.domain();
  std::vector<double> dist(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    dist[i] = distance(domain.center(pairs[i].x), domain.center(pairs[i].y), domain.dim());
  }
  RhoRegularityReport report;
  report.pairs = pairs.size();
  double best_c0 = kInf;
  double best_n0 = 1.0;
  std::size_t best_witness = 0;
  for (int k = 0;; ++k) {
    const double n0 = 1.0 + 0.25 * k;
    if (n0 > n0_max + 1e-12) break;
    double need = 1.0;
    std::size_t witness = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const double r = rho_pair_requirement(field.rho[pairs[i].x], field.rho[pairs[i].y], dist[i], n0);
      if (r > need) {
        need = r;
        witness = i;
      }
    }
    const double snapped = snap_up_log2(need);
    // Lexicographic in (snapped c0, N0): later N0 only wins with a strictly smaller c0.
    if (snapped < best_c0) {
      best_c0 = snapped;
      best_n0 = n0;
      best_witness = witness;
    }
  }
  report.c0 = best_c0;
  report.n0 = best_n0;
  report.witness = pairs[best_witness];
  report.fitted = best_c0 <= c0_cap;
  report.violations = count_rho_violations(field, pairs, report.c0, report.n0);
  return report;
}

std::vector<std::size_t> overlap_counts(const Domain& domain, const std::vector<Ball>& balls, double sigma) {
  std::vector<std::size_t> counts(domain.size(), 0);
  for (const auto& b : balls) {
    for (std::size_t i : cells_in(domain, Ball{b.center, sigma * b.radius})) ++counts[i];
  }
  return counts;
}

CriticalCovering build_critical_covering(const CriticalRadiusField& field, const std::vector<double>& sigmas) {
  require(!sigmas.empty(), "covering: empty dilation set");
  for (double s : sigmas) require(s >= 1.0, "covering: dilations must be >= 1");
  const Domain& domain = field.rho.domain();
  CriticalCovering cover;
  std::vector<char> covered(domain.size(), 0);
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (covered[i]) continue;
    const Ball b{domain.center(i), field.rho[i]};
    cover.balls.push_back(b);
    cover.center_cells.push_back(i);
    covered[i] = 1;  // the center always belongs to its own ball
    for (std::size_t c : cells_in(domain, b)) covered[c] = 1;
  }
  cover.uncovered = static_cast<std::size_t>(std::count(covered.begin(), covered.end(), 0));
  std::vector<EnvelopeSample> samples;
  for (double s : sigmas) {
    const auto counts = overlap_counts(domain, cover.balls, s);
    const std::size_t mx = *std::max_element(counts.begin(), counts.end());
    cover.overlaps.push_back({s, mx});
    samples.push_back({s, static_cast<double>(mx)});
  }
  const auto smallest = std::min_element(samples.begin(), samples.end(),
                                         [](const auto& a, const auto& b) { return a.base < b.base; });
  const double cap = smallest->ratio / std::pow(smallest->base, 0.0);
  const EnvelopeFit fit = fit_envelope(samples, ExponentLattice{0.0, 0.25, 3.0 * kMaxDim + 3.0}, cap);
  cover.constant = fit.constant;
  cover.n1 = fit.exponent;
  cover.violations = count_envelope_violations(samples, cover.n1, cover.constant);
  return cover;
}

double casilema_ratio(const GridFunction& v, double q, double rho_x, std::size_t x_cell, double r, double eps,
                      double c1) {
  const Domain& domain = v.domain();
  const int d = domain.dim();
  require(r > 0.0 && r <= rho_x, "casilema: need 0 < r <= rho(x)");
  require(q > 0.0, "casilema: q must be positive");
  require(eps > d / q, "casilema: eps must exceed d/q");
  require(c1 > 0.0, "casilema: C1 must be positive");
  const Point x = domain.center(x_cell);
  CompensatedSum sum;
  for (std::size_t i : cells_in(domain, Ball{x, c1 * r})) {
    if (i == x_cell) continue;
    sum.add(v[i] / std::pow(distance(domain.center(i), x, d), d - eps));
  }
  const double lhs = sum.value() * domain.cell_volume();
  const double rhs = std::pow(r, eps - 2.0) * std::pow(r / rho_x, 2.0 - d / q);
  return lhs / rhs;
}

}  // namespace schrolab
