#include "schrolab/weights.hpp"

#include <algorithm>

namespace schrolab {

std::string to_string(RegionMode mode) {
  switch (mode) {
    case RegionMode::kAllBalls: return "all-balls";
    case RegionMode::kSubCritical: return "sub-critical";
    case RegionMode::kCubes: return "cubes";
  }
  return "";
}

std::vector<ApRatio> ap_ratios(const GridFunction& w, double p, RegionMode mode, const GridFunction& rho,
                               const std::vector<Ball>& regions) {
  require(p >= 1.0 && std::isfinite(p), "ap_constant: p must be finite and >= 1");
  require(w.min() > 0.0, "ap_constant: weight must be positive");
  const Domain& domain = w.domain();
  std::vector<ApRatio> out(regions.size());
  parallel_for(regions.size(), [&](std::size_t k) {
    const Ball& b = regions[k];
    ApRatio& r = out[k];
    r.rho = rho[domain.locate(b.center)];
    if (mode == RegionMode::kSubCritical && b.radius > r.rho) return;
    const auto cells = mode == RegionMode::kCubes ? cells_in(domain, Cube{b.center, b.radius}) : cells_in(domain, b);
    if (cells.empty()) return;
    r.used = true;
    const double mean_w = cells_average(w, cells);
    if (p == 1.0) {
      double lo = kInf;
      for (std::size_t i : cells) lo = std::min(lo, w[i]);
      r.raw = mean_w / lo;
      return;
    }
    const double e = -1.0 / (p - 1.0);
    CompensatedSum s;
    for (std::size_t i : cells) s.add(std::pow(w[i], e));
    const double mean_dual = s.value() / static_cast<double>(cells.size());
    if (!std::isfinite(mean_dual)) {
      r.raw = kInf;
      return;
    }
    r.raw = std::pow(mean_w, 1.0 / p) * std::pow(mean_dual, 1.0 - 1.0 / p);
  });
  return out;
}

ApReport ap_from_ratios(const std::vector<Ball>& regions, const std::vector<ApRatio>& ratios, double p,
                        double theta, RegionMode mode) {
  require(theta >= 0.0, "ap_constant: theta must be nonnegative");
  ApReport report;
  report.p = p;
  report.theta = theta;
  report.mode = mode;
  report.constant = 0.0;
  for (std::size_t k = 0; k < regions.size(); ++k) {
    if (!ratios[k].used) {
      ++report.skipped;
      continue;
    }
    ++report.evaluated;
    const double value = ratios[k].raw / std::pow(1.0 + regions[k].radius / ratios[k].rho, theta);
    if (value > report.constant) {
      report.constant = value;
      report.witness = regions[k];
    }
  }
  require(report.evaluated > 0, "ap_constant: no admissible regions in the sample");
  return report;
}

ApReport ap_constant(const GridFunction& w, double p, double theta, RegionMode mode, const GridFunction& rho,
                     const BallSampleSpec& spec) {
  const auto regions = make_ball_sample(w.domain(), spec);
  ApReport report = ap_from_ratios(regions, ap_ratios(w, p, mode, rho, regions), p, theta, mode);
  report.spec = spec;
  return report;
}

namespace {

struct LatticeOffset {
  std::array<std::int16_t, kMaxDim> j;
  std::int32_t n2;
};

std::vector<LatticeOffset> sorted_offsets(int d, int reach) {
  std::vector<LatticeOffset> table;
  const int r2 = reach * reach;
  for (int a = -reach; a <= reach; ++a) {
    for (int b = (d > 1 ? -reach : 0); b <= (d > 1 ? reach : 0); ++b) {
      for (int c = (d > 2 ? -reach : 0); c <= (d > 2 ? reach : 0); ++c) {
        const int n2 = a * a + b * b + c * c;
        if (n2 <= r2) {
          table.push_back({{static_cast<std::int16_t>(a), static_cast<std::int16_t>(b), static_cast<std::int16_t>(c)}, n2});
        }
      }
    }
  }
  std::stable_sort(table.begin(), table.end(), [](const auto& p, const auto& q) { return p.n2 < q.n2; });
  return table;
}

}  // namespace

MaximalProfile::MaximalProfile(const GridFunction& f, const GridFunction& rho) : domain_(f.domain()) {
  require(f.components() == 1, "m_theta: scalar field required");
  require(rho.domain() == f.domain(), "m_theta: rho lives on a different grid");
  const int d = domain_.dim();
  const int n = domain_.cells_per_axis();
  const double h = domain_.spacing();
  radii_ = log_grid(h, 4.0 * domain_.half_width(), 32);
  const int reach = static_cast<int>(std::ceil(radii_.back() / h));
  const auto table = sorted_offsets(d, reach);
  const std::size_t cells = domain_.size();
  abs_f_.resize(cells);
  rho_.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    abs_f_[i] = std::abs(f[i]);
    rho_[i] = rho[i];
  }
  const std::size_t nr = radii_.size();
  averages_.assign(cells * nr, 0.0);
  parallel_for(cells, [&](std::size_t cell) {
    const MultiIndex base = domain_.multi_index(cell);
    CompensatedSum sum;
    std::size_t count = 0;
    std::size_t pos = 0;
    for (std::size_t k = 0; k < nr; ++k) {
      const double lim = (radii_[k] / h) * (radii_[k] / h) * (1.0 + 1e-12);
      while (count < cells && pos < table.size() && table[pos].n2 <= lim) {
        MultiIndex idx = base;
        bool inside = true;
        for (int a = 0; a < d; ++a) {
          idx[a] += table[pos].j[a];
          if (idx[a] < 0 || idx[a] >= n) inside = false;
        }
        if (inside) {
          sum.add(abs_f_[domain_.flat_index(idx)]);
          ++count;
        }
        ++pos;
      }
      averages_[cell * nr + k] = sum.value() / static_cast<double>(count);
    }
  });
}

GridFunction MaximalProfile::evaluate(double theta) const {
  require(theta >= 0.0, "m_theta: theta must be nonnegative");
  const std::size_t nr = radii_.size();
  std::vector<double> out(domain_.size());
  for (std::size_t cell = 0; cell < domain_.size(); ++cell) {
    double best = abs_f_[cell];
    for (std::size_t k = 0; k < nr; ++k) {
      const double damp = theta == 0.0 ? 1.0 : std::pow(1.0 + radii_[k] / rho_[cell], -theta);
      best = std::max(best, damp * averages_[cell * nr + k]);
    }
    out[cell] = best;
  }
  return GridFunction(domain_, std::move(out));
}

GridFunction m_theta(const GridFunction& f, const GridFunction& rho, double theta) {
  return MaximalProfile(f, rho).evaluate(theta);
}

double level_set_measure(const GridFunction& g, double lambda) {
  std::size_t count = 0;
  for (double v : g.values()) count += v > lambda ? 1 : 0;
  return static_cast<double>(count) * g.domain().cell_volume();
}

std::vector<EnvelopeSample> a1_samples(const GridFunction& u, const GridFunction& rho, const std::vector<Ball>& balls) {
  const Domain& domain = u.domain();
  std::vector<EnvelopeSample> out(balls.size(), EnvelopeSample{0.0, 0.0});
  parallel_for(balls.size(), [&](std::size_t k) {
    const auto cells = cells_in(domain, balls[k]);
    if (cells.empty()) return;
    double lo = kInf;
    for (std::size_t i : cells) lo = std::min(lo, u[i]);
    out[k] = {1.0 + balls[k].radius / rho[domain.locate(balls[k].center)], cells_average(u, cells) / lo};
  });
  std::erase_if(out, [](const EnvelopeSample& s) { return s.base == 0.0; });
  return out;
}

A1Construction build_a1_weight(const GridFunction& g, const GridFunction& rho, double theta, double delta,
                               const std::vector<Ball>& balls, double constant_cap) {
  require(delta > 0.0 && delta < 1.0, "build_a1_weight: delta must lie in (0, 1)");
  require(g.max_abs() > 0.0, "build_a1_weight: degenerate source");
  const GridFunction mg = m_theta(g, rho, theta);
  std::vector<double> u(mg.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::pow(mg[i], delta);
  A1Construction out;
  out.weight = GridFunction(g.domain(), std::move(u));
  ensure(out.weight.min() > 0.0, "build_a1_weight: constructed weight is not positive");
  out.theta = theta;
  out.delta = delta;
  const auto samples = a1_samples(out.weight, rho, balls);
  out.beta_fit = fit_envelope(samples, ExponentLattice{}, constant_cap);
  return out;
}

PointwiseFit fit_maximal_domination(const GridFunction& u, const GridFunction& rho, const ExponentLattice& lattice,
                                    double constant_cap) {
  require(u.min() > 0.0, "fit_maximal_domination: weight must be positive");
  const MaximalProfile profile(u, rho);
  PointwiseFit out;
  const auto steps = static_cast<int>(std::floor((lattice.stop - lattice.start) / lattice.step + 1e-9));
  for (int k = 0; k <= steps; ++k) {
    const double theta = lattice.start + k * lattice.step;
    const GridFunction m = profile.evaluate(theta);
    double c = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) c = std::max(c, m[i] / u[i]);
    out.theta = theta;
    out.constant = snap_up_log2(c);
    if (c <= constant_cap) {
      out.feasible = true;
      return out;
    }
  }
  return out;
}

OpennessScan openness_scan(const GridFunction& w, double p, double theta, RegionMode mode, const GridFunction& rho,
                           const std::vector<double>& eps_grid, double threshold, const std::vector<Ball>& regions) {
  require(p > 1.0, "openness_scan: p must exceed 1");
  OpennessScan scan;
  for (double eps : eps_grid) {
    require(eps > 0.0 && eps < p - 1.0, "openness_scan: epsilon outside (0, p - 1)");
    const double q = p - eps;
    const ApReport r = ap_from_ratios(regions, ap_ratios(w, q, mode, rho, regions), q, theta, mode);
    const bool ok = r.constant <= threshold;
    scan.rows.push_back({eps, r.constant, ok});
    if (ok) scan.largest_epsilon = std::max(scan.largest_epsilon, eps);
  }
  return scan;
}

PowerCheck a1_power_check(const GridFunction& u, const GridFunction& rho, const std::vector<double>& nu_grid,
                          const std::vector<double>& theta_grid, double threshold, const std::vector<Ball>& regions) {
  require(!theta_grid.empty(), "a1_power_check: empty theta grid");
  PowerCheck check;
  for (double nu : nu_grid) {
    require(nu > 0.0, "a1_power_check: nu must be positive");
    std::vector<double> powered(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) powered[i] = std::pow(u[i], nu);
    const GridFunction w(u.domain(), std::move(powered));
    const auto ratios = ap_ratios(w, 1.0, RegionMode::kAllBalls, rho, regions);
    PowerRow row;
    row.nu = nu;
    for (double theta : theta_grid) {
      const ApReport r = ap_from_ratios(regions, ratios, 1.0, theta, RegionMode::kAllBalls);
      row.theta = theta;
      row.constant = r.constant;
      if (r.constant <= threshold) {
        row.admissible = true;
        break;
      }
    }
    if (row.admissible) check.largest_nu = std::max(check.largest_nu, nu);
    check.rows.push_back(row);
  }
  return check;
}

}  // namespace schrolab
