#include "schrolab/kernel_analysis.hpp"

#include <algorithm>

namespace schrolab {

std::vector<std::size_t> inner_cells(const Domain& domain) {
  std::vector<std::size_t> out;
  const double lim = 0.5 * domain.half_width();
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const Point c = domain.center(i);
    bool inside = true;
    for (int a = 0; a < domain.dim(); ++a) inside = inside && std::abs(c[a]) <= lim;
    if (inside) out.push_back(i);
  }
  return out;
}

double adjoint_kernel_norm(const RieszOperator& r, std::size_t x, std::size_t y) {
  const double inv = 1.0 / r.domain().cell_volume();
  double s = 0.0;
  for (int j = 0; j < r.components(); ++j) {
    const double k = r.component(j)(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) * inv;
    s += k * k;
  }
  return std::sqrt(s);
}

double potential_bracket(const GridFunction& v, std::size_t y, double radius) {
  const Domain& domain = v.domain();
  const int d = domain.dim();
  const Point c = domain.center(y);
  CompensatedSum sum;
  for (std::size_t i : cells_in(domain, Ball{c, radius})) {
    if (i == y) continue;
    sum.add(v[i] / std::pow(distance(domain.center(i), c, d), d - 1.0));
  }
  return sum.value() * domain.cell_volume();
}

std::vector<PointPair> kernel_pairs(const Domain& domain, std::size_t count, double min_sep, Rng& rng) {
  const auto cells = inner_cells(domain);
  require(cells.size() >= 2, "kernel_pairs: inner half-box has fewer than two cells");
  std::vector<PointPair> out;
  std::size_t attempts = 0;
  while (out.size() < count && attempts < 1000 * count + 1000) {
    ++attempts;
    const std::size_t x = cells[rng.index(cells.size())];
    const std::size_t y = cells[rng.index(cells.size())];
    if (distance(domain.center(x), domain.center(y), domain.dim()) < min_sep) continue;
    out.push_back({x, y});
  }
  require(!out.empty(), "kernel_pairs: no admissible pairs");
  return out;
}

namespace {

double rho_factor(double dist, double rho, double n_exp) { return std::pow(1.0 + dist / rho, n_exp); }

double bracket(const RieszOperator& r, std::size_t centre, double dist, const KernelCheckOptions& opt) {
  const double tail = 1.0 / dist;
  if (opt.drop_v_term) return tail;
  return potential_bracket(r.potential(), centre, dist / 4.0) + tail;
}

void keep_max(KernelBoundReport& rep, double value, std::array<std::size_t, 3> witness) {
  if (value > rep.constant) {
    rep.constant = value;
    rep.witness = witness;
  }
}

}  // namespace

KernelBoundReport decay_constant(const RieszOperator& r, const GridFunction& rho, double n_exp,
                                 const std::vector<PointPair>& pairs, const KernelCheckOptions& opt) {
  require(n_exp >= 0.0, "decay_constant: N must be nonnegative");
  const Domain& domain = r.domain();
  const int d = domain.dim();
  KernelBoundReport rep;
  rep.bound = "kes";
  rep.params = {{"N", n_exp}, {"q", opt.q}, {"drop_v_term", opt.drop_v_term ? 1.0 : 0.0},
                {"rho_at_second", opt.rho_at_second ? 1.0 : 0.0}};
  std::vector<double> values(pairs.size(), -1.0);
  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto [x, y] = pairs[k];
    const double dist = distance(domain.center(x), domain.center(y), d);
    if (dist < 2.0 * domain.spacing()) return;
    const double rh = opt.rho_at_second ? rho[y] : rho[x];
    values[k] = adjoint_kernel_norm(r, x, y) * std::pow(dist, d - 1.0) * rho_factor(dist, rh, n_exp) /
                bracket(r, y, dist, opt);
  });
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (values[k] < 0.0) {
      ++rep.excluded;
      continue;
    }
    ++rep.samples;
    keep_max(rep, values[k], {pairs[k].x, pairs[k].y, 0});
  }
  require(rep.samples > 0, "decay_constant: empty sample after exclusions");
  return rep;
}

std::vector<Triple> kernel_triples(const Domain& domain, std::size_t count, Rng& rng) {
  const auto cells = inner_cells(domain);
  const int d = domain.dim();
  const double h = domain.spacing();
  std::vector<Triple> out;
  std::size_t attempts = 0;
  while (out.size() < count && attempts < 1000 * count + 1000) {
    ++attempts;
    const std::size_t x = cells[rng.index(cells.size())];
    const std::size_t y = cells[rng.index(cells.size())];
    const std::size_t z = cells[rng.index(cells.size())];
    const double xz = distance(domain.center(x), domain.center(z), d);
    const double xy = distance(domain.center(x), domain.center(y), d);
    if (xz < 4.0 * h || !(xy < 2.0 * xz / 3.0)) continue;
    out.push_back({x, y, z});
  }
  require(!out.empty(), "kernel_triples: no admissible triples");
  return out;
}

KernelBoundReport smoothness_constant(const RieszOperator& r, const GridFunction& rho, double n_exp, double delta,
                                      const std::vector<Triple>& triples, const KernelCheckOptions& opt) {
  const Domain& domain = r.domain();
  const int d = domain.dim();
  const double dq = std::isinf(opt.q) ? 0.0 : d / opt.q;
  require(delta > 0.0 && delta < std::min(1.0, 2.0 - dq), "smoothness_constant: delta outside (0, min(1, 2 - d/q))");
  require(!triples.empty(), "smoothness_constant: no admissible triples");
  KernelBoundReport rep;
  rep.bound = "kesdif";
  rep.params = {{"N", n_exp}, {"delta", delta}, {"q", opt.q}, {"drop_v_term", opt.drop_v_term ? 1.0 : 0.0},
                {"rho_at_second", opt.rho_at_second ? 1.0 : 0.0}};
  const double inv = 1.0 / domain.cell_volume();
  std::vector<double> values(triples.size(), -1.0);
  parallel_for(triples.size(), [&](std::size_t k) {
    const auto [x, y, z] = triples[k];
    const double xz = distance(domain.center(x), domain.center(z), d);
    const double xy = distance(domain.center(x), domain.center(y), d);
    if (xz < 4.0 * domain.spacing() || !(xy < 2.0 * xz / 3.0)) return;
    if (x == y) {
      values[k] = 0.0;
      return;
    }
    double diff2 = 0.0;
    for (int j = 0; j < d; ++j) {
      const Matrix& c = r.component(j);
      const double a = c(static_cast<Eigen::Index>(z), static_cast<Eigen::Index>(x)) * inv;
      const double b = c(static_cast<Eigen::Index>(z), static_cast<Eigen::Index>(y)) * inv;
      diff2 += (a - b) * (a - b);
    }
    const double rh = opt.rho_at_second ? rho[z] : rho[x];
    values[k] = std::sqrt(diff2) * std::pow(xz, d - 1.0 + delta) * rho_factor(xz, rh, n_exp) /
                (std::pow(xy, delta) * bracket(r, z, xz, opt));
  });
  for (std::size_t k = 0; k < triples.size(); ++k) {
    if (values[k] < 0.0) {
      ++rep.excluded;
      continue;
    }
    ++rep.samples;
    keep_max(rep, values[k], {triples[k].x, triples[k].y, triples[k].z});
  }
  require(rep.samples > 0, "smoothness_constant: no admissible triples");
  return rep;
}

KernelBoundReport classical_gap(const RieszOperator& r, const RieszOperator& classical, const GridFunction& rho,
                                const std::vector<PointPair>& pairs, const KernelCheckOptions& opt) {
  require(r.domain() == classical.domain(), "classical_gap: operators live on different grids");
  const Domain& domain = r.domain();
  const int d = domain.dim();
  const double expo = 2.0 - (std::isinf(opt.q) ? 0.0 : d / opt.q);
  KernelBoundReport rep;
  rep.bound = "kesyclas";
  rep.params = {{"q", opt.q}, {"drop_v_term", opt.drop_v_term ? 1.0 : 0.0}};
  const double inv = 1.0 / domain.cell_volume();
  std::vector<double> values(pairs.size(), -1.0);
  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto [x, z] = pairs[k];
    const double dist = distance(domain.center(x), domain.center(z), d);
    if (dist < 2.0 * domain.spacing() || dist > rho[x]) return;
    double diff2 = 0.0;
    for (int j = 0; j < d; ++j) {
      const auto zi = static_cast<Eigen::Index>(z);
      const auto xi = static_cast<Eigen::Index>(x);
      const double a = r.component(j)(zi, xi) * inv;
      const double b = classical.component(j)(zi, xi) * inv;
      diff2 += (a - b) * (a - b);
    }
    double rhs = std::pow(dist / rho[x], expo) / dist;
    if (!opt.drop_v_term) rhs += potential_bracket(r.potential(), z, dist / 4.0);
    values[k] = std::sqrt(diff2) * std::pow(dist, d - 1.0) / rhs;
  });
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (values[k] < 0.0) {
      ++rep.excluded;
      continue;
    }
    ++rep.samples;
    keep_max(rep, values[k], {pairs[k].x, pairs[k].y, 0});
  }
  return rep;
}

double hormander_exponent(double q, int d) {
  require(q > d / 2.0 && q < d, "hormander: q must lie in (d/2, d)");
  return 1.0 / (1.0 / q - 1.0 / d);
}

HormanderSums hormander_partial_sums(const RieszOperator& r, const GridFunction& rho, std::size_t x0, std::size_t y,
                                     double radius, double theta, double s, int k_cap) {
  const Domain& domain = r.domain();
  const int d = domain.dim();
  require(radius >= 2.0 * domain.spacing(), "hormander: r must be at least 2h");
  require(s > 1.0, "hormander: s must exceed 1");
  const Point c0 = domain.center(x0);
  require(distance(domain.center(y), c0, d) < radius, "hormander: need |y - x0| < r");
  const double s_prime = s / (s - 1.0);
  const double inv = 1.0 / domain.cell_volume();
  // Group cells by annulus index k = floor(log2(|x - x0| / r)).
  std::vector<std::vector<std::size_t>> annuli;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const double t = distance(domain.center(i), c0, d) / radius;
    if (t < 2.0) continue;
    int k = static_cast<int>(std::floor(std::log2(t)));
    // Guard the floor against log2 rounding at exact powers of two.
    while (std::ldexp(1.0, k + 1) <= t) ++k;
    while (k > 1 && std::ldexp(1.0, k) > t) --k;
    if (k > k_cap) continue;
    if (static_cast<int>(annuli.size()) <= k) annuli.resize(k + 1);
    annuli[k].push_back(i);
  }
  HormanderSums out;
  out.k_max = static_cast<int>(annuli.size()) - 1;
  CompensatedSum running;
  const auto yi = static_cast<Eigen::Index>(y);
  const auto x0i = static_cast<Eigen::Index>(x0);
  for (int k = 1; k <= out.k_max; ++k) {
    CompensatedSum integral;
    for (std::size_t i : annuli[k]) {
      double diff2 = 0.0;
      for (int j = 0; j < d; ++j) {
        const Matrix& c = r.component(j);
        const double a = (c(static_cast<Eigen::Index>(i), yi) - c(static_cast<Eigen::Index>(i), x0i)) * inv;
        diff2 += a * a;
      }
      integral.add(std::pow(diff2, s / 2.0));
    }
    const double scale = std::ldexp(radius, k);
    const double lp = std::pow(integral.value() * domain.cell_volume(), 1.0 / s);
    const double term = k * std::pow(scale, d / s_prime) * std::pow(1.0 + scale / rho[x0], theta) * lp;
    out.terms.push_back(term);
    running.add(term);
    out.partial.push_back(running.value());
  }
  return out;
}

AnnulusValue annulus_ls(const RieszOperator& r, const GridFunction& rho, std::size_t z, double radius, std::size_t y,
                        int k, double s, double n_exp, double mu, double q) {
  const Domain& domain = r.domain();
  const int d = domain.dim();
  require(k >= 1, "annulus_ls: k must be >= 1");
  require(radius >= rho[z], "annulus_ls: need r >= rho(z)");
  const Point cz = domain.center(z);
  require(distance(domain.center(y), cz, d) < radius, "annulus_ls: y must lie in B(z, r)");
  const double outer = std::ldexp(radius, k);
  const double inner = std::ldexp(radius, k - 1);
  const double inv = 1.0 / domain.cell_volume();
  const auto yi = static_cast<Eigen::Index>(y);
  CompensatedSum integral;
  std::size_t count = 0;
  for (std::size_t i : cells_in(domain, Ball{cz, outer})) {
    if (distance(domain.center(i), cz, d) <= inner) continue;
    ++count;
    double k2 = 0.0;
    for (int j = 0; j < d; ++j) {
      const double a = r.component(j)(static_cast<Eigen::Index>(i), yi) * inv;
      k2 += a * a;
    }
    integral.add(std::pow(k2, s / 2.0));
  }
  AnnulusValue out;
  const double analytic = Ball{cz, outer}.analytic_volume(d) - Ball{cz, inner}.analytic_volume(d);
  out.clipped_fraction = std::max(0.0, 1.0 - count * domain.cell_volume() / analytic);
  out.excluded = out.clipped_fraction > 0.5;
  const double q_conj = std::isinf(q) ? 1.0 : q / (q - 1.0);
  const double lhs = std::pow(integral.value() * domain.cell_volume(), 1.0 / s);
  const double rhs = std::pow(outer, -1.0 - d / q_conj) * std::pow(rho[z] / outer, n_exp - mu * d);
  out.ratio = lhs / rhs;
  return out;
}

}  // namespace schrolab
