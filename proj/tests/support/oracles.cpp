#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oracle {

namespace {

double dist(const Point& a, const Point& b, int d) {
  double s = 0.0;
  for (int k = 0; k < d; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

}  // namespace

double ball_volume(int d, double r) {
  if (d == 1) return 2.0 * r;
  if (d == 2) return std::numbers::pi * r * r;
  return 4.0 / 3.0 * std::numbers::pi * r * r * r;
}

double ball_sum(const GridFunction& f, const Point& x, double r) {
  const Domain& dom = f.domain();
  long double s = 0.0L;
  for (std::size_t i = 0; i < dom.size(); ++i) {
    if (dist(dom.center(i), x, dom.dim()) <= r) s += f[i];
  }
  return static_cast<double>(s) * dom.cell_volume();
}

std::size_t ball_count(const Domain& domain, const Point& x, double r) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < domain.size(); ++i) c += dist(domain.center(i), x, domain.dim()) <= r;
  return c;
}

double rho_constant(int d, double c) { return 1.0 / std::sqrt(c * ball_volume(d, 1.0)); }

std::vector<Cube> cz_scan(const GridFunction& f, const GridFunction& rho, double lambda, double theta,
                          int* start_level) {
  const Domain& dom = f.domain();
  const int d = dom.dim();
  const int n = dom.cells_per_axis();
  const double m = dom.half_width();
  int levels = 0;
  while ((1 << levels) < n) ++levels;

  auto cube_test = [&](int level, const std::array<int, 3>& idx) {
    const double side = 2.0 * m / (1 << level);
    Point lo{0, 0, 0};
    Point mid{0, 0, 0};
    for (int a = 0; a < d; ++a) {
      lo[a] = -m + idx[a] * side;
      mid[a] = lo[a] + side / 2;
    }
    long double sum = 0.0L;
    int count = 0;
    double rho_sum = 0.0;
    int rho_count = 0;
    for (std::size_t i = 0; i < dom.size(); ++i) {
      const Point c = dom.center(i);
      bool inside = true;
      for (int a = 0; a < d; ++a) inside = inside && c[a] > lo[a] && c[a] < lo[a] + side;
      if (inside) {
        sum += std::abs(f[i]);
        ++count;
      }
      if (dist(c, mid, d) < 0.9 * dom.spacing()) {
        rho_sum += rho[i];
        ++rho_count;
      }
    }
    const double avg = static_cast<double>(sum / count);
    const double rc = rho_sum / rho_count;
    return avg > lambda * std::pow(1.0 + (side / 2) / rc, theta);
  };

  auto all_cubes = [&](int level) {
    std::vector<std::array<int, 3>> out;
    const int c = 1 << level;
    for (int i = 0; i < c; ++i)
      for (int j = 0; j < (d > 1 ? c : 1); ++j)
        for (int k = 0; k < (d > 2 ? c : 1); ++k) out.push_back({i, j, k});
    return out;
  };

  int start = -1;
  for (int level = 0; level <= levels; ++level) {
    bool any = false;
    for (const auto& idx : all_cubes(level)) any = any || cube_test(level, idx);
    if (!any) {
      start = level;
      break;
    }
  }
  if (start < 0) throw std::runtime_error("oracle: no starting level");
  if (start_level) *start_level = start;

  std::vector<Cube> family;
  for (int level = start + 1; level <= levels; ++level) {
    for (const auto& idx : all_cubes(level)) {
      if (!cube_test(level, idx)) continue;
      bool ancestor = false;
      for (int up = level - 1; up > start && !ancestor; --up) {
        std::array<int, 3> a{0, 0, 0};
        for (int k = 0; k < d; ++k) a[k] = idx[k] >> (level - up);
        ancestor = cube_test(up, a);
      }
      if (!ancestor) family.push_back({level, idx});
    }
  }
  std::sort(family.begin(), family.end());
  return family;
}

Eigen::MatrixXd schrodinger_matrix(const GridFunction& v) {
  const Domain& dom = v.domain();
  const int d = dom.dim();
  const auto n = static_cast<Eigen::Index>(dom.size());
  const double h2 = dom.spacing() * dom.spacing();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = 2.0 * d / h2 + v[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double r = dist(dom.center(i), dom.center(j), d);
      if (std::abs(r - dom.spacing()) < 1e-9 * dom.spacing()) a(i, j) = -1.0 / h2;
    }
  }
  return a;
}

Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  return es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

double spectral_norm(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(0);
}

double maximal_value(const GridFunction& f, const GridFunction& rho, double theta, std::size_t cell,
                     const std::vector<double>& radii) {
  const Domain& dom = f.domain();
  const Point x = dom.center(cell);
  double best = std::abs(f[cell]);
  for (double r : radii) {
    long double s = 0.0L;
    int count = 0;
    for (std::size_t i = 0; i < dom.size(); ++i) {
      // Radii may sit exactly on a lattice distance; such cells count as inside.
      if (dist(dom.center(i), x, dom.dim()) <= r * (1 + 1e-12)) {
        s += std::abs(f[i]);
        ++count;
      }
    }
    const double avg = static_cast<double>(s / count);
    best = std::max(best, avg / std::pow(1.0 + r / rho[cell], theta));
  }
  return best;
}

double luxemburg(const std::vector<double>& values, double (*phi)(double)) {
  auto mean_phi = [&](double lambda) {
    long double s = 0.0L;
    for (double v : values) s += phi(std::abs(v) / lambda);
    return static_cast<double>(s / values.size());
  };
  double hi = 1.0;
  while (mean_phi(hi) > 1.0) hi *= 2.0;
  double lo = hi;
  while (lo > 1e-300 && mean_phi(lo) <= 1.0) lo /= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mean_phi(mid) <= 1.0 ? hi : lo) = mid;
  }
  return hi;
}

double laclaim_lhs(const GridFunction& b, const GridFunction& w, const Point& center, double r, double t, double p,
                   double nu) {
  const Domain& dom = b.domain();
  const int d = dom.dim();
  const double hd = dom.cell_volume();
  long double total = 0.0L;
  for (std::size_t x = 0; x < dom.size(); ++x) {
    if (dist(dom.center(x), center, d) > r) continue;
    long double inner = 0.0L;
    for (std::size_t y = 0; y < dom.size(); ++y) {
      if (dist(dom.center(y), center, d) > t * r) continue;
      inner += std::pow(std::abs(b[x] - b[y]), nu);
    }
    total += w[x] * std::pow(static_cast<double>(inner) * hd, p / nu);
  }
  return static_cast<double>(total) * hd;
}

}  // namespace oracle
