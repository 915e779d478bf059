#include "schrolab/czd.hpp"

#include <bit>

namespace schrolab {

namespace {

int log2_cells(const Domain& domain) {
  const auto n = static_cast<unsigned>(domain.cells_per_axis());
  require(std::has_single_bit(n), "czd: cells per axis must be a power of two");
  return std::countr_zero(n);
}

int side_cells(const Domain& domain, int level) { return domain.cells_per_axis() >> level; }

void for_each_cube(int dim, int level, const std::function<void(const DyadicCube&)>& fn) {
  const int count = 1 << level;
  DyadicCube c{level, {0, 0, 0}};
  for (c.index[0] = 0; c.index[0] < count; ++c.index[0]) {
    for (c.index[1] = 0; c.index[1] < (dim > 1 ? count : 1); ++c.index[1]) {
      for (c.index[2] = 0; c.index[2] < (dim > 2 ? count : 1); ++c.index[2]) fn(c);
    }
  }
}

double abs_average(const GridFunction& f, const std::vector<std::size_t>& cells) {
  CompensatedSum s;
  for (std::size_t i : cells) s.add(std::abs(f[i]));
  return s.value() / static_cast<double>(cells.size());
}

}  // namespace

std::vector<std::size_t> dyadic_cells(const Domain& domain, const DyadicCube& cube) {
  const int d = domain.dim();
  const int s = side_cells(domain, cube.level);
  require(s >= 1, "czd: cube level finer than the grid");
  std::array<int, kMaxDim> lo{0, 0, 0};
  std::array<int, kMaxDim> hi{1, 1, 1};
  for (int a = 0; a < d; ++a) {
    lo[a] = cube.index[a] * s;
    hi[a] = lo[a] + s;
  }
  std::vector<std::size_t> out;
  out.reserve(static_cast<std::size_t>(std::pow(s, d)));
  MultiIndex idx{0, 0, 0};
  for (idx[0] = lo[0]; idx[0] < hi[0]; ++idx[0]) {
    for (idx[1] = lo[1]; idx[1] < hi[1]; ++idx[1]) {
      for (idx[2] = lo[2]; idx[2] < hi[2]; ++idx[2]) out.push_back(domain.flat_index(idx));
    }
  }
  return out;
}

Cube dyadic_region(const Domain& domain, const DyadicCube& cube) {
  const double side = 2.0 * domain.half_width() / (1 << cube.level);
  Cube c;
  c.half_side = side / 2.0;
  for (int a = 0; a < domain.dim(); ++a) c.center[a] = -domain.half_width() + (cube.index[a] + 0.5) * side;
  return c;
}

double dyadic_rho(const GridFunction& rho, const DyadicCube& cube) {
  const Domain& domain = rho.domain();
  const int d = domain.dim();
  const int s = side_cells(domain, cube.level);
  if (s == 1) return rho[domain.flat_index(cube.index)];
  CompensatedSum sum;
  int count = 0;
  for (int mask = 0; mask < (1 << d); ++mask) {
    MultiIndex idx{0, 0, 0};
    for (int a = 0; a < d; ++a) idx[a] = cube.index[a] * s + s / 2 - ((mask >> a) & 1 ? 0 : 1);
    sum.add(rho[domain.flat_index(idx)]);
    ++count;
  }
  return sum.value() / count;
}

bool cz_selected(double average, double half_side, double rho, double lambda, double theta) {
  return average > lambda * std::pow(1.0 + half_side / rho, theta);
}

CZCubes decompose(const GridFunction& f, const GridFunction& rho, double lambda, double theta, double sigma_cap) {
  require(lambda > 0.0, "czd: lambda must be positive");
  require(theta >= 0.0, "czd: theta must be nonnegative");
  require(f.components() == 1, "czd: scalar field required");
  require(rho.domain() == f.domain(), "czd: rho lives on a different grid");
  const Domain& domain = f.domain();
  const int d = domain.dim();
  const int levels = log2_cells(domain);

  auto test = [&](const DyadicCube& c, double* avg_out) {
    const double avg = abs_average(f, dyadic_cells(domain, c));
    if (avg_out) *avg_out = avg;
    return cz_selected(avg, dyadic_region(domain, c).half_side, dyadic_rho(rho, c), lambda, theta);
  };

  // Halve from the whole box until no cube of the level is selected.
  int start = -1;
  DyadicCube blocking;
  for (int level = 0; level <= levels && start < 0; ++level) {
    bool all_pass = true;
    for_each_cube(d, level, [&](const DyadicCube& c) {
      if (all_pass && test(c, nullptr)) {
        all_pass = false;
        blocking = c;
      }
    });
    if (all_pass) start = level;
  }
  if (start < 0) {
    const Cube r = dyadic_region(domain, blocking);
    throw PreconditionError("czd: level too small for domain; blocking cube at " + format_point(r.center, d) +
                            " with half-side " + std::to_string(r.half_side));
  }

  CZCubes out;
  out.lambda = lambda;
  out.theta = theta;
  out.start_level = start;
  out.r0 = dyadic_region(domain, DyadicCube{start, {0, 0, 0}}).half_side;
  out.owner.assign(domain.size(), -1);

  std::function<void(const DyadicCube&)> descend = [&](const DyadicCube& parent) {
    if (parent.level == levels) return;
    for (int mask = 0; mask < (1 << d); ++mask) {
      DyadicCube child{parent.level + 1, {0, 0, 0}};
      for (int a = 0; a < d; ++a) child.index[a] = 2 * parent.index[a] + ((mask >> (d - 1 - a)) & 1);
      double avg = 0.0;
      if (test(child, &avg)) {
        const Cube region = dyadic_region(domain, child);
        CZCube cz;
        cz.cube = child;
        cz.center = region.center;
        cz.half_side = region.half_side;
        cz.average = avg;
        cz.rho = dyadic_rho(rho, child);
        cz.sub_critical = cz.half_side <= cz.rho;
        const int id = static_cast<int>(out.cubes.size());
        for (std::size_t i : dyadic_cells(domain, child)) {
          ensure(out.owner[i] < 0, "czd: selected cubes overlap");
          out.owner[i] = id;
        }
        out.cubes.push_back(cz);
      } else {
        descend(child);
      }
    }
  };
  for_each_cube(d, start, descend);

  std::vector<EnvelopeSample> samples;
  for (const auto& c : out.cubes) samples.push_back({1.0 + c.half_side / c.rho, c.average / lambda});
  const double cap = sigma_cap > 0.0 ? sigma_cap : std::ldexp(1.0, d + 1);
  out.sigma_fit = fit_envelope(samples, ExponentLattice{theta, 0.25, theta + 12.0}, cap);
  return out;
}

CZSplit split(const GridFunction& f, const CZCubes& cubes) {
  const Domain& domain = f.domain();
  require(cubes.owner.size() == domain.size(), "czd split: cube family from a different grid");
  const std::size_t n = domain.size();
  std::vector<double> g(f.values().begin(), f.values().end());
  std::vector<double> h(n, 0.0);
  std::vector<double> hp(n, 0.0);
  CZSplit out;
  out.omega1.assign(n, 0);
  out.omega2.assign(n, 0);
  std::vector<char> seen(n, 0);
  for (std::size_t id = 0; id < cubes.cubes.size(); ++id) {
    const CZCube& c = cubes.cubes[id];
    const auto cells = dyadic_cells(domain, c.cube);
    for (std::size_t i : cells) {
      ensure(!seen[i], "czd split: overlapping cubes");
      seen[i] = 1;
    }
    if (c.sub_critical) {
      const double mean = cells_average(f, cells);
      for (std::size_t i : cells) {
        g[i] = mean;
        h[i] = f[i] - mean;
        out.omega1[i] = 1;
      }
    } else {
      for (std::size_t i : cells) {
        g[i] = 0.0;
        hp[i] = f[i];
        out.omega2[i] = 1;
      }
    }
  }
  out.g = GridFunction(domain, std::move(g));
  out.h = GridFunction(domain, std::move(h));
  out.h_prime = GridFunction(domain, std::move(hp));
  return out;
}

double cz_outside_ratio(const GridFunction& f, const GridFunction& rho, const CZCubes& cubes) {
  const Domain& domain = f.domain();
  double worst = 0.0;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (cubes.owner[i] >= 0) continue;
    const double limit = cubes.lambda * std::pow(1.0 + 0.5 * domain.spacing() / rho[i], cubes.theta);
    worst = std::max(worst, std::abs(f[i]) / limit);
  }
  return worst;
}

}  // namespace schrolab
