#include "schrolab/grid.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace schrolab {

Domain::Domain(int dim, double half_width, int cells_per_axis)
    : dim_(dim), half_width_(half_width), n_(cells_per_axis) {
  require(dim >= 1 && dim <= kMaxDim, "domain: dimension must be in [1, 3]");
  require(half_width > 0.0 && std::isfinite(half_width), "domain: half-width must be positive");
  require(cells_per_axis >= 2 && cells_per_axis % 2 == 0, "domain: cells per axis must be even and >= 2");
  h_ = 2.0 * half_width / cells_per_axis;
  cell_volume_ = std::pow(h_, dim);
  size_ = 1;
  for (int i = 0; i < dim; ++i) size_ *= static_cast<std::size_t>(cells_per_axis);
}

double Domain::box_volume() const { return std::pow(2.0 * half_width_, dim_); }

MultiIndex Domain::multi_index(std::size_t flat) const {
  MultiIndex idx{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % n_);
    flat /= n_;
  }
  return idx;
}

std::size_t Domain::flat_index(const MultiIndex& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a) flat = flat * n_ + static_cast<std::size_t>(idx[a]);
  return flat;
}

Point Domain::center(std::size_t flat) const {
  const auto idx = multi_index(flat);
  Point p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) p[a] = coordinate(idx[a]);
  return p;
}

bool Domain::contains(const Point& p) const {
  for (int a = 0; a < dim_; ++a) {
    if (p[a] < -half_width_ || p[a] > half_width_) return false;
  }
  return true;
}

std::size_t Domain::locate(const Point& p) const {
  MultiIndex idx{0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    const int i = static_cast<int>(std::floor((p[a] + half_width_) / h_));
    idx[a] = std::clamp(i, 0, n_ - 1);
  }
  return flat_index(idx);
}

std::pair<int, int> Domain::axis_range(int axis, double x, double r) const {
  (void)axis;
  // Center c_i = -M + (i + 1/2) h; solve |c_i - x| <= r for integer i.
  const double lo = (x - r + half_width_) / h_ - 0.5;
  const double hi = (x + r + half_width_) / h_ - 0.5;
  int ilo = static_cast<int>(std::ceil(lo - 1e-12));
  int ihi = static_cast<int>(std::floor(hi + 1e-12));
  ilo = std::max(ilo, 0);
  ihi = std::min(ihi, n_ - 1);
  return {ilo, ihi};
}

GridFunction::GridFunction(Domain domain, std::vector<double> values, int components)
    : domain_(std::move(domain)), values_(std::move(values)), components_(components) {
  require(components >= 1, "grid function: component count must be positive");
  require(values_.size() == domain_.size() * static_cast<std::size_t>(components),
          "grid function: value count does not match the domain");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    require(std::isfinite(values_[i]), "grid function: non-finite value at slot " + std::to_string(i));
  }
}

GridFunction GridFunction::constant(const Domain& domain, double value) {
  return GridFunction(domain, std::vector<double>(domain.size(), value));
}

double GridFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }
double GridFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }
double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool Ball::contains(const Point& p, int dim) const {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) {
    const double t = p[a] - center[a];
    s += t * t;
  }
  return s <= radius * radius;
}

double Ball::analytic_volume(int dim) const {
  switch (dim) {
    case 1: return 2.0 * radius;
    case 2: return M_PI * radius * radius;
    default: return 4.0 / 3.0 * M_PI * radius * radius * radius;
  }
}

bool Cube::contains(const Point& p, int dim) const {
  for (int a = 0; a < dim; ++a) {
    if (std::abs(p[a] - center[a]) > half_side) return false;
  }
  return true;
}

GridFunction sample(const Domain& domain, const PointRule& rule) {
  std::vector<double> values(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const Point c = domain.center(i);
    const double v = rule(c);
    if (!std::isfinite(v)) {
      throw PreconditionError("sample: rule is not finite at " + format_point(c, domain.dim()));
    }
    values[i] = v;
  }
  return GridFunction(domain, std::move(values));
}

namespace {

bool reaches_outside(const Domain& domain, const Point& c, double r) {
  for (int a = 0; a < domain.dim(); ++a) {
    if (c[a] - r < -domain.half_width() || c[a] + r > domain.half_width()) return true;
  }
  return false;
}

template <typename Region>
void for_each_cell(const Domain& domain, const Point& c, double r, const Region& region,
                   const std::function<void(std::size_t)>& fn) {
  const int d = domain.dim();
  std::array<std::pair<int, int>, kMaxDim> range{};
  for (int a = 0; a < kMaxDim; ++a) range[a] = {0, 0};
  for (int a = 0; a < d; ++a) {
    range[a] = domain.axis_range(a, c[a], r);
    if (range[a].first > range[a].second) return;
  }
  MultiIndex idx{0, 0, 0};
  Point p{0.0, 0.0, 0.0};
  for (idx[0] = range[0].first; idx[0] <= range[0].second; ++idx[0]) {
    p[0] = domain.coordinate(idx[0]);
    for (idx[1] = range[1].first; idx[1] <= range[1].second; ++idx[1]) {
      if (d > 1) p[1] = domain.coordinate(idx[1]);
      for (idx[2] = range[2].first; idx[2] <= range[2].second; ++idx[2]) {
        if (d > 2) p[2] = domain.coordinate(idx[2]);
        if (region.contains(p, d)) fn(domain.flat_index(idx));
      }
    }
  }
}

template <typename Region>
QuadratureResult region_integral(const GridFunction& f, const Region& region, double reach) {
  require(f.components() == 1, "integral: scalar field required");
  const Domain& domain = f.domain();
  QuadratureResult result;
  result.clipped = reaches_outside(domain, region.center, reach);
  CompensatedSum sum;
  for_each_cell(domain, region.center, reach, region, [&](std::size_t i) {
    sum.add(f[i]);
    ++result.cell_count;
  });
  result.empty = result.cell_count == 0;
  result.value = sum.value() * domain.cell_volume();
  return result;
}

}  // namespace

bool is_clipped(const Domain& domain, const Ball& ball) {
  return reaches_outside(domain, ball.center, ball.radius);
}

bool is_clipped(const Domain& domain, const Cube& cube) {
  return reaches_outside(domain, cube.center, cube.half_side);
}

std::vector<std::size_t> cells_in(const Domain& domain, const Ball& ball) {
  std::vector<std::size_t> out;
  for_each_cell(domain, ball.center, ball.radius, ball, [&](std::size_t i) { out.push_back(i); });
  return out;
}

std::vector<std::size_t> cells_in(const Domain& domain, const Cube& cube) {
  std::vector<std::size_t> out;
  for_each_cell(domain, cube.center, cube.half_side, cube, [&](std::size_t i) { out.push_back(i); });
  return out;
}

QuadratureResult ball_integral(const GridFunction& f, const Ball& ball) {
  require(ball.radius > 0.0, "ball_integral: radius must be positive");
  require(f.domain().contains(ball.center), "ball_integral: center outside the box");
  return region_integral(f, ball, ball.radius);
}

QuadratureResult cube_integral(const GridFunction& f, const Cube& cube) {
  require(cube.half_side > 0.0, "cube_integral: half-side must be positive");
  require(f.domain().contains(cube.center), "cube_integral: center outside the box");
  return region_integral(f, cube, cube.half_side);
}

double cells_average(const GridFunction& f, std::span<const std::size_t> cells) {
  require(!cells.empty(), "average: degenerate region");
  CompensatedSum sum;
  for (std::size_t i : cells) sum.add(f[i]);
  return sum.value() / static_cast<double>(cells.size());
}

double ball_average(const GridFunction& f, const Ball& ball) {
  const auto cells = cells_in(f.domain(), ball);
  return cells_average(f, cells);
}

double cube_average(const GridFunction& f, const Cube& cube) {
  const auto cells = cells_in(f.domain(), cube);
  return cells_average(f, cells);
}

double weighted_lp_norm(const GridFunction& f, double p, const GridFunction* weight) {
  require(p >= 1.0, "weighted_lp_norm: p must be >= 1");
  require(f.components() == 1, "weighted_lp_norm: scalar field required");
  if (weight) {
    require(weight->size() == f.size(), "weighted_lp_norm: weight size mismatch");
    for (double w : weight->values()) require(w > 0.0, "weighted_lp_norm: weight must be positive");
  }
  if (std::isinf(p)) return f.max_abs();
  CompensatedSum sum;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double w = weight ? (*weight)[i] : 1.0;
    sum.add(std::pow(std::abs(f[i]), p) * w);
  }
  return std::pow(sum.value() * f.domain().cell_volume(), 1.0 / p);
}

namespace {

static_assert(std::endian::native == std::endian::little, "binary format assumes a little-endian host");

void put_i32(std::ostream& out, std::int32_t v) { out.write(reinterpret_cast<const char*>(&v), sizeof v); }

std::int32_t get_i32(std::istream& in) {
  std::int32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  require(static_cast<bool>(in), "binary: truncated header");
  return v;
}

}  // namespace

void write_binary(std::ostream& out, const Domain& domain, GridPayload kind, std::span<const double> values) {
  put_i32(out, kGridMagic);
  put_i32(out, domain.dim());
  put_i32(out, domain.cells_per_axis());
  put_i32(out, static_cast<std::int32_t>(kind));
  put_i32(out, 0);
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
}

void write_binary(std::ostream& out, const GridFunction& f) {
  const auto kind = f.components() == 1 ? GridPayload::kScalar : GridPayload::kVector;
  require(f.components() == 1 || f.components() == f.domain().dim(),
          "binary: vector fields must carry d components");
  write_binary(out, f.domain(), kind, f.values());
}

void write_binary_file(const std::string& path, const GridFunction& f) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), "binary: cannot open " + path);
  write_binary(out, f);
}

BinaryHeader read_header(std::istream& in) {
  BinaryHeader h;
  h.magic = get_i32(in);
  require(h.magic == kGridMagic, "binary: bad magic");
  h.dim = get_i32(in);
  h.cells_per_axis = get_i32(in);
  h.kind = static_cast<GridPayload>(get_i32(in));
  h.reserved = get_i32(in);
  return h;
}

GridFunction read_binary(std::istream& in, const Domain& domain) {
  const BinaryHeader h = read_header(in);
  require(h.dim == domain.dim() && h.cells_per_axis == domain.cells_per_axis(),
          "binary: header does not match the configured domain");
  require(h.kind == GridPayload::kScalar || h.kind == GridPayload::kVector,
          "binary: expected a scalar or vector field");
  const int components = h.kind == GridPayload::kScalar ? 1 : domain.dim();
  std::vector<double> values(domain.size() * components);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
  require(static_cast<bool>(in), "binary: truncated payload");
  return GridFunction(domain, std::move(values), components);
}

GridFunction read_binary_file(const std::string& path, const Domain& domain) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "binary: cannot open " + path);
  return read_binary(in, domain);
}

}  // namespace schrolab
