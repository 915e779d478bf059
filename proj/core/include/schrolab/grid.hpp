#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "schrolab/common.hpp"

namespace schrolab {

using MultiIndex = std::array<int, kMaxDim>;

/// Uniform box [-M, M]^d split into n cells per axis. Cells are numbered in
/// row-major order, axis 0 slowest.
class Domain {
 public:
  Domain() = default;
  Domain(int dim, double half_width, int cells_per_axis);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] double half_width() const { return half_width_; }
  [[nodiscard]] int cells_per_axis() const { return n_; }
  [[nodiscard]] double spacing() const { return h_; }
  [[nodiscard]] double cell_volume() const { return cell_volume_; }
  [[nodiscard]] double box_volume() const;
  [[nodiscard]] std::size_t size() const { return size_; }

  [[nodiscard]] MultiIndex multi_index(std::size_t flat) const;
  [[nodiscard]] std::size_t flat_index(const MultiIndex& idx) const;
  [[nodiscard]] Point center(std::size_t flat) const;
  [[nodiscard]] double coordinate(int axis_index) const { return -half_width_ + (axis_index + 0.5) * h_; }
  /// True if p lies in the closed box.
  [[nodiscard]] bool contains(const Point& p) const;
  /// Cell whose closed extent contains p (clamped to the box).
  [[nodiscard]] std::size_t locate(const Point& p) const;
  /// Axis-index range [lo, hi] of cell centers with |c - x| <= r along `axis`.
  [[nodiscard]] std::pair<int, int> axis_range(int axis, double x, double r) const;

  bool operator==(const Domain& other) const = default;

 private:
  int dim_ = 1;
  double half_width_ = 1.0;
  int n_ = 2;
  double h_ = 1.0;
  double cell_volume_ = 1.0;
  std::size_t size_ = 2;
};

/// Values sampled at cell centers: one real per cell or `components` reals
/// per cell (cell-major, component innermost).
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(Domain domain, std::vector<double> values, int components = 1);
  static GridFunction constant(const Domain& domain, double value);

  [[nodiscard]] const Domain& domain() const { return domain_; }
  [[nodiscard]] int components() const { return components_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] double at(std::size_t cell, int component) const {
    return values_[cell * components_ + component];
  }
  [[nodiscard]] double min() const;
  [[nodiscard]] double max() const;
  [[nodiscard]] double max_abs() const;

 private:
  Domain domain_;
  std::vector<double> values_;
  int components_ = 1;
};

struct Ball {
  Point center{};
  double radius = 0.0;
  [[nodiscard]] bool contains(const Point& p, int dim) const;
  [[nodiscard]] double analytic_volume(int dim) const;
};

/// P(x, r): cube of center x and side 2r.
struct Cube {
  Point center{};
  double half_side = 0.0;
  [[nodiscard]] bool contains(const Point& p, int dim) const;
};

using PointRule = std::function<double(const Point&)>;

/// Evaluates the rule at every cell center; non-finite output is rejected
/// with the offending point in the message.
GridFunction sample(const Domain& domain, const PointRule& rule);

/// True if any part of the region reaches outside [-M, M]^d.
bool is_clipped(const Domain& domain, const Ball& ball);
bool is_clipped(const Domain& domain, const Cube& cube);

/// Flat indices of cells whose centers lie in the region, ascending.
std::vector<std::size_t> cells_in(const Domain& domain, const Ball& ball);
std::vector<std::size_t> cells_in(const Domain& domain, const Cube& cube);

struct QuadratureResult {
  double value = 0.0;
  std::size_t cell_count = 0;
  bool clipped = false;
  bool empty = false;
};

/// Midpoint rule over cells whose centers lie in the ball, each weighted h^d.
QuadratureResult ball_integral(const GridFunction& f, const Ball& ball);
QuadratureResult cube_integral(const GridFunction& f, const Cube& cube);

/// Discrete mean over in-region cells, normalized by the in-region cell
/// count (so constants average exactly). Throws on an empty region.
double ball_average(const GridFunction& f, const Ball& ball);
double cube_average(const GridFunction& f, const Cube& cube);
double cells_average(const GridFunction& f, std::span<const std::size_t> cells);

/// (sum |f|^p w h^d)^(1/p); p = infinity gives max |f|.
double weighted_lp_norm(const GridFunction& f, double p, const GridFunction* weight = nullptr);

// Binary layout: five little-endian int32 (magic, d, n, kind, reserved)
// followed by little-endian float64 values. kind: 0 scalar, 1 vector
// (d components per cell), 2 dense cell-by-cell matrix.
inline constexpr std::int32_t kGridMagic = 0x46445247;  // "GRDF"

enum class GridPayload : std::int32_t { kScalar = 0, kVector = 1, kMatrix = 2 };

void write_binary(std::ostream& out, const Domain& domain, GridPayload kind,
                  std::span<const double> values);
void write_binary(std::ostream& out, const GridFunction& f);
void write_binary_file(const std::string& path, const GridFunction& f);

struct BinaryHeader {
  std::int32_t magic = 0;
  std::int32_t dim = 0;
  std::int32_t cells_per_axis = 0;
  GridPayload kind = GridPayload::kScalar;
  std::int32_t reserved = 0;
};

/// Reads a scalar or vector field; header must match the given domain.
GridFunction read_binary(std::istream& in, const Domain& domain);
GridFunction read_binary_file(const std::string& path, const Domain& domain);
BinaryHeader read_header(std::istream& in);

}  // namespace schrolab
