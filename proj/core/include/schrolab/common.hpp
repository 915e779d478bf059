#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace schrolab {

/// Largest ambient dimension supported by the fixed-size point type.
inline constexpr int kMaxDim = 3;

using Point = std::array<double, kMaxDim>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Caller violated a documented precondition (maps to CLI exit status 1).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An invariant that should hold by construction was observed broken
/// (maps to CLI exit status 2).
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

inline void ensure(bool condition, const std::string& message) {
  if (!condition) throw InconsistencyError(message);
}

double distance(const Point& a, const Point& b, int dim);
double norm(const Point& a, int dim);
std::string format_point(const Point& p, int dim);

/// Neumaier-compensated accumulator. Summation order is fixed by the caller,
/// so results are reproducible bit for bit.
class CompensatedSum {
 public:
  void add(double value) {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double compensated_sum(std::span<const double> values);

/// Portable seeded generator. Distributions are derived from the raw 64-bit
/// stream directly because <random> distributions are implementation defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, bound).
  std::size_t index(std::size_t bound);
  double normal();

 private:
  std::uint64_t state_[4];
};

/// Runs body(i) for i in [0, count). Work is split into contiguous chunks;
/// each index is processed exactly once, so results never depend on the
/// thread count (read from SCHROLAB_THREADS, default 1).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);
int thread_count();

/// Log-spaced values from lo to hi with the given density; both end points
/// included.
std::vector<double> log_grid(double lo, double hi, int points_per_decade);
std::vector<double> log_grid_count(double lo, double hi, std::size_t count);

/// Round up to the lattice 2^(k / steps_per_octave).
double snap_up_log2(double value, int steps_per_octave = 4);

/// One observation for a power-envelope fit: ratio <= C * base^exponent.
struct EnvelopeSample {
  double base = 1.0;
  double ratio = 0.0;
};

struct ExponentLattice {
  double start = 0.0;
  double step = 0.25;
  double stop = 12.0;
};

struct EnvelopeFit {
  bool feasible = false;
  double exponent = 0.0;
  double constant = 0.0;
  std::size_t samples = 0;
  std::size_t witness = 0;  // index of the sample that sets the constant
};

/// Smallest exponent on the lattice whose minimal feasible constant does not
/// exceed constant_cap; the constant is then snapped up to the 2^(k/4)
/// lattice. Zero violations on the fitted sample by construction.
EnvelopeFit fit_envelope(std::span<const EnvelopeSample> samples, const ExponentLattice& lattice,
                         double constant_cap);

std::size_t count_envelope_violations(std::span<const EnvelopeSample> samples, double exponent,
                                      double constant);

/// 64-bit FNV-1a, used to stamp reports with a configuration hash.
std::uint64_t fnv1a(std::string_view text);

}  // namespace schrolab
