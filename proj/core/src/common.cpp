#include "schrolab/common.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <thread>

namespace schrolab {

double distance(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return std::sqrt(s);
}

double norm(const Point& a, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += a[i] * a[i];
  return std::sqrt(s);
}

std::string format_point(const Point& p, int dim) {
  std::ostringstream out;
  out.precision(17);
  out << '(';
  for (int i = 0; i < dim; ++i) {
    if (i) out << ", ";
    out << p[i];
  }
  out << ')';
  return out.str();
}

double compensated_sum(std::span<const double> values) {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return s.value();
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

// xoshiro256** seeded through splitmix64.
Rng::Rng(std::uint64_t seed) {
  for (auto& s : state_) s = splitmix64(seed);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::size_t Rng::index(std::size_t bound) {
  if (bound <= 1) return 0;
  // Rejection keeps the result unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = next();
  while (x >= limit) x = next();
  return static_cast<std::size_t>(x % bound);
}

double Rng::normal() {
  // Box-Muller; one draw per call keeps the stream position predictable.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int thread_count() {
  if (const char* env = std::getenv("SCHROLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const auto threads = static_cast<std::size_t>(std::max(1, thread_count()));
  if (threads == 1 || count < 2 * threads) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (count + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, t, &body, &errors] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  // Rethrow the first failing chunk so the reported error is thread-count independent.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<double> log_grid(double lo, double hi, int points_per_decade) {
  require(lo > 0.0 && hi >= lo, "log_grid: need 0 < lo <= hi");
  require(points_per_decade > 0, "log_grid: density must be positive");
  const double decades = std::log10(hi / lo);
  const auto steps = static_cast<std::size_t>(std::ceil(decades * points_per_decade - 1e-9));
  return log_grid_count(lo, hi, steps + 1);
}

std::vector<double> log_grid_count(double lo, double hi, std::size_t count) {
  require(lo > 0.0 && hi >= lo, "log_grid: need 0 < lo <= hi");
  if (count <= 1 || hi == lo) return {lo};
  std::vector<double> out(count);
  const double ratio = std::log(hi / lo);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = lo * std::exp(ratio * static_cast<double>(k) / static_cast<double>(count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

double snap_up_log2(double value, int steps_per_octave) {
  if (!(value > 0.0) || !std::isfinite(value)) return value;
  double k = std::ceil(std::log2(value) * steps_per_octave - 1e-12);
  double snapped = std::exp2(k / steps_per_octave);
  // Guard against rounding in exp2/log2 landing just below the value.
  while (snapped < value) snapped = std::exp2(++k / steps_per_octave);
  return snapped;
}

EnvelopeFit fit_envelope(std::span<const EnvelopeSample> samples, const ExponentLattice& lattice,
                         double constant_cap) {
  EnvelopeFit best;
  best.samples = samples.size();
  if (samples.empty()) {
    best.feasible = true;
    best.exponent = lattice.start;
    best.constant = 0.0;
    return best;
  }
  const auto steps = static_cast<int>(std::floor((lattice.stop - lattice.start) / lattice.step + 1e-9));
  for (int k = 0; k <= steps; ++k) {
    const double e = lattice.start + k * lattice.step;
    double c = 0.0;
    std::size_t witness = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double need = samples[i].ratio / std::pow(samples[i].base, e);
      if (need > c || std::isnan(need)) {
        c = need;
        witness = i;
      }
    }
    best.exponent = e;
    best.constant = snap_up_log2(c);
    best.witness = witness;
    if (c <= constant_cap) {
      best.feasible = true;
      return best;
    }
  }
  best.feasible = false;
  return best;
}

std::size_t count_envelope_violations(std::span<const EnvelopeSample> samples, double exponent,
                                      double constant) {
  std::size_t v = 0;
  for (const auto& s : samples) {
    if (!(s.ratio <= constant * std::pow(s.base, exponent))) ++v;
  }
  return v;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace schrolab
