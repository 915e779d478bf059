#include "schrolab/spaces.hpp"

#include <algorithm>
#include <sstream>

namespace schrolab {

YoungFunction YoungFunction::power(double s) {
  require(s > 1.0 && std::isfinite(s), "young function: power exponent must exceed 1");
  return {Kind::kPower, s};
}

YoungFunction YoungFunction::exp_minus_one() { return {Kind::kExpMinusOne, 0.0}; }
YoungFunction YoungFunction::exp_conjugate() { return {Kind::kExpConjugate, 0.0}; }

double YoungFunction::operator()(double t) const {
  switch (kind_) {
    case Kind::kPower: return std::pow(t, s_);
    case Kind::kExpMinusOne: return std::expm1(t);
    case Kind::kExpConjugate: return t <= 1.0 ? 0.0 : t * std::log(t) - t + 1.0;
  }
  return 0.0;
}

double YoungFunction::inverse(double y) const {
  require(y >= 0.0, "young function: inverse of a negative value");
  switch (kind_) {
    case Kind::kPower: return std::pow(y, 1.0 / s_);
    case Kind::kExpMinusOne: return std::log1p(y);
    case Kind::kExpConjugate: {
      if (y == 0.0) return 1.0;
      // Newton on t log t - t + 1 - y, convex and increasing on [1, inf).
      double t = std::max(std::exp(1.0), 1.0 + y);
      for (int it = 0; it < 100; ++it) {
        const double f = t * std::log(t) - t + 1.0 - y;
        const double step = f / std::log(t);
        t -= step;
        if (t <= 1.0) t = 1.0 + 1e-12;
        if (std::abs(step) <= 1e-15 * t) break;
      }
      return t;
    }
  }
  return 0.0;
}

YoungFunction YoungFunction::conjugate() const {
  switch (kind_) {
    case Kind::kPower: return power(s_ / (s_ - 1.0));
    case Kind::kExpMinusOne: return exp_conjugate();
    case Kind::kExpConjugate: return exp_minus_one();
  }
  return *this;
}

std::string YoungFunction::describe() const {
  switch (kind_) {
    case Kind::kPower: {
      std::ostringstream out;
      out.precision(17);
      out << "power(" << s_ << ")";
      return out.str();
    }
    case Kind::kExpMinusOne: return "exp-minus-one";
    case Kind::kExpConjugate: return "exp-conjugate";
  }
  return "";
}

namespace {

double mean_phi(std::span<const double> values, const YoungFunction& phi, double lambda) {
  CompensatedSum s;
  for (double v : values) s.add(phi(std::abs(v) / lambda));
  return s.value() / static_cast<double>(values.size());
}

}  // namespace

double orlicz_average(std::span<const double> values, const YoungFunction& phi, double rel_tol) {
  require(!values.empty(), "orlicz_average: empty region");
  double top = 0.0;
  for (double v : values) top = std::max(top, std::abs(v));
  if (top == 0.0) return 0.0;
  double hi = top;
  int widen = 0;
  while (!(mean_phi(values, phi, hi) <= 1.0)) {
    hi *= 2.0;
    if (++widen > 200) throw PreconditionError("orlicz_average: bracket widening failed");
  }
  double lo = hi;
  widen = 0;
  while (mean_phi(values, phi, lo) <= 1.0) {
    lo *= 0.5;
    if (++widen > 200) throw PreconditionError("orlicz_average: bracket widening failed");
  }
  while (hi / lo - 1.0 > rel_tol) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    if (mean_phi(values, phi, mid) <= 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double orlicz_average(const GridFunction& f, std::span<const std::size_t> cells, const YoungFunction& phi) {
  std::vector<double> values;
  values.reserve(cells.size());
  for (std::size_t i : cells) values.push_back(f[i]);
  return orlicz_average(values, phi);
}

double holder_check(const GridFunction& f, const GridFunction& g, std::span<const std::size_t> cells,
                    const YoungFunction& phi) {
  require(!cells.empty(), "holder_check: degenerate region");
  CompensatedSum prod;
  for (std::size_t i : cells) prod.add(std::abs(f[i] * g[i]));
  const double lhs = prod.value() / static_cast<double>(cells.size());
  if (lhs == 0.0) return 0.0;
  const double nf = orlicz_average(f, cells, phi);
  const double ng = orlicz_average(g, cells, phi.conjugate());
  ensure(nf > 0.0 && ng > 0.0, "holder_check: zero Orlicz norm with a nonzero product");
  return lhs / (2.0 * nf * ng);
}

std::vector<BallOscillation> ball_oscillations(const GridFunction& b, const GridFunction& rho,
                                               const std::vector<Ball>& balls) {
  const Domain& domain = b.domain();
  std::vector<BallOscillation> out(balls.size());
  parallel_for(balls.size(), [&](std::size_t k) {
    const auto cells = cells_in(domain, balls[k]);
    out[k].cells = cells.size();
    out[k].rho = rho[domain.locate(balls[k].center)];
    if (cells.size() < kMinOscillationCells) return;
    const double mean = cells_average(b, cells);
    CompensatedSum s;
    for (std::size_t i : cells) s.add(std::abs(b[i] - mean));
    out[k].oscillation = s.value() / static_cast<double>(cells.size());
  });
  return out;
}

BmoReport bmo_from_oscillations(const std::vector<Ball>& balls, const std::vector<BallOscillation>& osc,
                                double theta) {
  require(theta >= 0.0, "bmo: theta must be nonnegative");
  BmoReport report;
  report.theta = theta;
  for (std::size_t k = 0; k < balls.size(); ++k) {
    if (osc[k].cells < kMinOscillationCells) {
      ++report.skipped;
      continue;
    }
    ++report.evaluated;
    const double value = osc[k].oscillation / std::pow(1.0 + balls[k].radius / osc[k].rho, theta);
    if (value > report.seminorm) {
      report.seminorm = value;
      report.witness = balls[k];
    }
  }
  return report;
}

BmoReport bmo_theta_seminorm(const GridFunction& b, const GridFunction& rho, double theta,
                             const BallSampleSpec& spec) {
  const auto balls = make_ball_sample(b.domain(), spec);
  BmoReport report = bmo_from_oscillations(balls, ball_oscillations(b, rho, balls), theta);
  report.spec = spec;
  return report;
}

namespace {

Ball dilate(const Ball& ball, double t) { return {ball.center, ball.radius * t}; }

}  // namespace

double jn_ratio(const GridFunction& b, const Ball& ball, int k, const YoungFunction& phi, const GridFunction& rho,
                double theta_trial) {
  require(k >= 1, "jn_ratio: k must be >= 1");
  const Domain& domain = b.domain();
  const Ball big = dilate(ball, std::ldexp(1.0, k));
  require(!is_clipped(domain, big), "jn_ratio: dilated ball leaves the box");
  const double big_mean = ball_average(b, big);
  const auto cells = cells_in(domain, ball);
  require(!cells.empty(), "jn_ratio: degenerate region");
  std::vector<double> shifted;
  shifted.reserve(cells.size());
  for (std::size_t i : cells) shifted.push_back(b[i] - big_mean);
  const double num = orlicz_average(shifted, phi);
  const double r = rho[domain.locate(ball.center)];
  return num / (k * std::pow(1.0 + big.radius / r, theta_trial));
}

double jn_triangle_bound(const GridFunction& b, const Ball& ball, int k, const YoungFunction& phi) {
  require(k >= 1, "jn_triangle_bound: k must be >= 1");
  const Domain& domain = b.domain();
  const auto cells = cells_in(domain, ball);
  const double mean = cells_average(b, cells);
  std::vector<double> shifted;
  for (std::size_t i : cells) shifted.push_back(b[i] - mean);
  double bound = orlicz_average(shifted, phi);
  const double inv1 = phi.inverse(1.0);
  for (int i = 1; i <= k; ++i) {
    const double a = ball_average(b, dilate(ball, std::ldexp(1.0, i)));
    const double c = ball_average(b, dilate(ball, std::ldexp(1.0, i - 1)));
    bound += std::abs(a - c) / inv1;
  }
  return bound;
}

JnFit fit_jn(const GridFunction& b, const GridFunction& rho, const YoungFunction& phi, const std::vector<Ball>& balls,
             int k_max, double constant_cap) {
  require(k_max >= 1, "fit_jn: k_max must be >= 1");
  const Domain& domain = b.domain();
  std::vector<std::vector<EnvelopeSample>> per_ball(balls.size());
  std::vector<std::size_t> excluded(balls.size(), 0);
  parallel_for(balls.size(), [&](std::size_t j) {
    for (int k = 1; k <= k_max; ++k) {
      const Ball big = dilate(balls[j], std::ldexp(1.0, k));
      if (is_clipped(domain, big)) {
        ++excluded[j];
        continue;
      }
      const double r = rho[domain.locate(balls[j].center)];
      per_ball[j].push_back({1.0 + big.radius / r, jn_ratio(b, balls[j], k, phi, rho, 0.0)});
    }
  });
  JnFit out;
  std::vector<EnvelopeSample> samples;
  for (std::size_t j = 0; j < balls.size(); ++j) {
    samples.insert(samples.end(), per_ball[j].begin(), per_ball[j].end());
    out.excluded += excluded[j];
  }
  out.evaluated = samples.size();
  out.fit = fit_envelope(samples, ExponentLattice{}, constant_cap);
  return out;
}

}  // namespace schrolab
