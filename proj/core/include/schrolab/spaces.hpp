#pragma once

#include <span>
#include <vector>

#include "schrolab/geometry.hpp"

namespace schrolab {

class YoungFunction {
 public:
  enum class Kind { kPower, kExpMinusOne, kExpConjugate };

  static YoungFunction power(double s);
  /// e^t - 1.
  static YoungFunction exp_minus_one();
  /// Legendre conjugate of e^t - 1: t log t - t + 1 for t >= 1, else 0.
  static YoungFunction exp_conjugate();

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double exponent() const { return s_; }
  [[nodiscard]] double operator()(double t) const;
  /// Smallest t with phi(t) = y.
  [[nodiscard]] double inverse(double y) const;
  [[nodiscard]] YoungFunction conjugate() const;
  [[nodiscard]] std::string describe() const;

 private:
  YoungFunction(Kind kind, double s) : kind_(kind), s_(s) {}
  Kind kind_;
  double s_;
};

/// Luxemburg average over a list of values (one per in-region cell): the
/// smallest lambda with mean phi(|f| / lambda) <= 1.
double orlicz_average(std::span<const double> values, const YoungFunction& phi, double rel_tol = 1e-10);
double orlicz_average(const GridFunction& f, std::span<const std::size_t> cells, const YoungFunction& phi);

/// mean |fg| / (2 ||f||_phi ||g||_conj(phi)) over the cells; the Hölder
/// contract is ratio <= 1.
double holder_check(const GridFunction& f, const GridFunction& g, std::span<const std::size_t> cells,
                    const YoungFunction& phi);

struct BallOscillation {
  double oscillation = 0.0;
  std::size_t cells = 0;
  double rho = 0.0;  // rho at the ball center
};

/// Mean oscillation of b on each ball; balls with fewer than min_cells
/// in-region cells are marked with cells < min_cells and ignored downstream.
std::vector<BallOscillation> ball_oscillations(const GridFunction& b, const GridFunction& rho,
                                               const std::vector<Ball>& balls);

struct BmoReport {
  double theta = 0.0;
  double seminorm = 0.0;
  Ball witness;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  BallSampleSpec spec;
};

inline constexpr std::size_t kMinOscillationCells = 8;

BmoReport bmo_from_oscillations(const std::vector<Ball>& balls, const std::vector<BallOscillation>& osc,
                                double theta);
BmoReport bmo_theta_seminorm(const GridFunction& b, const GridFunction& rho, double theta,
                             const BallSampleSpec& spec);

/// ||b - b_{2^k B}||_{phi, B} / (k (1 + 2^k r / rho(x))^theta_trial).
/// The dilate 2^k B must lie inside the box.
double jn_ratio(const GridFunction& b, const Ball& ball, int k, const YoungFunction& phi, const GridFunction& rho,
                double theta_trial);
/// Term-by-term triangle bound on the JN numerator.
double jn_triangle_bound(const GridFunction& b, const Ball& ball, int k, const YoungFunction& phi);

struct JnFit {
  EnvelopeFit fit;
  std::size_t evaluated = 0;
  std::size_t excluded = 0;
};

/// Fits (C, theta') with numerator / k <= C (1 + 2^k r / rho)^theta' over the
/// sampled balls and k = 1..k_max whose dilates stay in the box.
JnFit fit_jn(const GridFunction& b, const GridFunction& rho, const YoungFunction& phi, const std::vector<Ball>& balls,
             int k_max, double constant_cap);

}  // namespace schrolab
