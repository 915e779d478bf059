#pragma once

#include <string>
#include <vector>

#include "schrolab/geometry.hpp"

namespace schrolab {

enum class RegionMode { kAllBalls, kSubCritical, kCubes };

std::string to_string(RegionMode mode);

struct ApReport {
  double p = 2.0;
  double theta = 0.0;
  double constant = 1.0;
  Ball witness;  // for cubes mode the radius is the half-side
  RegionMode mode = RegionMode::kAllBalls;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  BallSampleSpec spec;
};

/// Raw A_p ratio per region before the (1 + r/rho)^theta damping; +inf when
/// w^(-1/(p-1)) overflows. Regions given as balls; in cubes mode each ball is
/// read as the cube of the same center and half-side.
struct ApRatio {
  double raw = 0.0;
  double rho = 0.0;
  bool used = false;
};

std::vector<ApRatio> ap_ratios(const GridFunction& w, double p, RegionMode mode, const GridFunction& rho,
                               const std::vector<Ball>& regions);
ApReport ap_from_ratios(const std::vector<Ball>& regions, const std::vector<ApRatio>& ratios, double p,
                        double theta, RegionMode mode);
ApReport ap_constant(const GridFunction& w, double p, double theta, RegionMode mode, const GridFunction& rho,
                     const BallSampleSpec& spec);

/// Per-cell averages of |f| over the centered balls of the M^theta radius
/// grid, so M^theta can be evaluated for many theta without new sweeps.
class MaximalProfile {
 public:
  MaximalProfile(const GridFunction& f, const GridFunction& rho);
  [[nodiscard]] GridFunction evaluate(double theta) const;
  [[nodiscard]] const std::vector<double>& radii() const { return radii_; }

 private:
  Domain domain_;
  std::vector<double> radii_;
  std::vector<double> abs_f_;
  std::vector<double> rho_;
  // averages_[cell * radii + k]; NaN marks radii beyond the point where the
  // ball already contains the whole box.
  std::vector<double> averages_;
};

GridFunction m_theta(const GridFunction& f, const GridFunction& rho, double theta);

/// Lebesgue measure (cell count times h^d) of {g > lambda}.
double level_set_measure(const GridFunction& g, double lambda);

struct A1Construction {
  GridFunction weight;
  double theta = 0.0;
  double delta = 0.5;
  EnvelopeFit beta_fit;  // exponent is beta
};

/// avg_B u / inf_B u paired with 1 + r/rho(x) for each ball (for the beta fit).
std::vector<EnvelopeSample> a1_samples(const GridFunction& u, const GridFunction& rho, const std::vector<Ball>& balls);

A1Construction build_a1_weight(const GridFunction& g, const GridFunction& rho, double theta, double delta,
                               const std::vector<Ball>& balls, double constant_cap = 8.0);

struct PointwiseFit {
  bool feasible = false;
  double theta = 0.0;
  double constant = 0.0;
};

/// Smallest theta on the lattice with max_x M^theta u(x) / u(x) <= cap.
PointwiseFit fit_maximal_domination(const GridFunction& u, const GridFunction& rho, const ExponentLattice& lattice,
                                    double constant_cap);

struct OpennessRow {
  double epsilon = 0.0;
  double constant = 0.0;
  bool admissible = false;
};

struct OpennessScan {
  std::vector<OpennessRow> rows;
  double largest_epsilon = 0.0;  // 0 when nothing admissible
};

OpennessScan openness_scan(const GridFunction& w, double p, double theta, RegionMode mode, const GridFunction& rho,
                           const std::vector<double>& eps_grid, double threshold, const std::vector<Ball>& regions);

struct PowerRow {
  double nu = 1.0;
  bool admissible = false;
  double theta = 0.0;
  double constant = 0.0;
};

struct PowerCheck {
  std::vector<PowerRow> rows;
  double largest_nu = 0.0;
};

PowerCheck a1_power_check(const GridFunction& u, const GridFunction& rho, const std::vector<double>& nu_grid,
                          const std::vector<double>& theta_grid, double threshold, const std::vector<Ball>& regions);

}  // namespace schrolab
