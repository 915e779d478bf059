#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "schrolab/grid.hpp"

namespace schrolab {

/// Nonnegative potential with its declared reverse-Hölder exponent
/// (q may be kInf).
struct Potential {
  std::string name;
  int dim = 3;
  double q = kInf;
  PointRule rule;

  static Potential constant(int dim, double c);
  /// V = |x|^2.
  static Potential hermite(int dim);
  /// V = c |x|^a with a >= 0.
  static Potential power(int dim, double a, double c = 1.0);
  /// Piecewise constant lookup of a sampled table.
  static Potential table(const GridFunction& values, double q);

  [[nodiscard]] double operator()(const Point& x) const { return rule(x); }
  /// Samples at cell centers; throws if any value is negative.
  [[nodiscard]] GridFunction sample(const Domain& domain) const;
};

/// Product sample of centers times log-spaced radii.
struct BallSampleSpec {
  std::size_t centers = 200;
  std::size_t radii = 24;
  double r_min = 0.0;  // 0 means 2h
  double r_max = 0.0;  // 0 means M
  std::uint64_t seed = 1;
};

/// Centers are cell centers stratified over the row-major cell order: the
/// range [0, N) is split into `centers` equal chunks and one cell is drawn
/// uniformly inside each.
std::vector<std::size_t> stratified_cells(const Domain& domain, std::size_t count, Rng& rng);
std::vector<Ball> make_ball_sample(const Domain& domain, const BallSampleSpec& spec);

struct RHReport {
  double q = 0.0;
  double constant = 1.0;
  Ball witness;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  BallSampleSpec spec;
};

RHReport rh_constant(const GridFunction& v, double q, const BallSampleSpec& spec);

struct DoublingReport {
  double mu = 1.0;
  double constant = 1.0;
  double slope = 0.0;  // raw least-squares slope of log ratio against log t
  std::size_t violations = 0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  std::vector<double> dilations;
  BallSampleSpec spec;
};

/// Balls whose dilate leaves the box are skipped (the ratio would be
/// contaminated by clipping), as are balls carrying no mass.
DoublingReport doubling_exponent(const GridFunction& v, const std::vector<Ball>& balls,
                                 const std::vector<double>& dilations = {2.0, 4.0, 8.0});

struct RhoSolverOptions {
  double tol = 1e-3;
  int points_per_decade = 64;
  /// Balls with r >= kappa * h are integrated over grid cells; smaller ones
  /// over a local lattice refined by an odd factor m >= kappa * h / r.
  double kappa = 4.0;
  /// The scan starts at h / fine_floor.
  double fine_floor = 32.0;
};

struct RhoPoint {
  double rho = 0.0;
  bool below_scale = false;
  bool exceeds_box = false;
};

struct CriticalRadiusField {
  GridFunction rho;
  RhoSolverOptions options;
  std::size_t below_scale = 0;
  std::size_t exceeds_box = 0;
};

/// phi(r) = r^(2-d) * integral of V over B(x, r), using the cell/lattice rule
/// described in RhoSolverOptions. Exposed for tests.
double critical_phi(const Potential& v, const GridFunction& sampled, const Point& x, double r,
                    const RhoSolverOptions& options);

/// Critical radius at an arbitrary point of the box (sorts all cells by
/// distance; used as an independent route against the field solver).
RhoPoint critical_radius(const Potential& v, const GridFunction& sampled, const Point& x,
                         const RhoSolverOptions& options = {});
/// Field-route solver restricted to the listed cells.
std::vector<RhoPoint> critical_radius_cells(const Potential& v, const Domain& domain,
                                            const std::vector<std::size_t>& cells,
                                            const RhoSolverOptions& options = {});
CriticalRadiusField critical_radius_field(const Potential& v, const Domain& domain,
                                          const RhoSolverOptions& options = {});

struct PointPair {
  std::size_t x = 0;
  std::size_t y = 0;
};

std::vector<PointPair> sample_pairs(const Domain& domain, std::size_t count, Rng& rng);

struct RhoRegularityReport {
  bool fitted = false;
  double c0 = 1.0;
  double n0 = 1.0;
  std::size_t pairs = 0;
  std::size_t violations = 0;
  PointPair witness;
};

/// Largest ratio needed by either side of the regularity inequalities for a
/// single pair at exponent n0 (the minimal admissible c0 for that pair).
double rho_pair_requirement(double rho_x, double rho_y, double dist, double n0);
RhoRegularityReport fit_rho_regularity(const CriticalRadiusField& field, const std::vector<PointPair>& pairs,
                                       double c0_cap = 1024.0, double n0_max = 12.0);
std::size_t count_rho_violations(const CriticalRadiusField& field, const std::vector<PointPair>& pairs,
                                 double c0, double n0, PointPair* witness = nullptr);

struct CoveringOverlap {
  double sigma = 1.0;
  std::size_t max_overlap = 0;
};

struct CriticalCovering {
  std::vector<Ball> balls;
  std::vector<std::size_t> center_cells;
  std::vector<CoveringOverlap> overlaps;
  std::size_t uncovered = 0;
  double constant = 0.0;
  double n1 = 0.0;
  std::size_t violations = 0;
};

CriticalCovering build_critical_covering(const CriticalRadiusField& field,
                                         const std::vector<double>& sigmas = {1.0, 2.0, 4.0});
/// Number of dilated balls containing each cell center.
std::vector<std::size_t> overlap_counts(const Domain& domain, const std::vector<Ball>& balls, double sigma);

/// Empirical C2: integral of V(u)/|u-x|^(d-eps) over B(x, C1 r), excluding the
/// cell that contains x, divided by r^(eps-2) (r/rho)^(2-d/q).
double casilema_ratio(const GridFunction& v, double q, double rho_x, std::size_t x_cell, double r, double eps,
                      double c1);

}  // namespace schrolab
