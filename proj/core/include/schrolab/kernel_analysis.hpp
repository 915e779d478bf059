#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "schrolab/geometry.hpp"
#include "schrolab/operators.hpp"

namespace schrolab {

struct KernelBoundReport {
  std::string bound;  // kes, kesdif, kesyclas, hormander, annulus
  std::map<std::string, double> params;
  double constant = 0.0;
  std::array<std::size_t, 3> witness{0, 0, 0};
  std::size_t samples = 0;
  std::size_t excluded = 0;
};

/// Cells whose centers lie in the inner half-box [-M/2, M/2]^d.
std::vector<std::size_t> inner_cells(const Domain& domain);

/// |K*(x, y)| = |(K_1(y, x), ..., K_d(y, x))|.
double adjoint_kernel_norm(const RieszOperator& r, std::size_t x, std::size_t y);

/// Integral of V(u) / |u - y|^(d-1) over B(y, radius), midpoint rule without
/// the cell containing y.
double potential_bracket(const GridFunction& v, std::size_t y, double radius);

struct KernelCheckOptions {
  double q = kInf;       // reverse-Hölder exponent used in the brackets
  bool drop_v_term = false;
  bool rho_at_second = false;  // use rho(y) (or rho(z)) instead of rho(x)
};

/// Pairs (x, y) from the inner half-box with |x - y| >= min_sep.
std::vector<PointPair> kernel_pairs(const Domain& domain, std::size_t count, double min_sep, Rng& rng);

KernelBoundReport decay_constant(const RieszOperator& r, const GridFunction& rho, double n_exp,
                                 const std::vector<PointPair>& pairs, const KernelCheckOptions& opt);

struct Triple {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t z = 0;
};

/// Triples from the inner half-box with |x - z| >= 4h and |x - y| < 2|x - z| / 3.
std::vector<Triple> kernel_triples(const Domain& domain, std::size_t count, Rng& rng);

KernelBoundReport smoothness_constant(const RieszOperator& r, const GridFunction& rho, double n_exp, double delta,
                                      const std::vector<Triple>& triples, const KernelCheckOptions& opt);

/// Compares K* with the kernel of the V = 0 operator on the same grid over
/// pairs with 2h <= |x - z| <= rho(x).
KernelBoundReport classical_gap(const RieszOperator& r, const RieszOperator& classical, const GridFunction& rho,
                                const std::vector<PointPair>& pairs, const KernelCheckOptions& opt);

/// s with 1/s = 1/q - 1/d; requires d/2 < q < d.
double hormander_exponent(double q, int d);

struct HormanderSums {
  std::vector<double> terms;
  std::vector<double> partial;
  int k_max = 0;
};

/// Partial sums over annuli 2^k r <= |x - x0| < 2^(k+1) r, k = 1..k_max, where
/// k_max is the last annulus with in-box cells (or the caller's cap if smaller).
HormanderSums hormander_partial_sums(const RieszOperator& r, const GridFunction& rho, std::size_t x0, std::size_t y,
                                     double radius, double theta, double s, int k_cap = 64);

struct AnnulusValue {
  double ratio = 0.0;
  double clipped_fraction = 0.0;
  bool excluded = false;
};

/// Ratio of the L^s norm of K(., y) on B(z, 2^k r) minus B(z, 2^(k-1) r) to
/// (2^k r)^(-1-d/q') (rho(z) / 2^k r)^(N - mu d). Samples with more than half
/// of the annulus outside the box are marked excluded.
AnnulusValue annulus_ls(const RieszOperator& r, const GridFunction& rho, std::size_t z, double radius, std::size_t y,
                        int k, double s, double n_exp, double mu, double q);

}  // namespace schrolab
