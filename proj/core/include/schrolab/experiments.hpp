#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "schrolab/geometry.hpp"
#include "schrolab/operators.hpp"

namespace schrolab {

enum class NormMethod { kExactP2, kNonlinearPower, kRandomRestart };

std::string to_string(NormMethod method);
NormMethod parse_norm_method(const std::string& text);

struct NormEstimate {
  std::string operator_id;
  std::string weight_id;
  double p = 2.0;
  NormMethod method = NormMethod::kExactP2;
  double value = 0.0;
  std::vector<double> trace;  // best estimate after each iteration
  bool flagged = false;       // trace still oscillating at the iteration cap
};

struct PowerIterationOptions {
  int starts = 8;
  int iterations = 200;
  int restarts = 64;
  std::uint64_t seed = 7;
};

/// ||T||_{L^p(w) -> L^p(w)} with vector values measured in the pointwise
/// Euclidean norm. exact-p2 is the largest singular value of
/// W^(1/2) T W^(-1/2); the other methods are lower bounds.
NormEstimate weighted_operator_norm(const BlockOperator& t, double p, const GridFunction& w, NormMethod method,
                                    const PowerIterationOptions& options = {}, const std::string& weight_id = "");

/// ||T f||_{L^p(w)} over ||f||_{L^p(w)} for one input (cell-major, components innermost).
double weighted_ratio(const BlockOperator& t, std::span<const double> f, double p, const GridFunction& w);

struct RefinementRow {
  int n = 0;
  double value = 0.0;
};

struct RefinementTable {
  std::vector<RefinementRow> rows;
  [[nodiscard]] double spread() const;  // max / min over rows
};

struct WeakRow {
  double lambda = 0.0;
  double lhs = 0.0;
  double lhs_inner = 0.0;  // level set restricted to the inner half-box
  double rhs = 0.0;
  double ratio = 0.0;
};

struct WeakTypeReport {
  std::vector<WeakRow> rows;
  double sup_ratio = 0.0;
  double sup_ratio_inner = 0.0;
  double scale = 0.0;  // max |T f|
};

/// Log-spaced lambdas over [lo, hi] * max|T f|.
WeakTypeReport weak_ratio_sweep(const BlockOperator& t, const GridFunction& f, const GridFunction& w,
                                std::size_t lambdas = 41, double lo = 1e-3, double hi = 1e3);

/// Integral of (|f|/lambda)(1 + log+(|f|/lambda)) w.
double llogl_functional(const GridFunction& f, const GridFunction& w, double lambda);

struct LaclaimValue {
  double lhs = 0.0;
  double rhs_base = 0.0;  // [b]^p |B|^(p/nu) w(B), without the lambda^M factor
};

/// LHS of the claim: sum over x in B of w(x) (sum over y in lambda B of
/// |b(x) - b(y)|^nu h^d)^(p/nu) h^d. B must be sub-critical.
LaclaimValue laclaim_terms(const GridFunction& b, const GridFunction& w, const GridFunction& rho, const Ball& ball,
                           double dilation, double p, double nu, double bmo_seminorm);
double laclaim_ratio(const GridFunction& b, const GridFunction& w, const GridFunction& rho, const Ball& ball,
                     double dilation, double p, double nu, double bmo_seminorm, double m_trial);

struct LaclaimFit {
  EnvelopeFit fit;  // exponent is M, base is the dilation
  std::size_t samples = 0;
  std::size_t skipped = 0;
};

LaclaimFit fit_laclaim(const GridFunction& b, const GridFunction& w, const GridFunction& rho,
                       const std::vector<Ball>& balls, const std::vector<double>& dilations, double p, double nu,
                       double bmo_seminorm, double constant_cap);

/// Riesz operators keyed by potential descriptor and grid, built on demand.
class OperatorCache {
 public:
  std::shared_ptr<const RieszOperator> get(const std::string& potential_key, const GridFunction& v);
  void clear() { cache_.clear(); }
  [[nodiscard]] std::size_t size() const { return cache_.size(); }

 private:
  std::map<std::string, std::shared_ptr<const RieszOperator>> cache_;
};

}  // namespace schrolab
