#pragma once

#include <memory>
#include <string>
#include <vector>

#include "schrolab/grid.hpp"
#include "schrolab/linalg.hpp"

namespace schrolab {

/// Dense matrix over cells.
struct DiscreteOperator {
  Domain domain;
  Matrix matrix;
  bool symmetric = false;
};

/// -Delta_h + diag(V) with the (2d+1)-point Dirichlet stencil.
DiscreteOperator assemble_schrodinger(const GridFunction& v);

struct SpectralFactorization {
  Vector eigenvalues;
  Matrix eigenvectors;
};

SpectralFactorization factorize(const DiscreteOperator& op);

/// Staggered forward difference along `axis`: (n + 1) faces per line, ghost
/// values 0. Returns the face values, line-major in the same order as cells
/// with the axis index running over 0..n.
std::vector<double> face_gradient(const Domain& domain, int axis, std::span<const double> f);
std::size_t face_count(const Domain& domain);

/// Schrödinger-Riesz transforms. The underlying staggered gradient D_j makes
/// sum_j D_j^T D_j = -Delta_h exact; the stored components are collocated at
/// cell centers, R_j = A_j D_j L^(-1/2) with A_j the average of the two
/// faces of each cell, i.e. the central difference (f_{i+1} - f_{i-1}) / 2h.
class RieszOperator {
 public:
  RieszOperator(const GridFunction& v, const SpectralFactorization& spectrum);

  [[nodiscard]] const Domain& domain() const { return domain_; }
  [[nodiscard]] int components() const { return domain_.dim(); }
  [[nodiscard]] const Matrix& component(int j) const { return components_[j]; }
  [[nodiscard]] const Matrix& inverse_sqrt() const { return inv_sqrt_; }
  [[nodiscard]] const GridFunction& potential() const { return v_; }
  [[nodiscard]] double min_eigenvalue() const { return min_eigenvalue_; }
  [[nodiscard]] double max_abs_entry() const;

  struct Energy {
    double gradient = 0.0;   // sum_j ||D_j L^(-1/2) f||^2 with staggered faces
    double potential = 0.0;  // ||V^(1/2) L^(-1/2) f||^2
    double input = 0.0;      // ||f||^2
  };
  [[nodiscard]] Energy energy(std::span<const double> f) const;

  /// Collocated components applied to f, cell-major with components innermost.
  [[nodiscard]] std::vector<double> apply(std::span<const double> f) const;
  /// sum_j R_j^T g_j for g cell-major with components innermost.
  [[nodiscard]] std::vector<double> apply_adjoint(std::span<const double> g) const;

 private:
  Domain domain_;
  GridFunction v_;
  Matrix inv_sqrt_;
  std::vector<Matrix> components_;
  double min_eigenvalue_ = 0.0;
};

/// Builds L, factorizes, and forms the transforms.
std::shared_ptr<const RieszOperator> build_riesz(const GridFunction& v);

/// Dense operator between (possibly vector-valued) grid functions:
/// blocks[out][in] are cell-by-cell matrices.
struct BlockOperator {
  std::string id;
  Domain domain;
  int out_components = 1;
  int in_components = 1;
  std::vector<Matrix> blocks;  // row-major over (out, in)

  [[nodiscard]] const Matrix& block(int out, int in) const { return blocks[out * in_components + in]; }
  [[nodiscard]] Matrix& block(int out, int in) { return blocks[out * in_components + in]; }
  [[nodiscard]] std::size_t cells() const { return domain.size(); }
  /// Applies to f given cell-major with in_components innermost.
  [[nodiscard]] std::vector<double> apply(std::span<const double> f) const;
  [[nodiscard]] double max_abs_entry() const;
};

BlockOperator identity_operator(const Domain& domain);
/// Vector operator f -> (R_1 f, ..., R_d f).
BlockOperator riesz_block(const RieszOperator& r);
/// Adjoint g -> sum_j R_j^T g_j.
BlockOperator riesz_adjoint_block(const RieszOperator& r);

/// T_{b,j}(i, m) = R_j(i, m) (b_m - b_i), i.e. R_j diag(b) - diag(b) R_j.
Matrix commutator_component(const Matrix& r, const GridFunction& b);
/// (R_b)_j stacked as a d x 1 block operator.
BlockOperator commutator(const RieszOperator& r, const GridFunction& b);
/// (R*)_b g = R*(b g) - b R* g; equals minus the transpose of R_b.
BlockOperator adjoint_commutator(const RieszOperator& r, const GridFunction& b);

/// K_j(x_i, y_m) = R_j(i, m) / h^d.
Matrix kernel_matrix(const RieszOperator& r, int j);

struct LocGlobSplit {
  Matrix local;
  Matrix global;
};

/// local(i, m) = T(i, m) when |x_i - y_m| < rho(x_i), else 0; global = T - local.
LocGlobSplit loc_glob_split(const Matrix& t, const GridFunction& rho);
BlockOperator restrict_block(const BlockOperator& t, const GridFunction& rho, bool local);

}  // namespace schrolab
