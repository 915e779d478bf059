#pragma once

#include <Eigen/Dense>

namespace schrolab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct SymmetricEigen {
  Vector values;  // ascending
  Matrix vectors;
};

/// Full eigendecomposition of a symmetric matrix (divide and conquer).
SymmetricEigen symmetric_eigen(const Matrix& a);

/// Largest eigenvalue of a symmetric matrix only.
double largest_eigenvalue(const Matrix& a);

/// Pins the BLAS backend to one thread so products are reproducible.
void use_single_threaded_blas();

}  // namespace schrolab
