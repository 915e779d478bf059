#include "schrolab/linalg.hpp"

#include <lapacke.h>

#include <mutex>
#include <vector>

#include "schrolab/common.hpp"

extern "C" void openblas_set_num_threads(int);

namespace schrolab {

void use_single_threaded_blas() {
  static std::once_flag once;
  std::call_once(once, [] { openblas_set_num_threads(1); });
}

SymmetricEigen symmetric_eigen(const Matrix& a) {
  require(a.rows() == a.cols(), "symmetric_eigen: matrix must be square");
  use_single_threaded_blas();
  const auto n = static_cast<lapack_int>(a.rows());
  SymmetricEigen out;
  out.vectors = a;
  out.values.resize(n);
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, out.vectors.data(), n, out.values.data());
  ensure(info == 0, "symmetric_eigen: LAPACK dsyevd failed with info " + std::to_string(info));
  return out;
}

double largest_eigenvalue(const Matrix& a) {
  require(a.rows() == a.cols(), "largest_eigenvalue: matrix must be square");
  use_single_threaded_blas();
  const auto n = static_cast<lapack_int>(a.rows());
  if (n == 0) return 0.0;
  Matrix work = a;
  lapack_int found = 0;
  // dsyevr may use all of w as workspace even when one value is requested.
  std::vector<double> w(static_cast<std::size_t>(n));
  double z = 0.0;
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'N', 'I', 'L', n, work.data(), n, 0.0, 0.0, n, n, 0.0,
                                         &found, w.data(), &z, 1, support.data());
  ensure(info == 0 && found == 1, "largest_eigenvalue: LAPACK dsyevr failed with info " + std::to_string(info));
  return w[0];
}

}  // namespace schrolab
