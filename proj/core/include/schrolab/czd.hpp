#pragma once

#include <vector>

#include "schrolab/grid.hpp"

namespace schrolab {

/// Dyadic cube of the box: level 0 is the whole box, level log2(n) a cell.
struct DyadicCube {
  int level = 0;
  MultiIndex index{0, 0, 0};  // position among the 2^level cubes per axis
};

struct CZCube {
  DyadicCube cube;
  Point center{};
  double half_side = 0.0;
  double average = 0.0;  // mean of |f|
  double rho = 0.0;      // rho at the cube center
  bool sub_critical = false;  // r <= rho(center), the J1 family
};

struct CZCubes {
  double lambda = 0.0;
  double theta = 0.0;
  int start_level = 0;
  double r0 = 0.0;  // half-side of the starting cubes
  std::vector<CZCube> cubes;
  std::vector<int> owner;  // per cell: index into cubes or -1
  EnvelopeFit sigma_fit;   // avg <= C lambda (1 + r/rho)^sigma, sigma >= theta
};

/// Cells of a dyadic cube, ascending.
std::vector<std::size_t> dyadic_cells(const Domain& domain, const DyadicCube& cube);
Cube dyadic_region(const Domain& domain, const DyadicCube& cube);
/// rho at the cube center: mean of the 2^d cells around the center, or the
/// cell value for a single-cell cube.
double dyadic_rho(const GridFunction& rho, const DyadicCube& cube);
/// Selection predicate: mean |f| > lambda (1 + r/rho)^theta.
bool cz_selected(double average, double half_side, double rho, double lambda, double theta);

CZCubes decompose(const GridFunction& f, const GridFunction& rho, double lambda, double theta,
                  double sigma_cap = 0.0);

struct CZSplit {
  GridFunction g;
  GridFunction h;
  GridFunction h_prime;
  std::vector<char> omega1;  // cells in J1 cubes
  std::vector<char> omega2;  // cells in J2 cubes
};

CZSplit split(const GridFunction& f, const CZCubes& cubes);

/// Largest |f| / (lambda (1 + (h/2)/rho)^theta) over cells outside all cubes
/// (the grid-scale analog of |f| <= lambda off the cubes); <= 1 by construction.
double cz_outside_ratio(const GridFunction& f, const GridFunction& rho, const CZCubes& cubes);

}  // namespace schrolab
