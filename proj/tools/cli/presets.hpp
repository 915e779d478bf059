#pragma once

#include <string>

#include "config.hpp"

namespace schrolab::cli {

Domain domain_from(const Json& config);
Domain domain_from(const Json& config, int n);
RhoSolverOptions rho_options_from(const Json& config);
BallSampleSpec sample_spec_from(const Json& config);
Point point_from(const Json& config, const std::string& path, int dim);

/// potential.preset: constant | hermite | power | table.
Potential potential_from(const Json& config, const Domain& domain);
/// Reverse-Hölder exponent of the potential: potential.q when positive,
/// otherwise the preset's own value.
double potential_q(const Json& config, const Potential& v);

/// Critical radius: the computed field, or rho.fixed when positive.
CriticalRadiusField rho_from(const Json& config, const Potential& v, const Domain& domain);

/// symbol.preset: constant | coordinate | abs_coordinate | square_coordinate | norm | table.
GridFunction symbol_from(const Json& config, const Domain& domain);
bool symbol_is_constant(const Json& config);

/// weight.preset: one | bracket_power | power | a1 | table. The a1 preset is
/// (M^theta g)^delta with g chosen by weight.source (spike | gaussian | random).
struct WeightBuild {
  GridFunction weight;
  std::string id;
  bool built = false;
  A1Construction construction;
};
WeightBuild weight_from(const Json& config, const Domain& domain, const GridFunction& rho);

/// input.preset: random | spike | random_spike | gaussian | random_gaussian | constant. Spikes carry
/// mass amplitude on one cell.
GridFunction input_from(const Json& config, const Domain& domain, std::uint64_t seed);

}  // namespace schrolab::cli
