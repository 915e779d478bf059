#include "presets.hpp"

namespace schrolab::cli {

Domain domain_from(const Json& config) { return domain_from(config, get_int(config, "domain.n")); }

Domain domain_from(const Json& config, int n) {
  return Domain(get_int(config, "domain.d"), get_double(config, "domain.M"), n);
}

RhoSolverOptions rho_options_from(const Json& config) {
  RhoSolverOptions opt;
  opt.tol = get_double(config, "rho.tol");
  opt.points_per_decade = get_int(config, "rho.points_per_decade");
  opt.kappa = get_double(config, "rho.kappa");
  return opt;
}

BallSampleSpec sample_spec_from(const Json& config) {
  BallSampleSpec spec;
  const int centers = get_int(config, "sample.centers");
  const int radii = get_int(config, "sample.radii");
  require(centers > 0 && radii > 0, "sample: centers and radii must be positive");
  spec.centers = static_cast<std::size_t>(centers);
  spec.radii = static_cast<std::size_t>(radii);
  spec.r_min = get_double(config, "sample.r_min");
  spec.r_max = get_double(config, "sample.r_max");
  spec.seed = static_cast<std::uint64_t>(get_int(config, "sample.seed"));
  return spec;
}

Point point_from(const Json& config, const std::string& path, int dim) {
  const auto v = get_doubles(config, path);
  require(static_cast<int>(v.size()) >= dim, "config: '" + path + "' needs " + std::to_string(dim) + " coordinates");
  Point p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) p[a] = v[a];
  return p;
}

Potential potential_from(const Json& config, const Domain& domain) {
  const std::string preset = get_string(config, "potential.preset");
  const int d = domain.dim();
  Potential v;
  if (preset == "constant") {
    v = Potential::constant(d, get_double(config, "potential.c"));
  } else if (preset == "hermite") {
    v = Potential::hermite(d);
  } else if (preset == "power") {
    v = Potential::power(d, get_double(config, "potential.a"), get_double(config, "potential.c"));
  } else if (preset == "table") {
    const double q = get_double(config, "potential.q");
    require(q > 0.0, "potential: table preset needs potential.q");
    v = Potential::table(read_binary_file(get_string(config, "potential.path"), domain), q);
  } else {
    throw PreconditionError("potential: unknown preset '" + preset + "'");
  }
  return v;
}

double potential_q(const Json& config, const Potential& v) {
  const double q = get_double(config, "potential.q");
  return q > 0.0 ? q : v.q;
}

CriticalRadiusField rho_from(const Json& config, const Potential& v, const Domain& domain) {
  const double fixed = get_double(config, "rho.fixed");
  if (fixed > 0.0) {
    CriticalRadiusField field;
    field.rho = GridFunction::constant(domain, fixed);
    field.options = rho_options_from(config);
    return field;
  }
  return critical_radius_field(v, domain, rho_options_from(config));
}

GridFunction symbol_from(const Json& config, const Domain& domain) {
  const std::string preset = get_string(config, "symbol.preset");
  const int axis = get_int(config, "symbol.axis");
  const double c = get_double(config, "symbol.c");
  const int d = domain.dim();
  require(axis >= 0 && axis < d, "symbol: axis out of range");
  if (preset == "constant") return GridFunction::constant(domain, c);
  if (preset == "coordinate") return sample(domain, [=](const Point& x) { return c * x[axis]; });
  if (preset == "abs_coordinate") return sample(domain, [=](const Point& x) { return c * std::abs(x[axis]); });
  if (preset == "square_coordinate") return sample(domain, [=](const Point& x) { return c * x[axis] * x[axis]; });
  if (preset == "norm") return sample(domain, [=](const Point& x) { return c * norm(x, d); });
  if (preset == "table") return read_binary_file(get_string(config, "symbol.path"), domain);
  throw PreconditionError("symbol: unknown preset '" + preset + "'");
}

bool symbol_is_constant(const Json& config) { return get_string(config, "symbol.preset") == "constant"; }

namespace {

GridFunction a1_source(const Json& config, const Domain& domain) {
  const std::string source = get_string(config, "weight.source");
  const int d = domain.dim();
  if (source == "spike") {
    std::vector<double> g(domain.size(), 0.0);
    g[domain.locate(Point{0.0, 0.0, 0.0})] = 1.0 / domain.cell_volume();
    return GridFunction(domain, std::move(g));
  }
  if (source == "gaussian") {
    return sample(domain, [=](const Point& x) { return std::exp(-norm(x, d) * norm(x, d)); });
  }
  if (source == "random") {
    Rng rng(static_cast<std::uint64_t>(get_int(config, "input.seed")));
    std::vector<double> g(domain.size());
    for (auto& x : g) x = std::abs(rng.normal());
    return GridFunction(domain, std::move(g));
  }
  throw PreconditionError("weight: unknown a1 source '" + source + "'");
}

}  // namespace

WeightBuild weight_from(const Json& config, const Domain& domain, const GridFunction& rho) {
  const std::string preset = get_string(config, "weight.preset");
  const double a = get_double(config, "weight.a");
  const int d = domain.dim();
  WeightBuild out;
  out.id = preset;
  if (preset == "one") {
    out.weight = GridFunction::constant(domain, 1.0);
  } else if (preset == "bracket_power") {
    out.weight = sample(domain, [=](const Point& x) { return std::pow(1.0 + norm(x, d), a); });
    out.id += "(" + Json(a).dump() + ")";
  } else if (preset == "power") {
    out.weight = sample(domain, [=](const Point& x) { return std::pow(norm(x, d), a); });
    out.id += "(" + Json(a).dump() + ")";
  } else if (preset == "a1") {
    const double theta = get_double(config, "weight.theta");
    const double delta = get_double(config, "weight.delta");
    out.construction = build_a1_weight(a1_source(config, domain), rho, theta, delta,
                                       make_ball_sample(domain, sample_spec_from(config)));
    out.weight = out.construction.weight;
    out.built = true;
    out.id += "(" + get_string(config, "weight.source") + "," + Json(theta).dump() + "," + Json(delta).dump() + ")";
  } else if (preset == "table") {
    out.weight = read_binary_file(get_string(config, "weight.path"), domain);
  } else {
    throw PreconditionError("weight: unknown preset '" + preset + "'");
  }
  require(out.weight.min() > 0.0, "weight: must be positive at every cell");
  return out;
}

GridFunction input_from(const Json& config, const Domain& domain, std::uint64_t seed) {
  const std::string preset = get_string(config, "input.preset");
  const double amp = get_double(config, "input.amplitude");
  const int d = domain.dim();
  const Point at = point_from(config, "input.at", d);
  Rng rng(seed);
  std::vector<double> f(domain.size(), 0.0);
  if (preset == "random") {
    for (auto& x : f) x = amp * rng.normal();
  } else if (preset == "spike") {
    f[domain.locate(at)] = amp / domain.cell_volume();
  } else if (preset == "random_spike") {
    // A physical point in the inner half-box, so the same seed marks the
    // same location at every resolution.
    Point x{0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a) x[a] = rng.uniform(-0.5, 0.5) * domain.half_width();
    f[domain.locate(x)] = amp / domain.cell_volume();
  } else if (preset == "random_gaussian") {
    // Bump of random center in the inner half-box, width in [1, 2] * input.width
    // and random sign; resolution independent for a fixed seed.
    Point c{0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a) c[a] = rng.uniform(-0.5, 0.5) * domain.half_width();
    const double w = get_double(config, "input.width") * rng.uniform(1.0, 2.0);
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    require(w > 0.0, "input: width must be positive");
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double r = distance(domain.center(i), c, d) / w;
      f[i] = sign * amp * std::exp(-r * r);
    }
  } else if (preset == "gaussian") {
    const double w = get_double(config, "input.width");
    require(w > 0.0, "input: width must be positive");
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double r = distance(domain.center(i), at, d) / w;
      f[i] = amp * std::exp(-r * r);
    }
  } else if (preset == "constant") {
    std::fill(f.begin(), f.end(), amp);
  } else {
    throw PreconditionError("input: unknown preset '" + preset + "'");
  }
  return GridFunction(domain, std::move(f));
}

}  // namespace schrolab::cli
