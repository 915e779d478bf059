#include "schrolab/report_json.hpp"

namespace schrolab {

Json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json serialize(const Domain& domain) {
  return Json{{"d", domain.dim()},
              {"M", domain.half_width()},
              {"n", domain.cells_per_axis()},
              {"h", domain.spacing()}};
}

Json serialize(const Point& p, int dim) {
  Json out = Json::array();
  for (int a = 0; a < dim; ++a) out.push_back(p[a]);
  return out;
}

Json serialize(const Ball& ball, int dim) {
  return Json{{"center", serialize(ball.center, dim)}, {"radius", ball.radius}};
}

Json serialize(const EnvelopeFit& fit) {
  return Json{{"feasible", fit.feasible},
              {"exponent", fit.exponent},
              {"constant", json_number(fit.constant)},
              {"samples", fit.samples},
              {"witness", fit.witness}};
}

Json serialize(const BallSampleSpec& spec) {
  return Json{{"centers", spec.centers},
              {"radii", spec.radii},
              {"r_min", spec.r_min},
              {"r_max", spec.r_max},
              {"seed", spec.seed}};
}

Json serialize(const GridFunction& f, std::size_t max_values) {
  require(f.size() <= max_values, "json export: field too large (" + std::to_string(f.size()) + " values)");
  Json values = Json::array();
  for (double v : f.values()) values.push_back(json_number(v));
  return Json{{"domain", serialize(f.domain())}, {"components", f.components()}, {"values", values}};
}

Json serialize(const RHReport& r, int dim) {
  return Json{{"q", json_number(r.q)},
              {"constant", json_number(r.constant)},
              {"witness", serialize(r.witness, dim)},
              {"evaluated", r.evaluated},
              {"skipped", r.skipped},
              {"sample", serialize(r.spec)}};
}

Json serialize(const DoublingReport& r) {
  return Json{{"mu", r.mu},
              {"constant", json_number(r.constant)},
              {"slope", r.slope},
              {"violations", r.violations},
              {"evaluated", r.evaluated},
              {"skipped", r.skipped},
              {"dilations", r.dilations},
              {"sample", serialize(r.spec)}};
}

Json serialize_summary(const CriticalRadiusField& field) {
  return Json{{"min", field.rho.min()},
              {"max", field.rho.max()},
              {"below_scale", field.below_scale},
              {"exceeds_box", field.exceeds_box},
              {"tol", field.options.tol},
              {"points_per_decade", field.options.points_per_decade},
              {"kappa", field.options.kappa}};
}

Json serialize(const RhoRegularityReport& r) {
  return Json{{"fitted", r.fitted},
              {"c0", json_number(r.c0)},
              {"N0", r.n0},
              {"pairs", r.pairs},
              {"violations", r.violations},
              {"witness", Json::array({r.witness.x, r.witness.y})}};
}

Json serialize(const CriticalCovering& c, int dim) {
  Json balls = Json::array();
  for (const auto& b : c.balls) balls.push_back(serialize(b, dim));
  Json overlaps = Json::array();
  for (const auto& o : c.overlaps) overlaps.push_back(Json{{"sigma", o.sigma}, {"max_overlap", o.max_overlap}});
  return Json{{"count", c.balls.size()},
              {"uncovered", c.uncovered},
              {"overlaps", overlaps},
              {"constant", json_number(c.constant)},
              {"N1", c.n1},
              {"violations", c.violations},
              {"balls", balls}};
}

Json serialize(const BmoReport& r, int dim) {
  return Json{{"theta", r.theta},
              {"seminorm", json_number(r.seminorm)},
              {"witness", serialize(r.witness, dim)},
              {"evaluated", r.evaluated},
              {"skipped", r.skipped},
              {"sample", serialize(r.spec)}};
}

Json serialize(const JnFit& r) {
  return Json{{"fit", serialize(r.fit)}, {"evaluated", r.evaluated}, {"excluded", r.excluded}};
}

Json serialize(const ApReport& r, int dim) {
  return Json{{"p", json_number(r.p)},
              {"theta", r.theta},
              {"mode", to_string(r.mode)},
              {"constant", json_number(r.constant)},
              {"witness", serialize(r.witness, dim)},
              {"evaluated", r.evaluated},
              {"skipped", r.skipped},
              {"sample", serialize(r.spec)}};
}

Json serialize(const OpennessScan& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"epsilon", row.epsilon}, {"constant", json_number(row.constant)}, {"admissible", row.admissible}});
  }
  return Json{{"largest_epsilon", r.largest_epsilon}, {"rows", rows}};
}

Json serialize(const PowerCheck& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"nu", row.nu},
                        {"admissible", row.admissible},
                        {"theta", row.theta},
                        {"constant", json_number(row.constant)}});
  }
  return Json{{"largest_nu", r.largest_nu}, {"rows", rows}};
}

Json serialize(const KernelBoundReport& r) {
  Json params = Json::object();
  for (const auto& [k, v] : r.params) params[k] = json_number(v);
  return Json{{"bound", r.bound},
              {"params", params},
              {"constant", json_number(r.constant)},
              {"witness", Json::array({r.witness[0], r.witness[1], r.witness[2]})},
              {"samples", r.samples},
              {"excluded", r.excluded}};
}

Json serialize(const HormanderSums& r) {
  Json terms = Json::array();
  Json partial = Json::array();
  for (double t : r.terms) terms.push_back(json_number(t));
  for (double t : r.partial) partial.push_back(json_number(t));
  return Json{{"k_max", r.k_max}, {"terms", terms}, {"partial", partial}};
}

Json serialize(const CZCubes& c, int dim) {
  Json cubes = Json::array();
  for (const auto& cube : c.cubes) {
    cubes.push_back(Json{{"level", cube.cube.level},
                         {"center", serialize(cube.center, dim)},
                         {"half_side", cube.half_side},
                         {"average", cube.average},
                         {"rho", cube.rho},
                         {"family", cube.sub_critical ? "J1" : "J2"}});
  }
  return Json{{"lambda", c.lambda},
              {"theta", c.theta},
              {"start_level", c.start_level},
              {"r0", c.r0},
              {"sigma_fit", serialize(c.sigma_fit)},
              {"cubes", cubes}};
}

Json serialize(const NormEstimate& e, bool with_trace) {
  Json out{{"operator", e.operator_id},
           {"weight", e.weight_id},
           {"p", e.p},
           {"method", to_string(e.method)},
           {"value", json_number(e.value)},
           {"flagged", e.flagged}};
  if (with_trace) out["trace"] = e.trace;
  return out;
}

Json serialize(const RefinementTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) rows.push_back(Json{{"n", r.n}, {"value", json_number(r.value)}});
  return Json{{"rows", rows}, {"spread", json_number(t.rows.empty() ? 0.0 : t.spread())}};
}

Json serialize(const WeakTypeReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"lambda", row.lambda},
                        {"lhs", row.lhs},
                        {"lhs_inner", row.lhs_inner},
                        {"rhs", row.rhs},
                        {"ratio", row.ratio}});
  }
  return Json{{"scale", r.scale},
              {"sup_ratio", r.sup_ratio},
              {"sup_ratio_inner", r.sup_ratio_inner},
              {"rows", rows}};
}

Json serialize(const LaclaimFit& r) {
  return Json{{"fit", serialize(r.fit)},
              {"samples", r.samples},
              {"skipped", r.skipped}};
}

}  // namespace schrolab
