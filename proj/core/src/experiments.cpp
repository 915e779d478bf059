#include "schrolab/experiments.hpp"

#include <algorithm>

#include "schrolab/kernel_analysis.hpp"

namespace schrolab {

std::string to_string(NormMethod method) {
  switch (method) {
    case NormMethod::kExactP2: return "exact-p2";
    case NormMethod::kNonlinearPower: return "nonlinear-power";
    case NormMethod::kRandomRestart: return "random-restart";
  }
  return "";
}

NormMethod parse_norm_method(const std::string& text) {
  if (text == "exact-p2") return NormMethod::kExactP2;
  if (text == "nonlinear-power") return NormMethod::kNonlinearPower;
  if (text == "random-restart") return NormMethod::kRandomRestart;
  throw PreconditionError("unknown norm method: " + text);
}

namespace {

// Blocks of W^(1/p) T W^(-1/p): entry (r, c) scaled by (w_r / w_c)^(1/p).
std::vector<Matrix> conjugated_blocks(const BlockOperator& t, const GridFunction& w, double p) {
  require(w.size() == t.cells(), "operator norm: weight size mismatch");
  require(w.min() > 0.0, "operator norm: weight must be positive");
  const auto n = static_cast<Eigen::Index>(t.cells());
  bool unit = true;
  for (double v : w.values()) unit = unit && v == 1.0;
  if (unit) return t.blocks;
  const double e = 1.0 / p;
  Vector left(n);
  Vector right(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double wi = w[static_cast<std::size_t>(i)];
    left(i) = std::pow(wi, e);
    right(i) = std::pow(wi, -e);
  }
  std::vector<Matrix> out;
  out.reserve(t.blocks.size());
  for (const auto& b : t.blocks) out.push_back(left.asDiagonal() * b * right.asDiagonal());
  return out;
}

// Per-column mixed l^p norm of stacked components (cells x starts each).
Vector mixed_norms(const std::vector<Matrix>& comps, double p) {
  const Eigen::Index n = comps[0].rows();
  const Eigen::Index s = comps[0].cols();
  Vector out(s);
  for (Eigen::Index c = 0; c < s; ++c) {
    CompensatedSum acc;
    for (Eigen::Index i = 0; i < n; ++i) {
      double m2 = 0.0;
      for (const auto& x : comps) m2 += x(i, c) * x(i, c);
      acc.add(std::pow(m2, p / 2.0));
    }
    out(c) = std::pow(acc.value(), 1.0 / p);
  }
  return out;
}

// x -> |x|^(p-2) x cellwise (Euclidean over components).
void duality_map(std::vector<Matrix>& comps, double p) {
  const Eigen::Index n = comps[0].rows();
  const Eigen::Index s = comps[0].cols();
  for (Eigen::Index c = 0; c < s; ++c) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double m2 = 0.0;
      for (const auto& x : comps) m2 += x(i, c) * x(i, c);
      const double f = m2 > 0.0 ? std::pow(m2, (p - 2.0) / 2.0) : 0.0;
      for (auto& x : comps) x(i, c) *= f;
    }
  }
}

std::vector<Matrix> forward(const std::vector<Matrix>& a, int outs, int ins, const std::vector<Matrix>& x) {
  std::vector<Matrix> u(outs, Matrix::Zero(x[0].rows(), x[0].cols()));
  for (int o = 0; o < outs; ++o) {
    for (int i = 0; i < ins; ++i) u[o].noalias() += a[o * ins + i] * x[i];
  }
  return u;
}

std::vector<Matrix> backward(const std::vector<Matrix>& a, int outs, int ins, const std::vector<Matrix>& y) {
  std::vector<Matrix> z(ins, Matrix::Zero(y[0].rows(), y[0].cols()));
  for (int i = 0; i < ins; ++i) {
    for (int o = 0; o < outs; ++o) z[i].noalias() += a[o * ins + i].transpose() * y[o];
  }
  return z;
}

std::vector<Matrix> random_inputs(int ins, Eigen::Index n, int starts, Rng& rng) {
  std::vector<Matrix> x(ins, Matrix(n, starts));
  for (int c = 0; c < starts; ++c) {
    for (int i = 0; i < ins; ++i) {
      for (Eigen::Index r = 0; r < n; ++r) x[i](r, c) = rng.normal();
    }
  }
  return x;
}

void normalize(std::vector<Matrix>& x, double p) {
  const Vector norms = mixed_norms(x, p);
  for (auto& m : x) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (norms(c) > 0.0) m.col(c) /= norms(c);
    }
  }
}

double exact_p2(const BlockOperator& t, const std::vector<Matrix>& a) {
  const auto n = static_cast<Eigen::Index>(t.cells());
  use_single_threaded_blas();
  Matrix gram;
  if (t.in_components == 1) {
    gram = Matrix::Zero(n, n);
    for (const auto& b : a) gram.selfadjointView<Eigen::Lower>().rankUpdate(b.transpose());
  } else if (t.out_components == 1) {
    gram = Matrix::Zero(n, n);
    for (const auto& b : a) gram.selfadjointView<Eigen::Lower>().rankUpdate(b);
  } else {
    const Eigen::Index cols = n * t.in_components;
    Matrix stacked(n * t.out_components, cols);
    for (int o = 0; o < t.out_components; ++o) {
      for (int i = 0; i < t.in_components; ++i) stacked.block(o * n, i * n, n, n) = a[o * t.in_components + i];
    }
    gram = Matrix::Zero(cols, cols);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(stacked.transpose());
  }
  return std::sqrt(std::max(0.0, largest_eigenvalue(gram)));
}

}  // namespace

NormEstimate weighted_operator_norm(const BlockOperator& t, double p, const GridFunction& w, NormMethod method,
                                    const PowerIterationOptions& options, const std::string& weight_id) {
  require(p > 1.0 && std::isfinite(p), "operator norm: p must lie in (1, inf)");
  NormEstimate est;
  est.operator_id = t.id;
  est.weight_id = weight_id;
  est.p = p;
  est.method = method;
  const auto n = static_cast<Eigen::Index>(t.cells());
  if (method == NormMethod::kExactP2) {
    require(p == 2.0, "operator norm: exact-p2 requires p = 2");
    est.value = exact_p2(t, conjugated_blocks(t, w, 2.0));
    est.trace = {est.value};
    return est;
  }
  const auto a = conjugated_blocks(t, w, p);
  Rng rng(options.seed);
  if (method == NormMethod::kRandomRestart) {
    require(options.restarts > 0, "operator norm: need at least one restart");
    auto x = random_inputs(t.in_components, n, options.restarts, rng);
    normalize(x, p);
    const Vector values = mixed_norms(forward(a, t.out_components, t.in_components, x), p);
    for (Eigen::Index c = 0; c < values.size(); ++c) {
      est.value = std::max(est.value, values(c));
      est.trace.push_back(est.value);
    }
    return est;
  }
  require(options.starts > 0 && options.iterations > 0, "operator norm: bad power iteration options");
  const double p_conj = p / (p - 1.0);
  auto x = random_inputs(t.in_components, n, options.starts, rng);
  normalize(x, p);
  std::vector<std::vector<double>> per_start(options.starts);
  for (int it = 0; it < options.iterations; ++it) {
    auto u = forward(a, t.out_components, t.in_components, x);
    const Vector values = mixed_norms(u, p);
    double best = 0.0;
    for (int c = 0; c < options.starts; ++c) {
      per_start[c].push_back(values(c));
      best = std::max(best, values(c));
    }
    est.value = std::max(est.value, best);
    est.trace.push_back(est.value);
    duality_map(u, p);
    x = backward(a, t.out_components, t.in_components, u);
    duality_map(x, p_conj);
    normalize(x, p);
  }
  // Oscillation check on the start that produced the final maximum.
  int winner = 0;
  for (int c = 0; c < options.starts; ++c) {
    if (*std::max_element(per_start[c].begin(), per_start[c].end()) >=
        *std::max_element(per_start[winner].begin(), per_start[winner].end())) {
      winner = c;
    }
  }
  const auto& tr = per_start[winner];
  const std::size_t tail = std::min<std::size_t>(10, tr.size());
  const auto [lo, hi] = std::minmax_element(tr.end() - static_cast<std::ptrdiff_t>(tail), tr.end());
  est.flagged = *hi > 0.0 && (*hi - *lo) / *hi > 0.01;
  return est;
}

double weighted_ratio(const BlockOperator& t, std::span<const double> f, double p, const GridFunction& w) {
  const auto tf = t.apply(f);
  auto norm = [&](std::span<const double> g, int comps) {
    CompensatedSum s;
    for (std::size_t i = 0; i < t.cells(); ++i) {
      double m2 = 0.0;
      for (int c = 0; c < comps; ++c) m2 += g[i * comps + c] * g[i * comps + c];
      s.add(std::pow(m2, p / 2.0) * w[i]);
    }
    return std::pow(s.value(), 1.0 / p);
  };
  const double den = norm(f, t.in_components);
  require(den > 0.0, "weighted_ratio: zero input");
  return norm(tf, t.out_components) / den;
}

double RefinementTable::spread() const {
  require(!rows.empty(), "refinement table is empty");
  double lo = kInf;
  double hi = 0.0;
  for (const auto& r : rows) {
    lo = std::min(lo, r.value);
    hi = std::max(hi, r.value);
  }
  if (hi == 0.0) return 1.0;
  return lo > 0.0 ? hi / lo : kInf;
}

double llogl_functional(const GridFunction& f, const GridFunction& w, double lambda) {
  require(lambda > 0.0, "llogl: lambda must be positive");
  CompensatedSum s;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double t = std::abs(f[i]) / lambda;
    s.add(t * (1.0 + std::max(0.0, std::log(t > 0.0 ? t : 1.0))) * w[i]);
  }
  return s.value() * f.domain().cell_volume();
}

WeakTypeReport weak_ratio_sweep(const BlockOperator& t, const GridFunction& f, const GridFunction& w,
                                std::size_t lambdas, double lo, double hi) {
  require(f.size() == t.cells() * t.in_components && f.components() == t.in_components,
          "weak sweep: input does not match the operator");
  require(w.min() > 0.0, "weak sweep: weight must be positive");
  const Domain& domain = t.domain;
  const auto tf = t.apply(f.values());
  std::vector<double> mag(t.cells());
  for (std::size_t i = 0; i < t.cells(); ++i) {
    double m2 = 0.0;
    for (int c = 0; c < t.out_components; ++c) m2 += tf[i * t.out_components + c] * tf[i * t.out_components + c];
    mag[i] = std::sqrt(m2);
  }
  WeakTypeReport rep;
  rep.scale = *std::max_element(mag.begin(), mag.end());
  const double scale = rep.scale > 0.0 ? rep.scale : f.max_abs();
  require(scale > 0.0, "weak sweep: zero input");
  std::vector<char> inner(t.cells(), 0);
  for (std::size_t i : inner_cells(domain)) inner[i] = 1;
  for (double lambda : log_grid_count(lo * scale, hi * scale, lambdas)) {
    WeakRow row;
    row.lambda = lambda;
    CompensatedSum all;
    CompensatedSum in;
    for (std::size_t i = 0; i < t.cells(); ++i) {
      if (mag[i] > lambda) {
        all.add(w[i]);
        if (inner[i]) in.add(w[i]);
      }
    }
    row.lhs = all.value() * domain.cell_volume();
    row.lhs_inner = in.value() * domain.cell_volume();
    row.rhs = llogl_functional(f, w, lambda);
    row.ratio = row.rhs > 0.0 ? row.lhs / row.rhs : 0.0;
    rep.sup_ratio = std::max(rep.sup_ratio, row.ratio);
    rep.sup_ratio_inner = std::max(rep.sup_ratio_inner, row.rhs > 0.0 ? row.lhs_inner / row.rhs : 0.0);
    rep.rows.push_back(row);
  }
  return rep;
}

LaclaimValue laclaim_terms(const GridFunction& b, const GridFunction& w, const GridFunction& rho, const Ball& ball,
                           double dilation, double p, double nu, double bmo_seminorm) {
  const Domain& domain = b.domain();
  require(dilation >= 1.0, "laclaim: dilation must be >= 1");
  require(p >= 1.0 && nu >= 1.0, "laclaim: p and nu must be >= 1");
  require(ball.radius <= rho[domain.locate(ball.center)], "laclaim: ball is not sub-critical");
  const auto inner = cells_in(domain, ball);
  const auto outer = cells_in(domain, Ball{ball.center, ball.radius * dilation});
  require(!inner.empty(), "laclaim: degenerate ball");
  const double hd = domain.cell_volume();
  CompensatedSum lhs;
  CompensatedSum wb;
  for (std::size_t x : inner) {
    CompensatedSum in;
    for (std::size_t y : outer) in.add(std::pow(std::abs(b[x] - b[y]), nu));
    lhs.add(w[x] * std::pow(in.value() * hd, p / nu));
    wb.add(w[x]);
  }
  LaclaimValue v;
  v.lhs = lhs.value() * hd;
  v.rhs_base = std::pow(bmo_seminorm, p) * std::pow(inner.size() * hd, p / nu) * wb.value() * hd;
  return v;
}

double laclaim_ratio(const GridFunction& b, const GridFunction& w, const GridFunction& rho, const Ball& ball,
                     double dilation, double p, double nu, double bmo_seminorm, double m_trial) {
  const LaclaimValue v = laclaim_terms(b, w, rho, ball, dilation, p, nu, bmo_seminorm);
  if (v.lhs == 0.0) return 0.0;
  require(v.rhs_base > 0.0, "laclaim: zero BMO seminorm with nonconstant symbol");
  return v.lhs / (std::pow(dilation, m_trial) * v.rhs_base);
}

LaclaimFit fit_laclaim(const GridFunction& b, const GridFunction& w, const GridFunction& rho,
                       const std::vector<Ball>& balls, const std::vector<double>& dilations, double p, double nu,
                       double bmo_seminorm, double constant_cap) {
  const Domain& domain = b.domain();
  LaclaimFit out;
  std::vector<std::vector<EnvelopeSample>> per_ball(balls.size());
  std::vector<char> skip(balls.size(), 0);
  parallel_for(balls.size(), [&](std::size_t k) {
    if (balls[k].radius > rho[domain.locate(balls[k].center)] || cells_in(domain, balls[k]).empty()) {
      skip[k] = 1;
      return;
    }
    for (double t : dilations) {
      per_ball[k].push_back({t, laclaim_ratio(b, w, rho, balls[k], t, p, nu, bmo_seminorm, 0.0)});
    }
  });
  std::vector<EnvelopeSample> samples;
  for (std::size_t k = 0; k < balls.size(); ++k) {
    if (skip[k]) {
      ++out.skipped;
      continue;
    }
    samples.insert(samples.end(), per_ball[k].begin(), per_ball[k].end());
  }
  out.samples = samples.size();
  out.fit = fit_envelope(samples, ExponentLattice{0.0, 0.25, 24.0}, constant_cap);
  return out;
}

std::shared_ptr<const RieszOperator> OperatorCache::get(const std::string& potential_key, const GridFunction& v) {
  const Domain& d = v.domain();
  std::string key = potential_key + "|d=" + std::to_string(d.dim()) + "|n=" + std::to_string(d.cells_per_axis()) +
                    "|M=" + std::to_string(d.half_width());
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  auto op = build_riesz(v);
  cache_.emplace(key, op);
  return op;
}

}  // namespace schrolab
