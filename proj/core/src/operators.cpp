#include "schrolab/operators.hpp"

#include <algorithm>

namespace schrolab {

DiscreteOperator assemble_schrodinger(const GridFunction& v) {
  require(v.components() == 1, "assemble_schrodinger: scalar potential required");
  require(v.min() >= 0.0, "assemble_schrodinger: negative potential sample");
  const Domain& domain = v.domain();
  const auto n_cells = static_cast<Eigen::Index>(domain.size());
  const int d = domain.dim();
  const int n = domain.cells_per_axis();
  const double s = (1.0 / domain.spacing()) * (1.0 / domain.spacing());
  DiscreteOperator op;
  op.domain = domain;
  op.matrix = Matrix::Zero(n_cells, n_cells);
  op.symmetric = true;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const MultiIndex idx = domain.multi_index(i);
    const auto ii = static_cast<Eigen::Index>(i);
    op.matrix(ii, ii) = 2.0 * d * s + v[i];
    for (int a = 0; a < d; ++a) {
      for (int step : {-1, 1}) {
        MultiIndex nb = idx;
        nb[a] += step;
        if (nb[a] < 0 || nb[a] >= n) continue;
        op.matrix(ii, static_cast<Eigen::Index>(domain.flat_index(nb))) = -s;
      }
    }
  }
  return op;
}

SpectralFactorization factorize(const DiscreteOperator& op) {
  require(op.symmetric, "factorize: operator must be symmetric");
  SymmetricEigen eig = symmetric_eigen(op.matrix);
  ensure(eig.values.size() > 0 && eig.values(0) > 0.0,
         "factorize: nonpositive eigenvalue, the operator is not positive definite");
  return {std::move(eig.values), std::move(eig.vectors)};
}

std::size_t face_count(const Domain& domain) {
  return domain.size() / domain.cells_per_axis() * (domain.cells_per_axis() + 1);
}

std::vector<double> face_gradient(const Domain& domain, int axis, std::span<const double> f) {
  require(axis >= 0 && axis < domain.dim(), "face_gradient: bad axis");
  require(f.size() == domain.size(), "face_gradient: size mismatch");
  const int n = domain.cells_per_axis();
  const double inv_h = 1.0 / domain.spacing();
  // Index lines by the multi-index with the axis coordinate removed.
  std::size_t stride = 1;
  for (int a = domain.dim() - 1; a > axis; --a) stride *= n;
  const std::size_t lines = domain.size() / n;
  std::vector<double> out;
  out.reserve(face_count(domain));
  for (std::size_t line = 0; line < lines; ++line) {
    const std::size_t outer = line / stride;
    const std::size_t inner = line % stride;
    const std::size_t base = outer * stride * n + inner;
    for (int k = 0; k <= n; ++k) {
      const double right = k < n ? f[base + k * stride] : 0.0;
      const double left = k > 0 ? f[base + (k - 1) * stride] : 0.0;
      out.push_back(right * inv_h - left * inv_h);
    }
  }
  return out;
}

RieszOperator::RieszOperator(const GridFunction& v, const SpectralFactorization& spectrum)
    : domain_(v.domain()), v_(v) {
  const auto n_cells = static_cast<Eigen::Index>(domain_.size());
  require(spectrum.eigenvalues.size() == n_cells, "riesz: factorization size mismatch");
  min_eigenvalue_ = spectrum.eigenvalues.minCoeff();
  ensure(min_eigenvalue_ > 0.0, "riesz: nonpositive eigenvalue");
  use_single_threaded_blas();
  const Vector quarter = spectrum.eigenvalues.array().pow(-0.25);
  const Matrix scaled = spectrum.eigenvectors * quarter.asDiagonal();
  inv_sqrt_ = Matrix::Zero(n_cells, n_cells);
  inv_sqrt_.selfadjointView<Eigen::Lower>().rankUpdate(scaled);
  inv_sqrt_ = inv_sqrt_.selfadjointView<Eigen::Lower>();

  const int d = domain_.dim();
  const int n = domain_.cells_per_axis();
  const double inv_2h = 0.5 / domain_.spacing();
  components_.resize(d);
  for (int j = 0; j < d; ++j) {
    // Work on the transpose so every access is a contiguous column of the
    // symmetric L^(-1/2).
    Matrix rt(n_cells, n_cells);
    for (std::size_t i = 0; i < domain_.size(); ++i) {
      const MultiIndex idx = domain_.multi_index(i);
      auto col = rt.col(static_cast<Eigen::Index>(i));
      col.setZero();
      MultiIndex nb = idx;
      nb[j] = idx[j] + 1;
      if (nb[j] < n) col += inv_sqrt_.col(static_cast<Eigen::Index>(domain_.flat_index(nb)));
      nb[j] = idx[j] - 1;
      if (nb[j] >= 0) col -= inv_sqrt_.col(static_cast<Eigen::Index>(domain_.flat_index(nb)));
      col *= inv_2h;
    }
    components_[j] = rt.transpose();
  }
}

double RieszOperator::max_abs_entry() const {
  double m = 0.0;
  for (const auto& c : components_) m = std::max(m, c.cwiseAbs().maxCoeff());
  return m;
}

RieszOperator::Energy RieszOperator::energy(std::span<const double> f) const {
  require(f.size() == domain_.size(), "energy: size mismatch");
  const Eigen::Map<const Vector> fv(f.data(), static_cast<Eigen::Index>(f.size()));
  const Vector u = inv_sqrt_ * fv;
  Energy e;
  CompensatedSum grad;
  for (int j = 0; j < domain_.dim(); ++j) {
    for (double g : face_gradient(domain_, j, std::span<const double>(u.data(), u.size()))) grad.add(g * g);
  }
  CompensatedSum pot;
  CompensatedSum in;
  for (std::size_t i = 0; i < domain_.size(); ++i) {
    const double ui = u(static_cast<Eigen::Index>(i));
    pot.add(v_[i] * ui * ui);
    in.add(f[i] * f[i]);
  }
  e.gradient = grad.value();
  e.potential = pot.value();
  e.input = in.value();
  return e;
}

std::vector<double> RieszOperator::apply(std::span<const double> f) const {
  require(f.size() == domain_.size(), "riesz apply: size mismatch");
  const Eigen::Map<const Vector> fv(f.data(), static_cast<Eigen::Index>(f.size()));
  const int d = domain_.dim();
  std::vector<double> out(domain_.size() * d);
  for (int j = 0; j < d; ++j) {
    const Vector r = components_[j] * fv;
    for (std::size_t i = 0; i < domain_.size(); ++i) out[i * d + j] = r(static_cast<Eigen::Index>(i));
  }
  return out;
}

std::vector<double> RieszOperator::apply_adjoint(std::span<const double> g) const {
  const int d = domain_.dim();
  require(g.size() == domain_.size() * d, "riesz adjoint: size mismatch");
  Vector acc = Vector::Zero(static_cast<Eigen::Index>(domain_.size()));
  for (int j = 0; j < d; ++j) {
    Vector gj(static_cast<Eigen::Index>(domain_.size()));
    for (std::size_t i = 0; i < domain_.size(); ++i) gj(static_cast<Eigen::Index>(i)) = g[i * d + j];
    acc.noalias() += components_[j].transpose() * gj;
  }
  return {acc.data(), acc.data() + acc.size()};
}

std::shared_ptr<const RieszOperator> build_riesz(const GridFunction& v) {
  const DiscreteOperator op = assemble_schrodinger(v);
  const SpectralFactorization spectrum = factorize(op);
  return std::make_shared<const RieszOperator>(v, spectrum);
}

std::vector<double> BlockOperator::apply(std::span<const double> f) const {
  const std::size_t n = cells();
  require(f.size() == n * in_components, "block apply: size mismatch");
  std::vector<Vector> ins(in_components, Vector(static_cast<Eigen::Index>(n)));
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < in_components; ++c) ins[c](static_cast<Eigen::Index>(i)) = f[i * in_components + c];
  }
  std::vector<double> out(n * out_components, 0.0);
  for (int o = 0; o < out_components; ++o) {
    Vector acc = Vector::Zero(static_cast<Eigen::Index>(n));
    for (int c = 0; c < in_components; ++c) acc.noalias() += block(o, c) * ins[c];
    for (std::size_t i = 0; i < n; ++i) out[i * out_components + o] = acc(static_cast<Eigen::Index>(i));
  }
  return out;
}

double BlockOperator::max_abs_entry() const {
  double m = 0.0;
  for (const auto& b : blocks) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

BlockOperator identity_operator(const Domain& domain) {
  const auto n = static_cast<Eigen::Index>(domain.size());
  return BlockOperator{"identity", domain, 1, 1, {Matrix::Identity(n, n)}};
}

BlockOperator riesz_block(const RieszOperator& r) {
  BlockOperator op{"riesz", r.domain(), r.components(), 1, {}};
  for (int j = 0; j < r.components(); ++j) op.blocks.push_back(r.component(j));
  return op;
}

BlockOperator riesz_adjoint_block(const RieszOperator& r) {
  BlockOperator op{"riesz-adjoint", r.domain(), 1, r.components(), {}};
  for (int j = 0; j < r.components(); ++j) op.blocks.push_back(r.component(j).transpose());
  return op;
}

Matrix commutator_component(const Matrix& r, const GridFunction& b) {
  require(b.components() == 1, "commutator: scalar symbol required");
  require(static_cast<std::size_t>(r.rows()) == b.size() && r.rows() == r.cols(), "commutator: size mismatch");
  const Eigen::Index n = r.rows();
  Matrix t(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    const double bm = b[static_cast<std::size_t>(m)];
    for (Eigen::Index i = 0; i < n; ++i) t(i, m) = r(i, m) * (bm - b[static_cast<std::size_t>(i)]);
  }
  return t;
}

BlockOperator commutator(const RieszOperator& r, const GridFunction& b) {
  require(b.domain() == r.domain(), "commutator: symbol lives on a different grid");
  BlockOperator op{"riesz-commutator", r.domain(), r.components(), 1, {}};
  for (int j = 0; j < r.components(); ++j) op.blocks.push_back(commutator_component(r.component(j), b));
  return op;
}

BlockOperator adjoint_commutator(const RieszOperator& r, const GridFunction& b) {
  require(b.domain() == r.domain(), "commutator: symbol lives on a different grid");
  BlockOperator op{"riesz-adjoint-commutator", r.domain(), 1, r.components(), {}};
  for (int j = 0; j < r.components(); ++j) {
    op.blocks.push_back(commutator_component(r.component(j).transpose(), b));
  }
  return op;
}

Matrix kernel_matrix(const RieszOperator& r, int j) {
  require(j >= 0 && j < r.components(), "kernel_matrix: bad component");
  return r.component(j) * (1.0 / r.domain().cell_volume());
}

LocGlobSplit loc_glob_split(const Matrix& t, const GridFunction& rho) {
  const Domain& domain = rho.domain();
  require(static_cast<std::size_t>(t.rows()) == domain.size() && t.rows() == t.cols(),
          "loc_glob_split: size mismatch");
  LocGlobSplit out{Matrix::Zero(t.rows(), t.cols()), t};
  const int d = domain.dim();
  std::vector<Point> centers(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) centers[i] = domain.center(i);
  for (Eigen::Index m = 0; m < t.cols(); ++m) {
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      if (distance(centers[i], centers[m], d) < rho[static_cast<std::size_t>(i)]) {
        out.local(i, m) = t(i, m);
        out.global(i, m) = 0.0;
      }
    }
  }
  return out;
}

BlockOperator restrict_block(const BlockOperator& t, const GridFunction& rho, bool local) {
  BlockOperator out = t;
  out.id = t.id + (local ? "-loc" : "-glob");
  for (auto& b : out.blocks) {
    auto split = loc_glob_split(b, rho);
    b = local ? std::move(split.local) : std::move(split.global);
  }
  return out;
}

}  // namespace schrolab
