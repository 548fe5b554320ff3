#include "fem.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace isopar::fem {

Space::Space(std::shared_ptr<const iso::Geometry> geometry) : geometry_(std::move(geometry)) {
  const iso::Geometry& geo = *geometry_;
  const ReferenceElement& re = geo.reference();
  const int r = geo.degree();
  const int nloc = re.size();
  const int nv = geo.mesh().vertex_count();
  const int ne = geo.element_count();

  std::unordered_map<std::uint64_t, int> edge_index;
  std::vector<std::array<int, 3>> element_edges(ne);
  for (int e = 0; e < ne; ++e) {
    const auto& v = geo.element(e).vertices;
    for (int k = 0; k < 3; ++k) {
      const int a = std::min(v[k], v[(k + 1) % 3]), b = std::max(v[k], v[(k + 1) % 3]);
      const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
      const auto [it, inserted] = edge_index.emplace(key, static_cast<int>(edge_index.size()));
      element_edges[e][k] = it->second;
    }
  }
  const int nedges = static_cast<int>(edge_index.size());
  dof_count_ = nv + (r - 1) * nedges + (r == 3 ? ne : 0);

  element_dofs_.resize(static_cast<std::size_t>(ne) * nloc);
  points_.assign(dof_count_, Vec2{});
  exact_points_.assign(dof_count_, Vec2{});
  std::vector<char> seen(dof_count_, 0);
  boundary_flag_.assign(dof_count_, 0);
  for (int e = 0; e < ne; ++e) {
    const auto& el = geo.element(e);
    int* dofs = &element_dofs_[static_cast<std::size_t>(e) * nloc];
    for (int i = 0; i < 3; ++i) dofs[i] = el.vertices[i];
    for (int k = 0; k < 3; ++k) {
      const bool forward = el.vertices[k] < el.vertices[(k + 1) % 3];
      for (int m = 0; m < r - 1; ++m)
        dofs[3 + k * (r - 1) + m] = nv + element_edges[e][k] * (r - 1) + (forward ? m : r - 2 - m);
    }
    if (r == 3) dofs[9] = nv + 2 * nedges + e;
    for (int i = 0; i < nloc; ++i) {
      if (seen[dofs[i]]) continue;
      seen[dofs[i]] = 1;
      points_[dofs[i]] = el.nodes[i];
      exact_points_[dofs[i]] = geo.exact_map(e, re.nodes()[i]);
    }
    if (el.curved)
      for (int i : re.edge_nodes(0)) boundary_flag_[dofs[i]] = 1;
  }
  for (int d = 0; d < dof_count_; ++d)
    if (boundary_flag_[d]) boundary_dofs_.push_back(d);
}

QuadratureTable quadrature_table(int r, int degree) {
  const ReferenceElement& re = reference_element(r);
  QuadratureTable t;
  const TriangleQuadrature quad = degree > 0 ? triangle_quadrature(degree) : re.quadrature();
  t.points = quad.points;
  t.weights = quad.weights;
  t.values.assign(t.points.size(), std::vector<double>(re.size()));
  t.gradients.assign(t.points.size(), std::vector<Vec2>(re.size()));
  for (std::size_t q = 0; q < t.points.size(); ++q) {
    re.values(t.points[q], t.values[q].data());
    re.gradients(t.points[q], t.gradients[q].data());
  }
  return t;
}

namespace {

sparse::CsrMatrix stiffness_pattern(const Space& space) {
  const int nloc = space.local_size();
  std::vector<std::vector<int>> rows(space.dof_count());
  for (int e = 0; e < space.element_count(); ++e) {
    const int* d = space.element_dofs(e);
    for (int i = 0; i < nloc; ++i) rows[d[i]].insert(rows[d[i]].end(), d, d + nloc);
  }
  return sparse::pattern_from_rows(space.dof_count(), space.dof_count(), std::move(rows));
}

Mat2 table_jacobian(const iso::ElementGeometry& el, const std::vector<Vec2>& grads) {
  if (!el.curved) return el.affine;
  Mat2 j{};
  for (std::size_t i = 0; i < grads.size(); ++i)
    j = j + Mat2{el.nodes[i].x * grads[i].x, el.nodes[i].x * grads[i].y, el.nodes[i].y * grads[i].x,
                 el.nodes[i].y * grads[i].y};
  return j;
}

}  // namespace

sparse::CsrMatrix assemble_stiffness(const Space& space, Mode mode, int quadrature_degree) {
  const iso::Geometry& geo = space.geometry();
  const int nloc = space.local_size();
  const QuadratureTable qt = quadrature_table(space.degree(), quadrature_degree);
  sparse::CsrMatrix a = stiffness_pattern(space);
  std::vector<double> local(static_cast<std::size_t>(nloc) * nloc);
  std::vector<Vec2> phys(nloc);
  for (int e = 0; e < space.element_count(); ++e) {
    const auto& el = geo.element(e);
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < qt.points.size(); ++q) {
      const Mat2 fk = table_jacobian(el, qt.gradients[q]);
      Mat2 pull = fk;  // map whose inverse transpose carries reference gradients
      Mat2 coeff = Mat2::identity();
      if (mode == Mode::Exact && el.curved) {
        pull = geo.exact_jacobian(e, qt.points[q]);
        coeff = geo.coefficient_matrix(e, qt.points[q]);
      }
      const double det = pull.det();
      if (!(det > 0.0))
        throw Error(ErrorCode::Assembly, "element " + std::to_string(e) + " has Jacobian determinant " +
                                             std::to_string(det) + " at a quadrature point");
      const Mat2 inv_t = pull.inverse().transpose();
      for (int i = 0; i < nloc; ++i) phys[i] = inv_t * qt.gradients[q][i];
      const double w = qt.weights[q] * det;
      for (int i = 0; i < nloc; ++i) {
        const Vec2 ai = coeff * phys[i];
        for (int j = 0; j < nloc; ++j) local[static_cast<std::size_t>(i) * nloc + j] += w * dot(ai, phys[j]);
      }
    }
    const int* d = space.element_dofs(e);
    for (int i = 0; i < nloc; ++i)
      for (int j = 0; j < nloc; ++j) a.val[a.find(d[i], d[j])] += local[static_cast<std::size_t>(i) * nloc + j];
  }
  return a;
}

std::vector<double> assemble_load(const Space& space, const std::function<double(Vec2)>& f, int quadrature_degree) {
  const iso::Geometry& geo = space.geometry();
  const int nloc = space.local_size();
  const QuadratureTable qt = quadrature_table(space.degree(), quadrature_degree);
  std::vector<double> b(space.dof_count(), 0.0);
  for (int e = 0; e < space.element_count(); ++e) {
    const auto& el = geo.element(e);
    const int* d = space.element_dofs(e);
    for (std::size_t q = 0; q < qt.points.size(); ++q) {
      Vec2 x{0, 0};
      for (int i = 0; i < nloc; ++i) x += qt.values[q][i] * el.nodes[i];
      const double w = qt.weights[q] * std::abs(table_jacobian(el, qt.gradients[q]).det()) * f(x);
      for (int i = 0; i < nloc; ++i) b[d[i]] += w * qt.values[q][i];
    }
  }
  return b;
}

DirichletReduction::DirichletReduction(const Space& space, const sparse::CsrMatrix& a)
    : DirichletReduction(space, a, space.boundary_dofs()) {}

DirichletReduction::DirichletReduction(const Space& space, const sparse::CsrMatrix& a, std::vector<int> constrained)
    : constrained_(std::move(constrained)) {
  std::sort(constrained_.begin(), constrained_.end());
  constrained_.erase(std::unique(constrained_.begin(), constrained_.end()), constrained_.end());
  const int n = a.rows;
  std::vector<int> cidx(n, -1), fidx(n, -1);
  for (std::size_t k = 0; k < constrained_.size(); ++k) {
    const int d = constrained_[k];
    if (d < 0 || d >= n || !space.is_boundary(d))
      throw Error(ErrorCode::Contract, "dof " + std::to_string(d) + " is not a boundary dof and cannot be constrained");
    cidx[d] = static_cast<int>(k);
  }
  for (int d = 0; d < n; ++d)
    if (cidx[d] < 0) {
      fidx[d] = static_cast<int>(free_.size());
      free_.push_back(d);
    }
  const int nf = static_cast<int>(free_.size());
  reduced_.rows = reduced_.cols = nf;
  coupling_.rows = nf;
  coupling_.cols = static_cast<int>(constrained_.size());
  reduced_.row_ptr.assign(nf + 1, 0);
  coupling_.row_ptr.assign(nf + 1, 0);
  for (int k = 0; k < nf; ++k) {
    const int i = free_[k];
    for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
      const int j = a.col[p];
      if (fidx[j] >= 0) {
        reduced_.col.push_back(fidx[j]);
        reduced_.val.push_back(a.val[p]);
      } else {
        coupling_.col.push_back(cidx[j]);
        coupling_.val.push_back(a.val[p]);
      }
    }
    reduced_.row_ptr[k + 1] = static_cast<int>(reduced_.col.size());
    coupling_.row_ptr[k + 1] = static_cast<int>(coupling_.col.size());
  }
}

std::vector<double> DirichletReduction::rhs(const std::vector<double>& b, const std::vector<double>& values) const {
  if (values.size() != constrained_.size())
    throw Error(ErrorCode::Contract, "expected " + std::to_string(constrained_.size()) + " constrained values");
  std::vector<double> out(free_.size());
  std::vector<double> coupled;
  coupling_.multiply(values, coupled);
  for (std::size_t k = 0; k < free_.size(); ++k) out[k] = (b.empty() ? 0.0 : b[free_[k]]) - coupled[k];
  return out;
}

std::vector<double> DirichletReduction::expand(const std::vector<double>& x_free,
                                               const std::vector<double>& values) const {
  std::vector<double> x(free_.size() + constrained_.size(), 0.0);
  for (std::size_t k = 0; k < free_.size(); ++k) x[free_[k]] = x_free[k];
  for (std::size_t k = 0; k < constrained_.size(); ++k) x[constrained_[k]] = values[k];
  return x;
}

std::vector<double> DirichletReduction::solve(const std::vector<double>& b, const std::vector<double>& values,
                                              bool dense, sparse::CgResult* stats, double tol) const {
  const std::vector<double> rb = rhs(b, values);
  if (dense) return expand(sparse::solve_dense(reduced_, rb), values);
  sparse::CgResult res = sparse::solve_cg(reduced_, rb, tol);
  std::vector<double> x = expand(res.x, values);
  if (stats) *stats = std::move(res);
  return x;
}

double relative_difference(const sparse::CsrMatrix& a, const sparse::CsrMatrix& b) {
  if (a.rows != b.rows || a.col != b.col) throw Error(ErrorCode::Contract, "matrices do not share a pattern");
  double biggest = 0.0;
  for (double v : a.val) biggest = std::max(biggest, std::abs(v));
  const double floor = 1e-12 * biggest;
  double worst = 0.0;
  for (std::size_t p = 0; p < a.val.size(); ++p) {
    const double scale = std::max({std::abs(a.val[p]), std::abs(b.val[p]), floor});
    if (scale > 0.0) worst = std::max(worst, std::abs(a.val[p] - b.val[p]) / scale);
  }
  return worst;
}

}  // namespace isopar::fem
