#include "sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "common.hpp"

namespace isopar::sparse {

int CsrMatrix::find(int i, int j) const {
  const auto begin = col.begin() + row_ptr[i], end = col.begin() + row_ptr[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  return it != end && *it == j ? static_cast<int>(it - col.begin()) : -1;
}

double CsrMatrix::at(int i, int j) const {
  const int p = find(i, j);
  return p < 0 ? 0.0 : val[p];
}

void CsrMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  y.assign(rows, 0.0);
  for (int i = 0; i < rows; ++i) {
    double s = 0.0;
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) s += val[p] * x[col[p]];
    y[i] = s;
  }
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(rows, 0.0);
  for (int i = 0; i < rows; ++i) d[i] = at(i, i);
  return d;
}

CsrMatrix pattern_from_rows(int rows, int cols, std::vector<std::vector<int>> row_cols) {
  CsrMatrix a;
  a.rows = rows;
  a.cols = cols;
  a.row_ptr.assign(rows + 1, 0);
  for (int i = 0; i < rows; ++i) {
    auto& c = row_cols[i];
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    a.row_ptr[i + 1] = a.row_ptr[i] + static_cast<int>(c.size());
  }
  a.col.reserve(a.row_ptr[rows]);
  for (auto& c : row_cols) a.col.insert(a.col.end(), c.begin(), c.end());
  a.val.assign(a.col.size(), 0.0);
  return a;
}

double symmetry_defect(const CsrMatrix& a) {
  double biggest = 0.0, defect = 0.0;
  for (double v : a.val) biggest = std::max(biggest, std::abs(v));
  for (int i = 0; i < a.rows; ++i)
    for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) defect = std::max(defect, std::abs(a.val[p] - a.at(a.col[p], i)));
  return biggest > 0.0 ? defect / biggest : 0.0;
}

namespace {

// b - A x with extended-precision accumulation.
double true_residual(const CsrMatrix& a, const std::vector<double>& x, const std::vector<double>& b,
                     std::vector<double>& r) {
  long double total = 0.0L;
  r.resize(a.rows);
  for (int i = 0; i < a.rows; ++i) {
    long double s = b[i];
    for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p)
      s -= static_cast<long double>(a.val[p]) * static_cast<long double>(x[a.col[p]]);
    r[i] = static_cast<double>(s);
    total += s * s;
  }
  return static_cast<double>(std::sqrt(total));
}

// Plain Jacobi PCG from zero until ||r|| <= tol ||b|| or `budget` iterations.
int pcg(const CsrMatrix& a, const std::vector<double>& dinv, const std::vector<double>& b, double tol, int budget,
        std::vector<double>& x) {
  const int n = a.rows;
  x.assign(n, 0.0);
  double bnorm = 0.0;
  for (double v : b) bnorm += v * v;
  bnorm = std::sqrt(bnorm);
  if (bnorm == 0.0) return 0;
  std::vector<double> r = b, z(n), p(n), q(n);
  double rz = 0.0;
  for (int i = 0; i < n; ++i) {
    z[i] = dinv[i] * r[i];
    rz += r[i] * z[i];
  }
  p = z;
  for (int it = 1; it <= budget; ++it) {
    a.multiply(p, q);
    double pq = 0.0;
    for (int i = 0; i < n; ++i) pq += p[i] * q[i];
    const double alpha = rz / pq;
    double rr = 0.0;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
      rr += r[i] * r[i];
    }
    if (std::sqrt(rr) <= tol * bnorm) return it;
    double rz_new = 0.0;
    for (int i = 0; i < n; ++i) {
      z[i] = dinv[i] * r[i];
      rz_new += r[i] * z[i];
    }
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return budget + 1;
}

}  // namespace

// Residual-correction loop around double-precision PCG. Double CG alone
// stalls near 5e-12 relative residual on fine P2/P3 systems; computing the
// outer residual in extended precision lets the iterate reach the accuracy
// that its double representation allows.
CgResult solve_cg(const CsrMatrix& a, const std::vector<double>& b, double tol) {
  const int n = a.rows;
  CgResult out;
  out.x.assign(n, 0.0);
  double bnorm = 0.0;
  for (double v : b) bnorm += v * v;
  bnorm = std::sqrt(bnorm);
  if (bnorm == 0.0) return out;

  std::vector<double> dinv = a.diagonal();
  for (auto& d : dinv) d = d > 0.0 ? 1.0 / d : 1.0;
  const int cap = static_cast<int>(20.0 * std::sqrt(static_cast<double>(n))) + 500;
  std::vector<double> r, d;
  double rnorm = true_residual(a, out.x, b, r);
  for (int pass = 0; pass < 8; ++pass) {
    const double inner_tol = std::clamp(0.5 * tol * bnorm / rnorm, 1e-8, 0.1);
    const int used = pcg(a, dinv, r, inner_tol, cap - out.iterations, d);
    out.iterations += std::min(used, cap - out.iterations);
    for (int i = 0; i < n; ++i) out.x[i] += d[i];
    const double previous = rnorm;
    rnorm = true_residual(a, out.x, b, r);
    out.residual = rnorm / bnorm;
    if (out.residual <= tol) return out;
    if (out.iterations >= cap || rnorm > 0.5 * previous) break;
  }
  char text[128];
  std::snprintf(text, sizeof text, "conjugate gradients stopped after %d iterations with relative residual %.3e",
                out.iterations, out.residual);
  throw Error(ErrorCode::NonConvergence, text);
}

std::vector<double> solve_dense(const CsrMatrix& a, const std::vector<double>& b) {
  const int n = a.rows;
  if (n >= 2000) throw Error(ErrorCode::Contract, "dense solve is limited to fewer than 2000 unknowns");
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) m[static_cast<std::size_t>(i) * n + a.col[p]] = a.val[p];
  for (int j = 0; j < n; ++j) {
    double d = m[static_cast<std::size_t>(j) * n + j];
    for (int k = 0; k < j; ++k) d -= m[static_cast<std::size_t>(j) * n + k] * m[static_cast<std::size_t>(j) * n + k];
    if (!(d > 0.0)) throw Error(ErrorCode::Assembly, "matrix is not positive definite (pivot " + std::to_string(j) + ")");
    const double l = std::sqrt(d);
    m[static_cast<std::size_t>(j) * n + j] = l;
    for (int i = j + 1; i < n; ++i) {
      double s = m[static_cast<std::size_t>(i) * n + j];
      for (int k = 0; k < j; ++k) s -= m[static_cast<std::size_t>(i) * n + k] * m[static_cast<std::size_t>(j) * n + k];
      m[static_cast<std::size_t>(i) * n + j] = s / l;
    }
  }
  std::vector<double> y(b);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) y[i] -= m[static_cast<std::size_t>(i) * n + k] * y[k];
    y[i] /= m[static_cast<std::size_t>(i) * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) y[i] -= m[static_cast<std::size_t>(k) * n + i] * y[k];
    y[i] /= m[static_cast<std::size_t>(i) * n + i];
  }
  return y;
}

void write_coordinate(const CsrMatrix& a, std::ostream& out) {
  const auto old = out.precision(17);
  for (int i = 0; i < a.rows; ++i)
    for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) out << i << ' ' << a.col[p] << ' ' << a.val[p] << '\n';
  out.precision(old);
}

}  // namespace isopar::sparse
