#pragma once

#include <iosfwd>
#include <vector>

namespace isopar::sparse {

/// Compressed-row matrix with sorted column indices per row.
struct CsrMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> val;

  int nnz() const { return static_cast<int>(col.size()); }
  /// Position of (i, j) in val, or -1 when structurally zero.
  int find(int i, int j) const;
  double at(int i, int j) const;
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
  std::vector<double> diagonal() const;
};

/// Builds the sparsity pattern from per-row column lists (sorted and deduplicated here).
CsrMatrix pattern_from_rows(int rows, int cols, std::vector<std::vector<int>> row_cols);

/// Relative symmetry defect max |a_ij - a_ji| / max |a|.
double symmetry_defect(const CsrMatrix& a);

struct CgResult {
  std::vector<double> x;
  int iterations = 0;
  double residual = 0.0;  // final ||b - A x|| / ||b||
};

/// Jacobi-preconditioned conjugate gradients to relative residual `tol`, at
/// most 20 sqrt(n) + 500 iterations. ErrorCode::NonConvergence when the cap is
/// reached.
CgResult solve_cg(const CsrMatrix& a, const std::vector<double>& b, double tol = 1e-12);

/// Dense Cholesky solve for systems below 2000 unknowns (solver oracle).
std::vector<double> solve_dense(const CsrMatrix& a, const std::vector<double>& b);

/// Coordinate text format: one `i j value` line per stored entry, 0-based.
void write_coordinate(const CsrMatrix& a, std::ostream& out);

}  // namespace isopar::sparse
