#include "delaunay.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_set>

namespace isopar::mesh::detail {

double orient2d(const Vec2& a, const Vec2& b, const Vec2& c) { return cross(b - a, c - a); }

double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  return alift * (bdx * cdy - bdy * cdx) + blift * (cdx * ady - cdy * adx) + clift * (adx * bdy - ady * bdx);
}

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

class Triangulator {
 public:
  explicit Triangulator(const std::vector<Vec2>& input) : pts_(input) {
    Vec2 lo = input.front(), hi = input.front();
    for (const auto& p : input) {
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    const Vec2 c = 0.5 * (lo + hi);
    const double d = std::max({hi.x - lo.x, hi.y - lo.y, 1e-3});
    super_ = static_cast<int>(pts_.size());
    pts_.push_back({c.x - 20.0 * d, c.y - 10.0 * d});
    pts_.push_back({c.x + 20.0 * d, c.y - 10.0 * d});
    pts_.push_back({c.x, c.y + 20.0 * d});
    vt_.assign(pts_.size(), -1);
    add({super_, super_ + 1, super_ + 2}, {-1, -1, -1});
  }

  void insert(int p) {
    const Vec2& q = pts_[p];
    int t = locate(q);
    int on_edge = -1;
    for (int e = 0; e < 3; ++e) {
      const double o = orient2d(pts_[tv_[t][e]], pts_[tv_[t][(e + 1) % 3]], q);
      if (o == 0.0) on_edge = e;
    }
    if (on_edge >= 0 && tn_[t][on_edge] >= 0)
      split_edge(t, on_edge, p);
    else
      split_triangle(t, p);
    last_ = vt_[p];
  }

  void recover(int a, int b) {
    constrained_.insert(edge_key(a, b));
    if (has_edge(a, b)) return;
    std::deque<std::pair<int, int>> crossing = crossing_edges(a, b);
    std::size_t guard = 0;
    const std::size_t max_iter = 100000 + 100 * crossing.size();
    while (!crossing.empty()) {
      if (++guard > max_iter) throw Error(ErrorCode::Quality, "constraint recovery did not terminate");
      auto [x, y] = crossing.front();
      crossing.pop_front();
      auto [t, e] = find_edge(x, y);
      x = tv_[t][e];
      y = tv_[t][(e + 1) % 3];
      const int u = tn_[t][e];
      const int c = tv_[t][(e + 2) % 3];
      const int f = local_edge(u, y, x);
      const int d = tv_[u][(f + 2) % 3];
      const bool convex = orient2d(pts_[c], pts_[d], pts_[x]) * orient2d(pts_[c], pts_[d], pts_[y]) < 0.0 &&
                          orient2d(pts_[x], pts_[y], pts_[c]) * orient2d(pts_[x], pts_[y], pts_[d]) < 0.0;
      if (!convex) {
        crossing.emplace_back(x, y);
        continue;
      }
      flip(t, e);
      if (crosses(a, b, c, d)) crossing.emplace_back(c, d);
    }
    recovered_flips_ = true;
  }

  void restore_delaunay() {
    if (!recovered_flips_) return;
    for (int pass = 0; pass < 100; ++pass) {
      bool changed = false;
      for (int t = 0; t < static_cast<int>(tv_.size()); ++t) {
        for (int e = 0; e < 3; ++e) {
          const int u = tn_[t][e];
          if (u < 0) continue;
          const int a = tv_[t][e], b = tv_[t][(e + 1) % 3], c = tv_[t][(e + 2) % 3];
          if (constrained_.count(edge_key(a, b))) continue;
          const int f = local_edge(u, b, a);
          const int d = tv_[u][(f + 2) % 3];
          if (incircle(pts_[a], pts_[b], pts_[c], pts_[d]) > 1e-14 &&
              orient2d(pts_[c], pts_[d], pts_[a]) * orient2d(pts_[c], pts_[d], pts_[b]) < 0.0) {
            flip(t, e);
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
  }

  CdtResult extract() const {
    // Flood the outside from the super triangle corners without crossing constraints.
    std::vector<char> outside(tv_.size(), 0);
    std::vector<int> stack;
    for (int t = 0; t < static_cast<int>(tv_.size()); ++t)
      for (int v : tv_[t])
        if (v >= super_ && !outside[t]) {
          outside[t] = 1;
          stack.push_back(t);
        }
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      for (int e = 0; e < 3; ++e) {
        const int u = tn_[t][e];
        if (u < 0 || outside[u]) continue;
        if (constrained_.count(edge_key(tv_[t][e], tv_[t][(e + 1) % 3]))) continue;
        outside[u] = 1;
        stack.push_back(u);
      }
    }
    CdtResult out;
    for (int t = 0; t < static_cast<int>(tv_.size()); ++t) {
      if (outside[t]) continue;
      if (tv_[t][0] >= super_ || tv_[t][1] >= super_ || tv_[t][2] >= super_)
        throw Error(ErrorCode::Quality, "boundary loop does not enclose the interior points");
      out.triangles.push_back(tv_[t]);
    }
    return out;
  }

 private:
  int add(std::array<int, 3> v, std::array<int, 3> n) {
    tv_.push_back(v);
    tn_.push_back(n);
    const int t = static_cast<int>(tv_.size()) - 1;
    for (int x : v) vt_[x] = t;
    return t;
  }

  void set(int t, std::array<int, 3> v, std::array<int, 3> n) {
    tv_[t] = v;
    tn_[t] = n;
    for (int x : v) vt_[x] = t;
  }

  void relink(int t, int old_nbr, int new_nbr) {
    if (t < 0) return;
    for (int e = 0; e < 3; ++e)
      if (tn_[t][e] == old_nbr) {
        tn_[t][e] = new_nbr;
        return;
      }
  }

  int local_edge(int t, int a, int b) const {
    for (int e = 0; e < 3; ++e)
      if (tv_[t][e] == a && tv_[t][(e + 1) % 3] == b) return e;
    throw Error(ErrorCode::Internal, "triangulation adjacency is inconsistent");
  }

  int locate(const Vec2& q) const {
    int t = last_ >= 0 ? last_ : 0;
    const std::size_t cap = 4 * tv_.size() + 64;
    for (std::size_t step = 0; step < cap; ++step) {
      bool moved = false;
      for (int k = 0; k < 3; ++k) {
        const int e = (k + static_cast<int>(step)) % 3;
        if (orient2d(pts_[tv_[t][e]], pts_[tv_[t][(e + 1) % 3]], q) < 0.0) {
          t = tn_[t][e];
          moved = true;
          break;
        }
      }
      if (!moved) return t;
      if (t < 0) break;
    }
    for (int s = 0; s < static_cast<int>(tv_.size()); ++s) {
      bool inside = true;
      for (int e = 0; e < 3 && inside; ++e)
        inside = orient2d(pts_[tv_[s][e]], pts_[tv_[s][(e + 1) % 3]], q) >= 0.0;
      if (inside) return s;
    }
    throw Error(ErrorCode::Internal, "point location failed");
  }

  void split_triangle(int t, int p) {
    const auto [a, b, c] = tv_[t];
    const auto [n0, n1, n2] = tn_[t];
    const int t1 = static_cast<int>(tv_.size());
    const int t2 = t1 + 1;
    set(t, {a, b, p}, {n0, t1, t2});
    add({b, c, p}, {n1, t2, t});
    add({c, a, p}, {n2, t, t1});
    relink(n1, t, t1);
    relink(n2, t, t2);
    legalize({{t, 0}, {t1, 0}, {t2, 0}});
  }

  void split_edge(int t, int e, int p) {
    const int u = tn_[t][e];
    const int a = tv_[t][e], b = tv_[t][(e + 1) % 3], c = tv_[t][(e + 2) % 3];
    const int f = local_edge(u, b, a);
    const int d = tv_[u][(f + 2) % 3];
    const int n_bc = tn_[t][(e + 1) % 3], n_ca = tn_[t][(e + 2) % 3];
    const int n_ad = tn_[u][(f + 1) % 3], n_db = tn_[u][(f + 2) % 3];
    const int t1 = static_cast<int>(tv_.size());
    const int u1 = t1 + 1;
    // t0 = (a,p,c), t1 = (p,b,c), u0 = (b,p,d), u1 = (p,a,d)
    set(t, {a, p, c}, {u1, t1, n_ca});
    add({p, b, c}, {u, n_bc, t});
    set(u, {b, p, d}, {t1, u1, n_db});
    add({p, a, d}, {t, n_ad, u});
    relink(n_bc, t, t1);
    relink(n_ad, u, u1);
    legalize({{t, 2}, {t1, 1}, {u, 2}, {u1, 1}});
  }

  // Flip the edge e of t. With t = (a,b,c) and its neighbour (b,a,d), the
  // results are t = (c,a,d) and u = (d,b,c).
  void flip(int t, int e) {
    const int u = tn_[t][e];
    const int a = tv_[t][e], b = tv_[t][(e + 1) % 3], c = tv_[t][(e + 2) % 3];
    const int f = local_edge(u, b, a);
    const int d = tv_[u][(f + 2) % 3];
    const int n_bc = tn_[t][(e + 1) % 3], n_ca = tn_[t][(e + 2) % 3];
    const int n_ad = tn_[u][(f + 1) % 3], n_db = tn_[u][(f + 2) % 3];
    set(t, {c, a, d}, {n_ca, n_ad, u});
    set(u, {d, b, c}, {n_db, n_bc, t});
    relink(n_ad, u, t);
    relink(n_bc, t, u);
  }

  // Each entry's opposite vertex (index e + 2) is the newly inserted point.
  void legalize(std::vector<std::pair<int, int>> stack) {
    while (!stack.empty()) {
      auto [t, e] = stack.back();
      stack.pop_back();
      const int u = tn_[t][e];
      if (u < 0) continue;
      const int a = tv_[t][e], b = tv_[t][(e + 1) % 3], p = tv_[t][(e + 2) % 3];
      const int f = local_edge(u, b, a);
      const int d = tv_[u][(f + 2) % 3];
      if (incircle(pts_[a], pts_[b], pts_[p], pts_[d]) > 0.0) {
        flip(t, e);
        // t = (p,a,d): edge (a,d) is 1; u = (d,b,p): edge (d,b) is 0.
        stack.emplace_back(t, 1);
        stack.emplace_back(u, 0);
      }
    }
  }

  std::pair<int, int> find_edge(int a, int b) const {
    // Walk the fan around a.
    const int start = vt_[a];
    int t = start;
    do {
      int i = 0;
      while (tv_[t][i] != a) ++i;
      if (tv_[t][(i + 1) % 3] == b) return {t, i};
      if (tv_[t][(i + 2) % 3] == b) return {t, (i + 2) % 3};
      t = tn_[t][(i + 2) % 3];
    } while (t >= 0 && t != start);
    // Fan walk hit the hull; fall back to a scan.
    for (int s = 0; s < static_cast<int>(tv_.size()); ++s)
      for (int e = 0; e < 3; ++e)
        if ((tv_[s][e] == a && tv_[s][(e + 1) % 3] == b) || (tv_[s][e] == b && tv_[s][(e + 1) % 3] == a))
          return {s, e};
    return {-1, -1};
  }

  bool has_edge(int a, int b) const { return find_edge(a, b).first >= 0; }

  bool crosses(int a, int b, int c, int d) const {
    if (c == a || c == b || d == a || d == b) return false;
    return orient2d(pts_[a], pts_[b], pts_[c]) * orient2d(pts_[a], pts_[b], pts_[d]) < 0.0 &&
           orient2d(pts_[c], pts_[d], pts_[a]) * orient2d(pts_[c], pts_[d], pts_[b]) < 0.0;
  }

  std::deque<std::pair<int, int>> crossing_edges(int a, int b) const {
    std::deque<std::pair<int, int>> out;
    const Vec2& pa = pts_[a];
    const Vec2& pb = pts_[b];
    // Triangle around a whose wedge contains the direction a -> b.
    int t = vt_[a];
    const int start = t;
    int found = -1;
    do {
      int i = 0;
      while (tv_[t][i] != a) ++i;
      const Vec2& x = pts_[tv_[t][(i + 1) % 3]];
      const Vec2& y = pts_[tv_[t][(i + 2) % 3]];
      if (orient2d(pa, x, pb) > 0.0 && orient2d(pa, y, pb) < 0.0) {
        found = t;
        break;
      }
      t = tn_[t][(i + 2) % 3];
    } while (t >= 0 && t != start);
    if (found < 0) throw Error(ErrorCode::Quality, "boundary segment passes through a mesh vertex");

    t = found;
    int i = 0;
    while (tv_[t][i] != a) ++i;
    int x = tv_[t][(i + 1) % 3], y = tv_[t][(i + 2) % 3];
    int e = (i + 1) % 3;  // edge (x, y)
    for (std::size_t guard = 0; guard < tv_.size(); ++guard) {
      out.emplace_back(x, y);
      const int u = tn_[t][e];
      const int f = local_edge(u, y, x);
      const int z = tv_[u][(f + 2) % 3];
      if (z == b) return out;
      const double oz = orient2d(pa, pb, pts_[z]);
      if (oz == 0.0) throw Error(ErrorCode::Quality, "boundary segment passes through a mesh vertex");
      t = u;
      if (oz > 0.0) {
        // z on the left, like y: next crossing is (x, z)
        y = z;
        e = (f + 1) % 3;
        // u = (y_old, x, z) ordered from f: edge (x, z) is f + 1
      } else {
        x = z;
        e = (f + 2) % 3;
      }
    }
    throw Error(ErrorCode::Internal, "crossing walk did not reach the segment end");
  }

  std::vector<Vec2> pts_;
  int super_ = 0;
  int last_ = -1;
  bool recovered_flips_ = false;
  std::vector<std::array<int, 3>> tv_;
  std::vector<std::array<int, 3>> tn_;
  std::vector<int> vt_;
  std::unordered_set<std::uint64_t> constrained_;
};

}  // namespace

CdtResult constrained_delaunay(const std::vector<Vec2>& points, int loop_size) {
  if (loop_size < 3) throw Error(ErrorCode::Precondition, "boundary loop needs at least three points");
  Triangulator tri(points);
  for (int i = 0; i < static_cast<int>(points.size()); ++i) tri.insert(i);
  for (int i = 0; i < loop_size; ++i) tri.recover(i, (i + 1) % loop_size);
  tri.restore_delaunay();
  return tri.extract();
}

}  // namespace isopar::mesh::detail
