#include "meshgen.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "delaunay.hpp"
#include "quadrature.hpp"

namespace isopar::mesh {

namespace {

using geometry::CurvilinearPolygon;
using detail::incircle;
using detail::orient2d;

std::uint64_t directed_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}
std::uint64_t undirected_key(int a, int b) { return a < b ? directed_key(a, b) : directed_key(b, a); }

struct LoopVertex {
  int arc;
  double s;
};

// Cumulative arc length table with 16-point Gauss per piece and Newton inversion.
class ArcLengthTable {
 public:
  ArcLengthTable(const geometry::BoundaryArc& arc, int pieces) : arc_(arc), pieces_(pieces), cum_(pieces + 1, 0.0) {
    for (int j = 0; j < pieces; ++j) cum_[j + 1] = cum_[j] + length(j / double(pieces), (j + 1) / double(pieces));
  }

  double total() const { return cum_.back(); }

  double parameter_at(double ell) const {
    if (ell <= 0.0) return 0.0;
    if (ell >= total()) return 1.0;
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), ell);
    const int j = std::clamp(static_cast<int>(it - cum_.begin()) - 1, 0, pieces_ - 1);
    const double s0 = j / double(pieces_);
    double s = s0 + (ell - cum_[j]) / norm(arc_.eval(s0).d1);
    for (int it2 = 0; it2 < 30; ++it2) {
      const double residual = cum_[j] + length(s0, s) - ell;
      const double step = residual / norm(arc_.eval(s).d1);
      s = std::clamp(s - step, 0.0, 1.0);
      if (std::abs(step) < 1e-15) break;
    }
    return s;
  }

 private:
  double length(double s0, double s1) const {
    static const GaussLegendre gl = gauss_legendre(16);
    double total = 0.0;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q)
      total += gl.weights[q] * norm(arc_.eval(s0 + (s1 - s0) * gl.nodes[q]).d1);
    return total * (s1 - s0);
  }

  const geometry::BoundaryArc& arc_;
  int pieces_;
  std::vector<double> cum_;
};

double boundary_diameter(const CurvilinearPolygon& poly) {
  std::vector<Vec2> pts;
  for (int a = 0; a < poly.arc_count(); ++a)
    for (int k = 0; k < 256; ++k) pts.push_back(poly.arc_point(a, k / 256.0));
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, distance(pts[i], pts[j]));
  return d;
}

double shape_ratio(const Mesh& m, int t) {
  const double r = triangle_inradius(m, t);
  return r > 0.0 ? triangle_diameter(m, t) / r : std::numeric_limits<double>::infinity();
}

double min_angle(const Mesh& m, int t) {
  const auto& tri = m.triangles[t];
  double best = kPi;
  for (int i = 0; i < 3; ++i) {
    const Vec2 p = m.vertices[tri[i]];
    const Vec2 u = m.vertices[tri[(i + 1) % 3]] - p;
    const Vec2 v = m.vertices[tri[(i + 2) % 3]] - p;
    best = std::min(best, std::atan2(std::abs(cross(u, v)), dot(u, v)));
  }
  return best;
}

// Split every triangle with two boundary edges through the midpoint of its
// interior edge (and the neighbour across that edge).
void split_double_boundary(std::vector<Vec2>& verts, std::vector<std::array<int, 3>>& tris,
                           const std::unordered_map<std::uint64_t, int>& segments) {
  auto is_bnd = [&](int a, int b) { return segments.count(directed_key(a, b)) > 0; };
  for (std::size_t guard = 0; guard < 4 * tris.size() + 16; ++guard) {
    int target = -1, free_edge = -1;
    for (int t = 0; t < static_cast<int>(tris.size()) && target < 0; ++t) {
      int count = 0, free_e = -1;
      for (int e = 0; e < 3; ++e) {
        if (is_bnd(tris[t][e], tris[t][(e + 1) % 3]))
          ++count;
        else
          free_e = e;
      }
      if (count >= 3) throw Error(ErrorCode::Quality, "triangle " + std::to_string(t) + " has three boundary edges");
      if (count == 2) {
        target = t;
        free_edge = free_e;
      }
    }
    if (target < 0) return;
    const int c = tris[target][free_edge];
    const int a = tris[target][(free_edge + 1) % 3];
    const int b = tris[target][(free_edge + 2) % 3];
    const int m = static_cast<int>(verts.size());
    verts.push_back(0.5 * (verts[a] + verts[c]));
    int nbr = -1, f = -1;
    for (int t = 0; t < static_cast<int>(tris.size()) && nbr < 0; ++t)
      for (int e = 0; e < 3; ++e)
        if (tris[t][e] == a && tris[t][(e + 1) % 3] == c) {
          nbr = t;
          f = e;
        }
    if (nbr < 0) throw Error(ErrorCode::Quality, "interior edge of triangle " + std::to_string(target) + " is unshared");
    const int d = tris[nbr][(f + 2) % 3];
    tris[target] = {a, b, m};
    tris.push_back({m, b, c});
    tris[nbr] = {a, m, d};
    tris.push_back({m, c, d});
  }
  throw Error(ErrorCode::Quality, "boundary splitting did not terminate");
}

// Flips interior edges until every one is locally Delaunay. Boundary loop
// edges are never flipped.
void delaunay_flips(const std::vector<Vec2>& verts, std::vector<std::array<int, 3>>& tris,
                    const std::unordered_map<std::uint64_t, int>& segments) {
  for (int pass = 0; pass < 50; ++pass) {
    std::unordered_map<std::uint64_t, std::pair<int, int>> owner;  // directed edge -> (triangle, local edge)
    for (int t = 0; t < static_cast<int>(tris.size()); ++t)
      for (int e = 0; e < 3; ++e) owner[directed_key(tris[t][e], tris[t][(e + 1) % 3])] = {t, e};
    std::vector<char> touched(tris.size(), 0);
    int flips = 0;
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      for (int e = 0; e < 3 && !touched[t]; ++e) {
        const int a = tris[t][e], b = tris[t][(e + 1) % 3], c = tris[t][(e + 2) % 3];
        if (segments.count(directed_key(a, b))) continue;
        const auto it = owner.find(directed_key(b, a));
        if (it == owner.end()) continue;
        const auto [u, f] = it->second;
        if (touched[u]) continue;
        const int d = tris[u][(f + 2) % 3];
        if (incircle(verts[a], verts[b], verts[c], verts[d]) <= 1e-14 * std::pow(distance(verts[a], verts[b]), 4))
          continue;
        if (!(orient2d(verts[c], verts[a], verts[d]) > 0.0 && orient2d(verts[d], verts[b], verts[c]) > 0.0)) continue;
        tris[t] = {c, a, d};
        tris[u] = {d, b, c};
        touched[t] = touched[u] = 1;
        ++flips;
      }
    }
    if (flips == 0) return;
  }
}

// One Laplacian sweep over the free vertices. A move is rejected if it would
// invert an incident triangle or shrink the smallest incident area by 4x.
void laplacian_sweep(std::vector<Vec2>& verts, const std::vector<std::array<int, 3>>& tris,
                     const std::vector<char>& fixed) {
  const int nv = static_cast<int>(verts.size());
  std::vector<std::set<int>> nbrs(nv);
  std::vector<std::vector<int>> incident(nv);
  for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
    for (int i = 0; i < 3; ++i) {
      incident[tris[t][i]].push_back(t);
      nbrs[tris[t][i]].insert(tris[t][(i + 1) % 3]);
      nbrs[tris[t][i]].insert(tris[t][(i + 2) % 3]);
    }
  }
  auto area = [&](int t) { return orient2d(verts[tris[t][0]], verts[tris[t][1]], verts[tris[t][2]]); };
  for (int v = 0; v < nv; ++v) {
    if (fixed[v] || nbrs[v].empty()) continue;
    Vec2 avg{0, 0};
    for (int w : nbrs[v]) avg += verts[w];
    avg = avg / static_cast<double>(nbrs[v].size());
    const Vec2 old = verts[v];
    double old_min = std::numeric_limits<double>::infinity();
    for (int t : incident[v]) old_min = std::min(old_min, area(t));
    verts[v] = avg;
    double new_min = std::numeric_limits<double>::infinity();
    for (int t : incident[v]) new_min = std::min(new_min, area(t));
    if (!(new_min > 0.0) || new_min < 0.25 * old_min) verts[v] = old;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

double triangle_area(const Mesh& m, int t) {
  const auto& tri = m.triangles[t];
  return 0.5 * detail::orient2d(m.vertices[tri[0]], m.vertices[tri[1]], m.vertices[tri[2]]);
}

double triangle_diameter(const Mesh& m, int t) {
  const auto& tri = m.triangles[t];
  const Vec2 a = m.vertices[tri[0]], b = m.vertices[tri[1]], c = m.vertices[tri[2]];
  return std::max({distance(a, b), distance(b, c), distance(c, a)});
}

double triangle_inradius(const Mesh& m, int t) {
  const auto& tri = m.triangles[t];
  const Vec2 a = m.vertices[tri[0]], b = m.vertices[tri[1]], c = m.vertices[tri[2]];
  const double perimeter = distance(a, b) + distance(b, c) + distance(c, a);
  return 2.0 * std::abs(triangle_area(m, t)) / perimeter;
}

void Mesh::update_size() {
  h = 0.0;
  for (int t = 0; t < triangle_count(); ++t) h = std::max(h, triangle_diameter(*this, t));
}

Mesh generate(const CurvilinearPolygon& polygon, double h_target, const MeshOptions& options) {
  const double diam = boundary_diameter(polygon);
  if (!(h_target > 0.0) || h_target >= 0.5 * diam)
    throw Error(ErrorCode::Precondition, "mesh size " + std::to_string(h_target) +
                                             " must be positive and below half the domain diameter " +
                                             std::to_string(diam));

  // Boundary loop at arc-length spacing ~ h_target. Corners are arc endpoints.
  std::vector<Vec2> points;
  std::vector<LoopVertex> loop;
  const int min_segments = polygon.arc_count() == 1 ? 3 : 2;
  for (int a = 0; a < polygon.arc_count(); ++a) {
    const ArcLengthTable table(polygon.arc(a), 64);
    const int n = std::max<int>(min_segments, static_cast<int>(std::lround(table.total() / h_target)));
    for (int k = 0; k < n; ++k) {
      const double s = k == 0 ? 0.0 : table.parameter_at(table.total() * k / n);
      points.push_back(polygon.arc_point(a, s));
      loop.push_back({a, s});
    }
  }
  const int loop_size = static_cast<int>(points.size());
  std::unordered_map<std::uint64_t, int> segments;  // directed loop edge -> loop index
  for (int k = 0; k < loop_size; ++k) segments[directed_key(k, (k + 1) % loop_size)] = k;

  // Jittered triangular lattice, kept away from the boundary.
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> jit(-options.jitter * h_target, options.jitter * h_target);
  const auto& bb = polygon.bounding_box();
  const double dy = h_target * std::sqrt(3.0) / 2.0;
  const int rows = static_cast<int>(std::ceil((bb.hi.y - bb.lo.y) / dy)) + 1;
  const int cols = static_cast<int>(std::ceil((bb.hi.x - bb.lo.x) / h_target)) + 2;
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < cols; ++i) {
      const double jx = jit(rng), jy = jit(rng);
      const Vec2 p{bb.lo.x + (i + (j % 2 ? 0.5 : 0.0)) * h_target + jx, bb.lo.y + j * dy + jy};
      if (!polygon.contains(p)) continue;
      if (polygon.closest_boundary(p).distance < 0.55 * h_target) continue;
      points.push_back(p);
    }
  }

  auto cdt = detail::constrained_delaunay(points, loop_size);
  std::vector<std::array<int, 3>> tris = std::move(cdt.triangles);
  split_double_boundary(points, tris, segments);

  std::vector<char> fixed(points.size(), 0);
  std::fill(fixed.begin(), fixed.begin() + loop_size, 1);
  for (int sweep = 0; sweep < options.smoothing_sweeps; ++sweep) {
    laplacian_sweep(points, tris, fixed);
    delaunay_flips(points, tris, segments);
  }

  // Drop unused points and renumber (loop vertices keep their indices).
  std::vector<int> used(points.size(), 0);
  for (const auto& t : tris)
    for (int v : t) used[v] = 1;
  std::vector<int> remap(points.size(), -1);
  Mesh mesh;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!used[i] && static_cast<int>(i) >= loop_size) continue;
    remap[i] = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(points[i]);
  }
  for (const auto& t : tris) mesh.triangles.push_back({remap[t[0]], remap[t[1]], remap[t[2]]});
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    for (int e = 0; e < 3; ++e) {
      const auto it = segments.find(directed_key(mesh.triangles[t][e], mesh.triangles[t][(e + 1) % 3]));
      if (it == segments.end()) continue;
      const int k = it->second;
      const LoopVertex& va = loop[k];
      const LoopVertex& vb = loop[(k + 1) % loop_size];
      mesh.boundary.push_back({t, e, va.arc, va.s, vb.arc == va.arc && vb.s > va.s ? vb.s : 1.0});
    }
  }
  std::sort(mesh.boundary.begin(), mesh.boundary.end(), [](const BoundaryEdge& x, const BoundaryEdge& y) {
    return std::tie(x.arc, x.s_a) < std::tie(y.arc, y.s_a);
  });
  mesh.update_size();

  const MeshReport report = validate(mesh, &polygon, options.max_shape_ratio);
  if (!report.ok) {
    const Violation& v = report.violations.front();
    throw Error(ErrorCode::Quality, "mesh quality check failed: " + v.kind + " at triangle " +
                                        std::to_string(v.element) + " (" + v.detail + ")");
  }
  if (mesh.h < 0.5 * h_target || mesh.h > 2.0 * h_target)
    throw Error(ErrorCode::Quality, "mesh size " + std::to_string(mesh.h) + " outside [h/2, 2h] for h = " +
                                        std::to_string(h_target));
  return mesh;
}

MeshReport validate(const Mesh& mesh, const CurvilinearPolygon* polygon, double max_shape_ratio) {
  MeshReport r;
  r.vertices = mesh.vertex_count();
  r.triangles = mesh.triangle_count();
  r.boundary_edges = static_cast<int>(mesh.boundary.size());
  auto violate = [&](std::string kind, int element, std::string detail) {
    r.ok = false;
    r.violations.push_back({std::move(kind), element, std::move(detail)});
  };

  double hmin = std::numeric_limits<double>::infinity(), hmax = 0.0;
  double rmin = std::numeric_limits<double>::infinity();
  double min_ang = kPi;
  int worst = -1;
  for (int t = 0; t < r.triangles; ++t) {
    const auto& tri = mesh.triangles[t];
    bool indices_ok = true;
    for (int v : tri) indices_ok = indices_ok && v >= 0 && v < r.vertices;
    if (!indices_ok || tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      violate("bad-indices", t, "vertex index out of range or repeated");
      continue;
    }
    if (!(triangle_area(mesh, t) > 0.0)) {
      violate("inverted", t, "non-positive signed area");
      continue;
    }
    const double d = triangle_diameter(mesh, t);
    hmin = std::min(hmin, d);
    hmax = std::max(hmax, d);
    rmin = std::min(rmin, triangle_inradius(mesh, t));
    min_ang = std::min(min_ang, min_angle(mesh, t));
    const double ratio = shape_ratio(mesh, t);
    if (ratio > r.max_shape_ratio) {
      r.max_shape_ratio = ratio;
      worst = t;
    }
  }
  r.h_max = hmax;
  r.h_min = hmin;
  r.min_angle_deg = min_ang * 180.0 / kPi;
  r.quasi_uniformity = rmin > 0.0 ? hmax / rmin : std::numeric_limits<double>::infinity();
  if (worst >= 0 && r.max_shape_ratio > max_shape_ratio)
    violate("quasi-uniformity", worst, "diameter/inradius " + std::to_string(r.max_shape_ratio) + " exceeds " +
                                           std::to_string(max_shape_ratio));

  // Edge usage and boundary bindings.
  std::unordered_map<std::uint64_t, std::vector<int>> edge_tris;
  for (int t = 0; t < r.triangles; ++t)
    for (int e = 0; e < 3; ++e) edge_tris[undirected_key(mesh.triangles[t][e], mesh.triangles[t][(e + 1) % 3])].push_back(t);
  r.edges = static_cast<int>(edge_tris.size());
  r.euler_characteristic = r.vertices - r.edges + r.triangles;

  std::unordered_map<std::uint64_t, int> bound;
  std::vector<int> per_triangle(r.triangles, 0);
  for (const auto& be : mesh.boundary) {
    if (be.triangle < 0 || be.triangle >= r.triangles || be.local_edge < 0 || be.local_edge > 2) {
      violate("bad-boundary-record", be.triangle, "triangle or local edge out of range");
      continue;
    }
    const auto& tri = mesh.triangles[be.triangle];
    const int a = tri[be.local_edge], b = tri[(be.local_edge + 1) % 3];
    bound[undirected_key(a, b)] += 1;
    if (++per_triangle[be.triangle] > 1) violate("two-boundary-edges", be.triangle, "more than one boundary edge");
    if (polygon) {
      if (be.arc < 0 || be.arc >= polygon->arc_count() || !(be.s_a >= 0.0 && be.s_b <= 1.0 && be.s_a < be.s_b)) {
        violate("bad-arc-binding", be.triangle, "arc id or parameter interval invalid");
        continue;
      }
      const double ea = distance(mesh.vertices[a], polygon->arc_point(be.arc, be.s_a));
      const double eb = distance(mesh.vertices[b], polygon->arc_point(be.arc, be.s_b));
      if (ea > 1e-10 || eb > 1e-10)
        violate("off-arc-vertex", be.triangle, "endpoint mismatch " + std::to_string(std::max(ea, eb)));
    }
  }
  for (const auto& [key, ts] : edge_tris) {
    const bool is_boundary = bound.count(key) > 0;
    if (ts.size() > 2) violate("non-manifold-edge", ts.front(), "edge shared by more than two triangles");
    else if (ts.size() == 2 && is_boundary) violate("conformity", ts.front(), "boundary edge shared by two triangles");
    else if (ts.size() == 1 && !is_boundary) violate("conformity", ts.front(), "dangling interior edge");
  }
  for (const auto& [key, count] : bound)
    if (count > 1) violate("duplicate-boundary-record", -1, "edge bound twice");

  if (polygon) {
    for (const auto& corner : polygon->corners()) {
      int found = -1;
      for (int v = 0; v < r.vertices && found < 0; ++v)
        if (distance(mesh.vertices[v], corner.point) <= 1e-10) found = v;
      if (found < 0) {
        violate("missing-corner", -1, "no vertex at a polygon corner");
        continue;
      }
      std::set<int> owners, arcs;
      for (const auto& be : mesh.boundary) {
        const auto& tri = mesh.triangles[be.triangle];
        if (tri[be.local_edge] == found || tri[(be.local_edge + 1) % 3] == found) {
          owners.insert(be.triangle);
          arcs.insert(be.arc);
        }
      }
      if (owners.size() != 2 || arcs.size() != 2)
        violate("corner-binding", owners.empty() ? -1 : *owners.begin(),
                "corner vertex must join two triangles bound to different arcs");
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Text IO

std::string format_mesh(const Mesh& mesh) {
  std::ostringstream os;
  os.precision(17);
  os << "meshv1 " << mesh.vertices.size() << ' ' << mesh.triangles.size() << ' ' << mesh.boundary.size() << '\n';
  for (const auto& v : mesh.vertices) os << v.x << ' ' << v.y << '\n';
  for (const auto& t : mesh.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& b : mesh.boundary)
    os << b.triangle << ' ' << b.local_edge << ' ' << b.arc << ' ' << b.s_a << ' ' << b.s_b << '\n';
  return os.str();
}

void write_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write mesh file '" + path + "'");
  out << format_mesh(mesh);
  if (!out) throw Error(ErrorCode::Io, "failed writing mesh file '" + path + "'");
}

namespace {

class LineReader {
 public:
  explicit LineReader(const std::string& text) : in_(text) {}

  std::vector<std::string> next(const char* what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++lineno_;
      std::istringstream ls(line);
      std::vector<std::string> tok;
      for (std::string t; ls >> t;) tok.push_back(t);
      if (!tok.empty()) return tok;
    }
    throw Error(ErrorCode::Parse, "line " + std::to_string(lineno_ + 1) + ": unexpected end of file, expected " + what);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::Parse, "line " + std::to_string(lineno_) + ": " + msg);
  }

  template <class T>
  T number(const std::string& tok) const {
    T value{};
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) fail("bad number '" + tok + "'");
    return value;
  }

  int lineno() const { return lineno_; }

 private:
  std::istringstream in_;
  int lineno_ = 0;
};

}  // namespace

Mesh parse_mesh(const std::string& text) {
  LineReader rd(text);
  std::vector<std::string> head;
  try {
    head = rd.next("header");
  } catch (const Error&) {
    throw Error(ErrorCode::Parse, "line 1: missing header");
  }
  if (head.size() != 4 || head[0] != "meshv1") rd.fail("missing header 'meshv1 <nv> <nt> <nb>'");
  const long nv = rd.number<long>(head[1]), nt = rd.number<long>(head[2]), nb = rd.number<long>(head[3]);
  if (nv < 0 || nt < 0 || nb < 0) rd.fail("negative count in header");
  Mesh m;
  m.vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    const auto tok = rd.next("vertex line");
    if (tok.size() != 2) rd.fail("vertex line needs 2 coordinates, got " + std::to_string(tok.size()));
    m.vertices.push_back({rd.number<double>(tok[0]), rd.number<double>(tok[1])});
  }
  for (long i = 0; i < nt; ++i) {
    const auto tok = rd.next("triangle line");
    if (tok.size() != 3) rd.fail("triangle line needs 3 vertex indices, got " + std::to_string(tok.size()));
    std::array<int, 3> t{};
    for (int k = 0; k < 3; ++k) {
      t[k] = rd.number<int>(tok[k]);
      if (t[k] < 0 || t[k] >= nv) rd.fail("vertex index " + tok[k] + " out of range");
    }
    m.triangles.push_back(t);
  }
  for (long i = 0; i < nb; ++i) {
    const auto tok = rd.next("boundary line");
    if (tok.size() != 5) rd.fail("boundary line needs 't e arc s_a s_b'");
    BoundaryEdge b;
    b.triangle = rd.number<int>(tok[0]);
    b.local_edge = rd.number<int>(tok[1]);
    b.arc = rd.number<int>(tok[2]);
    b.s_a = rd.number<double>(tok[3]);
    b.s_b = rd.number<double>(tok[4]);
    if (b.triangle < 0 || b.triangle >= nt || b.local_edge < 0 || b.local_edge > 2)
      rd.fail("boundary record refers to a missing triangle edge");
    m.boundary.push_back(b);
  }
  m.update_size();
  return m;
}

Mesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open mesh file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_mesh(ss.str());
}

}  // namespace isopar::mesh
