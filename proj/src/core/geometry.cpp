#include "geometry.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "quadrature.hpp"

namespace isopar::geometry {

namespace {

constexpr double kEndpointTol = 1e-12;
constexpr double kSmoothJunctionTol = 1e-9;
constexpr double kCornerMargin = 1e-6;

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + ab * t);
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Arcs

CircleArc::CircleArc(Vec2 center, double radius, double theta0, double theta1)
    : center_(center), radius_(radius), theta0_(theta0), theta1_(theta1) {
  if (!(radius > 0.0)) throw Error(ErrorCode::Construction, "circle-arc: radius must be positive");
  if (theta0 == theta1) throw Error(ErrorCode::Construction, "circle-arc: empty angle range");
}

ArcSample CircleArc::eval(double s) const {
  const double dt = theta1_ - theta0_;
  const double t = theta0_ + dt * s;
  const double c = std::cos(t), sn = std::sin(t);
  return {center_ + Vec2{c, sn} * radius_, Vec2{-sn, c} * (radius_ * dt), Vec2{-c, -sn} * (radius_ * dt * dt)};
}

std::string CircleArc::describe() const {
  return "circle-arc " + fmt_double(center_.x) + " " + fmt_double(center_.y) + " " + fmt_double(radius_) + " " +
         fmt_double(theta0_) + " " + fmt_double(theta1_);
}

PolarArc::PolarArc(Vec2 center, double theta0, double theta1, std::vector<double> coefficients)
    : center_(center), theta0_(theta0), theta1_(theta1), coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) throw Error(ErrorCode::Construction, "polar-arc: empty coefficient list");
  if (coeffs_.size() % 2 == 0) coeffs_.push_back(0.0);  // pad a dangling cosine term
  if (theta0 == theta1) throw Error(ErrorCode::Construction, "polar-arc: empty angle range");
}

ArcSample PolarArc::eval(double s) const {
  const double dt = theta1_ - theta0_;
  const double t = theta0_ + dt * s;
  double rho = coeffs_[0], drho = 0.0, ddrho = 0.0;
  const int nk = static_cast<int>(coeffs_.size() - 1) / 2;
  for (int k = 1; k <= nk; ++k) {
    const double a = coeffs_[2 * k - 1], b = coeffs_[2 * k];
    const double ck = std::cos(k * t), sk = std::sin(k * t);
    rho += a * ck + b * sk;
    drho += k * (-a * sk + b * ck);
    ddrho += -static_cast<double>(k * k) * (a * ck + b * sk);
  }
  const Vec2 e{std::cos(t), std::sin(t)};
  const Vec2 et{-e.y, e.x};
  const Vec2 p = center_ + e * rho;
  const Vec2 d1 = e * drho + et * rho;
  const Vec2 d2 = e * (ddrho - rho) + et * (2.0 * drho);
  return {p, d1 * dt, d2 * (dt * dt)};
}

std::string PolarArc::describe() const {
  std::string out = "polar-arc " + fmt_double(center_.x) + " " + fmt_double(center_.y) + " " + fmt_double(theta0_) +
                    " " + fmt_double(theta1_);
  for (double c : coeffs_) out += " " + fmt_double(c);
  return out;
}

// ---------------------------------------------------------------------------
// Polygon

CurvilinearPolygon::CurvilinearPolygon(std::vector<std::shared_ptr<const BoundaryArc>> arcs, PolygonOptions options)
    : arcs_(std::move(arcs)) {
  if (arcs_.empty()) throw Error(ErrorCode::Construction, "polygon needs at least one arc");
  const int n = arc_count();

  for (int i = 0; i < n; ++i) {
    for (int k = 0; k <= 256; ++k) {
      const double speed = norm(arcs_[i]->eval(k / 256.0).d1);
      if (!(speed > 0.0))
        throw Error(ErrorCode::Construction, "arc " + std::to_string(i) + " is not regular at s=" +
                                                 std::to_string(k / 256.0));
    }
  }

  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const ArcSample end = arcs_[i]->eval(1.0);
    const ArcSample start = arcs_[j]->eval(0.0);
    if (distance(end.p, start.p) > kEndpointTol)
      throw Error(ErrorCode::Construction,
                  "arc " + std::to_string(i) + " does not end where arc " + std::to_string(j) + " starts");
    const Vec2 tin = end.d1 / norm(end.d1);
    const Vec2 tout = start.d1 / norm(start.d1);
    const double turn = std::atan2(cross(tin, tout), dot(tin, tout));
    Junction jn;
    jn.point = start.p;
    jn.before = i;
    jn.after = j;
    if (std::abs(turn) <= kSmoothJunctionTol) {
      jn.angle = kPi;
      jn.is_corner = false;
    } else {
      jn.angle = kPi - turn;
      jn.is_corner = true;
      if (jn.angle <= 0.0)
        throw Error(ErrorCode::Construction, "cusp at junction " + std::to_string(i));
      if (options.require_convex_corners && jn.angle >= kPi - kCornerMargin)
        throw Error(ErrorCode::Construction, "corner opening " + std::to_string(jn.angle) + " at junction " +
                                                 std::to_string(i) + " is not below pi");
    }
    junctions_.push_back(jn);
  }

  build_polyline();

  double area = 0.0;
  for (std::size_t i = 0; i + 1 < poly_.size(); ++i) area += cross(poly_[i], poly_[i + 1]);
  area_ = 0.5 * area;
  if (!(area_ > 0.0)) throw Error(ErrorCode::Construction, "boundary is not positively oriented");
}

std::vector<Junction> CurvilinearPolygon::corners() const {
  std::vector<Junction> out;
  for (const auto& j : junctions_)
    if (j.is_corner) out.push_back(j);
  return out;
}

void CurvilinearPolygon::build_polyline() {
  Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  Vec2 hi = -lo;
  for (const auto& arc : arcs_) {
    for (int k = 0; k <= 2048; ++k) {
      const Vec2 p = arc->eval(k / 2048.0).p;
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
  }
  bbox_ = {lo, hi};
  const double tol = 1e-10 * bbox_.diameter();

  poly_.clear();
  for (const auto& arc : arcs_) {
    // Depth-first subdivision keeps the output ordered in s.
    struct Span {
      double s0, s1;
      Vec2 p0, p1;
    };
    std::vector<Span> stack;
    constexpr int kSeeds = 64;
    for (int k = kSeeds - 1; k >= 0; --k) {
      const double s0 = static_cast<double>(k) / kSeeds, s1 = static_cast<double>(k + 1) / kSeeds;
      stack.push_back({s0, s1, arc->eval(s0).p, arc->eval(s1).p});
    }
    poly_.push_back(arc->eval(0.0).p);
    while (!stack.empty()) {
      const Span sp = stack.back();
      stack.pop_back();
      const double sm = 0.5 * (sp.s0 + sp.s1);
      const Vec2 pm = arc->eval(sm).p;
      if (point_segment_distance(pm, sp.p0, sp.p1) > tol && sp.s1 - sp.s0 > 1e-9) {
        stack.push_back({sm, sp.s1, pm, sp.p1});
        stack.push_back({sp.s0, sm, sp.p0, pm});
      } else {
        poly_.push_back(sp.p1);
      }
    }
  }
  poly_.push_back(poly_.front());

  const std::size_t nseg = poly_.size() - 1;
  const std::size_t nslab = std::clamp<std::size_t>(nseg / 32, 1, 1 << 16);
  slab_y0_ = bbox_.lo.y;
  slab_dy_ = std::max(bbox_.hi.y - bbox_.lo.y, 1e-300) / static_cast<double>(nslab);
  slabs_.assign(nslab, {});
  auto slab_of = [&](double y) {
    const double k = std::floor((y - slab_y0_) / slab_dy_);
    return static_cast<long>(std::clamp(k, 0.0, static_cast<double>(nslab - 1)));
  };
  for (std::size_t i = 0; i < nseg; ++i) {
    const long k0 = slab_of(std::min(poly_[i].y, poly_[i + 1].y));
    const long k1 = slab_of(std::max(poly_[i].y, poly_[i + 1].y));
    for (long k = k0; k <= k1; ++k) slabs_[k].push_back(static_cast<int>(i));
  }
}

Vec2 CurvilinearPolygon::arc_point(int arc, double s) const {
  if (arc < 0 || arc >= arc_count()) throw Error(ErrorCode::Domain, "arc id out of range");
  if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorCode::Domain, "arc parameter outside [0,1]: " + fmt_double(s));
  return arcs_[arc]->eval(s).p;
}

Vec2 CurvilinearPolygon::outward_normal(int arc, double s) const {
  const Vec2 t = arcs_.at(arc)->eval(s).d1;
  return perp(t) / norm(t);
}

ClosestPoint CurvilinearPolygon::closest_boundary(const Vec2& p) const {
  constexpr int kSamples = 64;
  ClosestPoint best;
  best.distance = std::numeric_limits<double>::infinity();

  auto consider = [&](int arc, double s) {
    const Vec2 q = arcs_[arc]->eval(s).p;
    const double d = distance(p, q);
    if (d < best.distance - 1e-12 ||
        (d <= best.distance + 1e-12 && (arc < best.arc || (arc == best.arc && s < best.s)))) {
      best = {arc, s, d, q};
    }
  };

  for (int a = 0; a < arc_count(); ++a) {
    const BoundaryArc& arc = *arcs_[a];
    std::array<double, kSamples> dist{};
    for (int k = 0; k < kSamples; ++k) dist[k] = distance(p, arc.eval(k / (kSamples - 1.0)).p);
    consider(a, 0.0);
    consider(a, 1.0);

    // g(s) = <gamma(s) - p, gamma'(s)> increases through a minimizer.
    auto g = [&](double s) {
      const ArcSample e = arc.eval(s);
      return dot(e.p - p, e.d1);
    };
    for (int k = 0; k < kSamples; ++k) {
      const bool left_ok = k == 0 || dist[k] <= dist[k - 1];
      const bool right_ok = k == kSamples - 1 || dist[k] <= dist[k + 1];
      if (!(left_ok && right_ok)) continue;
      const double sk = k / (kSamples - 1.0);
      double lo = k > 0 ? (k - 1) / (kSamples - 1.0) : 0.0;
      double hi = k < kSamples - 1 ? (k + 1) / (kSamples - 1.0) : 1.0;
      if (!(g(lo) <= 0.0 && g(hi) >= 0.0)) continue;  // endpoint minimizer, already considered
      // Safeguarded Newton on g within [lo, hi].
      double s = sk;
      for (int it = 0; it < 100; ++it) {
        const ArcSample e = arc.eval(s);
        const double gs = dot(e.p - p, e.d1);
        if (gs == 0.0) break;
        if (gs < 0.0)
          lo = s;
        else
          hi = s;
        const double dg = dot(e.d1, e.d1) + dot(e.p - p, e.d2);
        double next = dg > 0.0 ? s - gs / dg : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const bool done = std::abs(next - s) <= 4e-16 || hi - lo <= 4e-16;
        s = next;
        if (done) break;
      }
      consider(a, std::clamp(s, 0.0, 1.0));
    }
  }
  return best;
}

double CurvilinearPolygon::signed_distance(const Vec2& p) const {
  const double d = closest_boundary(p).distance;
  return contains(p) ? -d : d;
}

bool CurvilinearPolygon::contains(const Vec2& p) const {
  const double diam = bbox_.diameter();
  if (p.x <= bbox_.lo.x - 1e-12 || p.x >= bbox_.hi.x + 1e-12 || p.y <= bbox_.lo.y - 1e-12 ||
      p.y >= bbox_.hi.y + 1e-12)
    return false;
  const long nslab = static_cast<long>(slabs_.size());
  const long k = std::clamp(static_cast<long>(std::floor((p.y - slab_y0_) / slab_dy_)), 0L, nslab - 1);

  bool inside = false;
  for (int i : slabs_[k]) {
    const Vec2& a = poly_[i];
    const Vec2& b = poly_[i + 1];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xi = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (xi > p.x) inside = !inside;
    }
  }

  const double near_band = 1e-7 * diam;
  double dmin = std::numeric_limits<double>::infinity();
  for (long kk = std::max(0L, k - 1); kk <= std::min(nslab - 1, k + 1); ++kk)
    for (int i : slabs_[kk]) dmin = std::min(dmin, point_segment_distance(p, poly_[i], poly_[i + 1]));
  if (dmin < near_band) {
    const ClosestPoint cp = closest_boundary(p);
    if (cp.distance <= 1e-12) return false;
    if (cp.s > 1e-9 && cp.s < 1.0 - 1e-9) return dot(p - cp.point, outward_normal(cp.arc, cp.s)) < 0.0;
  }
  return inside;
}

double CurvilinearPolygon::arc_length(int arc, double s0, double s1) const {
  static const GaussLegendre gl = gauss_legendre(16);
  const BoundaryArc& a = *arcs_.at(arc);
  constexpr int kPieces = 32;
  double total = 0.0;
  const double ds = (s1 - s0) / kPieces;
  for (int p = 0; p < kPieces; ++p) {
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double s = s0 + ds * (p + gl.nodes[q]);
      total += gl.weights[q] * norm(a.eval(s).d1) * ds;
    }
  }
  return total;
}

double CurvilinearPolygon::inradius_estimate() const {
  constexpr int kGrid = 48;
  double best = 0.0;
  Vec2 best_p = 0.5 * (bbox_.lo + bbox_.hi);
  const Vec2 span = bbox_.hi - bbox_.lo;
  for (int i = 1; i < kGrid; ++i) {
    for (int j = 1; j < kGrid; ++j) {
      const Vec2 p{bbox_.lo.x + span.x * i / kGrid, bbox_.lo.y + span.y * j / kGrid};
      if (!contains(p)) continue;
      const double d = closest_boundary(p).distance;
      if (d > best) {
        best = d;
        best_p = p;
      }
    }
  }
  // Local pattern search around the best grid point.
  double step = std::max(span.x, span.y) / kGrid;
  while (step > 1e-6 * bbox_.diameter()) {
    bool moved = false;
    for (const Vec2 dir : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}}) {
      const Vec2 q = best_p + dir * step;
      if (!contains(q)) continue;
      const double d = closest_boundary(q).distance;
      if (d > best) {
        best = d;
        best_p = q;
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Registry

namespace {

std::shared_ptr<const CurvilinearPolygon> make_polygon(std::vector<std::shared_ptr<const BoundaryArc>> arcs) {
  return std::make_shared<const CurvilinearPolygon>(std::move(arcs));
}

DomainEntry disk_entry() {
  DomainEntry e;
  e.name = "disk";
  e.polygon = make_polygon({std::make_shared<CircleArc>(Vec2{0, 0}, 1.0, 0.0, 2.0 * kPi)});
  Manufactured m;
  m.u = [](const Vec2& p) { return (1.0 - p.x * p.x - p.y * p.y) * std::exp(p.x); };
  m.grad_u = [](const Vec2& p) {
    const double q = 1.0 - p.x * p.x - p.y * p.y;
    const double ex = std::exp(p.x);
    return Vec2{(q - 2.0 * p.x) * ex, -2.0 * p.y * ex};
  };
  m.f = [](const Vec2& p) { return (3.0 + 4.0 * p.x + p.x * p.x + p.y * p.y) * std::exp(p.x); };
  e.solution = std::move(m);
  return e;
}

DomainEntry lens_entry() {
  DomainEntry e;
  e.name = "lens";
  const double alpha = std::acos(0.4);
  // Right arc belongs to the circle centred at (-0.4, 0), left arc to (0.4, 0).
  e.polygon = make_polygon({std::make_shared<CircleArc>(Vec2{-0.4, 0}, 1.0, -alpha, alpha),
                            std::make_shared<CircleArc>(Vec2{0.4, 0}, 1.0, kPi - alpha, kPi + alpha)});
  Manufactured m;
  m.u = [](const Vec2& p) {
    const double q1 = 1.0 - (p.x - 0.4) * (p.x - 0.4) - p.y * p.y;
    const double q2 = 1.0 - (p.x + 0.4) * (p.x + 0.4) - p.y * p.y;
    return q1 * q2;
  };
  m.grad_u = [](const Vec2& p) {
    const double q1 = 1.0 - (p.x - 0.4) * (p.x - 0.4) - p.y * p.y;
    const double q2 = 1.0 - (p.x + 0.4) * (p.x + 0.4) - p.y * p.y;
    const Vec2 g1{-2.0 * (p.x - 0.4), -2.0 * p.y};
    const Vec2 g2{-2.0 * (p.x + 0.4), -2.0 * p.y};
    return g1 * q2 + g2 * q1;
  };
  m.f = [](const Vec2& p) {
    const double q1 = 1.0 - (p.x - 0.4) * (p.x - 0.4) - p.y * p.y;
    const double q2 = 1.0 - (p.x + 0.4) * (p.x + 0.4) - p.y * p.y;
    return 4.0 * (q1 + q2) - 8.0 * (p.x * p.x + p.y * p.y - 0.16);
  };
  e.solution = std::move(m);
  return e;
}

DomainEntry flower_entry() {
  DomainEntry e;
  e.name = "flower";
  std::vector<double> coeffs(11, 0.0);
  coeffs[0] = 1.0;
  coeffs[9] = 0.2;  // a5
  e.polygon = make_polygon({std::make_shared<PolarArc>(Vec2{0, 0}, 0.0, 2.0 * kPi, coeffs)});
  return e;
}

double parse_number(const std::string& tok, int line) {
  std::string t = tok;
  double scale = 1.0;
  if (t.size() >= 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
    scale = kPi;
    t.resize(t.size() - 2);
    if (t.empty() || t == "+") t = "1";
    if (t == "-") t = "-1";
    if (!t.empty() && t.back() == '*') t.pop_back();
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(tok);
    return v * scale;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ": bad number '" + tok + "'");
  }
}

}  // namespace

std::vector<std::string> stock_domain_names() { return {"disk", "lens", "flower"}; }

DomainEntry make_domain(const std::string& name) {
  if (name == "disk") return disk_entry();
  if (name == "lens") return lens_entry();
  if (name == "flower") return flower_entry();
  throw Error(ErrorCode::Domain, "unknown domain '" + name + "'");
}

DomainEntry parse_domain_text(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<std::shared_ptr<const BoundaryArc>> arcs;
  DomainEntry entry;
  entry.name = name;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    std::vector<double> v;
    for (std::size_t i = 1; i < tok.size(); ++i)
      if (tok[0] != "name") v.push_back(parse_number(tok[i], lineno));
    if (tok[0] == "name") {
      if (tok.size() != 2) throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": name takes one word");
      entry.name = tok[1];
    } else if (tok[0] == "circle-arc") {
      if (v.size() != 5)
        throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": circle-arc needs cx cy radius t0 t1");
      arcs.push_back(std::make_shared<CircleArc>(Vec2{v[0], v[1]}, v[2], v[3], v[4]));
    } else if (tok[0] == "polar-arc") {
      if (v.size() < 5)
        throw Error(ErrorCode::Parse,
                    "line " + std::to_string(lineno) + ": polar-arc needs cx cy t0 t1 a0 [a1 b1 ...]");
      arcs.push_back(std::make_shared<PolarArc>(Vec2{v[0], v[1]}, v[2], v[3], std::vector<double>(v.begin() + 4, v.end())));
    } else {
      throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": unknown keyword '" + tok[0] + "'");
    }
  }
  if (arcs.empty()) throw Error(ErrorCode::Parse, "domain file has no arcs");
  entry.polygon = make_polygon(std::move(arcs));
  return entry;
}

DomainEntry load_domain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open domain file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_domain_text(ss.str(), path);
}

DomainEntry resolve_domain(const std::string& name_or_path) {
  for (const auto& n : stock_domain_names())
    if (n == name_or_path) return make_domain(n);
  return load_domain_file(name_or_path);
}

ManufacturedCheck check_manufactured(const DomainEntry& entry) {
  ManufacturedCheck out;
  if (!entry.solution) return out;
  const auto& poly = *entry.polygon;
  const auto& sol = *entry.solution;
  const int per_arc = 512 / poly.arc_count();
  for (int a = 0; a < poly.arc_count(); ++a)
    for (int k = 0; k < per_arc; ++k)
      out.max_boundary_u = std::max(out.max_boundary_u, std::abs(sol.u(poly.arc_point(a, (k + 0.5) / per_arc))));

  std::mt19937_64 rng(7);
  const auto& bb = poly.bounding_box();
  std::uniform_real_distribution<double> ux(bb.lo.x, bb.hi.x), uy(bb.lo.y, bb.hi.y);
  const double step = 1e-3;
  int found = 0;
  while (found < 64) {
    const Vec2 p{ux(rng), uy(rng)};
    if (!poly.contains(p) || poly.closest_boundary(p).distance < 4.0 * step) continue;
    ++found;
    const double c = sol.u(p);
    const double lap = (sol.u(p + Vec2{step, 0}) + sol.u(p - Vec2{step, 0}) + sol.u(p + Vec2{0, step}) +
                        sol.u(p - Vec2{0, step}) - 4.0 * c) /
                       (step * step);
    const double fv = sol.f(p);
    out.max_laplacian_rel_error =
        std::max(out.max_laplacian_rel_error, std::abs(lap + fv) / std::max(std::abs(fv), 1.0));
  }
  out.ok = out.max_boundary_u <= 1e-10 && out.max_laplacian_rel_error <= 1e-4;
  return out;
}

}  // namespace isopar::geometry
