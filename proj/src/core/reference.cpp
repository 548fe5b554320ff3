#include "reference.hpp"

#include <memory>
#include <mutex>

namespace isopar {

namespace {

// P_a(l) = prod_{m < a} (r l - m) / (m + 1) and its derivative.
void silvester(int r, int a, double l, double& value, double& deriv) {
  value = 1.0;
  deriv = 0.0;
  for (int m = 0; m < a; ++m) {
    const double f = (r * l - m) / (m + 1);
    const double df = static_cast<double>(r) / (m + 1);
    deriv = deriv * f + value * df;
    value *= f;
  }
}

}  // namespace

ReferenceElement::ReferenceElement(int degree) : degree_(degree) {
  if (degree < 1 || degree > 3) throw Error(ErrorCode::Contract, "element degree must be 1, 2 or 3");
  const int r = degree;
  alpha_ = {{r, 0, 0}, {0, r, 0}, {0, 0, r}};
  for (int e = 0; e < 3; ++e) {
    const int from = e, to = (e + 1) % 3;
    for (int k = 1; k < r; ++k) {
      std::array<int, 3> a{0, 0, 0};
      a[from] = r - k;
      a[to] = k;
      alpha_.push_back(a);
    }
  }
  if (r == 3) alpha_.push_back({1, 1, 1});
  for (const auto& a : alpha_) nodes_.push_back({static_cast<double>(a[1]) / r, static_cast<double>(a[2]) / r});

  quad_ = triangle_quadrature(2 * r + 2);
  qval_.resize(quad_.points.size(), std::vector<double>(size()));
  qgrad_.resize(quad_.points.size(), std::vector<Vec2>(size()));
  for (std::size_t q = 0; q < quad_.points.size(); ++q) {
    values(quad_.points[q], qval_[q].data());
    gradients(quad_.points[q], qgrad_[q].data());
  }
}

void ReferenceElement::values(const Vec2& ref, double* out) const {
  const auto l = barycentric(ref);
  for (int i = 0; i < size(); ++i) {
    double v = 1.0;
    for (int k = 0; k < 3; ++k) {
      double p, dp;
      silvester(degree_, alpha_[i][k], l[k], p, dp);
      v *= p;
    }
    out[i] = v;
  }
}

void ReferenceElement::gradients(const Vec2& ref, Vec2* out) const {
  const auto l = barycentric(ref);
  for (int i = 0; i < size(); ++i) {
    double p[3], dp[3];
    for (int k = 0; k < 3; ++k) silvester(degree_, alpha_[i][k], l[k], p[k], dp[k]);
    const double d0 = dp[0] * p[1] * p[2];
    const double d1 = p[0] * dp[1] * p[2];
    const double d2 = p[0] * p[1] * dp[2];
    out[i] = {d1 - d0, d2 - d0};
  }
}

std::vector<int> ReferenceElement::edge_nodes(int e) const {
  std::vector<int> ids{e};
  for (int k = 0; k < degree_ - 1; ++k) ids.push_back(3 + e * (degree_ - 1) + k);
  ids.push_back((e + 1) % 3);
  return ids;
}

const ReferenceElement& reference_element(int degree) {
  static std::once_flag once;
  static std::unique_ptr<ReferenceElement> cache[3];
  std::call_once(once, [] {
    for (int r = 1; r <= 3; ++r) cache[r - 1] = std::make_unique<ReferenceElement>(r);
  });
  if (degree < 1 || degree > 3) throw Error(ErrorCode::Contract, "element degree must be 1, 2 or 3");
  return *cache[degree - 1];
}

}  // namespace isopar
