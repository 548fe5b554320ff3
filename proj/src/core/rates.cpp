#include "rates.hpp"

#include <cmath>
#include <limits>

#include "common.hpp"

namespace isopar {

double student_t95(int dof) {
  static const double table[] = {12.706, 4.303, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228, 2.201,
                                 2.179,  2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086, 2.080,
                                 2.074,  2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042, 2.042};
  if (dof <= 0) return std::numeric_limits<double>::infinity();
  if (dof <= 30) return table[dof - 1];
  return 1.96 + 2.4 / dof;
}

RateFit fit_rate(const std::vector<double>& h, const std::vector<double>& err, bool log_factor) {
  if (h.size() != err.size() || h.size() < 2)
    throw Error(ErrorCode::Contract, "rate fit needs at least two (h, error) pairs");
  const int n = static_cast<int>(h.size());
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    if (!(h[i] > 0.0) || !(err[i] > 0.0)) throw Error(ErrorCode::Contract, "rate fit needs positive h and errors");
    x[i] = std::log(h[i]);
    y[i] = std::log(err[i]) - (log_factor ? std::log(std::log(2.0 + 1.0 / h[i])) : 0.0);
  }
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  RateFit fit;
  fit.points = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double sse = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      sse += r * r;
    }
    fit.std_error = std::sqrt(sse / (n - 2) / sxx);
    const double t = student_t95(n - 2);
    fit.ci_low = fit.slope - t * fit.std_error;
    fit.ci_high = fit.slope + t * fit.std_error;
  } else {
    fit.std_error = std::numeric_limits<double>::infinity();
    fit.ci_low = -std::numeric_limits<double>::infinity();
    fit.ci_high = std::numeric_limits<double>::infinity();
  }
  return fit;
}

std::vector<double> pairwise_rates(const std::vector<double>& h, const std::vector<double>& err) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < h.size(); ++i)
    out.push_back(std::log(err[i] / err[i + 1]) / std::log(h[i] / h[i + 1]));
  return out;
}

const RateSeries& RateTable::get(const std::string& name) const {
  for (const auto& s : series)
    if (s.name == name) return s;
  throw Error(ErrorCode::Contract, "no rate series named '" + name + "'");
}

RateFit RateTable::fit(const std::string& name) const {
  const auto& s = get(name);
  return fit_rate(h, s.err, s.log_factor);
}

}  // namespace isopar
