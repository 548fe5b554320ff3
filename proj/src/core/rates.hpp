#pragma once

#include <string>
#include <vector>

namespace isopar {

/// Least-squares fit of log(err) = c + slope * log(h) (or of the log-factor
/// model err = C h^p ln(2 + 1/h) when `log_factor` is set).
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;  // 95% band from the Student t quantile; infinite for two points
  double ci_high = 0.0;
  int points = 0;
};

RateFit fit_rate(const std::vector<double>& h, const std::vector<double>& err, bool log_factor = false);

/// Two-sided 95% Student t quantile for the given degrees of freedom.
double student_t95(int dof);

/// Successive slopes log(e_i / e_{i+1}) / log(h_i / h_{i+1}).
std::vector<double> pairwise_rates(const std::vector<double>& h, const std::vector<double>& err);

/// Named series of errors against h, with fitted rates.
struct RateSeries {
  std::string name;
  std::vector<double> err;
  bool log_factor = false;
};

struct RateTable {
  std::vector<double> h;
  std::vector<RateSeries> series;

  RateFit fit(const std::string& name) const;
  const RateSeries& get(const std::string& name) const;
};

}  // namespace isopar
