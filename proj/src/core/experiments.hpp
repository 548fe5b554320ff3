#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "isogeom.hpp"
#include "rates.hpp"

namespace isopar::exp {

enum class Experiment { Wmp, Converge, Geom, Interp, Matident, Flow };

/// "wmp", "converge", "geom", "interp", "matident", "flow".
std::string experiment_name(Experiment e);
/// ErrorCode::Contract for unknown names.
Experiment parse_experiment(const std::string& name);

struct ExperimentConfig {
  Experiment experiment = Experiment::Converge;
  std::string domain = "disk";  // stock name or domain file path
  int degree = 1;
  std::vector<double> hs = {0.2, 0.1, 0.05, 0.025};
  std::uint64_t seed = 42;
  std::string out_dir = ".";
  int quadrature_degree = 0;  // 0: element default 2r + 2
  iso::Blend blend = iso::Blend::Smooth;
  bool dump_matrix = false;   // matident: coordinate files per h

  // converge, for domains without a closed-form solution
  double reference_h = 0.0;   // 0: min(h)/2 for r = 2, min(h)/4 otherwise
  double reference_tol = 1e-10;

  // flow
  std::vector<double> ts = {0.0125, 0.025, 0.05};
  double delta = 0.05;
  double w = 0.0;   // 0: 0.2 inradius
  double w0 = 0.0;  // 0: 0.1 inradius
  int samples = 512;
};

/// ErrorCode::Contract when the configuration cannot run: h-sequence not
/// strictly decreasing or shorter than 3, degree outside 1..3, flow times
/// outside [0, delta].
void validate(const ExperimentConfig& config);

/// JSON mirror of ExperimentConfig. Unknown keys are rejected (ErrorCode::Parse).
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Column index; ErrorCode::Contract when absent.
  int column(const std::string& name) const;
  std::vector<double> values(const std::string& name) const;
};

struct SlopeFit {
  std::string column;
  std::string model;  // "power" or "power-log"
  RateFit fit;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::string domain_text;  // arcs in the domain file grammar
  Table table;
  std::vector<SlopeFit> fits;
  std::vector<std::pair<std::string, double>> summary;
  std::vector<std::string> errors;  // rows aborted by pipeline errors
  double seconds = 0.0;

  /// Summary entry; ErrorCode::Contract when absent.
  double value(const std::string& key) const;
  const SlopeFit& fit(const std::string& column, const std::string& model = "power") const;
};

ExperimentResult run(const ExperimentConfig& config);

/// Writes DIR/<exp>.csv, DIR/<exp>.json, DIR/<exp>.gp and DIR/manifest.json;
/// returns the paths. ErrorCode::Io on write failures.
std::vector<std::string> write_outputs(const ExperimentResult& result, const std::string& dir);

std::string to_csv(const ExperimentResult& result);
std::string to_json(const ExperimentResult& result);

/// Git blob hash (SHA-1 over "blob <size>\0" + content), lowercase hex.
std::string git_blob_hash(const std::string& content);

}  // namespace isopar::exp
