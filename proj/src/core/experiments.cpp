#include "experiments.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "fem.hpp"
#include "flowmap.hpp"
#include "operators.hpp"

namespace isopar::exp {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr const char* kSchemaVersion = "1";

const std::pair<Experiment, const char*> kNames[] = {
    {Experiment::Wmp, "wmp"},       {Experiment::Converge, "converge"}, {Experiment::Geom, "geom"},
    {Experiment::Interp, "interp"}, {Experiment::Matident, "matident"}, {Experiment::Flow, "flow"},
};

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Pipeline {
  geometry::DomainEntry domain;
  mesh::Mesh mesh;
  std::shared_ptr<const iso::Geometry> geometry;
  std::shared_ptr<const fem::Space> space;
};

Pipeline build(const geometry::DomainEntry& domain, double h, int degree, const ExperimentConfig& config,
               bool with_space = true) {
  Pipeline p;
  p.domain = domain;
  mesh::MeshOptions options;
  options.seed = config.seed;
  p.mesh = mesh::generate(*domain.polygon, h, options);
  p.geometry = std::make_shared<iso::Geometry>(domain.polygon, p.mesh, degree, config.blend);
  if (with_space) p.space = std::make_shared<fem::Space>(p.geometry);
  return p;
}

// Runs one row; pipeline errors become a NaN row and a message.
template <class F>
void guarded_row(ExperimentResult& result, double h, std::size_t width, F&& body) {
  try {
    std::vector<double> row = body();
    result.table.rows.push_back(std::move(row));
  } catch (const Error& e) {
    result.errors.push_back("h=" + number(h) + ": " + e.what());
    std::vector<double> row(width, kNaN);
    row[0] = h;
    result.table.rows.push_back(std::move(row));
  }
}

void add_fit(ExperimentResult& result, const std::string& column, bool log_factor) {
  std::vector<double> h, e;
  const auto hcol = result.table.values("h");
  const auto ecol = result.table.values(column);
  for (std::size_t i = 0; i < hcol.size(); ++i)
    if (std::isfinite(hcol[i]) && std::isfinite(ecol[i]) && ecol[i] > 0.0) {
      h.push_back(hcol[i]);
      e.push_back(ecol[i]);
    }
  SlopeFit f{column, log_factor ? "power-log" : "power", {}};
  if (h.size() >= 2) {
    f.fit = fit_rate(h, e, log_factor);
  } else {
    f.fit.slope = f.fit.intercept = f.fit.std_error = f.fit.ci_low = f.fit.ci_high = kNaN;
  }
  result.fits.push_back(f);
}

double column_max(const Table& t, const std::string& name) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : t.values(name))
    if (std::isfinite(v)) m = std::max(m, v);
  return std::isfinite(m) ? m : kNaN;
}

double column_min(const Table& t, const std::string& name) {
  double m = std::numeric_limits<double>::infinity();
  for (double v : t.values(name))
    if (std::isfinite(v)) m = std::min(m, v);
  return std::isfinite(m) ? m : kNaN;
}

Vec2 mesh_centroid(const mesh::Mesh& m) {
  Vec2 c{0, 0};
  double area = 0.0;
  for (int t = 0; t < m.triangle_count(); ++t) {
    const auto& tri = m.triangles[t];
    const double a = mesh::triangle_area(m, t);
    c += (a / 3.0) * (m.vertices[tri[0]] + m.vertices[tri[1]] + m.vertices[tri[2]]);
    area += a;
  }
  return c / area;
}

void run_wmp(const ExperimentConfig& cfg, const geometry::DomainEntry& domain, ExperimentResult& result) {
  result.table.columns = {"h_target", "h", "dofs", "delta_ratio", "constant_ratio", "smooth_ratio", "max_iterations"};
  const std::size_t width = result.table.columns.size();
  for (double h : cfg.hs) {
    guarded_row(result, h, width, [&] {
      const Pipeline p = build(domain, h, cfg.degree, cfg);
      const ops::HarmonicSolver solver(p.space);
      const auto& bd = p.space->boundary_dofs();
      int iterations = 0;
      auto ratio = [&](const ops::DiscreteFunction& u) { return ops::linf_norm(u) / ops::boundary_sup(u); };
      double delta = 0.0;
      for (int k = 0; k < 32; ++k) {
        std::vector<double> g(bd.size(), 0.0);
        g[(k * bd.size()) / 32] = 1.0;
        sparse::CgResult stats;
        delta = std::max(delta, ratio(solver.solve(g, &stats)));
        iterations = std::max(iterations, stats.iterations);
      }
      const double constant = ratio(solver.solve([](Vec2) { return 1.0; }));
      const Vec2 c = mesh_centroid(p.mesh);
      const double smooth = ratio(solver.solve([c](Vec2 x) { return std::sin(7.0 * std::atan2(x.y - c.y, x.x - c.x)); }));
      return std::vector<double>{h, p.mesh.h, double(p.space->dof_count()), delta, constant, smooth, double(iterations)};
    });
  }
  result.table.columns[1] = "h";
  const double hi = column_max(result.table, "delta_ratio"), lo = column_min(result.table, "delta_ratio");
  result.summary = {{"delta_ratio_max", hi},
                    {"delta_ratio_min", lo},
                    {"delta_ratio_spread", hi / lo},
                    {"constant_ratio_defect", std::max(std::abs(column_max(result.table, "constant_ratio") - 1.0),
                                                       std::abs(column_min(result.table, "constant_ratio") - 1.0))},
                    {"smooth_ratio_max", column_max(result.table, "smooth_ratio")}};
}

void run_converge(const ExperimentConfig& cfg, const geometry::DomainEntry& domain, ExperimentResult& result) {
  result.table.columns = {"h_target", "h",           "dofs",       "iterations",  "linf_error",
                          "linf_error_omega_h", "interp_error", "ell_h", "best_approx_ratio"};
  const std::size_t width = result.table.columns.size();
  const int r = cfg.degree;

  ops::ScalarField u, f;
  std::shared_ptr<ops::Transplant> reference;
  double reference_h = kNaN;
  int reference_degree = 0, reference_dofs = 0;
  if (domain.solution) {
    u = domain.solution->u;
    f = domain.solution->f;
  } else {
    // Fine reference solution for f = 1, transplanted onto Omega.
    const double hmin = *std::min_element(cfg.hs.begin(), cfg.hs.end());
    reference_h = cfg.reference_h > 0.0 ? cfg.reference_h : hmin / (r == 2 ? 2.0 : 4.0);
    reference_degree = std::min(r + 1, 3);
    const Pipeline ref = build(domain, reference_h, reference_degree, cfg);
    reference_dofs = ref.space->dof_count();
    f = [](Vec2) { return 1.0; };
    reference = std::make_shared<ops::Transplant>(ops::solve_poisson(ref.space, f, nullptr, cfg.reference_tol));
    u = [reference](Vec2 x) { return (*reference)(x); };
  }

  for (double h : cfg.hs) {
    guarded_row(result, h, width, [&] {
      const Pipeline p = build(domain, h, r, cfg);
      sparse::CgResult stats;
      const auto uh = ops::solve_poisson(p.space, f, &stats, 1e-12, cfg.quadrature_degree);
      const double err = ops::linf_error(uh, u, ops::Sampling::OnOmega);
      // Omega_h points outside Omega have no reference value.
      const double err_h = domain.solution ? ops::linf_error(uh, u, ops::Sampling::OnOmegaH) : kNaN;
      const double interp = ops::linf_error(ops::interpolate(p.space, u, ops::Placement::OnOmega), u);
      const double ell = r == 1 ? std::log(2.0 + 1.0 / p.mesh.h) : 1.0;
      const double ratio = err / (ell * interp + std::pow(p.mesh.h, r + 1));
      return std::vector<double>{h, p.mesh.h, double(p.space->dof_count()), double(stats.iterations), err, err_h,
                                 interp, ell, ratio};
    });
  }
  add_fit(result, "linf_error", false);
  add_fit(result, "linf_error", true);
  add_fit(result, "interp_error", false);

  // One constant per case: geometric mean of the ratios.
  double log_sum = 0.0, worst = 0.0;
  int n = 0;
  for (double q : result.table.values("best_approx_ratio"))
    if (std::isfinite(q) && q > 0.0) {
      log_sum += std::log(q);
      worst = std::max(worst, q);
      ++n;
    }
  const double c = n > 0 ? std::exp(log_sum / n) : kNaN;
  result.summary = {{"slope", result.fit("linf_error").fit.slope},
                    {"slope_log_model", result.fit("linf_error", "power-log").fit.slope},
                    {"interp_slope", result.fit("interp_error").fit.slope},
                    {"best_approx_constant", c},
                    {"best_approx_max_over_constant", worst / c},
                    {"best_approx_max_ratio", worst},
                    {"reference_h", reference_h},
                    {"reference_degree", reference ? double(reference_degree) : kNaN},
                    {"reference_dofs", reference ? double(reference_dofs) : kNaN}};
}

void run_geom(const ExperimentConfig& cfg, const geometry::DomainEntry& domain, ExperimentResult& result) {
  result.table.columns = {"h_target", "h", "elements", "phi_error", "grad_phi_error", "a_error", "boundary_distance",
                          "interior_max"};
  const std::size_t width = result.table.columns.size();
  for (double h : cfg.hs) {
    guarded_row(result, h, width, [&] {
      const Pipeline p = build(domain, h, cfg.degree, cfg, false);
      const auto g = iso::geometry_errors(*p.geometry);
      return std::vector<double>{h, p.mesh.h, double(p.mesh.triangle_count()), g.phi_error, g.grad_phi_error,
                                 g.a_error, g.boundary_distance, g.interior_max};
    });
  }
  add_fit(result, "phi_error", false);
  add_fit(result, "a_error", false);
  add_fit(result, "boundary_distance", false);
  result.summary = {{"phi_slope", result.fit("phi_error").fit.slope},
                    {"a_slope", result.fit("a_error").fit.slope},
                    {"boundary_distance_slope", result.fit("boundary_distance").fit.slope},
                    {"interior_max", column_max(result.table, "interior_max")}};
}

// Smooth test function used on every domain.
double interp_test_function(Vec2 p) { return std::sin(p.x) * std::cos(p.y) * (1.0 - p.x * p.x - p.y * p.y); }

void run_interp(const ExperimentConfig& cfg, const geometry::DomainEntry& domain, ExperimentResult& result) {
  result.table.columns = {"h_target", "h", "dofs", "interp_error", "interp_error_omega_h"};
  const std::size_t width = result.table.columns.size();
  for (double h : cfg.hs) {
    guarded_row(result, h, width, [&] {
      const Pipeline p = build(domain, h, cfg.degree, cfg);
      const double on_omega = ops::linf_error(ops::interpolate(p.space, interp_test_function, ops::Placement::OnOmega),
                                              interp_test_function, ops::Sampling::OnOmega);
      const double on_omega_h =
          ops::linf_error(ops::interpolate(p.space, interp_test_function, ops::Placement::OnOmegaH),
                          interp_test_function, ops::Sampling::OnOmegaH);
      return std::vector<double>{h, p.mesh.h, double(p.space->dof_count()), on_omega, on_omega_h};
    });
  }
  add_fit(result, "interp_error", false);
  add_fit(result, "interp_error_omega_h", false);
  result.summary = {{"slope", result.fit("interp_error").fit.slope},
                    {"slope_omega_h", result.fit("interp_error_omega_h").fit.slope}};
}

void run_matident(const ExperimentConfig& cfg, const geometry::DomainEntry& domain, ExperimentResult& result) {
  result.table.columns = {"h_target", "h", "dofs", "nonzeros", "relative_difference", "symmetry_defect",
                          "kernel_residual"};
  const std::size_t width = result.table.columns.size();
  int index = 0;
  for (double h : cfg.hs) {
    guarded_row(result, h, width, [&] {
      const Pipeline p = build(domain, h, cfg.degree, cfg);
      const auto a = fem::assemble_stiffness(*p.space, fem::Mode::Approx, cfg.quadrature_degree);
      const auto b = fem::assemble_stiffness(*p.space, fem::Mode::Exact, cfg.quadrature_degree);
      if (cfg.dump_matrix) {
        std::error_code ec;
        std::filesystem::create_directories(cfg.out_dir, ec);
        for (const auto& [mat, tag] : {std::pair{&a, "approx"}, std::pair{&b, "exact"}}) {
          const std::string path = cfg.out_dir + "/matident_h" + std::to_string(index) + "_" + tag + ".coo";
          std::ofstream out(path);
          if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
          sparse::write_coordinate(*mat, out);
        }
      }
      std::vector<double> ones(a.rows, 1.0), y;
      double kernel = 0.0, biggest = 0.0;
      for (const auto* m : {&a, &b}) {
        m->multiply(ones, y);
        for (double v : y) kernel = std::max(kernel, std::abs(v));
        for (double v : m->val) biggest = std::max(biggest, std::abs(v));
      }
      return std::vector<double>{h,
                                 p.mesh.h,
                                 double(p.space->dof_count()),
                                 double(a.val.size()),
                                 fem::relative_difference(a, b),
                                 std::max(sparse::symmetry_defect(a), sparse::symmetry_defect(b)),
                                 kernel / biggest};
    });
    ++index;
  }
  result.summary = {{"relative_difference_max", column_max(result.table, "relative_difference")},
                    {"kernel_residual_max", column_max(result.table, "kernel_residual")}};
}

void run_flow(const ExperimentConfig& cfg, const geometry::DomainEntry& domain, ExperimentResult& result) {
  result.table.columns = {"t", "min_distance", "max_distance", "lambda", "min_jacobian"};
  const auto& poly = domain.polygon;
  const flowmap::OutwardField field = cfg.w > 0.0 ? flowmap::OutwardField(poly, cfg.w, cfg.w0 > 0.0 ? cfg.w0 : 0.5 * cfg.w)
                                                  : flowmap::OutwardField(poly);
  flowmap::SandwichOptions options;
  options.samples = cfg.samples;
  options.delta = cfg.delta;
  const auto report = flowmap::verify_sandwich(field, cfg.ts, options);
  for (const auto& row : report.rows)
    result.table.rows.push_back({row.t, row.min_distance, row.max_distance, row.lambda, row.min_jacobian});
  const double tmax = *std::max_element(cfg.ts.begin(), cfg.ts.end());
  result.summary = {{"lambda", report.lambda},
                    {"min_jacobian", report.min_jacobian},
                    {"normal_component", report.normal_component},
                    {"semigroup_defect", tmax > 0.0 ? flowmap::semigroup_defect(field, tmax, 100, cfg.seed) : 0.0},
                    {"w", field.width()},
                    {"w0", field.inner_width()}};
}

std::string domain_text(const geometry::DomainEntry& d) {
  std::string text = "name " + d.name + "\n";
  for (int a = 0; a < d.polygon->arc_count(); ++a) text += d.polygon->arc(a).describe() + "\n";
  return text;
}

json config_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = experiment_name(c.experiment);
  j["domain"] = c.domain;
  j["degree"] = c.degree;
  j["hs"] = c.hs;
  j["seed"] = c.seed;
  j["out"] = c.out_dir;
  j["quadrature_degree"] = c.quadrature_degree;
  j["blend"] = c.blend == iso::Blend::Smooth ? "smooth" : "gordon-hall";
  j["dump_matrix"] = c.dump_matrix;
  j["reference_h"] = c.reference_h;
  j["reference_tol"] = c.reference_tol;
  j["ts"] = c.ts;
  j["delta"] = c.delta;
  j["w"] = c.w;
  j["w0"] = c.w0;
  j["samples"] = c.samples;
  return j;
}

json number_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string experiment_name(Experiment e) {
  for (const auto& [k, name] : kNames)
    if (k == e) return name;
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  for (const auto& [k, n] : kNames)
    if (name == n) return k;
  throw Error(ErrorCode::Contract, "unknown experiment '" + name + "'");
}

void validate(const ExperimentConfig& c) {
  if (c.degree < 1 || c.degree > 3) throw Error(ErrorCode::Contract, "degree must be 1, 2 or 3");
  if (c.experiment == Experiment::Flow) {
    if (c.ts.empty()) throw Error(ErrorCode::Contract, "flow needs at least one time");
    for (double t : c.ts)
      if (!(t >= 0.0 && t <= c.delta)) throw Error(ErrorCode::Contract, "flow time " + number(t) + " outside [0, delta]");
    if (c.samples < 1) throw Error(ErrorCode::Contract, "samples must be positive");
    return;
  }
  if (c.hs.size() < 3) throw Error(ErrorCode::Contract, "the h-sequence needs at least 3 entries for slope fits");
  for (std::size_t i = 0; i < c.hs.size(); ++i) {
    if (!(c.hs[i] > 0.0)) throw Error(ErrorCode::Contract, "mesh sizes must be positive");
    if (i > 0 && !(c.hs[i] < c.hs[i - 1])) throw Error(ErrorCode::Contract, "the h-sequence must strictly decrease");
  }
  if (c.quadrature_degree < 0) throw Error(ErrorCode::Contract, "quadrature degree must be nonnegative");
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::Parse, "config: expected a JSON object");
  ExperimentConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "experiment") c.experiment = parse_experiment(v.get<std::string>());
      else if (key == "domain") c.domain = v.get<std::string>();
      else if (key == "degree") c.degree = v.get<int>();
      else if (key == "hs") c.hs = v.get<std::vector<double>>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "out") c.out_dir = v.get<std::string>();
      else if (key == "quadrature_degree") c.quadrature_degree = v.get<int>();
      else if (key == "blend") {
        const auto b = v.get<std::string>();
        if (b == "smooth") c.blend = iso::Blend::Smooth;
        else if (b == "gordon-hall") c.blend = iso::Blend::GordonHall;
        else throw Error(ErrorCode::Parse, "config: unknown blend '" + b + "'");
      } else if (key == "dump_matrix") c.dump_matrix = v.get<bool>();
      else if (key == "reference_h") c.reference_h = v.get<double>();
      else if (key == "reference_tol") c.reference_tol = v.get<double>();
      else if (key == "ts") c.ts = v.get<std::vector<double>>();
      else if (key == "delta") c.delta = v.get<double>();
      else if (key == "w") c.w = v.get<double>();
      else if (key == "w0") c.w0 = v.get<double>();
      else if (key == "samples") c.samples = v.get<int>();
      else throw Error(ErrorCode::Parse, "config: unknown key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("config: ") + e.what());
  }
  return c;
}

std::string config_to_json(const ExperimentConfig& config) { return config_json(config).dump(2); }

int Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  throw Error(ErrorCode::Contract, "no column '" + name + "'");
}

std::vector<double> Table::values(const std::string& name) const {
  const int c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[c]);
  return out;
}

double ExperimentResult::value(const std::string& key) const {
  for (const auto& [k, v] : summary)
    if (k == key) return v;
  throw Error(ErrorCode::Contract, "no summary entry '" + key + "'");
}

const SlopeFit& ExperimentResult::fit(const std::string& column, const std::string& model) const {
  for (const auto& f : fits)
    if (f.column == column && f.model == model) return f;
  throw Error(ErrorCode::Contract, "no " + model + " fit for '" + column + "'");
}

ExperimentResult run(const ExperimentConfig& config) {
  validate(config);
  const auto t0 = std::chrono::steady_clock::now();
  const geometry::DomainEntry domain = geometry::resolve_domain(config.domain);
  ExperimentResult result;
  result.config = config;
  result.domain_text = domain_text(domain);
  switch (config.experiment) {
    case Experiment::Wmp: run_wmp(config, domain, result); break;
    case Experiment::Converge: run_converge(config, domain, result); break;
    case Experiment::Geom: run_geom(config, domain, result); break;
    case Experiment::Interp: run_interp(config, domain, result); break;
    case Experiment::Matident: run_matident(config, domain, result); break;
    case Experiment::Flow: run_flow(config, domain, result); break;
  }
  result.seconds = seconds_since(t0);
  return result;
}

std::string to_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "# schema isopar." << experiment_name(result.config.experiment) << ".v" << kSchemaVersion << '\n';
  for (std::size_t i = 0; i < result.table.columns.size(); ++i)
    out << (i ? "," : "") << result.table.columns[i];
  out << '\n';
  for (const auto& row : result.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << number(row[i]);
    out << '\n';
  }
  return out.str();
}

std::string to_json(const ExperimentResult& result) {
  json j;
  j["schema"] = "isopar." + experiment_name(result.config.experiment) + ".v" + kSchemaVersion;
  j["config"] = config_json(result.config);
  j["columns"] = result.table.columns;
  json rows = json::array();
  for (const auto& row : result.table.rows) {
    json r = json::array();
    for (double v : row) r.push_back(number_json(v));
    rows.push_back(r);
  }
  j["rows"] = rows;
  json fits = json::array();
  for (const auto& f : result.fits)
    fits.push_back({{"column", f.column},
                    {"model", f.model},
                    {"slope", number_json(f.fit.slope)},
                    {"intercept", number_json(f.fit.intercept)},
                    {"std_error", number_json(f.fit.std_error)},
                    {"ci95", {number_json(f.fit.ci_low), number_json(f.fit.ci_high)}},
                    {"points", f.fit.points}});
  j["fits"] = fits;
  json summary = json::object();
  for (const auto& [k, v] : result.summary) summary[k] = number_json(v);
  j["summary"] = summary;
  j["errors"] = result.errors;
  j["runtime_seconds"] = result.seconds;
  return j.dump(2);
}

std::string git_blob_hash(const std::string& content) {
  const std::string header = "blob " + std::to_string(content.size()) + std::string(1, '\0');
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, header.data(), header.size()) != 1 ||
      EVP_DigestUpdate(ctx, content.data(), content.size()) != 1 || EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error(ErrorCode::Internal, "SHA-1 digest failed");
  }
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

namespace {

std::string gnuplot_script(const ExperimentResult& result) {
  const std::string name = experiment_name(result.config.experiment);
  const auto& cols = result.table.columns;
  std::ostringstream gp;
  gp << "set datafile separator ','\n"
     << "set datafile commentschars '#'\n"
     << "set key top left\n"
     << "set terminal pngcairo size 800,600\n"
     << "set output '" << name << ".png'\n";
  if (result.config.experiment == Experiment::Flow) {
    gp << "set xlabel 't'\nset ylabel 'distance to the domain'\n"
       << "plot '" << name << ".csv' every ::1 using 1:2 with linespoints title 'min', \\\n"
       << "     '' every ::1 using 1:3 with linespoints title 'max', \\\n"
       << "     x with lines dashtype 2 title 't'\n";
    return gp.str();
  }
  gp << "set logscale xy\nset xlabel 'h'\n";
  const int hcol = 2;
  std::vector<std::string> series;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const auto& c = cols[i];
    if (c.find("error") != std::string::npos || c.find("ratio") != std::string::npos ||
        c.find("difference") != std::string::npos || c == "boundary_distance")
      series.push_back("'" + name + ".csv' every ::1 using " + std::to_string(hcol) + ":" + std::to_string(i + 1) +
                       " with linespoints title '" + c + "'");
  }
  gp << "plot ";
  for (std::size_t i = 0; i < series.size(); ++i) gp << (i ? ", \\\n     " : "") << series[i];
  gp << '\n';
  return gp.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
}

}  // namespace

std::vector<std::string> write_outputs(const ExperimentResult& result, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir + ": " + ec.message());
  const std::string name = experiment_name(result.config.experiment);
  const std::vector<std::pair<std::string, std::string>> files = {
      {name + ".csv", to_csv(result)}, {name + ".json", to_json(result)}, {name + ".gp", gnuplot_script(result)}};
  std::vector<std::string> paths;
  json outputs = json::object();
  for (const auto& [file, content] : files) {
    write_file(dir + "/" + file, content);
    paths.push_back(dir + "/" + file);
    outputs[file] = git_blob_hash(content);
  }
  json manifest;
  manifest["schema"] = std::string("isopar.manifest.v") + kSchemaVersion;
  manifest["experiment"] = name;
  manifest["config"] = config_json(result.config);
  manifest["seed"] = result.config.seed;
  manifest["domain_text"] = result.domain_text;
  // The output location is not an input.
  json hashed = config_json(result.config);
  hashed.erase("out");
  const std::string inputs = hashed.dump() + "\n" + result.domain_text;
  manifest["input_hash"] = git_blob_hash(inputs);
  manifest["outputs"] = outputs;
  write_file(dir + "/manifest.json", manifest.dump(2) + "\n");
  paths.push_back(dir + "/manifest.json");
  return paths;
}

}  // namespace isopar::exp
