#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isopar/isopar.h"

namespace {

const char* const kExperiments[] = {"wmp", "converge", "geom", "interp", "matident", "flow"};

struct Options {
  std::string config_path;
  std::string domain;
  int degree = 0;
  std::vector<double> hs;
  uint64_t seed = 42;
  std::string out;
  int quadrature = -1;
  std::string blend;
  bool dump_matrix = false;
  double reference_h = 0.0;
  double reference_tol = 0.0;
  std::vector<double> ts;
  double delta = 0.0;
  double w = 0.0;
  double w0 = 0.0;
  int samples = 0;
  bool quiet = false;
};

// Exit codes: 0 success, 1 library error; CLI11 reports usage errors itself.
int report(isopar_status status, const char* what) {
  std::fprintf(stderr, "isopar: %s failed (%s): %s\n", what, isopar_status_name(status), isopar_last_error());
  return 1;
}

#define CHECK_STATUS(call, what)                 \
  do {                                           \
    const isopar_status s_ = (call);             \
    if (s_ != ISOPAR_OK) return report(s_, what); \
  } while (0)

std::string read_text(const std::string& path, bool& ok) {
  std::ifstream in(path);
  ok = static_cast<bool>(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class F>
std::string fetch_string(F&& f) {
  size_t n = 0;
  f(nullptr, 0, &n);
  std::string s(n + 1, '\0');
  f(s.data(), s.size(), &n);
  s.resize(n);
  return s;
}

void print_summary(const isopar_result* result, const std::string& experiment) {
  size_t rows = 0, cols = 0;
  isopar_result_shape(result, &rows, &cols);
  std::vector<std::string> names;
  for (size_t c = 0; c < cols; ++c)
    names.push_back(fetch_string([&](char* b, size_t cap, size_t* n) { isopar_result_column(result, c, b, cap, n); }));
  for (size_t c = 0; c < cols; ++c) std::printf("%s%14s", c ? " " : "", names[c].c_str());
  std::printf("\n");
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) {
      double v = 0.0;
      isopar_result_cell(result, r, c, &v);
      std::printf("%s%14.6g", c ? " " : "", v);
    }
    std::printf("\n");
  }
  size_t count = 0;
  isopar_result_summary_count(result, &count);
  for (size_t i = 0; i < count; ++i) {
    double v = 0.0;
    const std::string key = fetch_string(
        [&](char* b, size_t cap, size_t* n) { isopar_result_summary_entry(result, i, b, cap, n, &v); });
    std::printf("%s %s = %.6g\n", experiment.c_str(), key.c_str(), v);
  }
  size_t errors = 0;
  isopar_result_error_count(result, &errors);
  for (size_t i = 0; i < errors; ++i)
    std::fprintf(stderr, "row error: %s\n",
                 fetch_string([&](char* b, size_t cap, size_t* n) { isopar_result_error(result, i, b, cap, n); })
                     .c_str());
}

int run_experiment(const std::string& experiment, const Options& o) {
  isopar_config* config = nullptr;
  if (!o.config_path.empty()) {
    bool ok = false;
    const std::string text = read_text(o.config_path, ok);
    if (!ok) {
      std::fprintf(stderr, "isopar: cannot read %s\n", o.config_path.c_str());
      return 1;
    }
    CHECK_STATUS(isopar_config_from_json(text.c_str(), &config), "reading the config");
  } else {
    CHECK_STATUS(isopar_config_create(experiment.c_str(), &config), "creating the config");
  }
  std::unique_ptr<isopar_config, void (*)(isopar_config*)> guard(config, isopar_config_free);

  // Command-line values override the config file.
  CHECK_STATUS(isopar_config_set_experiment(config, experiment.c_str()), "experiment");
  if (!o.domain.empty()) CHECK_STATUS(isopar_config_set_domain(config, o.domain.c_str()), "--domain");
  if (o.degree > 0) CHECK_STATUS(isopar_config_set_degree(config, o.degree), "--degree");
  if (!o.hs.empty()) CHECK_STATUS(isopar_config_set_hs(config, o.hs.data(), o.hs.size()), "--hs");
  if (o.config_path.empty() || o.seed != 42) CHECK_STATUS(isopar_config_set_seed(config, o.seed), "--seed");
  if (!o.out.empty()) CHECK_STATUS(isopar_config_set_out_dir(config, o.out.c_str()), "--out");
  if (o.quadrature >= 0) CHECK_STATUS(isopar_config_set_quadrature_degree(config, o.quadrature), "--quadrature");
  if (!o.blend.empty()) CHECK_STATUS(isopar_config_set_blend(config, o.blend.c_str()), "--blend");
  if (o.dump_matrix) CHECK_STATUS(isopar_config_set_dump_matrix(config, 1), "--dump-matrix");
  if (o.reference_h > 0.0 || o.reference_tol > 0.0)
    CHECK_STATUS(isopar_config_set_reference(config, o.reference_h, o.reference_tol), "--reference-h");
  if (!o.ts.empty() || o.delta > 0.0 || o.w > 0.0 || o.samples > 0)
    CHECK_STATUS(isopar_config_set_flow(config, o.ts.empty() ? nullptr : o.ts.data(), o.ts.size(), o.delta, o.w, o.w0,
                                        o.samples),
                 "flow options");

  const std::string out_dir =
      fetch_string([&](char* b, size_t cap, size_t* n) { isopar_config_get_out_dir(config, b, cap, n); });

  isopar_result* result = nullptr;
  CHECK_STATUS(isopar_run(config, &result), experiment.c_str());
  std::unique_ptr<isopar_result, void (*)(isopar_result*)> result_guard(result, isopar_result_free);
  CHECK_STATUS(isopar_result_write(result, out_dir.c_str()), "writing outputs");
  if (!o.quiet) print_summary(result, experiment);
  double seconds = 0.0;
  isopar_result_seconds(result, &seconds);
  std::fprintf(stderr, "wrote %s/%s.csv, .json, .gp and manifest.json (%.1f s)\n", out_dir.c_str(),
               experiment.c_str(), seconds);
  return 0;
}

int run_mesh(const std::string& domain_name, double h, uint64_t seed, const std::string& out) {
  isopar_domain* domain = nullptr;
  CHECK_STATUS(isopar_domain_open(domain_name.c_str(), &domain), "opening the domain");
  std::unique_ptr<isopar_domain, void (*)(isopar_domain*)> dguard(domain, isopar_domain_free);
  isopar_mesh* mesh = nullptr;
  CHECK_STATUS(isopar_mesh_generate(domain, h, seed, &mesh), "meshing");
  std::unique_ptr<isopar_mesh, void (*)(isopar_mesh*)> mguard(mesh, isopar_mesh_free);
  int nv = 0, nt = 0;
  double hmax = 0.0, shape = 0.0;
  CHECK_STATUS(isopar_mesh_info(mesh, &nv, &nt, &hmax, &shape), "mesh info");
  CHECK_STATUS(isopar_mesh_write(mesh, out.c_str()), "writing the mesh");
  std::printf("vertices %d triangles %d h %.6g max_shape_ratio %.4g\n", nv, nt, hmax, shape);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isoparametric finite element experiments on curved domains"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(isopar_version()));

  Options o;
  std::string chosen;
  for (const char* name : kExperiments) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", o.config_path, "JSON config mirroring the experiment settings")
        ->check(CLI::ExistingFile);
    sub->add_option("--domain", o.domain, "disk, lens, flower or a domain file");
    sub->add_option("--degree,-r", o.degree, "polynomial degree")->check(CLI::Range(1, 3));
    sub->add_option("--hs", o.hs, "mesh sizes, strictly decreasing")->delimiter(',');
    sub->add_option("--seed", o.seed, "mesh seed");
    sub->add_option("--out,-o", o.out, "output directory");
    sub->add_option("--quadrature", o.quadrature, "quadrature degree (0: 2r+2)");
    sub->add_option("--blend", o.blend, "exact element map")->check(CLI::IsMember({"smooth", "gordon-hall"}));
    sub->add_flag("--dump-matrix", o.dump_matrix, "matident: write both matrices in coordinate format");
    sub->add_option("--reference-h", o.reference_h, "converge: mesh size of the reference solution");
    sub->add_option("--reference-tol", o.reference_tol, "converge: CG tolerance of the reference solution");
    sub->add_option("--ts", o.ts, "flow: times")->delimiter(',');
    sub->add_option("--delta", o.delta, "flow: largest admissible time");
    sub->add_option("--w", o.w, "flow: collar width");
    sub->add_option("--w0", o.w0, "flow: inner cutoff width");
    sub->add_option("--samples", o.samples, "flow: boundary samples");
    sub->add_flag("--quiet,-q", o.quiet, "no table on stdout");
    sub->callback([&chosen, name] { chosen = name; });
  }

  std::string mesh_domain = "disk", mesh_out = "mesh.txt";
  double mesh_h = 0.1;
  uint64_t mesh_seed = 42;
  auto* mesh = app.add_subcommand("mesh", "generate a mesh and write it in the meshv1 text format");
  mesh->add_option("--domain", mesh_domain, "disk, lens, flower or a domain file");
  mesh->set_help_flag("--help", "print this help message and exit");
  mesh->add_option("-h,--h", mesh_h, "target mesh size")->check(CLI::PositiveNumber);
  mesh->add_option("--seed", mesh_seed, "mesh seed");
  mesh->add_option("--out,-o", mesh_out, "output file");
  mesh->callback([&chosen] { chosen = "mesh"; });

  CLI11_PARSE(app, argc, argv);
  if (chosen == "mesh") return run_mesh(mesh_domain, mesh_h, mesh_seed, mesh_out);
  return run_experiment(chosen, o);
}
