#include "isopar/isopar.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "experiments.hpp"
#include "flowmap.hpp"
#include "meshgen.hpp"
#include "operators.hpp"

using namespace isopar;

struct isopar_domain {
  geometry::DomainEntry entry;
};

struct isopar_mesh {
  mesh::Mesh mesh;
};

struct isopar_space {
  std::shared_ptr<const fem::Space> space;
};

struct isopar_field {
  ops::DiscreteFunction u;
  std::unique_ptr<ops::Transplant> transplant;  // built on first eval
};

struct isopar_flow {
  std::unique_ptr<flowmap::OutwardField> field;
};

struct isopar_config {
  exp::ExperimentConfig config;
};

struct isopar_result {
  exp::ExperimentResult result;
};

namespace {

thread_local std::string last_error;

isopar_status fail(isopar_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs body, mapping exceptions onto status codes.
template <class F>
isopar_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const Error& e) {
    return fail(static_cast<isopar_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ISOPAR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ISOPAR_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ISOPAR_ERR_INTERNAL, "unknown exception");
  }
}

isopar_status copy_out(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = s.size();
  if (buf && cap > 0) {
    const size_t n = s.size() < cap - 1 ? s.size() : cap - 1;
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  }
  return ISOPAR_OK;
}

#define ISOPAR_REQUIRE(p) \
  if (!(p)) return fail(ISOPAR_ERR_NULL, #p " is NULL")

ops::ScalarField wrap(isopar_scalar_fn fn, void* user) {
  return [fn, user](Vec2 p) { return fn(p.x, p.y, user); };
}

}  // namespace

extern "C" {

ISOPAR_API const char* isopar_version(void) { return "1.0.0"; }

ISOPAR_API const char* isopar_status_name(isopar_status status) {
  switch (status) {
    case ISOPAR_OK: return "ok";
    case ISOPAR_ERR_DOMAIN: return "domain";
    case ISOPAR_ERR_QUALITY: return "quality";
    case ISOPAR_ERR_PARSE: return "parse";
    case ISOPAR_ERR_ELEVATION: return "elevation";
    case ISOPAR_ERR_INVERSION: return "inversion";
    case ISOPAR_ERR_GEOMETRY: return "geometry";
    case ISOPAR_ERR_ASSEMBLY: return "assembly";
    case ISOPAR_ERR_CONTRACT: return "contract";
    case ISOPAR_ERR_NONCONVERGENCE: return "nonconvergence";
    case ISOPAR_ERR_CONSTRUCTION: return "construction";
    case ISOPAR_ERR_PRECONDITION: return "precondition";
    case ISOPAR_ERR_IO: return "io";
    case ISOPAR_ERR_NULL: return "null argument";
    case ISOPAR_ERR_RANGE: return "out of range";
    case ISOPAR_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

ISOPAR_API const char* isopar_last_error(void) { return last_error.c_str(); }

// ---- domains

ISOPAR_API isopar_status isopar_domain_open(const char* name_or_path, isopar_domain** out) {
  ISOPAR_REQUIRE(name_or_path);
  ISOPAR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new isopar_domain{geometry::resolve_domain(name_or_path)};
    return ISOPAR_OK;
  });
}

ISOPAR_API void isopar_domain_free(isopar_domain* domain) { delete domain; }

ISOPAR_API isopar_status isopar_domain_name(const isopar_domain* domain, char* buf, size_t cap, size_t* needed) {
  ISOPAR_REQUIRE(domain);
  last_error.clear();
  return copy_out(domain->entry.name, buf, cap, needed);
}

ISOPAR_API isopar_status isopar_domain_signed_distance(const isopar_domain* domain, double x, double y, double* out) {
  ISOPAR_REQUIRE(domain);
  ISOPAR_REQUIRE(out);
  return guarded([&] {
    *out = domain->entry.polygon->signed_distance(Vec2{x, y});
    return ISOPAR_OK;
  });
}

ISOPAR_API isopar_status isopar_domain_has_solution(const isopar_domain* domain, int* out) {
  ISOPAR_REQUIRE(domain);
  ISOPAR_REQUIRE(out);
  last_error.clear();
  *out = domain->entry.solution.has_value() ? 1 : 0;
  return ISOPAR_OK;
}

// ---- meshes

ISOPAR_API isopar_status isopar_mesh_generate(const isopar_domain* domain, double h, uint64_t seed,
                                              isopar_mesh** out) {
  ISOPAR_REQUIRE(domain);
  ISOPAR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    mesh::MeshOptions options;
    options.seed = seed;
    *out = new isopar_mesh{mesh::generate(*domain->entry.polygon, h, options)};
    return ISOPAR_OK;
  });
}

ISOPAR_API void isopar_mesh_free(isopar_mesh* mesh) { delete mesh; }

ISOPAR_API isopar_status isopar_mesh_info(const isopar_mesh* mesh, int* vertices, int* triangles, double* h,
                                          double* max_shape_ratio) {
  ISOPAR_REQUIRE(mesh);
  return guarded([&] {
    if (vertices) *vertices = mesh->mesh.vertex_count();
    if (triangles) *triangles = mesh->mesh.triangle_count();
    if (h) *h = mesh->mesh.h;
    if (max_shape_ratio) *max_shape_ratio = mesh::validate(mesh->mesh).max_shape_ratio;
    return ISOPAR_OK;
  });
}

ISOPAR_API isopar_status isopar_mesh_write(const isopar_mesh* mesh, const char* path) {
  ISOPAR_REQUIRE(mesh);
  ISOPAR_REQUIRE(path);
  return guarded([&] {
    mesh::write_mesh(mesh->mesh, path);
    return ISOPAR_OK;
  });
}

// ---- spaces and fields

ISOPAR_API isopar_status isopar_space_create(const isopar_domain* domain, const isopar_mesh* mesh, int degree,
                                             isopar_space** out) {
  ISOPAR_REQUIRE(domain);
  ISOPAR_REQUIRE(mesh);
  ISOPAR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto geometry = std::make_shared<iso::Geometry>(domain->entry.polygon, mesh->mesh, degree);
    *out = new isopar_space{std::make_shared<fem::Space>(geometry)};
    return ISOPAR_OK;
  });
}

ISOPAR_API void isopar_space_free(isopar_space* space) { delete space; }

ISOPAR_API isopar_status isopar_space_dofs(const isopar_space* space, int* dofs, int* boundary_dofs) {
  ISOPAR_REQUIRE(space);
  last_error.clear();
  if (dofs) *dofs = space->space->dof_count();
  if (boundary_dofs) *boundary_dofs = static_cast<int>(space->space->boundary_dofs().size());
  return ISOPAR_OK;
}

ISOPAR_API isopar_status isopar_field_harmonic(const isopar_space* space, isopar_scalar_fn g, void* user,
                                               isopar_field** out) {
  ISOPAR_REQUIRE(space);
  ISOPAR_REQUIRE(g);
  ISOPAR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new isopar_field{ops::discrete_harmonic(space->space, wrap(g, user)), nullptr};
    return ISOPAR_OK;
  });
}

ISOPAR_API isopar_status isopar_field_poisson(const isopar_space* space, isopar_scalar_fn f, void* user,
                                              double tol, isopar_field** out) {
  ISOPAR_REQUIRE(space);
  ISOPAR_REQUIRE(f);
  ISOPAR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new isopar_field{ops::solve_poisson(space->space, wrap(f, user), nullptr, tol > 0.0 ? tol : 1e-12),
                            nullptr};
    return ISOPAR_OK;
  });
}

ISOPAR_API void isopar_field_free(isopar_field* field) { delete field; }

ISOPAR_API isopar_status isopar_field_norms(const isopar_field* field, double* linf, double* boundary_sup) {
  ISOPAR_REQUIRE(field);
  return guarded([&] {
    if (linf) *linf = ops::linf_norm(field->u);
    if (boundary_sup) *boundary_sup = ops::boundary_sup(field->u);
    return ISOPAR_OK;
  });
}

ISOPAR_API isopar_status isopar_field_eval(const isopar_field* field, double x, double y, double* out) {
  ISOPAR_REQUIRE(field);
  ISOPAR_REQUIRE(out);
  return guarded([&] {
    // The locator is a cache; the handle stays logically const.
    auto* f = const_cast<isopar_field*>(field);
    if (!f->transplant) f->transplant = std::make_unique<ops::Transplant>(f->u);
    *out = (*f->transplant)(Vec2{x, y});
    return ISOPAR_OK;
  });
}

ISOPAR_API isopar_status isopar_field_coefficients(const isopar_field* field, double* values, size_t cap,
                                                   size_t* count) {
  ISOPAR_REQUIRE(field);
  last_error.clear();
  const auto& c = field->u.coeffs;
  if (count) *count = c.size();
  if (values)
    for (size_t i = 0; i < c.size() && i < cap; ++i) values[i] = c[i];
  return ISOPAR_OK;
}

// ---- flow

ISOPAR_API isopar_status isopar_flow_create(const isopar_domain* domain, double w, double w0, isopar_flow** out) {
  ISOPAR_REQUIRE(domain);
  ISOPAR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto field = w > 0.0 ? std::make_unique<flowmap::OutwardField>(domain->entry.polygon, w, w0 > 0.0 ? w0 : 0.5 * w)
                         : std::make_unique<flowmap::OutwardField>(domain->entry.polygon);
    *out = new isopar_flow{std::move(field)};
    return ISOPAR_OK;
  });
}

ISOPAR_API void isopar_flow_free(isopar_flow* flow) { delete flow; }

ISOPAR_API isopar_status isopar_flow_map(const isopar_flow* flow, double t, double x, double y, double* out_x,
                                         double* out_y) {
  ISOPAR_REQUIRE(flow);
  ISOPAR_REQUIRE(out_x);
  ISOPAR_REQUIRE(out_y);
  return guarded([&] {
    const Vec2 p = flowmap::flow(*flow->field, t, Vec2{x, y});
    *out_x = p.x;
    *out_y = p.y;
    return ISOPAR_OK;
  });
}

ISOPAR_API isopar_status isopar_flow_widths(const isopar_flow* flow, double* w, double* w0) {
  ISOPAR_REQUIRE(flow);
  last_error.clear();
  if (w) *w = flow->field->width();
  if (w0) *w0 = flow->field->inner_width();
  return ISOPAR_OK;
}

// ---- experiments

ISOPAR_API isopar_status isopar_config_create(const char* experiment, isopar_config** out) {
  ISOPAR_REQUIRE(experiment);
  ISOPAR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto c = std::make_unique<isopar_config>();
    c->config.experiment = exp::parse_experiment(experiment);
    *out = c.release();
    return ISOPAR_OK;
  });
}

ISOPAR_API isopar_status isopar_config_from_json(const char* json, isopar_config** out) {
  ISOPAR_REQUIRE(json);
  ISOPAR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new isopar_config{exp::config_from_json(json)};
    return ISOPAR_OK;
  });
}

ISOPAR_API void isopar_config_free(isopar_config* config) { delete config; }

ISOPAR_API isopar_status isopar_config_to_json(const isopar_config* config, char* buf, size_t cap, size_t* needed) {
  ISOPAR_REQUIRE(config);
  return guarded([&] { return copy_out(exp::config_to_json(config->config), buf, cap, needed); });
}

ISOPAR_API isopar_status isopar_config_set_experiment(isopar_config* config, const char* experiment) {
  ISOPAR_REQUIRE(config);
  ISOPAR_REQUIRE(experiment);
  return guarded([&] {
    config->config.experiment = exp::parse_experiment(experiment);
    return ISOPAR_OK;
  });
}

ISOPAR_API isopar_status isopar_config_set_domain(isopar_config* config, const char* name_or_path) {
  ISOPAR_REQUIRE(config);
  ISOPAR_REQUIRE(name_or_path);
  last_error.clear();
  config->config.domain = name_or_path;
  return ISOPAR_OK;
}

ISOPAR_API isopar_status isopar_config_set_degree(isopar_config* config, int degree) {
  ISOPAR_REQUIRE(config);
  if (degree < 1 || degree > 3) return fail(ISOPAR_ERR_CONTRACT, "degree must be 1, 2 or 3");
  last_error.clear();
  config->config.degree = degree;
  return ISOPAR_OK;
}

ISOPAR_API isopar_status isopar_config_set_hs(isopar_config* config, const double* hs, size_t count) {
  ISOPAR_REQUIRE(config);
  ISOPAR_REQUIRE(hs);
  last_error.clear();
  config->config.hs.assign(hs, hs + count);
  return ISOPAR_OK;
}

ISOPAR_API isopar_status isopar_config_set_seed(isopar_config* config, uint64_t seed) {
  ISOPAR_REQUIRE(config);
  last_error.clear();
  config->config.seed = seed;
  return ISOPAR_OK;
}

ISOPAR_API isopar_status isopar_config_set_out_dir(isopar_config* config, const char* dir) {
  ISOPAR_REQUIRE(config);
  ISOPAR_REQUIRE(dir);
  last_error.clear();
  config->config.out_dir = dir;
  return ISOPAR_OK;
}

ISOPAR_API isopar_status isopar_config_set_quadrature_degree(isopar_config* config, int degree) {
  ISOPAR_REQUIRE(config);
  if (degree < 0) return fail(ISOPAR_ERR_CONTRACT, "quadrature degree must be nonnegative");
  last_error.clear();
  config->config.quadrature_degree = degree;
  return ISOPAR_OK;
}

ISOPAR_API isopar_status isopar_config_set_blend(isopar_config* config, const char* blend) {
  ISOPAR_REQUIRE(config);
  ISOPAR_REQUIRE(blend);
  const std::string b = blend;
  if (b == "smooth") config->config.blend = iso::Blend::Smooth;
  else if (b == "gordon-hall") config->config.blend = iso::Blend::GordonHall;
  else return fail(ISOPAR_ERR_CONTRACT, "unknown blend '" + b + "'");
  last_error.clear();
  return ISOPAR_OK;
}

ISOPAR_API isopar_status isopar_config_set_dump_matrix(isopar_config* config, int enabled) {
  ISOPAR_REQUIRE(config);
  last_error.clear();
  config->config.dump_matrix = enabled != 0;
  return ISOPAR_OK;
}

ISOPAR_API isopar_status isopar_config_set_reference(isopar_config* config, double h, double tol) {
  ISOPAR_REQUIRE(config);
  if (h < 0.0 || tol < 0.0) return fail(ISOPAR_ERR_CONTRACT, "reference h and tolerance must be nonnegative");
  last_error.clear();
  config->config.reference_h = h;
  if (tol > 0.0) config->config.reference_tol = tol;
  return ISOPAR_OK;
}

ISOPAR_API isopar_status isopar_config_set_flow(isopar_config* config, const double* ts, size_t count, double delta,
                                                double w, double w0, int samples) {
  ISOPAR_REQUIRE(config);
  last_error.clear();
  auto& c = config->config;
  if (ts) c.ts.assign(ts, ts + count);
  if (delta > 0.0) c.delta = delta;
  c.w = w;
  c.w0 = w0;
  if (samples > 0) c.samples = samples;
  return ISOPAR_OK;
}

ISOPAR_API isopar_status isopar_config_get_out_dir(const isopar_config* config, char* buf, size_t cap,
                                                   size_t* needed) {
  ISOPAR_REQUIRE(config);
  last_error.clear();
  return copy_out(config->config.out_dir, buf, cap, needed);
}

ISOPAR_API isopar_status isopar_run(const isopar_config* config, isopar_result** out) {
  ISOPAR_REQUIRE(config);
  ISOPAR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new isopar_result{exp::run(config->config)};
    return ISOPAR_OK;
  });
}

ISOPAR_API void isopar_result_free(isopar_result* result) { delete result; }

ISOPAR_API isopar_status isopar_result_write(const isopar_result* result, const char* dir) {
  ISOPAR_REQUIRE(result);
  ISOPAR_REQUIRE(dir);
  return guarded([&] {
    exp::write_outputs(result->result, dir);
    return ISOPAR_OK;
  });
}

ISOPAR_API isopar_status isopar_result_shape(const isopar_result* result, size_t* rows, size_t* columns) {
  ISOPAR_REQUIRE(result);
  last_error.clear();
  if (rows) *rows = result->result.table.rows.size();
  if (columns) *columns = result->result.table.columns.size();
  return ISOPAR_OK;
}

ISOPAR_API isopar_status isopar_result_column(const isopar_result* result, size_t column, char* buf, size_t cap,
                                              size_t* needed) {
  ISOPAR_REQUIRE(result);
  const auto& cols = result->result.table.columns;
  if (column >= cols.size()) return fail(ISOPAR_ERR_RANGE, "column index " + std::to_string(column));
  last_error.clear();
  return copy_out(cols[column], buf, cap, needed);
}

ISOPAR_API isopar_status isopar_result_cell(const isopar_result* result, size_t row, size_t column, double* out) {
  ISOPAR_REQUIRE(result);
  ISOPAR_REQUIRE(out);
  const auto& t = result->result.table;
  if (row >= t.rows.size() || column >= t.columns.size())
    return fail(ISOPAR_ERR_RANGE, "cell (" + std::to_string(row) + ", " + std::to_string(column) + ")");
  last_error.clear();
  *out = t.rows[row][column];
  return ISOPAR_OK;
}

ISOPAR_API isopar_status isopar_result_summary_count(const isopar_result* result, size_t* count) {
  ISOPAR_REQUIRE(result);
  ISOPAR_REQUIRE(count);
  last_error.clear();
  *count = result->result.summary.size();
  return ISOPAR_OK;
}

ISOPAR_API isopar_status isopar_result_summary_entry(const isopar_result* result, size_t index, char* key,
                                                     size_t cap, size_t* needed, double* value) {
  ISOPAR_REQUIRE(result);
  const auto& s = result->result.summary;
  if (index >= s.size()) return fail(ISOPAR_ERR_RANGE, "summary index " + std::to_string(index));
  last_error.clear();
  if (value) *value = s[index].second;
  return copy_out(s[index].first, key, cap, needed);
}

ISOPAR_API isopar_status isopar_result_summary(const isopar_result* result, const char* key, double* out) {
  ISOPAR_REQUIRE(result);
  ISOPAR_REQUIRE(key);
  ISOPAR_REQUIRE(out);
  for (const auto& [k, v] : result->result.summary)
    if (k == key) {
      last_error.clear();
      *out = v;
      return ISOPAR_OK;
    }
  return fail(ISOPAR_ERR_RANGE, std::string("no summary entry '") + key + "'");
}

ISOPAR_API isopar_status isopar_result_slope(const isopar_result* result, const char* column, const char* model,
                                             double* slope, double* ci_low, double* ci_high) {
  ISOPAR_REQUIRE(result);
  ISOPAR_REQUIRE(column);
  const std::string m = model ? model : "power";
  for (const auto& f : result->result.fits)
    if (f.column == column && f.model == m) {
      last_error.clear();
      if (slope) *slope = f.fit.slope;
      if (ci_low) *ci_low = f.fit.ci_low;
      if (ci_high) *ci_high = f.fit.ci_high;
      return ISOPAR_OK;
    }
  return fail(ISOPAR_ERR_RANGE, "no " + m + " fit for '" + column + "'");
}

ISOPAR_API isopar_status isopar_result_error_count(const isopar_result* result, size_t* count) {
  ISOPAR_REQUIRE(result);
  ISOPAR_REQUIRE(count);
  last_error.clear();
  *count = result->result.errors.size();
  return ISOPAR_OK;
}

ISOPAR_API isopar_status isopar_result_error(const isopar_result* result, size_t index, char* buf, size_t cap,
                                             size_t* needed) {
  ISOPAR_REQUIRE(result);
  const auto& e = result->result.errors;
  if (index >= e.size()) return fail(ISOPAR_ERR_RANGE, "error index " + std::to_string(index));
  last_error.clear();
  return copy_out(e[index], buf, cap, needed);
}

ISOPAR_API isopar_status isopar_result_seconds(const isopar_result* result, double* out) {
  ISOPAR_REQUIRE(result);
  ISOPAR_REQUIRE(out);
  last_error.clear();
  *out = result->result.seconds;
  return ISOPAR_OK;
}

ISOPAR_API isopar_status isopar_result_csv(const isopar_result* result, char* buf, size_t cap, size_t* needed) {
  ISOPAR_REQUIRE(result);
  return guarded([&] { return copy_out(exp::to_csv(result->result), buf, cap, needed); });
}

ISOPAR_API isopar_status isopar_result_json(const isopar_result* result, char* buf, size_t cap, size_t* needed) {
  ISOPAR_REQUIRE(result);
  return guarded([&] { return copy_out(exp::to_json(result->result), buf, cap, needed); });
}

}  // extern "C"
