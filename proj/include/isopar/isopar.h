#ifndef ISOPAR_ISOPAR_H
#define ISOPAR_ISOPAR_H

#include <stddef.h>
#include <stdint.h>

#if defined(ISOPAR_BUILDING_LIBRARY)
#define ISOPAR_API __attribute__((visibility("default")))
#else
#define ISOPAR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every function returning isopar_status stores a message for
   the calling thread, readable with isopar_last_error(). */
typedef enum isopar_status {
  ISOPAR_OK = 0,
  ISOPAR_ERR_DOMAIN = 1,
  ISOPAR_ERR_QUALITY = 2,
  ISOPAR_ERR_PARSE = 3,
  ISOPAR_ERR_ELEVATION = 4,
  ISOPAR_ERR_INVERSION = 5,
  ISOPAR_ERR_GEOMETRY = 6,
  ISOPAR_ERR_ASSEMBLY = 7,
  ISOPAR_ERR_CONTRACT = 8,
  ISOPAR_ERR_NONCONVERGENCE = 9,
  ISOPAR_ERR_CONSTRUCTION = 10,
  ISOPAR_ERR_PRECONDITION = 11,
  ISOPAR_ERR_IO = 12,
  ISOPAR_ERR_NULL = 13, /* a required pointer argument was NULL */
  ISOPAR_ERR_RANGE = 14, /* index or key out of range */
  ISOPAR_ERR_INTERNAL = 99
} isopar_status;

typedef struct isopar_domain isopar_domain;
typedef struct isopar_mesh isopar_mesh;
typedef struct isopar_space isopar_space;
typedef struct isopar_field isopar_field;
typedef struct isopar_flow isopar_flow;
typedef struct isopar_config isopar_config;
typedef struct isopar_result isopar_result;

/* Scalar function of a point, used for boundary data and right-hand sides. */
typedef double (*isopar_scalar_fn)(double x, double y, void* user);

ISOPAR_API const char* isopar_version(void);
ISOPAR_API const char* isopar_status_name(isopar_status status);
/* Message of the last failing call on this thread; "" after a success. */
ISOPAR_API const char* isopar_last_error(void);

/* String outputs: at most cap bytes including the terminator are written to
   buf (which may be NULL when cap is 0); *needed receives the full length
   without the terminator. Truncation is not an error. */

/* ---- domains ---- */

/* Stock name ("disk", "lens", "flower") or a path to a domain file. */
ISOPAR_API isopar_status isopar_domain_open(const char* name_or_path, isopar_domain** out);
ISOPAR_API void isopar_domain_free(isopar_domain* domain);
ISOPAR_API isopar_status isopar_domain_name(const isopar_domain* domain, char* buf, size_t cap, size_t* needed);
ISOPAR_API isopar_status isopar_domain_signed_distance(const isopar_domain* domain, double x, double y, double* out);
ISOPAR_API isopar_status isopar_domain_has_solution(const isopar_domain* domain, int* out);

/* ---- meshes ---- */

ISOPAR_API isopar_status isopar_mesh_generate(const isopar_domain* domain, double h, uint64_t seed,
                                              isopar_mesh** out);
ISOPAR_API void isopar_mesh_free(isopar_mesh* mesh);
ISOPAR_API isopar_status isopar_mesh_info(const isopar_mesh* mesh, int* vertices, int* triangles, double* h,
                                          double* max_shape_ratio);
ISOPAR_API isopar_status isopar_mesh_write(const isopar_mesh* mesh, const char* path);

/* ---- finite element spaces and fields ---- */

/* Degree-r isoparametric space on the mesh, r in 1..3, default blend. */
ISOPAR_API isopar_status isopar_space_create(const isopar_domain* domain, const isopar_mesh* mesh, int degree,
                                             isopar_space** out);
ISOPAR_API void isopar_space_free(isopar_space* space);
ISOPAR_API isopar_status isopar_space_dofs(const isopar_space* space, int* dofs, int* boundary_dofs);

/* Discrete harmonic extension of g sampled at the boundary nodes. */
ISOPAR_API isopar_status isopar_field_harmonic(const isopar_space* space, isopar_scalar_fn g, void* user,
                                               isopar_field** out);
/* -Laplace(u) = f with zero boundary values; CG relative tolerance tol (0: 1e-12). */
ISOPAR_API isopar_status isopar_field_poisson(const isopar_space* space, isopar_scalar_fn f, void* user,
                                              double tol, isopar_field** out);
ISOPAR_API void isopar_field_free(isopar_field* field);
/* Sup over the interior sample lattice and over the curved boundary edges. */
ISOPAR_API isopar_status isopar_field_norms(const isopar_field* field, double* linf, double* boundary_sup);
/* Value of the transplanted field at a point of the exact domain. */
ISOPAR_API isopar_status isopar_field_eval(const isopar_field* field, double x, double y, double* out);
/* Coefficients in dof order; count receives the dof count. */
ISOPAR_API isopar_status isopar_field_coefficients(const isopar_field* field, double* values, size_t cap,
                                                   size_t* count);

/* ---- outward flow ---- */

/* w = w0 = 0 selects the defaults 0.2 and 0.1 times the inradius. */
ISOPAR_API isopar_status isopar_flow_create(const isopar_domain* domain, double w, double w0, isopar_flow** out);
ISOPAR_API void isopar_flow_free(isopar_flow* flow);
ISOPAR_API isopar_status isopar_flow_map(const isopar_flow* flow, double t, double x, double y, double* out_x,
                                         double* out_y);
ISOPAR_API isopar_status isopar_flow_widths(const isopar_flow* flow, double* w, double* w0);

/* ---- experiments ---- */

/* experiment: "wmp", "converge", "geom", "interp", "matident" or "flow". */
ISOPAR_API isopar_status isopar_config_create(const char* experiment, isopar_config** out);
ISOPAR_API isopar_status isopar_config_from_json(const char* json, isopar_config** out);
ISOPAR_API void isopar_config_free(isopar_config* config);
ISOPAR_API isopar_status isopar_config_to_json(const isopar_config* config, char* buf, size_t cap, size_t* needed);
ISOPAR_API isopar_status isopar_config_set_experiment(isopar_config* config, const char* experiment);
ISOPAR_API isopar_status isopar_config_set_domain(isopar_config* config, const char* name_or_path);
ISOPAR_API isopar_status isopar_config_set_degree(isopar_config* config, int degree);
ISOPAR_API isopar_status isopar_config_set_hs(isopar_config* config, const double* hs, size_t count);
ISOPAR_API isopar_status isopar_config_set_seed(isopar_config* config, uint64_t seed);
ISOPAR_API isopar_status isopar_config_set_out_dir(isopar_config* config, const char* dir);
ISOPAR_API isopar_status isopar_config_set_quadrature_degree(isopar_config* config, int degree);
/* "smooth" or "gordon-hall". */
ISOPAR_API isopar_status isopar_config_set_blend(isopar_config* config, const char* blend);
ISOPAR_API isopar_status isopar_config_set_dump_matrix(isopar_config* config, int enabled);
ISOPAR_API isopar_status isopar_config_set_reference(isopar_config* config, double h, double tol);
ISOPAR_API isopar_status isopar_config_set_flow(isopar_config* config, const double* ts, size_t count, double delta,
                                                double w, double w0, int samples);
ISOPAR_API isopar_status isopar_config_get_out_dir(const isopar_config* config, char* buf, size_t cap,
                                                   size_t* needed);

ISOPAR_API isopar_status isopar_run(const isopar_config* config, isopar_result** out);
ISOPAR_API void isopar_result_free(isopar_result* result);
/* Writes <exp>.csv, <exp>.json, <exp>.gp and manifest.json into dir. */
ISOPAR_API isopar_status isopar_result_write(const isopar_result* result, const char* dir);
ISOPAR_API isopar_status isopar_result_shape(const isopar_result* result, size_t* rows, size_t* columns);
ISOPAR_API isopar_status isopar_result_column(const isopar_result* result, size_t column, char* buf, size_t cap,
                                              size_t* needed);
ISOPAR_API isopar_status isopar_result_cell(const isopar_result* result, size_t row, size_t column, double* out);
ISOPAR_API isopar_status isopar_result_summary_count(const isopar_result* result, size_t* count);
ISOPAR_API isopar_status isopar_result_summary_entry(const isopar_result* result, size_t index, char* key,
                                                     size_t cap, size_t* needed, double* value);
ISOPAR_API isopar_status isopar_result_summary(const isopar_result* result, const char* key, double* out);
/* model: "power" or "power-log". */
ISOPAR_API isopar_status isopar_result_slope(const isopar_result* result, const char* column, const char* model,
                                             double* slope, double* ci_low, double* ci_high);
/* Rows aborted by pipeline errors. */
ISOPAR_API isopar_status isopar_result_error_count(const isopar_result* result, size_t* count);
ISOPAR_API isopar_status isopar_result_error(const isopar_result* result, size_t index, char* buf, size_t cap,
                                             size_t* needed);
ISOPAR_API isopar_status isopar_result_seconds(const isopar_result* result, double* out);
ISOPAR_API isopar_status isopar_result_csv(const isopar_result* result, char* buf, size_t cap, size_t* needed);
ISOPAR_API isopar_status isopar_result_json(const isopar_result* result, char* buf, size_t cap, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif
