#ifndef RSADV_RSADV_H
#define RSADV_RSADV_H

#include <stddef.h>

#if defined(RSADV_BUILDING_LIBRARY)
#define RSADV_API __attribute__((visibility("default")))
#else
#define RSADV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rsadv_status {
  RSADV_OK = 0,
  RSADV_ERR_INVALID_DIMENSION = 1,
  RSADV_ERR_INVALID_ARGUMENT = 2,
  RSADV_ERR_SPACE_MISMATCH = 3,
  RSADV_ERR_UNSUPPORTED_PAIR = 4,
  RSADV_ERR_NON_EMBEDDABLE = 5,
  RSADV_ERR_SINGULAR_MATRIX = 6,
  RSADV_ERR_SOLVER_NONCONVERGENCE = 7,
  RSADV_ERR_SINGULAR_KKT = 8,
  RSADV_ERR_WALL_FLUX = 9,
  RSADV_ERR_CFL = 10,
  RSADV_ERR_DEGENERATE_INPUT = 11,
  RSADV_ERR_NO_INSTABILITY = 12,
  RSADV_ERR_IO = 13,
  RSADV_ERR_NULL_ARGUMENT = 100,
  RSADV_ERR_INTERNAL = 101
} rsadv_status;

typedef struct rsadv_mesh rsadv_mesh;
typedef struct rsadv_space rsadv_space;
typedef struct rsadv_field rsadv_field;
typedef struct rsadv_scheme rsadv_scheme;

RSADV_API const char *rsadv_version(void);
RSADV_API const char *rsadv_status_string(rsadv_status status);
/* Message of the most recent failure on the calling thread. */
RSADV_API const char *rsadv_last_error(void);

/* Meshes */

typedef struct rsadv_mesh_info {
  int dim;
  int nx;
  int nz;
  int n_cells;
  int n_vertices;
  int n_facets;
  double dx;
  double dz;
  int periodic_x;
} rsadv_mesh_info;

RSADV_API rsadv_status rsadv_mesh_interval(int n_cells, double length, rsadv_mesh **out);
RSADV_API rsadv_status rsadv_mesh_quad(int nx, int nz, double lx, double lz, int periodic_x,
                                       rsadv_mesh **out);
RSADV_API rsadv_status rsadv_mesh_get_info(const rsadv_mesh *mesh, rsadv_mesh_info *out);
RSADV_API void rsadv_mesh_free(rsadv_mesh *mesh);

/* Function spaces. Tags: DG0, CG1, DG1, DG0xDG0, DG0xCG1, DG1xDG1, CG1xCG1,
 * DG0xDG1, RT0, BrokenRT0, VectorDG1xDG1, VectorCG1xCG1. */

RSADV_API rsadv_status rsadv_space_create(const rsadv_mesh *mesh, const char *tag, rsadv_space **out);
RSADV_API rsadv_status rsadv_space_n_dofs(const rsadv_space *space, int *out);
/* Writes the cell's DOFs (all components) into dofs; count receives the
 * number written. */
RSADV_API rsadv_status rsadv_space_dof_map(const rsadv_space *space, int cell, int *dofs, int capacity,
                                           int *count);
RSADV_API void rsadv_space_free(rsadv_space *space);

/* Fields */

RSADV_API rsadv_status rsadv_field_create(const rsadv_space *space, rsadv_field **out);
/* Initial profiles of the built-in tests: "rotational", "deformational",
 * "boundary", "leveque". Projected in L2 unless interpolate is nonzero. */
RSADV_API rsadv_status rsadv_field_from_profile(const rsadv_space *space, const char *profile, int interpolate,
                                                rsadv_field **out);
RSADV_API rsadv_status rsadv_field_size(const rsadv_field *field, int *out);
RSADV_API rsadv_status rsadv_field_set(rsadv_field *field, const double *values, int n);
RSADV_API rsadv_status rsadv_field_get(const rsadv_field *field, double *values, int n);
RSADV_API rsadv_status rsadv_field_evaluate(const rsadv_field *field, int cell, double s, double t,
                                            int component, double *out);
RSADV_API rsadv_status rsadv_field_integral(const rsadv_field *field, int component, double *out);
RSADV_API rsadv_status rsadv_field_l2_norm(const rsadv_field *field, double *out);
RSADV_API rsadv_status rsadv_field_l2_error(const rsadv_field *field, const rsadv_field *reference,
                                            double *out);
RSADV_API rsadv_status rsadv_field_write_csv(const rsadv_field *field, const char *path);
RSADV_API void rsadv_field_free(rsadv_field *field);

/* Recovered transport schemes */

typedef enum rsadv_velocity_kind {
  RSADV_VELOCITY_CONSTANT = 0,
  RSADV_VELOCITY_ROTATIONAL = 1,
  RSADV_VELOCITY_DEFORMATIONAL = 2,
  RSADV_VELOCITY_BOUNDARY = 3
} rsadv_velocity_kind;

typedef struct rsadv_velocity {
  rsadv_velocity_kind kind;
  double u; /* constant velocity components */
  double w;
} rsadv_velocity;

/* config: rho, v, theta, r (2D) or A, B, C (1D). */
RSADV_API rsadv_status rsadv_scheme_create(const rsadv_mesh *mesh, const char *config, int boundary_recovery,
                                           int substeps, rsadv_velocity velocity, rsadv_scheme **out);
/* New handle for the scheme's transported space. */
RSADV_API rsadv_status rsadv_scheme_space(const rsadv_scheme *scheme, rsadv_space **out);
RSADV_API rsadv_status rsadv_scheme_step(rsadv_scheme *scheme, const rsadv_field *in, double t, double dt,
                                         rsadv_field **out);
RSADV_API rsadv_status rsadv_courant_number(const rsadv_mesh *mesh, rsadv_velocity velocity, double dt,
                                            double t, double *out);
RSADV_API void rsadv_scheme_free(rsadv_scheme *scheme);

/* Von Neumann analysis. mode is 'A', 'B' or 'C'. */

RSADV_API rsadv_status rsadv_euler_matrix(double c, double phi, double re[4], double im[4]);
RSADV_API rsadv_status rsadv_scheme_amplification(char mode, double c, double phi, double *out);
RSADV_API rsadv_status rsadv_closed_form_amplification(char mode, double c, double phi, double *out);
RSADV_API rsadv_status rsadv_critical_courant(char mode, double *out);
RSADV_API rsadv_status rsadv_measure_amplification(char mode, double c, int k, int n_cells, double *out);

/* Experiments. A null out_dir skips writing files. */

#define RSADV_MAX_RESOLUTIONS 16

typedef struct rsadv_converge_options {
  const char *test;   /* rotational, deformational, boundary */
  const char *config; /* rho, v, theta, r */
  const int *resolutions;
  int n_resolutions;
  double dt;
  double t_final;
  int boundary_recovery;
  int scale_dt;
  int zero_velocity;
  int substeps;
  unsigned seed;
} rsadv_converge_options;

typedef struct rsadv_converge_result {
  int n_rows;
  int n_failed;
  int slope_ok;
  double slope;
  double dx[RSADV_MAX_RESOLUTIONS];
  double error[RSADV_MAX_RESOLUTIONS];
  int row_status[RSADV_MAX_RESOLUTIONS];
} rsadv_converge_result;

RSADV_API void rsadv_converge_options_init(rsadv_converge_options *options);
RSADV_API rsadv_status rsadv_run_converge(const rsadv_converge_options *options, const char *out_dir,
                                          rsadv_converge_result *result);

typedef struct rsadv_stability_options {
  const char *cases; /* any of "ABC" */
  const double *courants;
  int n_courants;
  const int *wavenumbers;
  int n_wavenumbers;
  int n_cells;
  double tolerance;
} rsadv_stability_options;

typedef struct rsadv_stability_result {
  int n_rows;
  int n_failed;
  double max_abs_diff;
} rsadv_stability_result;

RSADV_API void rsadv_stability_options_init(rsadv_stability_options *options);
RSADV_API rsadv_status rsadv_run_stability(const rsadv_stability_options *options, const char *out_dir,
                                           rsadv_stability_result *result);

typedef struct rsadv_closed_form_result {
  int divergent_rows[3];
  int c0_divergence_flagged[3];
} rsadv_closed_form_result;

RSADV_API rsadv_status rsadv_closed_form_report(const double *courants, int n_courants, int n_phi,
                                                const char *out_dir, rsadv_closed_form_result *result);

typedef struct rsadv_leveque_options {
  int n;
  double dt;
  double t_final;
  int trajectory_stride;
  double tolerance;
} rsadv_leveque_options;

typedef struct rsadv_leveque_variant {
  char name[32];
  int recovered;
  int limited;
  double initial_min;
  double initial_max;
  double trajectory_min;
  double trajectory_max;
  double final_min;
  double final_max;
  double mass_drift;
  double l2_error;
  int bounded;
} rsadv_leveque_variant;

typedef struct rsadv_leveque_result {
  int n_variants;
  rsadv_leveque_variant variants[4];
} rsadv_leveque_result;

RSADV_API void rsadv_leveque_options_init(rsadv_leveque_options *options);
RSADV_API rsadv_status rsadv_run_leveque(const rsadv_leveque_options *options, const char *out_dir,
                                         rsadv_leveque_result *result);

RSADV_API rsadv_status rsadv_snapshot(const char *test, const char *config, int n, double dt, double t_final,
                                      const char *out_dir);

RSADV_API rsadv_status rsadv_fit_slope(const double *dx, const double *error, int n, double *out);

#ifdef __cplusplus
}
#endif

#endif
