#include "rsadv/rsadv.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include "rsadv/error.hpp"
#include "rsadv/harness.hpp"
#include "rsadv/scheme.hpp"
#include "rsadv/spaces.hpp"
#include "rsadv/vonneumann.hpp"

struct rsadv_mesh {
  rsadv::MeshPtr mesh;
};

struct rsadv_space {
  rsadv::SpacePtr space;
};

struct rsadv_field {
  rsadv::Field field;
};

struct rsadv_scheme {
  std::unique_ptr<rsadv::RecoveredScheme> scheme;
};

namespace {

thread_local std::string last_error;

rsadv_status set_error(rsadv_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <typename F>
rsadv_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return RSADV_OK;
  } catch (const rsadv::Error& e) {
    return set_error(static_cast<rsadv_status>(e.code()), e.what());
  } catch (const std::exception& e) {
    return set_error(RSADV_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(RSADV_ERR_INTERNAL, "unknown exception");
  }
}

#define RSADV_REQUIRE(ptr)                                                 \
  do {                                                                     \
    if (!(ptr)) return set_error(RSADV_ERR_NULL_ARGUMENT, #ptr " is null"); \
  } while (0)

rsadv::ModeCase mode_from_char(char mode) {
  const char name[2] = {mode, '\0'};
  const auto m = rsadv::parse_mode_case(name);
  if (!m) rsadv::fail(rsadv::ErrorCode::InvalidArgument, std::string("unknown case '") + name + "'");
  return *m;
}

rsadv::VelocityField make_velocity(const rsadv_velocity& v, const rsadv::Mesh& mesh) {
  switch (v.kind) {
    case RSADV_VELOCITY_CONSTANT: return rsadv::constant_velocity(rsadv::Vec2(v.u, v.w));
    case RSADV_VELOCITY_ROTATIONAL:
      return mesh.dim() == 2 ? rsadv::rotational_velocity(mesh) : rsadv::rotational_velocity();
    case RSADV_VELOCITY_DEFORMATIONAL: return rsadv::deformational_velocity();
    case RSADV_VELOCITY_BOUNDARY: return rsadv::boundary_velocity();
  }
  rsadv::fail(rsadv::ErrorCode::InvalidArgument, "unknown velocity kind");
}

rsadv::SchemeConfig config_from_name(const char* name) {
  const auto c = rsadv::config_by_name(name);
  if (!c) rsadv::fail(rsadv::ErrorCode::InvalidArgument, std::string("unknown scheme configuration '") + name + "'");
  return *c;
}

rsadv::TestCase test_from_name(const char* name) {
  const auto t = rsadv::parse_test_case(name);
  if (!t) rsadv::fail(rsadv::ErrorCode::InvalidArgument, std::string("unknown test '") + name + "'");
  return *t;
}

}  // namespace

extern "C" {

const char* rsadv_version(void) { return "0.1.0"; }

const char* rsadv_status_string(rsadv_status status) {
  switch (status) {
    case RSADV_OK: return "ok";
    case RSADV_ERR_NULL_ARGUMENT: return "null-argument";
    case RSADV_ERR_INTERNAL: return "internal";
    default: return rsadv::to_string(static_cast<rsadv::ErrorCode>(status));
  }
}

const char* rsadv_last_error(void) { return last_error.c_str(); }

rsadv_status rsadv_mesh_interval(int n_cells, double length, rsadv_mesh** out) {
  RSADV_REQUIRE(out);
  return guarded([&] { *out = new rsadv_mesh{rsadv::make_interval(n_cells, length)}; });
}

rsadv_status rsadv_mesh_quad(int nx, int nz, double lx, double lz, int periodic_x, rsadv_mesh** out) {
  RSADV_REQUIRE(out);
  return guarded([&] { *out = new rsadv_mesh{rsadv::make_quad(nx, nz, lx, lz, periodic_x != 0)}; });
}

rsadv_status rsadv_mesh_get_info(const rsadv_mesh* mesh, rsadv_mesh_info* out) {
  RSADV_REQUIRE(mesh);
  RSADV_REQUIRE(out);
  const rsadv::Mesh& m = *mesh->mesh;
  *out = {m.dim(), m.nx(), m.nz(), m.n_cells(), m.n_vertices(), m.n_facets(), m.dx(), m.dz(), m.periodic_x()};
  return RSADV_OK;
}

void rsadv_mesh_free(rsadv_mesh* mesh) { delete mesh; }

rsadv_status rsadv_space_create(const rsadv_mesh* mesh, const char* tag, rsadv_space** out) {
  RSADV_REQUIRE(mesh);
  RSADV_REQUIRE(tag);
  RSADV_REQUIRE(out);
  return guarded([&] {
    const auto t = rsadv::parse_space_tag(tag);
    if (!t) rsadv::fail(rsadv::ErrorCode::InvalidArgument, std::string("unknown space tag '") + tag + "'");
    *out = new rsadv_space{rsadv::make_space(mesh->mesh, *t)};
  });
}

rsadv_status rsadv_space_n_dofs(const rsadv_space* space, int* out) {
  RSADV_REQUIRE(space);
  RSADV_REQUIRE(out);
  *out = space->space->n_dofs();
  return RSADV_OK;
}

rsadv_status rsadv_space_dof_map(const rsadv_space* space, int cell, int* dofs, int capacity, int* count) {
  RSADV_REQUIRE(space);
  RSADV_REQUIRE(count);
  return guarded([&] {
    if (cell < 0 || cell >= space->space->mesh().n_cells())
      rsadv::fail(rsadv::ErrorCode::InvalidArgument, "cell index out of range");
    const std::vector<int> d = space->space->cell_dofs(cell);
    if (static_cast<int>(d.size()) > capacity || (!dofs && !d.empty()))
      rsadv::fail(rsadv::ErrorCode::InvalidArgument, "output buffer too small");
    std::copy(d.begin(), d.end(), dofs);
    *count = static_cast<int>(d.size());
  });
}

void rsadv_space_free(rsadv_space* space) { delete space; }

rsadv_status rsadv_field_create(const rsadv_space* space, rsadv_field** out) {
  RSADV_REQUIRE(space);
  RSADV_REQUIRE(out);
  return guarded([&] { *out = new rsadv_field{rsadv::Field(space->space)}; });
}

rsadv_status rsadv_field_from_profile(const rsadv_space* space, const char* profile, int interpolate,
                                      rsadv_field** out) {
  RSADV_REQUIRE(space);
  RSADV_REQUIRE(profile);
  RSADV_REQUIRE(out);
  return guarded([&] {
    const std::string name = profile;
    rsadv::ScalarFunction f;
    if (name == "rotational")
      f = rsadv::gaussian_profile(0.375);
    else if (name == "deformational")
      f = rsadv::gaussian_profile(0.5);
    else if (name == "boundary")
      f = rsadv::boundary_profile();
    else if (name == "leveque")
      f = rsadv::leveque_profile();
    else
      rsadv::fail(rsadv::ErrorCode::InvalidArgument, "unknown profile '" + name + "'");
    const rsadv::SpacePtr& s = space->space;
    rsadv::Field field;
    if (s->n_components() == 2) {
      const rsadv::VectorFunction vf = [&f](double x, double z) { return rsadv::Vec2::Constant(f(x, z)); };
      field = interpolate ? rsadv::interpolate_analytic(vf, s) : rsadv::project_analytic(vf, s);
    } else {
      field = interpolate ? rsadv::interpolate_analytic(f, s) : rsadv::project_analytic(f, s);
    }
    *out = new rsadv_field{std::move(field)};
  });
}

rsadv_status rsadv_field_size(const rsadv_field* field, int* out) {
  RSADV_REQUIRE(field);
  RSADV_REQUIRE(out);
  *out = static_cast<int>(field->field.coeffs.size());
  return RSADV_OK;
}

rsadv_status rsadv_field_set(rsadv_field* field, const double* values, int n) {
  RSADV_REQUIRE(field);
  RSADV_REQUIRE(values);
  if (n != field->field.coeffs.size())
    return set_error(RSADV_ERR_SPACE_MISMATCH, "value count does not match the field size");
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(values[i])) return set_error(RSADV_ERR_INVALID_ARGUMENT, "field values must be finite");
    field->field.coeffs[i] = values[i];
  }
  return RSADV_OK;
}

rsadv_status rsadv_field_get(const rsadv_field* field, double* values, int n) {
  RSADV_REQUIRE(field);
  RSADV_REQUIRE(values);
  if (n != field->field.coeffs.size())
    return set_error(RSADV_ERR_SPACE_MISMATCH, "value count does not match the field size");
  std::copy(field->field.coeffs.data(), field->field.coeffs.data() + n, values);
  return RSADV_OK;
}

rsadv_status rsadv_field_evaluate(const rsadv_field* field, int cell, double s, double t, int component,
                                  double* out) {
  RSADV_REQUIRE(field);
  RSADV_REQUIRE(out);
  return guarded([&] {
    const rsadv::FunctionSpace& sp = *field->field.space;
    if (cell < 0 || cell >= sp.mesh().n_cells() || component < 0 || component >= sp.n_components() || s < 0.0 ||
        s > 1.0 || t < 0.0 || t > 1.0)
      rsadv::fail(rsadv::ErrorCode::InvalidArgument, "evaluation point out of range");
    *out = rsadv::evaluate(field->field, cell, {s, t}, component);
  });
}

rsadv_status rsadv_field_integral(const rsadv_field* field, int component, double* out) {
  RSADV_REQUIRE(field);
  RSADV_REQUIRE(out);
  return guarded([&] {
    if (component < 0 || component >= field->field.space->n_components())
      rsadv::fail(rsadv::ErrorCode::InvalidArgument, "component out of range");
    *out = rsadv::integrate(field->field, component);
  });
}

rsadv_status rsadv_field_l2_norm(const rsadv_field* field, double* out) {
  RSADV_REQUIRE(field);
  RSADV_REQUIRE(out);
  return guarded([&] { *out = rsadv::l2_norm(field->field); });
}

rsadv_status rsadv_field_l2_error(const rsadv_field* field, const rsadv_field* reference, double* out) {
  RSADV_REQUIRE(field);
  RSADV_REQUIRE(reference);
  RSADV_REQUIRE(out);
  return guarded([&] { *out = rsadv::l2_error(field->field, reference->field); });
}

rsadv_status rsadv_field_write_csv(const rsadv_field* field, const char* path) {
  RSADV_REQUIRE(field);
  RSADV_REQUIRE(path);
  return guarded([&] {
    std::ofstream out(path);
    if (!out) rsadv::fail(rsadv::ErrorCode::Io, std::string("cannot open ") + path);
    rsadv::write_field_csv(field->field, out);
  });
}

void rsadv_field_free(rsadv_field* field) { delete field; }

rsadv_status rsadv_scheme_create(const rsadv_mesh* mesh, const char* config, int boundary_recovery, int substeps,
                                 rsadv_velocity velocity, rsadv_scheme** out) {
  RSADV_REQUIRE(mesh);
  RSADV_REQUIRE(config);
  RSADV_REQUIRE(out);
  return guarded([&] {
    rsadv::SchemeConfig c = config_from_name(config);
    c.boundary_recovery = boundary_recovery != 0;
    auto s = std::make_unique<rsadv::RecoveredScheme>(mesh->mesh, c, make_velocity(velocity, *mesh->mesh), substeps);
    *out = new rsadv_scheme{std::move(s)};
  });
}

rsadv_status rsadv_scheme_space(const rsadv_scheme* scheme, rsadv_space** out) {
  RSADV_REQUIRE(scheme);
  RSADV_REQUIRE(out);
  return guarded([&] { *out = new rsadv_space{scheme->scheme->v0()}; });
}

rsadv_status rsadv_scheme_step(rsadv_scheme* scheme, const rsadv_field* in, double t, double dt,
                               rsadv_field** out) {
  RSADV_REQUIRE(scheme);
  RSADV_REQUIRE(in);
  RSADV_REQUIRE(out);
  return guarded([&] { *out = new rsadv_field{scheme->scheme->step(in->field, t, dt)}; });
}

rsadv_status rsadv_courant_number(const rsadv_mesh* mesh, rsadv_velocity velocity, double dt, double t,
                                  double* out) {
  RSADV_REQUIRE(mesh);
  RSADV_REQUIRE(out);
  return guarded([&] { *out = rsadv::courant_number(make_velocity(velocity, *mesh->mesh), *mesh->mesh, dt, t); });
}

void rsadv_scheme_free(rsadv_scheme* scheme) { delete scheme; }

rsadv_status rsadv_euler_matrix(double c, double phi, double re[4], double im[4]) {
  RSADV_REQUIRE(re);
  RSADV_REQUIRE(im);
  const Eigen::Matrix2cd e = rsadv::euler_matrix(c, phi);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      re[2 * i + j] = e(i, j).real();
      im[2 * i + j] = e(i, j).imag();
    }
  }
  return RSADV_OK;
}

rsadv_status rsadv_scheme_amplification(char mode, double c, double phi, double* out) {
  RSADV_REQUIRE(out);
  return guarded([&] { *out = rsadv::scheme_amplification(mode_from_char(mode), c, phi); });
}

rsadv_status rsadv_closed_form_amplification(char mode, double c, double phi, double* out) {
  RSADV_REQUIRE(out);
  return guarded([&] { *out = rsadv::closed_form_amplification(mode_from_char(mode), c, phi); });
}

rsadv_status rsadv_critical_courant(char mode, double* out) {
  RSADV_REQUIRE(out);
  return guarded([&] { *out = rsadv::critical_courant(mode_from_char(mode)); });
}

rsadv_status rsadv_measure_amplification(char mode, double c, int k, int n_cells, double* out) {
  RSADV_REQUIRE(out);
  return guarded([&] { *out = rsadv::measure_amplification(mode_from_char(mode), c, k, n_cells); });
}

void rsadv_converge_options_init(rsadv_converge_options* options) {
  if (!options) return;
  static const int default_resolutions[] = {20, 40, 80};
  options->test = "rotational";
  options->config = "rho";
  options->resolutions = default_resolutions;
  options->n_resolutions = 3;
  options->dt = 1e-4;
  options->t_final = 1.0;
  options->boundary_recovery = 1;
  options->scale_dt = 0;
  options->zero_velocity = 0;
  options->substeps = 1;
  options->seed = 0;
}

rsadv_status rsadv_run_converge(const rsadv_converge_options* options, const char* out_dir,
                                rsadv_converge_result* result) {
  RSADV_REQUIRE(options);
  RSADV_REQUIRE(options->test);
  RSADV_REQUIRE(options->config);
  RSADV_REQUIRE(result);
  return guarded([&] {
    if (options->n_resolutions < 1 || options->n_resolutions > RSADV_MAX_RESOLUTIONS || !options->resolutions)
      rsadv::fail(rsadv::ErrorCode::InvalidArgument, "need between 1 and 16 resolutions");
    rsadv::ConvergenceSpec spec;
    spec.test = test_from_name(options->test);
    spec.config = config_from_name(options->config);
    spec.config.boundary_recovery = options->boundary_recovery != 0;
    spec.resolutions.assign(options->resolutions, options->resolutions + options->n_resolutions);
    spec.dt = options->dt;
    spec.t_final = options->t_final;
    spec.scale_dt = options->scale_dt != 0;
    spec.zero_velocity = options->zero_velocity != 0;
    spec.substeps = options->substeps;
    spec.seed = options->seed;
    const rsadv::ConvergenceReport report = rsadv::run_convergence(spec);
    if (out_dir) rsadv::write_convergence_report(report, out_dir);
    *result = rsadv_converge_result{};
    result->n_rows = static_cast<int>(report.rows.size());
    for (int i = 0; i < result->n_rows; ++i) {
      const rsadv::ConvergenceRow& row = report.rows[i];
      result->dx[i] = row.dx;
      result->error[i] = row.error;
      result->row_status[i] = RSADV_OK;
      if (row.status != "ok") {
        ++result->n_failed;
        result->row_status[i] = RSADV_ERR_INTERNAL;
        for (int code = RSADV_ERR_INVALID_DIMENSION; code <= RSADV_ERR_IO; ++code)
          if (row.status == rsadv::to_string(static_cast<rsadv::ErrorCode>(code))) result->row_status[i] = code;
      }
    }
    result->slope_ok = report.slope.has_value();
    result->slope = report.slope.value_or(std::nan(""));
  });
}

void rsadv_stability_options_init(rsadv_stability_options* options) {
  if (!options) return;
  static const double default_courants[] = {0.2, 0.4, 0.6, 0.8};
  static const int default_ks[] = {1, 5, 10, 30, 59};
  options->cases = "ABC";
  options->courants = default_courants;
  options->n_courants = 4;
  options->wavenumbers = default_ks;
  options->n_wavenumbers = 5;
  options->n_cells = 120;
  options->tolerance = 1e-9;
}

rsadv_status rsadv_run_stability(const rsadv_stability_options* options, const char* out_dir,
                                 rsadv_stability_result* result) {
  RSADV_REQUIRE(options);
  RSADV_REQUIRE(options->cases);
  RSADV_REQUIRE(result);
  return guarded([&] {
    rsadv::StabilitySpec spec;
    spec.cases.clear();
    for (const char* p = options->cases; *p; ++p) spec.cases.push_back(mode_from_char(*p));
    if (options->n_courants < 0 || options->n_wavenumbers < 0 || (options->n_courants && !options->courants) ||
        (options->n_wavenumbers && !options->wavenumbers))
      rsadv::fail(rsadv::ErrorCode::InvalidArgument, "invalid Courant or wavenumber list");
    spec.courants.assign(options->courants, options->courants + options->n_courants);
    spec.wavenumbers.assign(options->wavenumbers, options->wavenumbers + options->n_wavenumbers);
    spec.n_cells = options->n_cells;
    spec.tolerance = options->tolerance;
    const auto rows = rsadv::run_stability(spec);
    if (out_dir) {
      std::error_code ec;
      std::filesystem::create_directories(out_dir, ec);
      if (ec) rsadv::fail(rsadv::ErrorCode::Io, std::string("cannot create ") + out_dir);
      rsadv::write_stability_csv(rows, (std::filesystem::path(out_dir) / "stability.csv").string());
    }
    *result = rsadv_stability_result{};
    result->n_rows = static_cast<int>(rows.size());
    for (const auto& r : rows) {
      result->n_failed += !r.pass;
      result->max_abs_diff = std::max(result->max_abs_diff, std::abs(r.oracle - r.measured));
    }
  });
}

rsadv_status rsadv_closed_form_report(const double* courants, int n_courants, int n_phi, const char* out_dir,
                                      rsadv_closed_form_result* result) {
  RSADV_REQUIRE(courants);
  RSADV_REQUIRE(result);
  return guarded([&] {
    if (n_courants < 1 || n_phi < 1) rsadv::fail(rsadv::ErrorCode::InvalidArgument, "empty comparison grid");
    const auto rows = rsadv::closed_form_comparison(std::vector<double>(courants, courants + n_courants),
                                                    rsadv::phase_grid(n_phi));
    if (out_dir) rsadv::write_closed_form_report(rows, out_dir);
    *result = rsadv_closed_form_result{};
    for (const auto& r : rows) {
      const int m = static_cast<int>(r.mode);
      result->divergent_rows[m] += r.divergent;
      if (r.c == 0.0 && r.divergent) result->c0_divergence_flagged[m] = 1;
    }
  });
}

void rsadv_leveque_options_init(rsadv_leveque_options* options) {
  if (!options) return;
  const rsadv::LevequeSpec d;
  *options = {d.n, d.dt, d.t_final, d.trajectory_stride, d.tolerance};
}

rsadv_status rsadv_run_leveque(const rsadv_leveque_options* options, const char* out_dir,
                               rsadv_leveque_result* result) {
  RSADV_REQUIRE(options);
  RSADV_REQUIRE(result);
  return guarded([&] {
    if (options->trajectory_stride < 1) rsadv::fail(rsadv::ErrorCode::InvalidArgument, "stride must be positive");
    rsadv::LevequeSpec spec{options->n, options->dt, options->t_final, options->trajectory_stride, options->tolerance};
    const rsadv::LevequeReport report = rsadv::run_leveque(spec);
    if (out_dir) rsadv::write_leveque_report(report, out_dir);
    *result = rsadv_leveque_result{};
    result->n_variants = static_cast<int>(std::min<std::size_t>(report.variants.size(), 4));
    for (int i = 0; i < result->n_variants; ++i) {
      const rsadv::LevequeVariant& v = report.variants[i];
      rsadv_leveque_variant& o = result->variants[i];
      std::strncpy(o.name, v.name.c_str(), sizeof(o.name) - 1);
      o.recovered = v.recovered;
      o.limited = v.limited;
      o.initial_min = v.initial_min;
      o.initial_max = v.initial_max;
      o.trajectory_min = v.trajectory_min;
      o.trajectory_max = v.trajectory_max;
      o.final_min = v.final_min;
      o.final_max = v.final_max;
      o.mass_drift = v.mass_drift();
      o.l2_error = v.l2_error;
      o.bounded = v.bounded;
    }
  });
}

rsadv_status rsadv_snapshot(const char* test, const char* config, int n, double dt, double t_final,
                            const char* out_dir) {
  RSADV_REQUIRE(test);
  RSADV_REQUIRE(config);
  RSADV_REQUIRE(out_dir);
  return guarded([&] { rsadv::write_snapshot(test_from_name(test), config_from_name(config), n, dt, t_final, out_dir); });
}

rsadv_status rsadv_fit_slope(const double* dx, const double* error, int n, double* out) {
  RSADV_REQUIRE(dx);
  RSADV_REQUIRE(error);
  RSADV_REQUIRE(out);
  return guarded([&] {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < n; ++i) pts.emplace_back(dx[i], error[i]);
    *out = rsadv::fit_slope(pts);
  });
}

}  // extern "C"
