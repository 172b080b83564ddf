#include "rsadv/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "rsadv/error.hpp"

namespace rsadv {

namespace {

constexpr double kPi = std::numbers::pi;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open " + path + " for writing");
  out.precision(17);
  return out;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create directory " + dir + ": " + ec.message());
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

const char* projection_name(Projection p) { return p == Projection::A ? "PA" : "PB"; }

double coeff_min(const Field& f) { return f.coeffs.minCoeff(); }
double coeff_max(const Field& f) { return f.coeffs.maxCoeff(); }

}  // namespace

const char* to_string(TestCase t) noexcept {
  switch (t) {
    case TestCase::Rotational: return "rotational";
    case TestCase::Deformational: return "deformational";
    case TestCase::Boundary: return "boundary";
  }
  return "?";
}

std::optional<TestCase> parse_test_case(std::string_view name) {
  if (name == "rotational") return TestCase::Rotational;
  if (name == "deformational") return TestCase::Deformational;
  if (name == "boundary") return TestCase::Boundary;
  return std::nullopt;
}

namespace {

constexpr double kR1 = 0.48;
constexpr double kR2 = 0.5;
constexpr double kA = kPi * kR1 / (kR1 - kR2);
constexpr double kB = -2.0 * kA * kR2;
constexpr double kC = kPi * kR1 * kR1 - kA * kR1 * kR1 - kB * kR1;

double rotation_stream(double x, double z) {
  const double r = std::min(std::hypot(x - 0.5, z - 0.5), kR2);
  return r < kR1 ? kPi * r * r : kA * r * r + kB * r + kC;
}

}  // namespace

VelocityField rotational_velocity() {
  VelocityField v;
  v.steady = true;
  v.value = [](double x, double z, double) -> Vec2 {
    const double dx = x - 0.5;
    const double dz = z - 0.5;
    const double r = std::hypot(dx, dz);
    // Velocity is (-d psi/dz, d psi/dx) with psi a function of r only.
    double dpsi_over_r;
    if (r < kR1)
      dpsi_over_r = 2.0 * kPi;
    else if (r < kR2)
      dpsi_over_r = (2.0 * kA * r + kB) / r;
    else
      return Vec2::Zero();
    return {-dpsi_over_r * dz, dpsi_over_r * dx};
  };
  return v;
}

VelocityField rotational_velocity(const Mesh& mesh) {
  const int nx = mesh.nx(), nz = mesh.nz();
  const double hx = mesh.dx(), hz = mesh.dz(), lx = mesh.lx();
  const bool periodic = mesh.periodic_x();
  VelocityField v;
  v.steady = true;
  v.value = [=](double x, double z, double) -> Vec2 {
    if (periodic) x -= lx * std::floor(x / lx);
    const int ix = std::clamp(static_cast<int>(std::floor(x / hx)), 0, nx - 1);
    const int iz = std::clamp(static_cast<int>(std::floor(z / hz)), 0, nz - 1);
    const double s = x / hx - ix, t = z / hz - iz;
    const double l[3] = {2.0 * (s - 0.5) * (s - 1.0), -4.0 * s * (s - 1.0), 2.0 * s * (s - 0.5)};
    const double dl[3] = {4.0 * s - 3.0, 4.0 - 8.0 * s, 4.0 * s - 1.0};
    const double m[3] = {2.0 * (t - 0.5) * (t - 1.0), -4.0 * t * (t - 1.0), 2.0 * t * (t - 0.5)};
    const double dm[3] = {4.0 * t - 3.0, 4.0 - 8.0 * t, 4.0 * t - 1.0};
    double px = 0.0, pz = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double psi = rotation_stream((ix + 0.5 * i) * hx, (iz + 0.5 * j) * hz);
        px += psi * dl[i] * m[j];
        pz += psi * l[i] * dm[j];
      }
    return {-pz / hz, px / hx};
  };
  return v;
}

VelocityField deformational_velocity() {
  VelocityField v;
  v.value = [](double x, double z, double t) -> Vec2 {
    const double s = 5.0 * (0.5 - t);
    return {1.0 - s * std::sin(2.0 * kPi * (x - t)) * std::cos(kPi * z),
            s * std::cos(2.0 * kPi * (x - t)) * std::sin(kPi * z)};
  };
  return v;
}

VelocityField boundary_velocity() {
  VelocityField v;
  v.value = [](double, double z, double t) -> Vec2 {
    const double w = std::sin(2.0 * kPi * z);
    return {1.0, t < 0.5 ? -w : w};
  };
  v.phase = [](double t) { return t < 0.5 ? 0 : 1; };
  return v;
}

ScalarFunction gaussian_profile(double x0) {
  return [x0](double x, double z) {
    const double r2 = (x - x0) * (x - x0) + (z - 0.5) * (z - 0.5);
    return std::exp(-r2 * 64.0);
  };
}

ScalarFunction rotated_gaussian(double t) {
  const double angle = 2.0 * kPi * t;
  const double cx = 0.5 + std::cos(angle) * (0.375 - 0.5);
  const double cz = 0.5 + std::sin(angle) * (0.375 - 0.5);
  return [cx, cz](double x, double z) {
    const double r2 = (x - cx) * (x - cx) + (z - cz) * (z - cz);
    return std::exp(-r2 * 64.0);
  };
}

ScalarFunction boundary_profile() {
  return [](double x, double z) { return 1.0 + 0.1 * (z - 0.5) * (z - 0.5) * std::cos(2.0 * kPi * x); };
}

ScalarFunction leveque_profile() {
  constexpr double radius = 0.15;
  return [](double x, double z) {
    const double rc = std::hypot(x - 0.5, z - 0.75);
    if (rc <= radius) {
      if (std::abs(x - 0.5) < 0.025 && z < 0.85) return 0.0;
      return 1.0;
    }
    const double rn = std::hypot(x - 0.5, z - 0.25);
    if (rn <= radius) return 1.0 - rn / radius;
    const double rh = std::hypot(x - 0.25, z - 0.5);
    if (rh <= radius) return 0.25 * (1.0 + std::cos(kPi * rh / radius));
    return 0.0;
  };
}

double reference_critical_courant(const SchemeConfig& config) {
  ModeCase mode = ModeCase::B;
  if (config.projection == Projection::B)
    mode = ModeCase::C;
  else if (config.spaces.v0 == SpaceTag::DG0 || config.spaces.v0 == SpaceTag::DG0xDG0)
    mode = ModeCase::A;
  static std::map<ModeCase, double> cache;
  auto it = cache.find(mode);
  if (it == cache.end()) it = cache.emplace(mode, critical_courant(mode)).first;
  return it->second;
}

double fit_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) fail(ErrorCode::DegenerateInput, "slope fit needs at least three points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [dx, e] : points) {
    if (!(dx > 0.0) || !(e > 0.0) || !std::isfinite(e))
      fail(ErrorCode::DegenerateInput, "slope fit needs positive spacings and errors");
    const double lx = std::log(dx);
    const double ly = std::log(e);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(points.size());
  const double den = n * sxx - sx * sx;
  if (!(std::abs(den) > 0.0)) fail(ErrorCode::DegenerateInput, "slope fit needs distinct spacings");
  return (n * sxy - sx * sy) / den;
}

namespace {

struct TestSetup {
  VelocityField velocity;
  bool discrete_rotation = false;
  ScalarFunction initial;
  ScalarFunction reference;
};

TestSetup test_setup(const ConvergenceSpec& spec) {
  TestSetup s;
  const bool full_period = std::abs(spec.t_final - std::round(spec.t_final)) < 1e-12;
  switch (spec.test) {
    case TestCase::Rotational:
      s.velocity = rotational_velocity();
      s.discrete_rotation = true;
      s.initial = gaussian_profile(0.375);
      s.reference = rotated_gaussian(spec.t_final);
      break;
    case TestCase::Deformational:
      if (std::abs(spec.t_final - 1.0) > 1e-12)
        fail(ErrorCode::InvalidArgument, "the deformational test is defined for t_final = 1");
      s.velocity = deformational_velocity();
      s.initial = gaussian_profile(0.5);
      s.reference = s.initial;
      break;
    case TestCase::Boundary:
      if (std::abs(spec.t_final - 1.0) > 1e-12)
        fail(ErrorCode::InvalidArgument, "the boundary test is defined for t_final = 1");
      s.velocity = boundary_velocity();
      s.initial = boundary_profile();
      s.reference = s.initial;
      break;
  }
  if (spec.zero_velocity) {
    s.velocity = zero_velocity();
    s.discrete_rotation = false;
    s.reference = s.initial;
  }
  if (spec.test == TestCase::Rotational && full_period) s.reference = s.initial;
  return s;
}

VelocityField mesh_velocity(const TestSetup& setup, const Mesh& mesh) {
  return setup.discrete_rotation ? rotational_velocity(mesh) : setup.velocity;
}

Field project_profile(const ScalarFunction& f, const SpacePtr& space) {
  if (space->n_components() == 2)
    return project_analytic([&f](double x, double z) -> Vec2 { return Vec2::Constant(f(x, z)); }, space);
  return project_analytic(f, space);
}

double max_courant(const VelocityField& v, const Mesh& mesh, double dt, double t_final) {
  double c = 0.0;
  for (int i = 0; i <= 8; ++i) c = std::max(c, courant_number(v, mesh, dt, t_final * i / 8.0));
  return c;
}

ConvergenceRow run_one(const ConvergenceSpec& spec, const TestSetup& setup, int n) {
  ConvergenceRow row;
  row.n = n;
  row.dx = 1.0 / n;
  row.dt = spec.scale_dt ? spec.dt * spec.resolutions.front() / n : spec.dt;
  const auto start = std::chrono::steady_clock::now();
  try {
    const MeshPtr mesh = make_quad(n, n, 1.0, 1.0, true);
    row.steps = step_count(row.dt, spec.t_final);
    const VelocityField velocity = mesh_velocity(setup, *mesh);
    row.courant = max_courant(velocity, *mesh, row.dt, spec.t_final);
    const double limit = 0.5 * reference_critical_courant(spec.config) * spec.substeps;
    if (row.courant > limit) {
      std::ostringstream os;
      os << "Courant number " << row.courant << " exceeds " << limit;
      fail(ErrorCode::CflViolation, os.str());
    }
    RecoveredScheme scheme(mesh, spec.config, velocity, spec.substeps);
    const Field rho0 = project_profile(setup.initial, scheme.v0());
    const Field reference = project_profile(setup.reference, scheme.v0());
    const Field rho = scheme.run(rho0, row.dt, spec.t_final);
    row.error = l2_error(rho, reference);
    if (!std::isfinite(row.error)) fail(ErrorCode::DegenerateInput, "non-finite error");
  } catch (const Error& e) {
    row.status = to_string(e.code());
    row.message = e.what();
    row.error = std::numeric_limits<double>::quiet_NaN();
  }
  row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

}  // namespace

ConvergenceReport run_convergence(const ConvergenceSpec& spec) {
  if (spec.resolutions.empty()) fail(ErrorCode::InvalidArgument, "no resolutions given");
  for (std::size_t i = 1; i < spec.resolutions.size(); ++i)
    if (spec.resolutions[i] <= spec.resolutions[i - 1])
      fail(ErrorCode::InvalidArgument, "resolutions must be strictly increasing");
  const TestSetup setup = test_setup(spec);
  ConvergenceReport report;
  report.spec = spec;
  std::vector<std::pair<double, double>> points;
  for (int n : spec.resolutions) {
    report.rows.push_back(run_one(spec, setup, n));
    const ConvergenceRow& row = report.rows.back();
    if (row.status == "ok") points.emplace_back(row.dx, row.error);
  }
  try {
    report.slope = fit_slope(points);
  } catch (const Error& e) {
    report.slope_status = to_string(e.code());
  }
  return report;
}

ConvergenceReport run_rotational(ConvergenceSpec spec) {
  spec.test = TestCase::Rotational;
  return run_convergence(spec);
}

ConvergenceReport run_deformational(ConvergenceSpec spec) {
  spec.test = TestCase::Deformational;
  return run_convergence(spec);
}

BoundaryComparison run_boundary(ConvergenceSpec spec) {
  spec.test = TestCase::Boundary;
  BoundaryComparison out;
  spec.config.boundary_recovery = true;
  out.with_recovery = run_convergence(spec);
  spec.config.boundary_recovery = false;
  out.without_recovery = run_convergence(spec);
  return out;
}

void write_convergence_report(const ConvergenceReport& report, const std::string& dir) {
  ensure_dir(dir);
  const ConvergenceSpec& s = report.spec;
  {
    std::ofstream out = open_output(join_path(dir, "errors.csv"));
    out << "test,config,boundary_recovery,n,dx,dt,steps,courant,error,status,message\n";
    for (const ConvergenceRow& r : report.rows) {
      std::string msg = r.message;
      std::replace(msg.begin(), msg.end(), ',', ';');
      out << to_string(s.test) << ',' << s.config.name << ',' << (s.config.boundary_recovery ? 1 : 0) << ','
          << r.n << ',' << r.dx << ',' << r.dt << ',' << r.steps << ',' << r.courant << ',' << r.error << ','
          << r.status << ',' << msg << '\n';
    }
  }
  {
    std::ofstream out = open_output(join_path(dir, "timings.csv"));
    out << "n,runtime_s\n";
    for (const ConvergenceRow& r : report.rows) out << r.n << ',' << r.runtime_s << '\n';
  }
  {
    std::ofstream out = open_output(join_path(dir, "summary.txt"));
    out << "test=" << to_string(s.test) << '\n';
    out << "config=" << s.config.name << '\n';
    out << "boundary_recovery=" << (s.config.boundary_recovery ? "true" : "false") << '\n';
    if (report.slope)
      out << "slope=" << *report.slope << '\n';
    else
      out << "slope=nan\n";
    out << "slope_status=" << report.slope_status << '\n';
    int failed = 0;
    for (const ConvergenceRow& r : report.rows) failed += r.status != "ok";
    out << "failed_runs=" << failed << '\n';
  }
  {
    std::ofstream out = open_output(join_path(dir, "metadata.txt"));
    out << "test=" << to_string(s.test) << '\n';
    out << "config=" << s.config.name << '\n';
    out << "spaces=" << to_string(s.config.spaces.v0) << ',' << to_string(s.config.spaces.v1) << ','
        << to_string(s.config.spaces.vt) << ',' << to_string(s.config.spaces.vh) << '\n';
    out << "projection=" << projection_name(s.config.projection) << '\n';
    out << "limiter=" << (s.config.limiter_enabled ? "true" : "false") << '\n';
    out << "boundary_recovery=" << (s.config.boundary_recovery ? "true" : "false") << '\n';
    out << "resolutions=";
    for (std::size_t i = 0; i < s.resolutions.size(); ++i) out << (i ? "," : "") << s.resolutions[i];
    out << '\n';
    out << "dt=" << s.dt << '\n';
    out << "scale_dt=" << (s.scale_dt ? "true" : "false") << '\n';
    out << "t_final=" << s.t_final << '\n';
    out << "substeps=" << s.substeps << '\n';
    out << "zero_velocity=" << (s.zero_velocity ? "true" : "false") << '\n';
    out << "seed=" << s.seed << '\n';
    out << "quadrature_points=4\n";
    out << "workers=1\n";
    out << "commit=unknown\n";
  }
}

LevequeReport run_leveque(const LevequeSpec& spec) {
  LevequeReport report;
  report.spec = spec;
  const MeshPtr mesh = make_quad(spec.n, spec.n, 1.0, 1.0, true);
  const VelocityField velocity = rotational_velocity(*mesh);
  const int steps = step_count(spec.dt, spec.t_final);
  const ScalarFunction profile = leveque_profile();

  const double courant = max_courant(velocity, *mesh, spec.dt, spec.t_final);
  const double limit = 0.5 * reference_critical_courant(config_moisture());
  if (courant > limit) {
    std::ostringstream os;
    os << "Courant number " << courant << " exceeds " << limit;
    fail(ErrorCode::CflViolation, os.str());
  }

  auto finish = [&](LevequeVariant& v, const Field& initial, const Field& final_field) {
    v.final_min = coeff_min(final_field);
    v.final_max = coeff_max(final_field);
    v.mass_final = integrate(final_field);
    v.l2_error = l2_error(final_field, initial);
    v.bounded = v.trajectory_min >= v.initial_min - spec.tolerance &&
                v.trajectory_max <= v.initial_max + spec.tolerance;
  };
  auto record = [&](LevequeVariant& v, const Field& f, int step) {
    const double lo = coeff_min(f);
    const double hi = coeff_max(f);
    v.trajectory_min = std::min(v.trajectory_min, lo);
    v.trajectory_max = std::max(v.trajectory_max, hi);
    if (step % spec.trajectory_stride == 0 || step == steps) v.trajectory.push_back({step, step * spec.dt, lo, hi});
  };
  auto start = [&](LevequeVariant& v, const Field& initial) {
    v.initial_min = coeff_min(initial);
    v.initial_max = coeff_max(initial);
    v.trajectory_min = v.initial_min;
    v.trajectory_max = v.initial_max;
    v.mass_initial = integrate(initial);
    v.trajectory.push_back({0, 0.0, v.initial_min, v.initial_max});
  };

  for (bool limited : {true, false}) {
    SchemeConfig config = config_moisture();
    config.limiter_enabled = limited;
    RecoveredScheme scheme(mesh, config, velocity);
    LevequeVariant v;
    v.name = limited ? "recovered_limited" : "recovered_unlimited";
    v.space = to_string(config.spaces.v0);
    v.recovered = true;
    v.limited = limited;
    const Field initial = interpolate_analytic(profile, scheme.v0());
    start(v, initial);
    Field rho = initial;
    for (int i = 0; i < steps; ++i) {
      rho = scheme.step(rho, i * spec.dt, spec.dt);
      record(v, rho, i + 1);
    }
    finish(v, initial, rho);
    report.variants.push_back(std::move(v));
  }

  const SpacePtr dg1 = make_space(mesh, SpaceTag::DG1xDG1);
  const AdvectionOperator advection(dg1);
  const VertexLimiter limiter(dg1);
  for (bool limited : {true, false}) {
    VelocitySampler sampler(mesh, velocity);
    LevequeVariant v;
    v.name = limited ? "dg1_limited" : "dg1_unlimited";
    v.space = to_string(SpaceTag::DG1xDG1);
    v.limited = limited;
    const Field initial = interpolate_analytic(profile, dg1);
    start(v, initial);
    Field q = initial;
    for (int i = 0; i < steps; ++i) {
      advection.ssprk3_step(q.coeffs, sampler, i * spec.dt, spec.dt, limited ? &limiter : nullptr);
      record(v, q, i + 1);
    }
    finish(v, initial, q);
    report.variants.push_back(std::move(v));
  }
  return report;
}

void write_leveque_report(const LevequeReport& report, const std::string& dir) {
  ensure_dir(dir);
  {
    std::ofstream out = open_output(join_path(dir, "leveque_summary.csv"));
    out << "variant,space,recovered,limited,initial_min,initial_max,final_min,final_max,trajectory_min,"
           "trajectory_max,mass_initial,mass_final,mass_drift,l2_error,bounded\n";
    for (const LevequeVariant& v : report.variants) {
      out << v.name << ',' << v.space << ',' << v.recovered << ',' << v.limited << ',' << v.initial_min << ','
          << v.initial_max << ',' << v.final_min << ',' << v.final_max << ',' << v.trajectory_min << ','
          << v.trajectory_max << ',' << v.mass_initial << ',' << v.mass_final << ',' << v.mass_drift() << ','
          << v.l2_error << ',' << (v.bounded ? 1 : 0) << '\n';
    }
  }
  {
    std::ofstream out = open_output(join_path(dir, "leveque_trajectory.csv"));
    out << "variant,step,t,min,max\n";
    for (const LevequeVariant& v : report.variants)
      for (const auto& s : v.trajectory) out << v.name << ',' << s.step << ',' << s.t << ',' << s.min << ',' << s.max << '\n';
  }
  {
    const LevequeSpec& s = report.spec;
    std::ofstream out = open_output(join_path(dir, "metadata.txt"));
    out << "test=leveque\n";
    out << "n=" << s.n << '\n';
    out << "dt=" << s.dt << '\n';
    out << "t_final=" << s.t_final << '\n';
    out << "tolerance=" << s.tolerance << '\n';
    out << "domain=unit square, periodic x, walls at z=0 and z=1\n";
    out << "velocity=rotational test stream function, angular speed 2 pi inside r=0.48 about (0.5,0.5)\n";
    out << "slotted_cylinder=centre (0.5,0.75), radius 0.15, slot width 0.05 up to z=0.85, value 1\n";
    out << "cone=centre (0.5,0.25), radius 0.15, peak 1\n";
    out << "hump=centre (0.25,0.5), radius 0.15, (1+cos(pi r/0.15))/4\n";
    out << "background=0\n";
    out << "initial_condition=nodal interpolation\n";
    out << "workers=1\n";
    out << "commit=unknown\n";
  }
}

std::vector<StabilityRow> run_stability(const StabilitySpec& spec) {
  std::vector<StabilityRow> rows;
  for (ModeCase mode : spec.cases) {
    for (double c : spec.courants) {
      for (int k : spec.wavenumbers) {
        StabilityRow r;
        r.mode = mode;
        r.c = c;
        r.k = k;
        r.phi = 2.0 * kPi * k / spec.n_cells;
        r.oracle = scheme_amplification(mode, c, r.phi);
        r.closed_form = closed_form_amplification(mode, c, r.phi);
        r.measured = measure_amplification(mode, c, k, spec.n_cells);
        r.pass = std::abs(r.oracle - r.measured) <= spec.tolerance;
        rows.push_back(r);
      }
    }
  }
  return rows;
}

void write_stability_csv(const std::vector<StabilityRow>& rows, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "case,c,k,phi,amp_oracle,amp_closed_form,amp_measured,pass\n";
  for (const StabilityRow& r : rows)
    out << to_string(r.mode) << ',' << r.c << ',' << r.k << ',' << r.phi << ',' << r.oracle << ','
        << r.closed_form << ',' << r.measured << ',' << (r.pass ? 1 : 0) << '\n';
}

std::vector<ClosedFormRow> closed_form_comparison(const std::vector<double>& courants,
                                                  const std::vector<double>& phis) {
  std::vector<ClosedFormRow> rows;
  for (ModeCase mode : {ModeCase::A, ModeCase::B, ModeCase::C}) {
    for (double c : courants) {
      for (double phi : phis) {
        ClosedFormRow r{mode, c, phi, scheme_amplification(mode, c, phi), closed_form_amplification(mode, c, phi),
                        false};
        r.divergent = std::abs(r.oracle - r.closed_form) > 1e-8;
        rows.push_back(r);
      }
    }
  }
  return rows;
}

void write_closed_form_report(const std::vector<ClosedFormRow>& rows, const std::string& dir) {
  ensure_dir(dir);
  {
    std::ofstream out = open_output(join_path(dir, "closed_form_report.csv"));
    out << "case,c,phi,amp_oracle,amp_closed_form,abs_diff,status\n";
    for (const ClosedFormRow& r : rows)
      out << to_string(r.mode) << ',' << r.c << ',' << r.phi << ',' << r.oracle << ',' << r.closed_form << ','
          << std::abs(r.oracle - r.closed_form) << ',' << (r.divergent ? "known-divergence" : "agree") << '\n';
  }
  std::ofstream out = open_output(join_path(dir, "closed_form_summary.txt"));
  for (ModeCase mode : {ModeCase::A, ModeCase::B, ModeCase::C}) {
    int total = 0, divergent = 0, c0_divergent = 0;
    double worst = 0.0;
    for (const ClosedFormRow& r : rows) {
      if (r.mode != mode) continue;
      ++total;
      divergent += r.divergent;
      if (r.c == 0.0 && r.divergent) ++c0_divergent;
      worst = std::max(worst, std::abs(r.oracle - r.closed_form));
    }
    const std::string key = std::string("case_") + to_string(mode);
    out << key << "_rows=" << total << '\n';
    out << key << "_divergent_rows=" << divergent << '\n';
    out << key << "_max_abs_diff=" << worst << '\n';
    out << key << "_c0_divergence=" << (c0_divergent > 0 ? "flagged" : "none") << '\n';
  }
  out << "authoritative=operator-composition\n";
}

void write_snapshot(TestCase test, const SchemeConfig& config, int n, double dt, double t_final,
                    const std::string& dir) {
  ConvergenceSpec spec;
  spec.test = test;
  spec.config = config;
  spec.t_final = t_final;
  spec.dt = dt;
  const TestSetup setup = test_setup(spec);
  const MeshPtr mesh = make_quad(n, n, 1.0, 1.0, true);
  RecoveredScheme scheme(mesh, config, mesh_velocity(setup, *mesh));
  const Field rho0 = project_profile(setup.initial, scheme.v0());
  const Field rho = scheme.run(rho0, dt, t_final);
  ensure_dir(dir);
  {
    std::ofstream out = open_output(join_path(dir, "initial.csv"));
    write_field_csv(rho0, out);
  }
  std::ofstream out = open_output(join_path(dir, "final.csv"));
  write_field_csv(rho, out);
}

}  // namespace rsadv
