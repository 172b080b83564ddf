#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rsadv/error.hpp"
#include "rsadv/harness.hpp"

using namespace rsadv;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rsadv_test_" + name);
  fs::remove_all(p);
  return p;
}

ConvergenceSpec quick_spec() {
  ConvergenceSpec s;
  s.resolutions = {8, 16};
  s.dt = 2e-3;
  s.t_final = 0.05;
  return s;
}

}  // namespace

TEST_CASE("slope fit") {
  CHECK(fit_slope({{0.1, 0.01}, {0.05, 0.0025}, {0.025, 0.000625}}) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(fit_slope({{0.1, 1e-2}, {0.05, 5e-3}}), Error);
  CHECK_THROWS_AS(fit_slope({{0.1, 0.01}, {0.05, 0.0}, {0.025, 0.001}}), Error);
  const double noisy = fit_slope({{0.1, 0.0101}, {0.05, 0.00248}, {0.025, 0.000631}, {0.0125, 0.000155}});
  CHECK(std::abs(noisy - 2.0) < 0.1);
}

TEST_CASE("test velocity fields") {
  const VelocityField d = deformational_velocity();
  for (const double x : {0.1, 0.4, 0.8})
    for (const double z : {0.2, 0.6}) {
      const Vec2 v = d.value(x, z, 0.5);
      CHECK(v.x() == doctest::Approx(1.0));
      CHECK(std::abs(v.y()) < 1e-15);
    }
  const double h = 1e-6;
  auto div = [&](double x, double z, double t) {
    return (d.value(x + h, z, t).x() - d.value(x - h, z, t).x()) / (2 * h) +
           (d.value(x, z + h, t).y() - d.value(x, z - h, t).y()) / (2 * h);
  };
  CHECK(std::abs(div(0.1, 0.3, 0.1)) > 1.0);

  for (const double x : {0.0, 0.3})
    for (const double t : {0.1, 0.7}) {
      CHECK(std::abs(d.value(x, 0.0, t).y()) < 1e-15);
      CHECK(std::abs(d.value(x, 1.0, t).y()) < 1e-14);
    }

  const VelocityField b = boundary_velocity();
  CHECK(b.value(0.3, 0.25, 0.2).y() == doctest::Approx(-1.0));
  CHECK(b.value(0.3, 0.25, 0.8).y() == doctest::Approx(1.0));
  CHECK(b.phase(0.2) != b.phase(0.8));

  const VelocityField r = rotational_velocity();
  const Vec2 v = r.value(0.5, 0.75, 0.0);
  CHECK(v.x() == doctest::Approx(-2.0 * M_PI * 0.25));
  CHECK(std::abs(v.y()) < 1e-14);
  CHECK(r.value(0.02, 0.02, 0.0).norm() == 0.0);
}

TEST_CASE("rotated gaussian returns after one revolution") {
  const ScalarFunction g0 = gaussian_profile(0.375);
  const ScalarFunction g1 = rotated_gaussian(1.0);
  for (const double x : {0.3, 0.4, 0.6})
    for (const double z : {0.45, 0.5}) CHECK(g1(x, z) == doctest::Approx(g0(x, z)).epsilon(1e-12));
}

TEST_CASE("zero velocity leaves unlimited configurations unchanged") {
  SchemeConfig unlimited = config_moisture();
  unlimited.limiter_enabled = false;
  for (const SchemeConfig& c : {config_rho(), config_theta(), config_velocity(), unlimited}) {
    ConvergenceSpec s = quick_spec();
    s.config = c;
    s.zero_velocity = true;
    const ConvergenceReport r = run_convergence(s);
    for (const ConvergenceRow& row : r.rows) {
      CHECK(row.status == "ok");
      CHECK(row.error <= 1e-11);
    }
  }
}

TEST_CASE("failed runs are reported as rows") {
  ConvergenceSpec s = quick_spec();
  s.dt = 0.05;
  const ConvergenceReport r = run_convergence(s);
  REQUIRE(r.rows.size() == 2);
  for (const ConvergenceRow& row : r.rows) {
    CHECK(row.status == to_string(ErrorCode::CflViolation));
    CHECK(std::isnan(row.error));
  }
  CHECK_FALSE(r.slope.has_value());
  CHECK(r.slope_status == to_string(ErrorCode::DegenerateInput));

  ConvergenceSpec bad = quick_spec();
  bad.resolutions = {16, 8};
  CHECK_THROWS_AS(run_convergence(bad), Error);
  ConvergenceSpec boundary = quick_spec();
  boundary.test = TestCase::Boundary;
  CHECK_THROWS_AS(run_convergence(boundary), Error);
}

TEST_CASE("convergence reports are reproducible") {
  const ConvergenceSpec s = quick_spec();
  const fs::path a = scratch_dir("report_a");
  const fs::path b = scratch_dir("report_b");
  write_convergence_report(run_convergence(s), a.string());
  write_convergence_report(run_convergence(s), b.string());
  for (const char* f : {"errors.csv", "summary.txt", "metadata.txt"}) {
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK(fs::exists(a / "timings.csv"));
  CHECK(slurp(a / "errors.csv").rfind("test,config,boundary_recovery,n,dx,dt", 0) == 0);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("stability sweep agrees with the operator product") {
  StabilitySpec s;
  s.courants = {0.0, 0.3};
  s.wavenumbers = {1, 13};
  s.n_cells = 60;
  const auto rows = run_stability(s);
  CHECK(rows.size() == 12);
  for (const StabilityRow& r : rows) {
    CHECK(r.pass);
    if (r.c == 0.0) CHECK(r.measured == doctest::Approx(1.0).epsilon(1e-12));
  }
  const fs::path dir = scratch_dir("stability");
  fs::create_directories(dir);
  write_stability_csv(rows, (dir / "stability.csv").string());
  CHECK(slurp(dir / "stability.csv").rfind("case,c,k,phi,amp_oracle,amp_closed_form,amp_measured,pass\n", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("closed-form comparison flags the known divergence") {
  const auto rows = closed_form_comparison({0.0, 0.4}, phase_grid(64));
  bool a_c0 = false;
  for (const ClosedFormRow& r : rows) {
    if (r.mode == ModeCase::A && r.c == 0.0 && r.divergent) a_c0 = true;
    if (r.mode == ModeCase::C) CHECK_FALSE(r.divergent);
  }
  CHECK(a_c0);
  const fs::path dir = scratch_dir("closed_form");
  write_closed_form_report(rows, dir.string());
  CHECK(fs::exists(dir / "closed_form_report.csv"));
  CHECK(slurp(dir / "closed_form_summary.txt").find("A") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("short LeVeque run") {
  LevequeSpec s;
  s.n = 16;
  s.dt = 2e-3;
  s.t_final = 0.1;
  s.trajectory_stride = 10;
  const LevequeReport r = run_leveque(s);
  REQUIRE(r.variants.size() == 4);
  for (const LevequeVariant& v : r.variants) {
    CHECK(v.initial_min == doctest::Approx(0.0));
    CHECK(v.initial_max == doctest::Approx(1.0));
    CHECK(std::abs(v.mass_drift()) < 1e-12);
    CHECK(v.trajectory.size() == 6);
    if (v.limited) CHECK(v.bounded);
  }
  const fs::path dir = scratch_dir("leveque");
  write_leveque_report(r, dir.string());
  for (const char* f : {"leveque_summary.csv", "leveque_trajectory.csv", "metadata.txt"}) CHECK(fs::exists(dir / f));
  fs::remove_all(dir);

  LevequeSpec fast = s;
  fast.dt = 0.05;
  CHECK_THROWS_AS(run_leveque(fast), Error);
}

TEST_CASE("test and configuration names") {
  CHECK(parse_test_case("boundary") == TestCase::Boundary);
  CHECK_FALSE(parse_test_case("spiral").has_value());
  CHECK(reference_critical_courant(config_moisture()) == doctest::Approx(0.3601).epsilon(1e-3));
}
