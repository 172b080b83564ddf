#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rsadv/scheme.hpp"
#include "rsadv/vonneumann.hpp"

namespace rsadv {

enum class TestCase { Rotational, Deformational, Boundary };

const char* to_string(TestCase t) noexcept;
std::optional<TestCase> parse_test_case(std::string_view name);

/// Rigid rotation about (0.5, 0.5) with angular speed 2 pi inside radius
/// 0.48, blended to rest at radius 0.5.
VelocityField rotational_velocity();
/// The same flow as the curl of the biquadratic interpolant of its stream
/// function on `mesh`: divergence-free in every cell, with continuous normal
/// component and no flux through the walls.
VelocityField rotational_velocity(const Mesh& mesh);
VelocityField deformational_velocity();
/// (1, -sin 2 pi z) before t = 0.5 and (1, sin 2 pi z) afterwards.
VelocityField boundary_velocity();

/// Gaussian of radius 1/8 centred at (x0, 0.5).
ScalarFunction gaussian_profile(double x0);
/// Gaussian of the rotational test after rigid rotation through 2 pi t.
ScalarFunction rotated_gaussian(double t);
ScalarFunction boundary_profile();
/// Slotted cylinder, cone and hump.
ScalarFunction leveque_profile();

/// Critical Courant number of the 1D case associated with a configuration:
/// piecewise constant spaces map to case A, P_A with continuous spaces to
/// case B and P_B to case C.
double reference_critical_courant(const SchemeConfig& config);

struct ConvergenceSpec {
  TestCase test = TestCase::Rotational;
  SchemeConfig config = config_rho();
  std::vector<int> resolutions{20, 40, 80};
  double dt = 1e-4;
  double t_final = 1.0;
  /// Scale dt with the grid spacing so the Courant number stays fixed.
  bool scale_dt = false;
  bool zero_velocity = false;
  int substeps = 1;
  unsigned seed = 0;
};

struct ConvergenceRow {
  int n = 0;
  double dx = 0.0;
  double dt = 0.0;
  int steps = 0;
  double courant = 0.0;
  double error = 0.0;
  double runtime_s = 0.0;
  std::string status = "ok";
  std::string message;
};

struct ConvergenceReport {
  ConvergenceSpec spec;
  std::vector<ConvergenceRow> rows;
  std::optional<double> slope;
  std::string slope_status = "ok";
};

ConvergenceReport run_convergence(const ConvergenceSpec& spec);
ConvergenceReport run_rotational(ConvergenceSpec spec);
ConvergenceReport run_deformational(ConvergenceSpec spec);

struct BoundaryComparison {
  ConvergenceReport with_recovery;
  ConvergenceReport without_recovery;
};

/// Runs the boundary test twice, with and without the boundary extension.
BoundaryComparison run_boundary(ConvergenceSpec spec);

/// Writes errors.csv, timings.csv, summary.txt and metadata.txt.
void write_convergence_report(const ConvergenceReport& report, const std::string& dir);

/// Least-squares slope of ln E against ln dx.
double fit_slope(const std::vector<std::pair<double, double>>& points);

struct LevequeSpec {
  int n = 64;
  double dt = 5e-4;
  double t_final = 1.0;
  int trajectory_stride = 10;
  double tolerance = 1e-10;
};

struct LevequeVariant {
  std::string name;
  std::string space;
  bool recovered = false;
  bool limited = false;
  double initial_min = 0.0;
  double initial_max = 0.0;
  double final_min = 0.0;
  double final_max = 0.0;
  double trajectory_min = 0.0;
  double trajectory_max = 0.0;
  double mass_initial = 0.0;
  double mass_final = 0.0;
  double l2_error = 0.0;
  bool bounded = false;
  struct Sample {
    int step;
    double t;
    double min;
    double max;
  };
  std::vector<Sample> trajectory;

  double mass_drift() const { return (mass_final - mass_initial) / mass_initial; }
};

struct LevequeReport {
  LevequeSpec spec;
  std::vector<LevequeVariant> variants;
};

/// One revolution of the slotted-cylinder, cone and hump field for the
/// recovered moisture scheme (limited and unlimited) and for plain
/// DG1 x DG1 advection (limited and unlimited).
LevequeReport run_leveque(const LevequeSpec& spec);
void write_leveque_report(const LevequeReport& report, const std::string& dir);

struct StabilitySpec {
  std::vector<ModeCase> cases{ModeCase::A, ModeCase::B, ModeCase::C};
  std::vector<double> courants{0.2, 0.4, 0.6, 0.8};
  std::vector<int> wavenumbers{1, 5, 10, 30, 59};
  int n_cells = 120;
  double tolerance = 1e-9;
};

struct StabilityRow {
  ModeCase mode;
  double c;
  int k;
  double phi;
  double oracle;
  double closed_form;
  double measured;
  bool pass;
};

std::vector<StabilityRow> run_stability(const StabilitySpec& spec);
void write_stability_csv(const std::vector<StabilityRow>& rows, const std::string& path);

struct ClosedFormRow {
  ModeCase mode;
  double c;
  double phi;
  double oracle;
  double closed_form;
  bool divergent;
};

/// Compares the closed forms with the operator composition. Rows differing
/// by more than 1e-8 are flagged as divergent.
std::vector<ClosedFormRow> closed_form_comparison(const std::vector<double>& courants,
                                                  const std::vector<double>& phis);
/// Writes closed_form_report.csv and closed_form_summary.txt.
void write_closed_form_report(const std::vector<ClosedFormRow>& rows, const std::string& dir);

/// Writes initial.csv and final.csv for one run of a test at resolution n.
void write_snapshot(TestCase test, const SchemeConfig& config, int n, double dt, double t_final,
                    const std::string& dir);

}  // namespace rsadv
