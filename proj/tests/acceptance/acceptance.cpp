#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "rsadv/error.hpp"
#include "rsadv/harness.hpp"

using namespace rsadv;

namespace {

int g_failed = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failed;
}

void info(const std::string& text) {
  std::printf("  %s\n", text.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string describe(const ConvergenceReport& r) {
  std::string s;
  for (const ConvergenceRow& row : r.rows) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "n=%d err=%.4e ", row.n, row.error);
    s += buf;
    if (row.status != "ok") s += "(" + row.status + ") ";
  }
  s += r.slope ? fmt("slope=%.3f", *r.slope) : "slope=nan";
  return s;
}

bool slope_in(const ConvergenceReport& r, double lo, double hi) {
  return r.slope && *r.slope >= lo && *r.slope <= hi;
}

Field random_field(const SpacePtr& s, std::mt19937& rng, double lo, double hi) {
  std::uniform_real_distribution<double> U(lo, hi);
  Field f(s);
  for (int i = 0; i < s->n_dofs(); ++i) f.coeffs[i] = U(rng);
  return f;
}

void critical_courants() {
  const auto t0 = std::chrono::steady_clock::now();
  const struct {
    ModeCase mode;
    double expected;
  } table[] = {{ModeCase::A, 0.8506}, {ModeCase::B, 0.9930}, {ModeCase::C, 0.3625}};
  bool pass = true;
  std::string detail;
  for (const auto& e : table) {
    const double c = critical_courant(e.mode);
    const bool ok = std::abs(c - e.expected) <= 0.005;
    pass = pass && ok;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s=%.4f (expected %.4f%s) ", to_string(e.mode), c, e.expected, ok ? "" : ", off");
    detail += buf;
  }
  const double t = seconds_since(t0);
  pass = pass && t < 10.0;
  report(1, pass, detail + fmt("time=%.2fs", t));
}

void stability_agreement() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = run_stability(StabilitySpec{});
  double worst = 0.0;
  int failed = 0;
  for (const StabilityRow& r : rows) {
    worst = std::max(worst, std::abs(r.measured - r.oracle));
    failed += !r.pass;
  }
  const double t = seconds_since(t0);
  char buf[128];
  std::snprintf(buf, sizeof buf, "rows=%zu failed=%d max|measured-oracle|=%.2e time=%.2fs", rows.size(), failed,
                worst, t);
  report(2, rows.size() == 60 && failed == 0 && worst <= 1e-9 && t < 30.0, buf);
}

void rotational_convergence() {
  bool pass = true;
  std::string detail;
  const std::pair<const char*, SchemeConfig> configs[] = {
      {"rho", config_rho()}, {"theta", config_theta()}, {"r", config_moisture()}};
  for (const auto& [name, config] : configs) {
    ConvergenceSpec full;
    full.config = config;
    const ConvergenceReport f = run_rotational(full);
    ConvergenceSpec quick = full;
    quick.t_final = 0.25;
    const ConvergenceReport q = run_rotational(quick);
    const bool ok = slope_in(f, 1.7, 2.5) && q.slope && f.slope && std::abs(*q.slope - *f.slope) <= 0.2;
    pass = pass && ok;
    info(std::string(name) + " T=1:    " + describe(f));
    info(std::string(name) + " T=0.25: " + describe(q));
    detail += std::string(name) + (f.slope ? fmt("=%.3f", *f.slope) : "=nan") +
              (q.slope ? fmt("/%.3f ", *q.slope) : "/nan ");
  }
  ConvergenceSpec unlimited;
  unlimited.config = config_moisture();
  unlimited.config.limiter_enabled = false;
  info("r without limiter T=1: " + describe(run_rotational(unlimited)));
  report(3, pass, "full/quick slopes " + detail);
}

void boundary_necessity() {
  ConvergenceSpec spec;
  spec.config = config_rho();
  spec.resolutions = {40, 80, 160};
  spec.dt = 5e-4;
  const BoundaryComparison rho = run_boundary(spec);
  info("rho with boundary recovery:    " + describe(rho.with_recovery));
  info("rho without boundary recovery: " + describe(rho.without_recovery));
  bool smaller = true;
  for (std::size_t i = 0; i < rho.with_recovery.rows.size(); ++i)
    smaller = smaller && rho.with_recovery.rows[i].error < rho.without_recovery.rows[i].error;
  const bool slopes = rho.with_recovery.slope && rho.without_recovery.slope;
  const double gain = slopes ? *rho.with_recovery.slope - *rho.without_recovery.slope : 0.0;

  ConvergenceSpec coarse = spec;
  coarse.resolutions = {20, 40, 80};
  coarse.dt = 1e-3;
  const BoundaryComparison rc = run_boundary(coarse);
  info("rho at 20/40/80 with:    " + describe(rc.with_recovery));
  info("rho at 20/40/80 without: " + describe(rc.without_recovery));

  ConvergenceSpec th = coarse;
  th.config = config_theta();
  const BoundaryComparison theta = run_boundary(th);
  double worst = 0.0;
  for (std::size_t i = 0; i < theta.with_recovery.rows.size(); ++i) {
    const double a = theta.with_recovery.rows[i].error, b = theta.without_recovery.rows[i].error;
    worst = std::max(worst, std::isfinite(a) && std::isfinite(b) ? std::abs(a - b) / b : INFINITY);
  }
  info("theta with:    " + describe(theta.with_recovery));

  char buf[160];
  std::snprintf(buf, sizeof buf, "rho slope gain=%.3f errors smaller=%s theta rel diff=%.1e", gain,
                smaller ? "yes" : "no", worst);
  report(4, slopes && gain >= 0.4 && smaller && worst <= 1e-11, buf);
}

double no_flow_change(const SchemeConfig& config, std::mt19937& rng) {
  const MeshPtr mesh = make_quad(10, 10, 1.0, 1.0, true);
  RecoveredScheme scheme(mesh, config, zero_velocity());
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Field rho = random_field(scheme.v0(), rng, 0.0, 1.0);
    const Field next = scheme.step(rho, 0.0, 1e-3);
    worst = std::max(worst, l2_error(next, rho) / l2_norm(rho));
  }
  return worst;
}

void no_flow() {
  std::mt19937 rng(2024);
  bool pass = true;
  std::string detail;
  for (const SchemeConfig& c : {config_rho(), config_velocity(), config_theta(), config_moisture()}) {
    const double w = no_flow_change(c, rng);
    pass = pass && w <= 1e-11;
    detail += c.name + fmt("=%.1e ", w);
  }
  SchemeConfig unlimited = config_moisture();
  unlimited.limiter_enabled = false;
  info(fmt("r without limiter: max relative change %.1e", no_flow_change(unlimited, rng)));
  report(5, pass, "max relative change " + detail);
}

void mass_conservation() {
  const MeshPtr mesh = make_quad(20, 20, 1.0, 1.0, true);
  double worst = 0.0;
  for (const SchemeConfig& c : {config_rho(), config_theta()}) {
    RecoveredScheme scheme(mesh, c, rotational_velocity(*mesh));
    Field rho = project_analytic([](double x, double z) { return 1.0 + std::exp(-64.0 * ((x - 0.375) * (x - 0.375) + (z - 0.5) * (z - 0.5))); },
                                 scheme.v0());
    for (int i = 0; i < 20; ++i) {
      const double before = integrate(rho);
      rho = scheme.step(rho, i * 1e-3, 1e-3);
      worst = std::max(worst, std::abs(integrate(rho) - before) / std::abs(before));
    }
  }
  double spike_change = 0.0;
  for (const Quadruple& q : supported_quadruples()) {
    if (!is_recovery_pair(broken_tag(q.v0), q.v0)) continue;
    const MeshPtr m = tag_dimension(q.v0) == 1 ? make_interval(5, 1.0) : make_quad(4, 4, 1.0, 1.0, true);
    const auto v0 = make_space(m, q.v0);
    const auto v1 = make_space(m, q.v1);
    for (int d = 0; d < v1->n_dofs(); ++d) {
      Field spike(v1);
      spike.coeffs[d] = 1.0;
      const Field u = project_PB(spike, v0);
      for (int k = 0; k < v0->n_components(); ++k)
        spike_change = std::max(spike_change, std::abs(integrate(u, k) - integrate(spike, k)));
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "P_A max per-step mass change=%.1e; P_B largest spike mass change=%.1e", worst,
                spike_change);
  report(6, worst <= 1e-11 && spike_change > 0.0, buf);
}

void limiter_boundedness() {
  const LevequeReport r = run_leveque(LevequeSpec{});
  const LevequeVariant* limited = nullptr;
  const LevequeVariant* dg1 = nullptr;
  for (const LevequeVariant& v : r.variants) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%-20s range [%.3e, %.6f] initial [%.3e, %.6f] mass drift %.1e", v.name.c_str(),
                  v.trajectory_min, v.trajectory_max, v.initial_min, v.initial_max, v.mass_drift());
    info(buf);
    if (v.name == "recovered_limited") limited = &v;
    if (v.name == "dg1_unlimited") dg1 = &v;
  }
  const bool pass = limited && dg1 && limited->bounded && !dg1->bounded;
  report(7, pass, std::string("r config bounded=") + (limited && limited->bounded ? "yes" : "no") +
                      ", unlimited DG1 bounded=" + (dg1 && dg1->bounded ? "yes" : "no"));
}

void recovery_properties() {
  std::mt19937 rng(31);
  const int sizes[] = {10, 20, 40, 80};
  const ScalarFunction smooth = [](double x, double z) {
    return std::sin(2.0 * M_PI * x) * std::cos(M_PI * z) + z * z;
  };
  std::vector<double> positive, signed_ratios;
  for (const int n : sizes) {
    const SchemeOperators ops(make_quad(n, n, 1.0, 1.0, true), config_rho().spaces, Projection::A, true);
    double wp = 0.0, ws = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const Field r = random_field(ops.v0(), rng, 0.0, 1.0);
      wp = std::max(wp, l2_norm(ops.recover(r)) / l2_norm(r));
      const Field z = random_field(ops.v0(), rng, -1.0, 1.0);
      ws = std::max(ws, l2_norm(ops.recover(z)) / l2_norm(z));
    }
    positive.push_back(wp);
    signed_ratios.push_back(ws);
    char buf[128];
    std::snprintf(buf, sizeof buf, "N=%d max ratio: fields in [0,1] %.4f, fields in [-1,1] %.4f", n, wp, ws);
    info(buf);
  }
  auto spread = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi / *lo - 1.0;
  };
  bool pass = spread(positive) < 0.1;
  std::string detail = fmt("ratio spread=%.1f%%", 100.0 * spread(positive)) +
                       fmt(" (mean-zero fields %.1f%%); ", 100.0 * spread(signed_ratios));

  for (const SchemeConfig& c : {config_rho(), config_theta()}) {
    std::vector<std::pair<double, double>> errors;
    for (const int n : sizes) {
      const SchemeOperators ops(make_quad(n, n, 1.0, 1.0, true), c.spaces, c.projection, true);
      errors.emplace_back(1.0 / n, l2_error(ops.recover(project_analytic(smooth, ops.v0())), smooth));
    }
    const double slope = fit_slope(errors);
    pass = pass && slope >= 1.9;
    detail += c.name + fmt(" recovery slope=%.3f; ", slope);
  }
  const MeshPtr m = make_quad(2, 2, 1.0, 1.0, true);
  Field col(make_space(m, SpaceTag::DG0xDG0));
  for (int c = 0; c < 4; ++c) col.coeffs[c] = m->cell_iz(c) == 0 ? 0.25 : 0.75;
  const auto vt = make_space(m, SpaceTag::CG1xCG1);
  const Field b = recover_with_boundary(col, vt);
  double err = 0.0;
  for (int i = 0; i < vt->n_dofs(); ++i) err = std::max(err, std::abs(b.coeffs[i] - vt->dof_coords(i).y()));
  pass = pass && err <= 1e-13;
  report(8, pass, detail + fmt("linear column error=%.1e", err));
}

void closed_form_report() {
  const auto rows = closed_form_comparison({0.0, 0.2, 0.4, 0.6, 0.8}, phase_grid(256));
  int a_c0 = 0, divergent = 0;
  for (const ClosedFormRow& r : rows) {
    divergent += r.divergent;
    a_c0 += r.mode == ModeCase::A && r.c == 0.0 && r.divergent;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "divergent rows=%d, case A at c=0 flagged in %d rows", divergent, a_c0);
  report(9, a_c0 > 0, buf);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::pair<int, void (*)()> criteria[] = {
      {1, critical_courants},   {2, stability_agreement}, {3, rotational_convergence},
      {4, boundary_necessity},  {5, no_flow},             {6, mass_conservation},
      {7, limiter_boundedness}, {8, recovery_properties}, {9, closed_form_report}};
  for (const auto& [id, run] : criteria) {
    try {
      run();
    } catch (const std::exception& e) {
      report(id, false, std::string("error: ") + e.what());
    }
  }
  std::printf("%d of 9 criteria failed (%.0fs)\n", g_failed, seconds_since(t0));
  return g_failed == 0 ? 0 : 1;
}
