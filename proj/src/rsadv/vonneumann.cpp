#include "rsadv/vonneumann.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "rsadv/error.hpp"
#include "rsadv/scheme.hpp"

namespace rsadv {

const char* to_string(ModeCase c) noexcept {
  switch (c) {
    case ModeCase::A: return "A";
    case ModeCase::B: return "B";
    case ModeCase::C: return "C";
  }
  return "?";
}

std::optional<ModeCase> parse_mode_case(std::string_view name) {
  if (name == "A" || name == "a") return ModeCase::A;
  if (name == "B" || name == "b") return ModeCase::B;
  if (name == "C" || name == "c") return ModeCase::C;
  return std::nullopt;
}

Eigen::Matrix2cd euler_matrix(double c, double phi) {
  const Complex e = std::polar(1.0, -phi);
  Eigen::Matrix2cd m;
  m << 1.0 - 3.0 * c, 4.0 * c * e - c, 3.0 * c, 1.0 - c - 2.0 * c * e;
  return m;
}

Eigen::Matrix2cd ssprk3_matrix(double c, double phi) {
  const Eigen::Matrix2cd L = euler_matrix(c, phi) - Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd L2 = L * L;
  return Eigen::Matrix2cd::Identity() + L + L2 / 2.0 + L2 * L / 6.0;
}

ModeOperators mode_operators(ModeCase mode, double c, double phi) {
  ModeOperators m;
  m.mode = mode;
  m.c = c;
  m.phi = phi;
  const Complex em = std::polar(1.0, -phi);
  const Complex ep = std::polar(1.0, phi);
  if (mode == ModeCase::A) {
    m.I << 1.0, 1.0;
    m.R << 0.5 * (1.0 + em), 0.5 * (1.0 + ep);
    m.IPhat.setConstant(0.5);
    m.P << 0.5, 0.5;
  } else {
    m.I << 1.0, ep;
    m.R = m.I;
    m.IPhat.setIdentity();
    if (mode == ModeCase::B)
      m.P << (2.0 + em) / (4.0 + 2.0 * std::cos(phi)), (1.0 + 2.0 * em) / (4.0 + 2.0 * std::cos(phi));
    else
      m.P << 0.5, 0.5 * em;
  }
  m.J = m.R - m.IPhat * m.R + m.I;
  m.E = euler_matrix(c, phi);
  m.L = m.E - Eigen::Matrix2cd::Identity();
  m.A = ssprk3_matrix(c, phi);
  return m;
}

double scheme_amplification(ModeCase mode, double c, double phi) {
  const ModeOperators m = mode_operators(mode, c, phi);
  return std::abs((m.P * m.A * m.J)(0, 0));
}

double closed_form_amplification(ModeCase mode, double c, double phi) {
  using std::cos;
  using std::sin;
  const double p = phi;
  const double c2 = c * c;
  const double c3 = c2 * c;
  switch (mode) {
    case ModeCase::A: {
      const double inner =
          c3 * (13.0 / 4 * cos(p) - 5.0 / 3 * cos(2 * p) + 1.0 / 12 * cos(3 * p) + 1.0 / 6 * cos(4 * p) -
                11.0 / 6) +
          c2 * (29.0 / 12 * sin(p) - 5.0 / 3 * sin(2 * p) + 1.0 / 12 * sin(3 * p) + 1.0 / 6 * sin(4 * p) -
                7.0 / 4 * cos(p) + 3.0 / 4 * cos(2 * p) - 1.0 / 4 * cos(3 * p) + 5.0 / 4) +
          c * (-3.0 / 4 * sin(p) + 3.0 / 4 * sin(2 * p) - 1.0 / 4 * sin(3 * p) - cos(p) +
               1.0 / 4 * cos(2 * p) + 3.0 / 4) -
          3.0 / 2 * sin(p) + 1.0 / 4 * sin(2 * p) * sin(2 * p) - 1.0;
      return std::sqrt(c2 * inner * inner);
    }
    case ModeCase::B: {
      const double f = std::pow(c / (cos(p) + 2.0), 2);
      const double a = c2 * cos(p) - c2 + 3.0;
      const double b = -2.0 * c3 * cos(p) + 0.5 * c3 * cos(2 * p) + 1.5 * c3 + 3.0 * c2 * cos(p) - 3.0 * c2 +
                       cos(p) + 2.0;
      return std::sqrt(f * a * a * sin(p) * sin(p) + f * b * b);
    }
    case ModeCase::C: {
      const double a = 2.0 / 3 * c3 * sin(p) + 1.0 / 6 * c3 * sin(2 * p) - 1.0 / 3 * c3 * sin(3 * p) -
                       c2 * sin(p) + 0.5 * c2 * sin(2 * p) - c * sin(p);
      const double b = -7.0 / 3 * c3 * cos(p) - 1.0 / 6 * c3 * cos(2 * p) + 1.0 / 3 * c3 * cos(3 * p) +
                       13.0 / 6 * c3 + 3.0 * c2 * cos(p) - 0.5 * c2 * cos(2 * p) - 5.0 / 2 * c2 + 1.0;
      return std::sqrt(a * a + b * b);
    }
  }
  return 0.0;
}

std::vector<double> phase_grid(int n) {
  std::vector<double> phis(n);
  for (int m = 1; m <= n; ++m) phis[m - 1] = 2.0 * std::numbers::pi * m / (n + 1);
  return phis;
}

double max_amplification(ModeCase mode, double c, const std::vector<double>& phis) {
  double best = 0.0;
  for (double p : phis) best = std::max(best, scheme_amplification(mode, c, p));
  return best;
}

double critical_courant(ModeCase mode) {
  const std::vector<double> phis = phase_grid();
  auto unstable = [&](double c) { return max_amplification(mode, c, phis) > 1.0 + 1e-12; };
  double prev = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double c = 0.01 * i;
    if (unstable(c)) {
      double lo = prev, hi = c;
      while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (unstable(mid) ? hi : lo) = mid;
      }
      return hi;
    }
    prev = c;
  }
  std::ostringstream os;
  os << "no unstable Courant number in [0, 2] for case " << to_string(mode);
  fail(ErrorCode::NoInstabilityFound, os.str());
}

namespace {

SchemeConfig case_config(ModeCase mode) {
  switch (mode) {
    case ModeCase::A: return config_case_a();
    case ModeCase::B: return config_case_b();
    case ModeCase::C: return config_case_c();
  }
  return config_case_a();
}

}  // namespace

double measure_amplification(ModeCase mode, double c, int k, int n_cells) {
  if (k < 1 || 2 * k >= n_cells) {
    std::ostringstream os;
    os << "wavenumber " << k << " outside [1, " << n_cells << "/2)";
    fail(ErrorCode::InvalidArgument, os.str());
  }
  const double length = n_cells;
  const MeshPtr mesh = make_interval(n_cells, length);
  RecoveredScheme scheme(mesh, case_config(mode), constant_velocity(Vec2(c, 0.0)));
  const SpacePtr& v0 = scheme.v0();
  const double w = 2.0 * std::numbers::pi * k / length;
  const int n = v0->n_dofs();
  double ratio = 0.0;
  for (int variant = 0; variant < 2; ++variant) {
    Field rho(v0);
    for (int i = 0; i < n; ++i) {
      const double x = v0->dof_coords(i).x();
      rho.coeffs[i] = variant == 0 ? std::sin(w * x) : std::cos(w * x);
    }
    const Field out = scheme.step(rho, 0.0, 1.0);
    double a = 0.0, b = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = v0->dof_coords(i).x();
      a += out.coeffs[i] * std::sin(w * x);
      b += out.coeffs[i] * std::cos(w * x);
    }
    ratio += std::hypot(a, b) * 2.0 / n;
  }
  return 0.5 * ratio;
}

}  // namespace rsadv
