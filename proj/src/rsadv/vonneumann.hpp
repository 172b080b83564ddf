#pragma once

#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace rsadv {

enum class ModeCase { A, B, C };

const char* to_string(ModeCase c) noexcept;
std::optional<ModeCase> parse_mode_case(std::string_view name);

using Complex = std::complex<double>;

/// Per-mode operators of the 1D scheme for a cell with unit mode amplitude
/// e^{i j phi} in cell j (phi = k dx).
struct ModeOperators {
  ModeCase mode = ModeCase::A;
  double c = 0.0;
  double phi = 0.0;
  Eigen::RowVector2cd P;  // V1 -> V0
  Eigen::Vector2cd R;     // recovered values at the cell's two vertices
  Eigen::Vector2cd I;     // V0 mode injected into the cell
  Eigen::Matrix2cd IPhat; // injection after the broken projection, on cell values
  Eigen::Vector2cd J;     // R - IPhat R + I
  Eigen::Matrix2cd E;     // forward Euler step
  Eigen::Matrix2cd L;     // E - identity
  Eigen::Matrix2cd A;     // SSPRK3 step
};

/// Forward Euler step matrix ((1-3c, 4c e^{-i phi} - c), (3c, 1 - c - 2c e^{-i phi})).
Eigen::Matrix2cd euler_matrix(double c, double phi);
/// I + L + L^2/2 + L^3/6 with L = E - I.
Eigen::Matrix2cd ssprk3_matrix(double c, double phi);

ModeOperators mode_operators(ModeCase mode, double c, double phi);

/// |P A J| from the operator composition.
double scheme_amplification(ModeCase mode, double c, double phi);
/// The published closed-form expressions for |A_k|.
double closed_form_amplification(ModeCase mode, double c, double phi);

/// Phase grid 2 pi m / (n + 1), m = 1..n.
std::vector<double> phase_grid(int n = 2048);
double max_amplification(ModeCase mode, double c, const std::vector<double>& phis);

/// Smallest c in [0, 2] with max_phi |A| > 1 + 1e-12: scan in steps of
/// 0.01, then bisect to 1e-6.
double critical_courant(ModeCase mode);

/// Amplification measured by advancing sin and cos profiles of wavenumber k
/// one step on a periodic mesh of n_cells unit cells at u = c, dt = 1.
double measure_amplification(ModeCase mode, double c, int k, int n_cells);

}  // namespace rsadv
