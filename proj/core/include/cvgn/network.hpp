#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cvgn {

/// Two fiber-coupled lossy cavities fed by thermal inputs (no mechanics).
/// All rates in rad/s.
struct SimplifiedParams {
  double omega_c = 0.0;
  double kappa = 1.0;
  double eta = 0.0;
  double n_in = 0.0;
  /// Drop the common rotation at omega_c from the drift. Correlation
  /// measures do not depend on it.
  bool rotating_frame = true;

  void validate() const;
};

/// Two driven optomechanical cavities coupled through a lossy fiber.
/// All rates in rad/s.
struct FullParams {
  double omega_m = 0.0;
  double gamma = 0.0;
  double delta0 = 0.0;
  double kappa = 0.0;
  double g0 = 0.0;
  double drive_e = 0.0;
  double eta = 0.0;
  double n_m = 0.0;
  double n_in = 0.0;

  /// omega_m/2pi = 947 kHz, gamma/2pi = 140 Hz, kappa/2pi = 215 kHz,
  /// delta0 = -omega_m, g0 = 24 s^-1, E = 4e11 s^-1, eta = n_m = n_in = 0.
  static FullParams Defaults();

  void validate() const;
};

/// Classical amplitudes of the driven system. At a fixed point p_bar = 0 and
/// q_bar = g0 |a_bar|^2 / omega_m.
struct MeanFieldState {
  std::complex<double> a_bar_1{0.0, 0.0};
  std::complex<double> a_bar_2{0.0, 0.0};
  double q_bar_1 = 0.0;
  double q_bar_2 = 0.0;
  double p_bar_1 = 0.0;
  double p_bar_2 = 0.0;
};

/// Linear dynamics dC/dt = A C + C A^T + D over the quadratures of the
/// labelled modes, interleaved per mode as in CovarianceMatrix.
struct DriftDiffusion {
  Eigen::MatrixXd a;
  Eigen::MatrixXd d;
  std::vector<std::string> mode_labels;

  int n_modes() const { return static_cast<int>(a.rows() / 2); }
  /// Throws ValidationError on size mismatch, asymmetric or non-PSD d.
  void validate() const;
};

struct StabilityReport {
  bool is_stable = false;
  double max_real_part = 0.0;
};

// Mode order of the full model's covariance matrices.
inline constexpr int kMechanical1 = 0;
inline constexpr int kOptical1 = 1;
inline constexpr int kMechanical2 = 2;
inline constexpr int kOptical2 = 3;

/// Diffusion of the two optical modes (x1, y1, x2, y2) produced by the
/// directional fiber inputs (occupation n_in) and the vacuum loss ports of
/// a beam splitter of transmissivity eta.
Eigen::Matrix4d fiber_input_diffusion(double kappa, double eta, double n_in);

DriftDiffusion build_simplified(const SimplifiedParams& params);

struct MeanFieldOptions {
  int max_iterations = 200000;
  double damping = 0.5;
  /// Residual target relative to drive_e.
  double relative_tolerance = 1e-12;
};

/// Right-hand side of the classical equations for the mean values.
MeanFieldState classical_rhs(const FullParams& params, const MeanFieldState& state);

/// Euclidean norm of classical_rhs over all six (complex counted twice) components.
double mean_field_residual(const FullParams& params, const MeanFieldState& state);

/// Fixed point of the classical equations. Damped fixed-point iteration; on
/// stagnation falls back to integrating the classical ODEs and polishes the
/// result. Throws ConvergenceError with the last residual on failure.
MeanFieldState mean_field(const FullParams& params, const MeanFieldOptions& options = {});

/// Linearized fluctuation dynamics around `mf` over modes (M1, O1, M2, O2).
/// Throws ValidationError if `mf` is not a fixed point for `params`.
DriftDiffusion build_full_linearized(const FullParams& params, const MeanFieldState& mf);

StabilityReport stability(const DriftDiffusion& dd);

}  // namespace cvgn
