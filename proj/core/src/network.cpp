#include "cvgn/network.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "cvgn/dynamics.hpp"
#include "cvgn/errors.hpp"

namespace cvgn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

void require_transmissivity(double eta) {
  require(eta >= 0.0 && eta <= 1.0,
          "eta must lie in [0, 1] (fiber transmissivity), got " + std::to_string(eta));
}

// Fixed-point map: solves the two coupled cavity equations for the
// amplitudes with the detunings frozen at the current mechanical shifts.
std::array<std::complex<double>, 2> amplitude_update(const FullParams& p,
                                                     const MeanFieldState& s) {
  using cd = std::complex<double>;
  const double shift1 = p.g0 * p.g0 * std::norm(s.a_bar_1) / p.omega_m;
  const double shift2 = p.g0 * p.g0 * std::norm(s.a_bar_2) / p.omega_m;
  const cd m11(p.kappa, -(p.delta0 + shift1));
  const cd m22(p.kappa, -(p.delta0 + shift2));
  const cd off(p.kappa * std::sqrt(p.eta), 0.0);
  const cd det = m11 * m22 - off * off;
  const cd e(p.drive_e, 0.0);
  return {(m22 * e - off * e) / det, (m11 * e - off * e) / det};
}

MeanFieldState with_mechanics(const FullParams& p, std::complex<double> a1,
                              std::complex<double> a2) {
  MeanFieldState s;
  s.a_bar_1 = a1;
  s.a_bar_2 = a2;
  s.q_bar_1 = p.g0 * std::norm(a1) / p.omega_m;
  s.q_bar_2 = p.g0 * std::norm(a2) / p.omega_m;
  return s;
}

MeanFieldState iterate_fixed_point(const FullParams& p, MeanFieldState s,
                                   const MeanFieldOptions& opt, double tolerance,
                                   double& residual) {
  residual = mean_field_residual(p, s);
  for (int it = 0; it < opt.max_iterations && residual > tolerance; ++it) {
    const auto next = amplitude_update(p, s);
    s = with_mechanics(p, (1.0 - opt.damping) * s.a_bar_1 + opt.damping * next[0],
                       (1.0 - opt.damping) * s.a_bar_2 + opt.damping * next[1]);
    residual = mean_field_residual(p, s);
    if (!std::isfinite(residual)) break;
  }
  return s;
}

// Fluctuation drift around `s` over (q1, p1, x1, y1, q2, p2, x2, y2). It is
// also the Jacobian of the classical equations, which sets the ODE fallback
// horizon.
Eigen::MatrixXd linearized_drift(const FullParams& p, const MeanFieldState& s);

}  // namespace

void SimplifiedParams::validate() const {
  require(std::isfinite(omega_c), "omega_c must be finite");
  require(kappa > 0.0 && std::isfinite(kappa), "kappa must be > 0");
  require_transmissivity(eta);
  require(n_in >= 0.0 && std::isfinite(n_in), "n_in must be >= 0");
}

FullParams FullParams::Defaults() {
  FullParams p;
  p.omega_m = kTwoPi * 947e3;
  p.gamma = kTwoPi * 140.0;
  p.delta0 = -p.omega_m;
  p.kappa = kTwoPi * 215e3;
  p.g0 = 24.0;
  p.drive_e = 4e11;
  return p;
}

void FullParams::validate() const {
  require(omega_m > 0.0 && std::isfinite(omega_m), "omega_m must be > 0");
  require(gamma > 0.0 && std::isfinite(gamma), "gamma must be > 0");
  require(std::isfinite(delta0), "delta0 must be finite");
  require(kappa > 0.0 && std::isfinite(kappa), "kappa must be > 0");
  require(g0 >= 0.0 && std::isfinite(g0), "g0 must be >= 0");
  require(drive_e >= 0.0 && std::isfinite(drive_e), "drive_e must be >= 0");
  require_transmissivity(eta);
  require(n_m >= 0.0 && std::isfinite(n_m), "n_m must be >= 0");
  require(n_in >= 0.0 && std::isfinite(n_in), "n_in must be >= 0");
}

void DriftDiffusion::validate() const {
  const auto n = a.rows();
  require(n > 0 && n % 2 == 0 && a.cols() == n, "drift must be square with even size");
  require(d.rows() == n && d.cols() == n, "drift and diffusion sizes differ");
  require(mode_labels.empty() || static_cast<Eigen::Index>(mode_labels.size()) * 2 == n,
          "mode_labels must name every mode");
  require(a.allFinite() && d.allFinite(), "drift/diffusion have non-finite entries");
  const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
  require((d - d.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
          "diffusion matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (d + d.transpose()),
                                                     Eigen::EigenvaluesOnly);
  require(es.eigenvalues().minCoeff() >= -1e-12 * scale,
          "diffusion matrix is not positive semidefinite");
}

Eigen::Matrix4d fiber_input_diffusion(double kappa, double eta, double n_in) {
  // Noise entering cavity j is sum_k coupling(j, k) b_k over the channels
  // (d->, d<-, h->, h<-). Each b_k contributes (n_k + 1/2) to the symmetrized
  // correlation of like quadratures and nothing to x-y.
  const double sk = std::sqrt(kappa);
  const double se = std::sqrt(eta);
  const double sl = std::sqrt(1.0 - eta);
  Eigen::Matrix<double, 2, 4> coupling;
  coupling << 1.0, se, 0.0, sl,
              se, 1.0, sl, 0.0;
  coupling *= -sk;
  const Eigen::Vector4d weight(n_in + 0.5, n_in + 0.5, 0.5, 0.5);
  const Eigen::Matrix2d like = coupling * weight.asDiagonal() * coupling.transpose();

  Eigen::Matrix4d d = Eigen::Matrix4d::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      d(2 * i, 2 * j) = like(i, j);
      d(2 * i + 1, 2 * j + 1) = like(i, j);
    }
  }
  return d;
}

DriftDiffusion build_simplified(const SimplifiedParams& params) {
  params.validate();
  const double w = params.rotating_frame ? 0.0 : params.omega_c;
  const double k = params.kappa;
  const double cross = -k * std::sqrt(params.eta);

  DriftDiffusion dd;
  dd.a = Eigen::MatrixXd::Zero(4, 4);
  for (int j = 0; j < 2; ++j) {
    const int x = 2 * j, y = 2 * j + 1;
    dd.a(x, x) = -k;
    dd.a(y, y) = -k;
    dd.a(x, y) = w;
    dd.a(y, x) = -w;
  }
  dd.a(0, 2) = dd.a(2, 0) = cross;
  dd.a(1, 3) = dd.a(3, 1) = cross;
  dd.d = fiber_input_diffusion(k, params.eta, params.n_in);
  dd.mode_labels = {"O1", "O2"};
  return dd;
}

MeanFieldState classical_rhs(const FullParams& p, const MeanFieldState& s) {
  using cd = std::complex<double>;
  const double coupling = p.kappa * std::sqrt(p.eta);
  MeanFieldState r;
  r.q_bar_1 = p.omega_m * s.p_bar_1;
  r.q_bar_2 = p.omega_m * s.p_bar_2;
  r.p_bar_1 = -p.omega_m * s.q_bar_1 - p.gamma * s.p_bar_1 + p.g0 * std::norm(s.a_bar_1);
  r.p_bar_2 = -p.omega_m * s.q_bar_2 - p.gamma * s.p_bar_2 + p.g0 * std::norm(s.a_bar_2);
  const cd i(0.0, 1.0);
  r.a_bar_1 = i * (p.delta0 + p.g0 * s.q_bar_1) * s.a_bar_1 + p.drive_e -
              p.kappa * s.a_bar_1 - coupling * s.a_bar_2;
  r.a_bar_2 = i * (p.delta0 + p.g0 * s.q_bar_2) * s.a_bar_2 + p.drive_e -
              p.kappa * s.a_bar_2 - coupling * s.a_bar_1;
  return r;
}

double mean_field_residual(const FullParams& p, const MeanFieldState& s) {
  const MeanFieldState r = classical_rhs(p, s);
  return std::sqrt(std::norm(r.a_bar_1) + std::norm(r.a_bar_2) + r.q_bar_1 * r.q_bar_1 +
                   r.q_bar_2 * r.q_bar_2 + r.p_bar_1 * r.p_bar_1 + r.p_bar_2 * r.p_bar_2);
}

namespace {

Eigen::MatrixXd linearized_drift(const FullParams& p, const MeanFieldState& s) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(8, 8);
  const std::array<std::complex<double>, 2> amp{s.a_bar_1, s.a_bar_2};
  const std::array<double, 2> qbar{s.q_bar_1, s.q_bar_2};
  for (int j = 0; j < 2; ++j) {
    const int o = 4 * j;
    const double detuning = p.delta0 + p.g0 * qbar[static_cast<size_t>(j)];
    const double gr = std::numbers::sqrt2 * p.g0 * amp[static_cast<size_t>(j)].real();
    const double gi = std::numbers::sqrt2 * p.g0 * amp[static_cast<size_t>(j)].imag();
    a(o, o + 1) = p.omega_m;
    a(o + 1, o) = -p.omega_m;
    a(o + 1, o + 1) = -p.gamma;
    a(o + 1, o + 2) = gr;
    a(o + 1, o + 3) = gi;
    a(o + 2, o) = -gi;
    a(o + 2, o + 2) = -p.kappa;
    a(o + 2, o + 3) = -detuning;
    a(o + 3, o) = gr;
    a(o + 3, o + 2) = detuning;
    a(o + 3, o + 3) = -p.kappa;
  }
  const double cross = -p.kappa * std::sqrt(p.eta);
  a(2, 6) = a(6, 2) = cross;
  a(3, 7) = a(7, 3) = cross;
  return a;
}

}  // namespace

MeanFieldState mean_field(const FullParams& params, const MeanFieldOptions& options) {
  params.validate();
  if (params.drive_e == 0.0) return MeanFieldState{};
  const double tolerance = options.relative_tolerance * params.drive_e;

  // Linear-cavity solution as the starting point.
  const std::complex<double> a0 =
      params.drive_e /
      std::complex<double>(params.kappa * (1.0 + std::sqrt(params.eta)), -params.delta0);
  double residual = 0.0;
  MeanFieldState s =
      iterate_fixed_point(params, with_mechanics(params, a0, a0), options, tolerance, residual);
  if (residual <= tolerance) return s;

  // Fallback: relax the classical ODEs towards the attractor, then polish.
  MeanFieldState start = std::isfinite(residual) ? s : with_mechanics(params, a0, a0);
  const Eigen::MatrixXd a = linearized_drift(params, start);
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  const double max_re = es.eigenvalues().real().maxCoeff();
  const double radius = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(max_re < 0.0)) {
    throw ConvergenceError("mean_field: fixed-point iteration did not converge and the "
                           "linearized classical dynamics is unstable (last residual " +
                               std::to_string(residual) + ")",
                           residual);
  }
  start = evolve_mean(params, start, 40.0 / std::abs(max_re), 0.01 / radius);
  s = iterate_fixed_point(params, start, options, tolerance, residual);
  if (residual > tolerance) {
    throw ConvergenceError("mean_field: no convergence after " +
                               std::to_string(options.max_iterations) +
                               " iterations (last residual " + std::to_string(residual) + ")",
                           residual);
  }
  return s;
}

DriftDiffusion build_full_linearized(const FullParams& params, const MeanFieldState& mf) {
  params.validate();
  const double residual = mean_field_residual(params, mf);
  if (!(residual <= 1e-9 * std::max(1.0, params.drive_e))) {
    throw ValidationError("build_full_linearized: mean field is not a fixed point for these "
                          "parameters (residual " + std::to_string(residual) + ")");
  }

  DriftDiffusion dd;
  dd.a = linearized_drift(params, mf);
  dd.d = Eigen::MatrixXd::Zero(8, 8);
  const double mech = params.gamma * (2.0 * params.n_m + 1.0);
  dd.d(1, 1) = mech;
  dd.d(5, 5) = mech;
  const Eigen::Matrix4d optical = fiber_input_diffusion(params.kappa, params.eta, params.n_in);
  const std::array<int, 4> slots{2, 3, 6, 7};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      dd.d(slots[static_cast<size_t>(i)], slots[static_cast<size_t>(j)]) = optical(i, j);
    }
  }
  dd.mode_labels = {"M1", "O1", "M2", "O2"};
  return dd;
}

StabilityReport stability(const DriftDiffusion& dd) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(dd.a, false);
  StabilityReport report;
  report.max_real_part = es.eigenvalues().real().maxCoeff();
  report.is_stable = report.max_real_part < -1e-12;
  return report;
}

}  // namespace cvgn
