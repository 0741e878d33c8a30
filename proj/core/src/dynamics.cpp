#include "cvgn/dynamics.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "cvgn/errors.hpp"
#include "cvgn/gaussian.hpp"

namespace cvgn {

namespace {

constexpr double kResidualTolerance = 1e-10;

Eigen::MatrixXd covariance_rhs(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d,
                               const Eigen::MatrixXd& c) {
  Eigen::MatrixXd ac = a * c;
  return ac + ac.transpose() + d;
}

Eigen::MatrixXd unvec(const Eigen::VectorXd& v, Eigen::Index n) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), n, n);
}

MeanFieldState axpy(const MeanFieldState& x, double h, const MeanFieldState& k) {
  MeanFieldState r;
  r.a_bar_1 = x.a_bar_1 + h * k.a_bar_1;
  r.a_bar_2 = x.a_bar_2 + h * k.a_bar_2;
  r.q_bar_1 = x.q_bar_1 + h * k.q_bar_1;
  r.q_bar_2 = x.q_bar_2 + h * k.q_bar_2;
  r.p_bar_1 = x.p_bar_1 + h * k.p_bar_1;
  r.p_bar_2 = x.p_bar_2 + h * k.p_bar_2;
  return r;
}

}  // namespace

double lyapunov_residual(const DriftDiffusion& dd, const CovarianceMatrix& c) {
  return covariance_rhs(dd.a, dd.d, c.entries()).norm();
}

CovarianceMatrix solve_steady(const DriftDiffusion& dd) {
  dd.validate();
  const StabilityReport st = stability(dd);
  if (!st.is_stable) {
    throw NoSteadyStateError("solve_steady: drift is not stable (max real part " +
                             std::to_string(st.max_real_part) + "), no steady state");
  }
  const Eigen::Index n = dd.a.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  // vec(A C + C A^T) = (I (x) A + A (x) I) vec(C), column-major vec.
  Eigen::MatrixXd k(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      k.block(i * n, j * n, n, n) = id(i, j) * dd.a + dd.a(i, j) * id;
    }
  }
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(dd.d.data(), n * n);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(k);
  Eigen::VectorXd x = lu.solve(rhs);
  x += lu.solve(rhs - k * x);
  if (!x.allFinite()) throw NumericalError("solve_steady: singular Lyapunov system");

  Eigen::MatrixXd c = unvec(x, n);
  c = 0.5 * (c + c.transpose()).eval();
  const double residual = covariance_rhs(dd.a, dd.d, c).norm();
  const double bound = kResidualTolerance * std::max(1.0, dd.d.norm());
  if (residual > bound) {
    throw NumericalError("solve_steady: Lyapunov residual " + std::to_string(residual) +
                         " exceeds " + std::to_string(bound));
  }
  CovarianceMatrix result(std::move(c));
  require_physical(result, "solve_steady");
  return result;
}

double default_time_step(const DriftDiffusion& dd) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(dd.a, false);
  const double radius = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(radius > 0.0)) throw ValidationError("default_time_step: drift is zero");
  return 0.01 / radius;
}

Trajectory evolve_covariance(const DriftDiffusion& dd, const CovarianceMatrix& c0,
                             double t_final, double dt, int sample_every,
                             const EvolveOptions& options) {
  dd.validate();
  if (c0.dimension() != dd.a.rows()) {
    throw ValidationError("evolve_covariance: initial state has " +
                          std::to_string(c0.n_modes()) + " modes, drift has " +
                          std::to_string(dd.n_modes()));
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("evolve_covariance: dt must be > 0");
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
    throw ValidationError("evolve_covariance: t_final must be >= 0");
  }
  if (sample_every < 1) throw ValidationError("evolve_covariance: sample_every must be >= 1");
  require_physical(c0, "evolve_covariance initial state");

  const auto steps = static_cast<long long>(std::ceil(t_final / dt - 1e-9));
  const double h = steps > 0 ? t_final / static_cast<double>(steps) : 0.0;

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(c0);

  const Eigen::MatrixXd& a = dd.a;
  const Eigen::MatrixXd& d = dd.d;
  Eigen::MatrixXd c = c0.entries();
  for (long long step = 1; step <= steps; ++step) {
    const Eigen::MatrixXd k1 = covariance_rhs(a, d, c);
    const Eigen::MatrixXd k2 = covariance_rhs(a, d, c + 0.5 * h * k1);
    const Eigen::MatrixXd k3 = covariance_rhs(a, d, c + 0.5 * h * k2);
    const Eigen::MatrixXd k4 = covariance_rhs(a, d, c + h * k3);
    c += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    c = 0.5 * (c + c.transpose()).eval();

    if (step % sample_every == 0 || step == steps) {
      const double t = static_cast<double>(step) * h;
      if (!c.allFinite()) {
        throw IntegrationBlowupError("evolve_covariance: non-finite state at t = " +
                                     std::to_string(t) + "; try a smaller dt");
      }
      CovarianceMatrix state(c);
      const double nu = min_symplectic_eigenvalue(state);
      if (nu < 0.5 - options.physicality_tolerance) {
        throw IntegrationBlowupError("evolve_covariance: unphysical state at t = " +
                                     std::to_string(t) + " (min symplectic eigenvalue " +
                                     std::to_string(nu) + "); try a smaller dt");
      }
      traj.times.push_back(t);
      traj.states.push_back(std::move(state));
    }
  }
  return traj;
}

MeanFieldState evolve_mean(const FullParams& params, const MeanFieldState& initial,
                           double t_final, double dt) {
  params.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("evolve_mean: dt must be > 0");
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
    throw ValidationError("evolve_mean: t_final must be >= 0");
  }
  const auto steps = static_cast<long long>(std::ceil(t_final / dt - 1e-9));
  const double h = steps > 0 ? t_final / static_cast<double>(steps) : 0.0;
  MeanFieldState s = initial;
  for (long long step = 0; step < steps; ++step) {
    const MeanFieldState k1 = classical_rhs(params, s);
    const MeanFieldState k2 = classical_rhs(params, axpy(s, 0.5 * h, k1));
    const MeanFieldState k3 = classical_rhs(params, axpy(s, 0.5 * h, k2));
    const MeanFieldState k4 = classical_rhs(params, axpy(s, h, k3));
    s = axpy(s, h / 6.0, k1);
    s = axpy(s, h / 3.0, k2);
    s = axpy(s, h / 3.0, k3);
    s = axpy(s, h / 6.0, k4);
  }
  if (!std::isfinite(s.q_bar_1) || !std::isfinite(std::abs(s.a_bar_1))) {
    throw IntegrationBlowupError("evolve_mean: classical trajectory diverged; try a smaller dt");
  }
  return s;
}

}  // namespace cvgn
