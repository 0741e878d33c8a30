#pragma once

#include <vector>

#include "cvgn/covariance.hpp"
#include "cvgn/network.hpp"

namespace cvgn {

/// Sampled covariance trajectory. Times are in seconds (the same units as the
/// inverse of the drift's rates).
struct Trajectory {
  std::vector<double> times;
  std::vector<CovarianceMatrix> states;
};

/// Steady state of dC/dt = A C + C A^T + D, i.e. the solution of the
/// Lyapunov equation A C + C A^T + D = 0, from a dense solve of the
/// Kronecker-vectorized system with one step of iterative refinement.
///
/// Throws NoSteadyStateError if A is not stable, NumericalError if the
/// residual exceeds 1e-10 max(1, |D|_F), UnphysicalStateError if the result
/// violates the uncertainty principle.
CovarianceMatrix solve_steady(const DriftDiffusion& dd);

/// Frobenius norm of A C + C A^T + D.
double lyapunov_residual(const DriftDiffusion& dd, const CovarianceMatrix& c);

/// 0.01 / spectral radius of A: a step resolving the fastest timescale.
double default_time_step(const DriftDiffusion& dd);

struct EvolveOptions {
  /// Allowed dip of the minimum symplectic eigenvalue below 1/2 at samples.
  double physicality_tolerance = 1e-6;
};

/// Fixed-step RK4 integration of the covariance ODE from c0 over [0, t_final].
/// The step is shrunk slightly so that t_final is hit exactly; C is
/// symmetrized after every step. States are recorded at t = 0, every
/// `sample_every` steps, and at t_final.
///
/// Throws ValidationError on bad sizes or step parameters,
/// IntegrationBlowupError if a sampled state is non-finite or unphysical.
Trajectory evolve_covariance(const DriftDiffusion& dd, const CovarianceMatrix& c0,
                             double t_final, double dt, int sample_every = 1,
                             const EvolveOptions& options = {});

/// RK4 integration of the classical mean-value equations; returns the final state.
MeanFieldState evolve_mean(const FullParams& params, const MeanFieldState& initial,
                           double t_final, double dt);

}  // namespace cvgn
