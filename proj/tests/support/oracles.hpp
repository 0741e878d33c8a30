#pragma once

// Reference computations used only by the tests. Each one follows a route
// that differs from the library's, so agreement checks the library rather
// than restating it.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cvgn/covariance.hpp"
#include "cvgn/network.hpp"

namespace cvgn::oracle {

/// Symplectic spectrum from the Hermitian matrix i C^{1/2} Omega C^{1/2},
/// whose eigenvalues are +-nu_k. Ascending.
std::vector<double> williamson_spectrum(const Eigen::MatrixXd& c);

/// f(x) evaluated in long double, natural log.
long double entropy_f_long(long double x);

/// Gaussian discord with measurement on mode 0, minimizing the conditional
/// entropy of mode 1 over pure single-mode Gaussian measurements by grid
/// search and local refinement (including the homodyne limit). Natural log.
double discord_by_search(const Eigen::MatrixXd& c);

/// Optical diffusion from complex bath amplitudes: each cavity's input noise
/// is sum_k u_jk b_k with thermal b_k, and the quadratures are built from the
/// operator expansion. Ordering (x1, y1, x2, y2).
Eigen::Matrix4d bath_diffusion(double kappa, double eta, double n_in);

/// Jacobian of classical_rhs at `state` by central differences, transformed
/// to the quadratures (q, p, sqrt2 Re a, sqrt2 Im a) per cavity, ordered as
/// the full model's modes.
Eigen::MatrixXd numerical_drift(const FullParams& params, const MeanFieldState& state);

/// Exact C(t) = e^{At} (C0 - Cs) e^{A^T t} + Cs for stable A, using the
/// matrix exponential and eigen_steady for Cs.
Eigen::MatrixXd exact_covariance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d,
                                 const Eigen::MatrixXd& c0, double t);

/// Steady covariance from the eigenbasis of A:
/// Cs = V [ (V^-1 D V^-H)_ij / -(l_i + conj l_j) ] V^H.
Eigen::MatrixXd eigen_steady(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d);

/// Sample covariance of the Ornstein-Uhlenbeck process dv = A v dt + B dW
/// (B B^T = D) from Euler-Maruyama paths after a burn-in.
Eigen::MatrixXd stochastic_covariance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d,
                                      double dt, double burn_in, double horizon, int paths,
                                      std::uint64_t seed);

/// Random symplectic matrix from products of phase rotations, single-mode
/// squeezers and beam splitters.
Eigen::MatrixXd random_symplectic(int n_modes, std::mt19937_64& rng, double max_squeeze = 0.8);

/// S diag(nu) S^T with nu_k >= 1/2 drawn at random.
CovarianceMatrix random_physical_state(int n_modes, std::mt19937_64& rng,
                                       double max_squeeze = 0.8);

/// A random stable linear system A = Omega H - diag(kappa_k) with
/// D = sum_k kappa_k (2 n_k + 1) I_2, whose steady state is physical.
DriftDiffusion random_stable_system(int n_modes, std::mt19937_64& rng);

}  // namespace cvgn::oracle
