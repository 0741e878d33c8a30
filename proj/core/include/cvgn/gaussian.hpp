#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cvgn/covariance.hpp"

namespace cvgn {

// Correlation measures report bits unless asked otherwise.
enum class LogBase { kBits, kNats };

/// Determinant invariants of a two-mode covariance matrix, scaled so that the
/// vacuum gives I1 = I2 = I4 = 1 and I3 = 0.
struct TwoModeInvariants {
  double i1 = 0.0;  // 4 det C1 (first mode)
  double i2 = 0.0;  // 4 det C2 (second mode)
  double i3 = 0.0;  // 4 det C3 (cross block)
  double i4 = 0.0;  // 16 det C
  double i_delta = 0.0;  // i1 + i2 + 2 i3
};

/// Symplectic spectrum {nu_k}: moduli of the +-i nu_k eigenvalue pairs of
/// Omega * C, ascending. Physical states have every nu_k >= 1/2.
///
/// Throws DegeneracyError when the eigenvalues of Omega * C do not come in
/// purely imaginary conjugate pairs to within 1e-8 (relative).
std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& c);

double min_symplectic_eigenvalue(const CovarianceMatrix& c);

/// True when every symplectic eigenvalue is >= 1/2 - tolerance.
bool is_physical(const CovarianceMatrix& c, double tolerance = 1e-9);

/// Throws UnphysicalStateError naming `what` if c is not physical.
void require_physical(const CovarianceMatrix& c, const char* what);

TwoModeInvariants two_mode_invariants(const CovarianceMatrix& c);

/// Scaled two-mode symplectic eigenvalues (lambda_minus, lambda_plus), i.e.
/// 2 nu_-, 2 nu_+, so that the vacuum gives (1, 1). Small negative
/// discriminants from round-off are clamped; larger ones mean the invariants
/// cannot belong to a physical state.
std::pair<double, double> symplectic_eigenvalues_two_mode(const TwoModeInvariants& inv);

/// Entropy function f(x) of a single-mode Gaussian state with scaled
/// symplectic eigenvalue x >= 1. Values in [1 - 1e-9, 1] return 0.
double entropy_f(double x, LogBase base = LogBase::kBits);

/// Gaussian discord D_G(B|A) of a two-mode state where the measurement is
/// performed on `measured_party` (0 or 1). Product states return exactly 0.
double gaussian_discord(const CovarianceMatrix& c, int measured_party = 0,
                        LogBase base = LogBase::kBits);

/// Flips the momentum quadrature of each listed mode (P C P). Involutive.
CovarianceMatrix partial_transpose(const CovarianceMatrix& c,
                                   const std::vector<int>& transposed_modes);

/// Logarithmic negativity of a 1x1-mode state from the closed form of the
/// partially transposed invariants: E = max(0, -log(lambda~_-)), where
/// lambda~_- is the scaled (vacuum = 1) smallest symplectic eigenvalue of
/// the partial transpose.
double log_negativity_two_mode(const CovarianceMatrix& c,
                               LogBase base = LogBase::kBits);

/// Logarithmic negativity across an arbitrary bipartition covering all modes:
/// sum over symplectic eigenvalues nu~ of the partial transpose of
/// max(0, -log(2 nu~)). Only a lower bound beyond 1x1 modes.
double log_negativity_bipartition(const CovarianceMatrix& c,
                                  const BipartitionSpec& partition,
                                  LogBase base = LogBase::kBits);

/// Principal submatrix on the listed modes, in the listed order.
CovarianceMatrix reduce_modes(const CovarianceMatrix& c, const std::vector<int>& keep);

/// S C S^T for a symplectic S (S Omega S^T = Omega to 1e-10).
CovarianceMatrix rotate_basis(const CovarianceMatrix& c, const Eigen::MatrixXd& s);

bool is_symplectic(const Eigen::MatrixXd& s, double tolerance = 1e-10);

/// Phase-space rotation by `theta` of a single mode, identity elsewhere.
Eigen::MatrixXd phase_rotation(int n_modes, int mode, double theta);

/// Balanced +/- recombination of mode pairs: for each (i, j),
/// mode i -> (i + j)/sqrt(2) and mode j -> (i - j)/sqrt(2) on both
/// quadratures. Symmetric, orthogonal, symplectic and its own inverse.
Eigen::MatrixXd plus_minus_rotation(int n_modes,
                                    const std::vector<std::pair<int, int>>& pairs);

}  // namespace cvgn
