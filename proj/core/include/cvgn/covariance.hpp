#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cvgn {

/// Symmetrized second moments C_ij = <v_i v_j + v_j v_i>/2 of the quadrature
/// fluctuations of an n-mode Gaussian state, hbar = 1.
///
/// Quadratures are interleaved per mode, (x_1, y_1, ..., x_n, y_n), with
/// x = (a^+ + a)/sqrt(2) and y = i(a^+ - a)/sqrt(2). Mechanical modes put
/// (q, p) in the same two slots. The vacuum is identity/2.
///
/// Construction checks shape and symmetry (relative 1e-12) and stores the
/// exactly symmetrized matrix. Physicality is a property of the state, not a
/// class invariant: partial transposes of entangled states are valid
/// CovarianceMatrix values too. See is_physical().
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(Eigen::MatrixXd entries);

  static CovarianceMatrix Vacuum(int n_modes);
  /// Product of thermal states; occupations[k] is the mean number in mode k.
  static CovarianceMatrix Thermal(std::span<const double> occupations);
  static CovarianceMatrix Thermal(int n_modes, double occupation);
  /// Two-mode squeezed vacuum with squeezing parameter r.
  static CovarianceMatrix TwoModeSqueezedVacuum(double r);

  int n_modes() const { return static_cast<int>(entries_.rows() / 2); }
  int dimension() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

  /// 2x2 block coupling mode i (rows) and mode j (columns).
  Eigen::Matrix2d block(int i, int j) const {
    return entries_.block<2, 2>(2 * i, 2 * j);
  }

  /// State of this system and `other` taken independently (block diagonal).
  CovarianceMatrix direct_sum(const CovarianceMatrix& other) const;

 private:
  Eigen::MatrixXd entries_;
};

/// Block-diagonal symplectic form, one [[0, 1], [-1, 0]] block per mode.
Eigen::MatrixXd symplectic_form(int n_modes);

/// Ordered lists of mode indices for the two parties of a bipartition.
struct BipartitionSpec {
  std::vector<int> party_a;
  std::vector<int> party_b;

  /// Throws ValidationError unless both parties are non-empty, disjoint and
  /// made of indices in [0, n_modes).
  void validate(int n_modes) const;
  bool covers(int n_modes) const;
};

}  // namespace cvgn
