#include "cvgn/covariance.hpp"

#include <cmath>
#include <set>
#include <string>

#include "cvgn/errors.hpp"

namespace cvgn {

namespace {
constexpr double kSymmetryTolerance = 1e-12;
}  // namespace

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd entries)
    : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols() ||
      entries_.rows() % 2 != 0) {
    throw ValidationError("covariance matrix must be square with even size 2n, n >= 1; got " +
                          std::to_string(entries_.rows()) + "x" +
                          std::to_string(entries_.cols()));
  }
  if (!entries_.allFinite()) {
    throw ValidationError("covariance matrix has non-finite entries");
  }
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  const double asym = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance * scale) {
    throw ValidationError("covariance matrix is not symmetric (max asymmetry " +
                          std::to_string(asym) + ")");
  }
  entries_ = 0.5 * (entries_ + entries_.transpose()).eval();
}

CovarianceMatrix CovarianceMatrix::Vacuum(int n_modes) {
  if (n_modes < 1) throw ValidationError("n_modes must be positive");
  return CovarianceMatrix(0.5 * Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

CovarianceMatrix CovarianceMatrix::Thermal(std::span<const double> occupations) {
  if (occupations.empty()) throw ValidationError("n_modes must be positive");
  const int n = static_cast<int>(occupations.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    if (!(occupations[k] >= 0.0)) {
      throw ValidationError("thermal occupation must be >= 0");
    }
    c(2 * k, 2 * k) = c(2 * k + 1, 2 * k + 1) = occupations[k] + 0.5;
  }
  return CovarianceMatrix(std::move(c));
}

CovarianceMatrix CovarianceMatrix::Thermal(int n_modes, double occupation) {
  if (n_modes < 1) throw ValidationError("n_modes must be positive");
  std::vector<double> occ(static_cast<size_t>(n_modes), occupation);
  return Thermal(occ);
}

CovarianceMatrix CovarianceMatrix::TwoModeSqueezedVacuum(double r) {
  const double ch = 0.5 * std::cosh(2.0 * r);
  const double sh = 0.5 * std::sinh(2.0 * r);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(4, 4);
  c(0, 0) = c(1, 1) = c(2, 2) = c(3, 3) = ch;
  c(0, 2) = c(2, 0) = sh;
  c(1, 3) = c(3, 1) = -sh;
  return CovarianceMatrix(std::move(c));
}

CovarianceMatrix CovarianceMatrix::direct_sum(const CovarianceMatrix& other) const {
  const int d1 = dimension();
  const int d2 = other.dimension();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d1 + d2, d1 + d2);
  c.topLeftCorner(d1, d1) = entries_;
  c.bottomRightCorner(d2, d2) = other.entries_;
  return CovarianceMatrix(std::move(c));
}

Eigen::MatrixXd symplectic_form(int n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

void BipartitionSpec::validate(int n_modes) const {
  if (party_a.empty() || party_b.empty()) {
    throw ValidationError("bipartition parties must both be non-empty");
  }
  std::set<int> seen;
  for (const auto* party : {&party_a, &party_b}) {
    for (int m : *party) {
      if (m < 0 || m >= n_modes) {
        throw ValidationError("bipartition mode index " + std::to_string(m) +
                              " out of range for " + std::to_string(n_modes) + " modes");
      }
      if (!seen.insert(m).second) {
        throw ValidationError("bipartition mode index " + std::to_string(m) +
                              " appears more than once");
      }
    }
  }
}

bool BipartitionSpec::covers(int n_modes) const {
  return static_cast<int>(party_a.size() + party_b.size()) == n_modes;
}

}  // namespace cvgn
