#include "cvgn/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <string>

#include <Eigen/Eigenvalues>

#include "cvgn/errors.hpp"

namespace cvgn {

namespace {

constexpr double kPairTolerance = 1e-8;
constexpr double kProductTolerance = 1e-12;
constexpr double kEntropyClamp = 1e-9;
constexpr double kDiscordFloor = -1e-9;
constexpr double kCancellation = 1e-13;

double log_in(double x, LogBase base) {
  return base == LogBase::kBits ? std::log2(x) : std::log(x);
}

void require_two_modes(const CovarianceMatrix& c, const char* what) {
  if (c.n_modes() != 2) {
    throw ValidationError(std::string(what) + " needs a two-mode state, got " +
                          std::to_string(c.n_modes()) + " modes");
  }
}

void require_mode_indices(const std::vector<int>& modes, int n_modes, bool allow_empty) {
  if (!allow_empty && modes.empty()) throw ValidationError("mode list must not be empty");
  std::set<int> seen;
  for (int m : modes) {
    if (m < 0 || m >= n_modes) {
      throw ValidationError("mode index " + std::to_string(m) + " out of range for " +
                            std::to_string(n_modes) + " modes");
    }
    if (!seen.insert(m).second) {
      throw ValidationError("mode index " + std::to_string(m) + " listed twice");
    }
  }
}

// Swaps the two modes of a two-mode state.
CovarianceMatrix swap_modes(const CovarianceMatrix& c) {
  Eigen::PermutationMatrix<4> p;
  p.indices() << 2, 3, 0, 1;
  Eigen::MatrixXd swapped = p * c.entries() * p.transpose();
  return CovarianceMatrix(std::move(swapped));
}

// Smallest root of x^2 - s x + p = 0 computed without cancellation.
// Square root of a difference whose exact value may be zero: anything within
// roundoff of `scale` is treated as an exact zero, since the square root
// would otherwise amplify cancellation noise to about sqrt(eps).
double cancelled_sqrt(double value, double scale) {
  return value <= kCancellation * scale ? 0.0 : std::sqrt(value);
}

double smaller_root_squared(double sum, double product, const char* what) {
  const double disc = sum * sum - 4.0 * product;
  if (disc < -1e-9 * std::max(1.0, sum * sum)) {
    throw UnphysicalStateError(std::string(what) +
                               ": negative discriminant, invariants are not those of a "
                               "physical state");
  }
  const double big = 0.5 * (sum + cancelled_sqrt(disc, sum * sum));
  return big > 0.0 ? product / big : 0.0;
}

}  // namespace

std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& c) {
  const int n = c.n_modes();
  const Eigen::MatrixXd m = symplectic_form(n) * c.entries();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw DegeneracyError("eigen-decomposition of Omega*C failed");
  }
  std::vector<std::complex<double>> ev(solver.eigenvalues().begin(),
                                       solver.eigenvalues().end());
  double scale = 1.0;
  for (const auto& z : ev) scale = std::max(scale, std::abs(z));
  for (const auto& z : ev) {
    if (std::abs(z.real()) > kPairTolerance * scale) {
      throw DegeneracyError("Omega*C has an eigenvalue with non-zero real part " +
                            std::to_string(z.real()));
    }
  }
  std::sort(ev.begin(), ev.end(),
            [](const auto& a, const auto& b) { return a.imag() < b.imag(); });

  std::vector<double> nu(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    // ev[n-1-k] pairs with ev[n+k]: -i nu and +i nu
    const double lower = -ev[static_cast<size_t>(n - 1 - k)].imag();
    const double upper = ev[static_cast<size_t>(n + k)].imag();
    if (std::abs(lower - upper) > kPairTolerance * scale) {
      throw DegeneracyError("eigenvalues of Omega*C do not form +-i nu pairs (" +
                            std::to_string(lower) + " vs " + std::to_string(upper) + ")");
    }
    nu[static_cast<size_t>(k)] = 0.5 * (std::abs(lower) + std::abs(upper));
  }
  std::sort(nu.begin(), nu.end());
  return nu;
}

double min_symplectic_eigenvalue(const CovarianceMatrix& c) {
  return symplectic_eigenvalues(c).front();
}

bool is_physical(const CovarianceMatrix& c, double tolerance) {
  return min_symplectic_eigenvalue(c) >= 0.5 - tolerance;
}

void require_physical(const CovarianceMatrix& c, const char* what) {
  const double nu = min_symplectic_eigenvalue(c);
  if (nu < 0.5 - 1e-9) {
    throw UnphysicalStateError(std::string(what) +
                               ": state is unphysical (min symplectic eigenvalue " +
                               std::to_string(nu) + " < 1/2)");
  }
}

TwoModeInvariants two_mode_invariants(const CovarianceMatrix& c) {
  require_two_modes(c, "two_mode_invariants");
  TwoModeInvariants inv;
  inv.i1 = 4.0 * c.block(0, 0).determinant();
  inv.i2 = 4.0 * c.block(1, 1).determinant();
  inv.i3 = 4.0 * c.block(0, 1).determinant();
  inv.i4 = 16.0 * c.entries().determinant();
  inv.i_delta = inv.i1 + inv.i2 + 2.0 * inv.i3;
  return inv;
}

std::pair<double, double> symplectic_eigenvalues_two_mode(const TwoModeInvariants& inv) {
  const double minus_sq =
      smaller_root_squared(inv.i_delta, inv.i4, "symplectic_eigenvalues_two_mode");
  const double plus_sq = inv.i_delta - minus_sq;
  return {std::sqrt(std::max(0.0, minus_sq)), std::sqrt(std::max(0.0, plus_sq))};
}

double entropy_f(double x, LogBase base) {
  if (!(x >= 1.0 - kEntropyClamp)) {
    throw DomainError("entropy_f: argument " + std::to_string(x) + " is below 1");
  }
  if (x <= 1.0) return 0.0;
  const double up = 0.5 * (x + 1.0);
  const double down = 0.5 * (x - 1.0);
  return up * log_in(up, base) - down * log_in(down, base);
}

double gaussian_discord(const CovarianceMatrix& c, int measured_party, LogBase base) {
  require_two_modes(c, "gaussian_discord");
  if (measured_party != 0 && measured_party != 1) {
    throw ValidationError("gaussian_discord: measured_party must be 0 or 1, got " +
                          std::to_string(measured_party));
  }
  require_physical(c, "gaussian_discord");
  if (c.block(0, 1).norm() < kProductTolerance) return 0.0;

  // I1 always belongs to the measured party.
  const TwoModeInvariants inv =
      two_mode_invariants(measured_party == 0 ? c : swap_modes(c));
  const auto [lambda_minus, lambda_plus] = symplectic_eigenvalues_two_mode(inv);
  const double i1 = inv.i1, i2 = inv.i2, i3 = inv.i3, i4 = inv.i4;

  const double lhs = (i4 - i1 * i2) * (i4 - i1 * i2);
  const double rhs = (1.0 + i1) * i3 * i3 * (i2 + i4);
  double w = 0.0;
  if (lhs <= rhs) {
    const double inner = i3 * i3 + (i1 - 1.0) * (i4 - i2);
    const double root = cancelled_sqrt(inner, i3 * i3 + std::abs((i1 - 1.0) * (i4 - i2)));
    w = (2.0 * i3 * i3 + (i1 - 1.0) * (i4 - i2) + 2.0 * std::abs(i3) * root) /
        ((i1 - 1.0) * (i1 - 1.0));
  } else {
    const double i3sq = i3 * i3;
    const double gap = i4 - i1 * i2;
    const double inner = i3sq * i3sq + gap * gap - 2.0 * i3sq * (i4 + i1 * i2);
    const double scale = i3sq * i3sq + gap * gap + 2.0 * i3sq * (i4 + i1 * i2);
    w = (i1 * i2 - i3sq + i4 - cancelled_sqrt(inner, scale)) / (2.0 * i1);
  }

  const double d = entropy_f(std::sqrt(i1), base) - entropy_f(lambda_minus, base) -
                   entropy_f(lambda_plus, base) + entropy_f(std::sqrt(w), base);
  if (d < kDiscordFloor) {
    throw NumericalError("gaussian_discord: negative result " + std::to_string(d));
  }
  return std::max(0.0, d);
}

CovarianceMatrix partial_transpose(const CovarianceMatrix& c,
                                   const std::vector<int>& transposed_modes) {
  require_mode_indices(transposed_modes, c.n_modes(), /*allow_empty=*/true);
  Eigen::MatrixXd m = c.entries();
  for (int mode : transposed_modes) {
    m.row(2 * mode + 1) *= -1.0;
    m.col(2 * mode + 1) *= -1.0;
  }
  return CovarianceMatrix(std::move(m));
}

double log_negativity_two_mode(const CovarianceMatrix& c, LogBase base) {
  require_two_modes(c, "log_negativity_two_mode");
  require_physical(c, "log_negativity_two_mode");
  const TwoModeInvariants inv = two_mode_invariants(c);
  const double transposed_delta = inv.i1 + inv.i2 - 2.0 * inv.i3;
  const double lambda_sq =
      smaller_root_squared(transposed_delta, inv.i4, "log_negativity_two_mode");
  const double lambda = std::sqrt(std::max(0.0, lambda_sq));
  if (lambda >= 1.0) return 0.0;
  return -log_in(lambda, base);
}

double log_negativity_bipartition(const CovarianceMatrix& c, const BipartitionSpec& partition,
                                  LogBase base) {
  partition.validate(c.n_modes());
  if (!partition.covers(c.n_modes())) {
    throw ValidationError("log_negativity_bipartition: partition must cover all " +
                          std::to_string(c.n_modes()) + " modes");
  }
  require_physical(c, "log_negativity_bipartition");
  double e = 0.0;
  for (double nu : symplectic_eigenvalues(partial_transpose(c, partition.party_a))) {
    if (2.0 * nu < 1.0) e -= log_in(2.0 * nu, base);
  }
  return e;
}

CovarianceMatrix reduce_modes(const CovarianceMatrix& c, const std::vector<int>& keep) {
  require_mode_indices(keep, c.n_modes(), /*allow_empty=*/false);
  const int k = static_cast<int>(keep.size());
  Eigen::MatrixXd m(2 * k, 2 * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      m.block<2, 2>(2 * i, 2 * j) = c.block(keep[static_cast<size_t>(i)], keep[static_cast<size_t>(j)]);
    }
  }
  return CovarianceMatrix(std::move(m));
}

bool is_symplectic(const Eigen::MatrixXd& s, double tolerance) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0 || s.rows() == 0) return false;
  const Eigen::MatrixXd omega = symplectic_form(static_cast<int>(s.rows() / 2));
  return (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff() <= tolerance;
}

CovarianceMatrix rotate_basis(const CovarianceMatrix& c, const Eigen::MatrixXd& s) {
  if (s.rows() != c.dimension() || s.cols() != c.dimension()) {
    throw ValidationError("rotate_basis: transformation must be " +
                          std::to_string(c.dimension()) + "x" + std::to_string(c.dimension()));
  }
  if (!is_symplectic(s)) {
    throw ValidationError("rotate_basis: transformation is not symplectic");
  }
  Eigen::MatrixXd rotated = s * c.entries() * s.transpose();
  return CovarianceMatrix(0.5 * (rotated + rotated.transpose()));
}

Eigen::MatrixXd phase_rotation(int n_modes, int mode, double theta) {
  if (mode < 0 || mode >= n_modes) throw ValidationError("phase_rotation: mode out of range");
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  const double co = std::cos(theta), si = std::sin(theta);
  s(2 * mode, 2 * mode) = co;
  s(2 * mode, 2 * mode + 1) = si;
  s(2 * mode + 1, 2 * mode) = -si;
  s(2 * mode + 1, 2 * mode + 1) = co;
  return s;
}

Eigen::MatrixXd plus_minus_rotation(int n_modes,
                                    const std::vector<std::pair<int, int>>& pairs) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  std::set<int> used;
  const double h = std::numbers::sqrt2 / 2.0;
  for (const auto& [i, j] : pairs) {
    if (i < 0 || j < 0 || i >= n_modes || j >= n_modes || i == j ||
        !used.insert(i).second || !used.insert(j).second) {
      throw ValidationError("plus_minus_rotation: invalid or overlapping mode pair");
    }
    for (int q = 0; q < 2; ++q) {
      const int a = 2 * i + q, b = 2 * j + q;
      s(a, a) = h;
      s(a, b) = h;
      s(b, a) = h;
      s(b, b) = -h;
    }
  }
  return s;
}

}  // namespace cvgn
