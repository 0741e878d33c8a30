// Acceptance checks. Each criterion prints one PASS/FAIL line; the exit code
// is nonzero if any selected criterion fails.
//
//   cvgn_acceptance                 run all criteria
//   cvgn_acceptance --criterion N   run criterion N only

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cvgn/analysis.hpp"
#include "cvgn/dynamics.hpp"
#include "cvgn/gaussian.hpp"
#include "oracles.hpp"

using namespace cvgn;

namespace {

// Pinned targets and tolerances.
constexpr double kPlateauTarget = 0.0139;          // nats
constexpr double kPlateauRelTol = 0.10;
constexpr double kPlateauSeconds = 1.0;
constexpr double kThresholdLow0 = 220.0, kThresholdHigh0 = 240.0;
constexpr double kThresholdLow25 = 240.0, kThresholdHigh25 = 260.0;
constexpr double kThresholdGain = 10.0;
constexpr double kThresholdSeconds = 30.0;
constexpr double kThresholdResolution = 0.5;
constexpr double kCrossingLow = 200.0, kCrossingHigh = 235.0;
constexpr double kEntangledCutoff = 1e-8;
constexpr double kOrderingSlack = 1e-12;
constexpr double kOpticalLnCeiling = 1e-10;
constexpr double kAdditivityTol = 1e-6;
constexpr double kCrossCeiling = 1e-12;
constexpr double kActivationLevel = 1e-6;
constexpr double kPlateauMatch = 1e-4;
constexpr int kOracleSystems = 200;
constexpr double kOracleRelTol = 1e-6;
constexpr double kOracleSeconds = 60.0;
constexpr double kIdentityTol = 1e-8;
constexpr double kInvarianceTol = 1e-9;
constexpr double kPhysicalTol = 1e-9;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

FullParams operating_point(double eta, double n_m) {
  FullParams p = FullParams::Defaults();
  p.eta = eta;
  p.n_m = n_m;
  return p;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return v;
}

Outcome discord_plateau() {
  const auto start = Clock::now();
  const ModelParams m = operating_point(0.25, 240.0);
  const CovarianceMatrix c = *steady_state(m).covariance;
  const double nats = evaluate_metric(Metric::kDiscordO1O2, m, c, LogBase::kNats);
  const double elapsed = seconds_since(start);
  const double bits = evaluate_metric(Metric::kDiscordO1O2, m, c, LogBase::kBits);
  const double rel = std::abs(nats - kPlateauTarget) / kPlateauTarget;
  const bool pass = rel <= kPlateauRelTol && elapsed < kPlateauSeconds;
  return {pass, fmt("D_G = %.6f nats (%.6f bits), target %.4f +-%.0f%%, off by %.1f%%, %.3f s",
                    nats, bits, kPlateauTarget, 100 * kPlateauRelTol, 100 * rel, elapsed)};
}

Outcome thresholds() {
  ThresholdOptions opts;
  opts.resolution = kThresholdResolution;
  opts.cutoff = kEntangledCutoff;
  auto timed = [&](double eta, double& secs) {
    const auto start = Clock::now();
    const double n = find_threshold(operating_point(eta, 0.0), 0.0, 600.0, opts);
    secs = seconds_since(start);
    return n;
  };
  double s0 = 0.0, s25 = 0.0;
  const double n0 = timed(0.0, s0);
  const double n25 = timed(0.25, s25);
  const bool in0 = n0 >= kThresholdLow0 && n0 <= kThresholdHigh0;
  const bool in25 = n25 >= kThresholdLow25 && n25 <= kThresholdHigh25;
  const bool gain = n25 - n0 >= kThresholdGain;
  const bool fast = s0 < kThresholdSeconds && s25 < kThresholdSeconds;
  return {in0 && in25 && gain && fast,
          fmt("n_th(0) = %.2f (%sin %.0f..%.0f), n_th(0.25) = %.2f (%sin %.0f..%.0f), "
              "gain %.2f (%s>= %.0f), %.3f s + %.3f s",
              n0, in0 ? "" : "NOT ", kThresholdLow0, kThresholdHigh0, n25, in25 ? "" : "NOT ",
              kThresholdLow25, kThresholdHigh25, n25 - n0, gain ? "" : "NOT ", kThresholdGain, s0,
              s25)};
}

Outcome crossing() {
  const std::vector<double> grid = linspace(150.0, 260.0, 221);
  const ModelParams base = operating_point(0.0, 0.0);
  ModelParams lossy = base;
  set_parameter(lossy, "eta", 0.25);
  const auto ln0 = sweep(base, "n_m", grid, {"ln_o1o2_m1m2"}).columns[0];
  const auto ln25 = sweep(lossy, "n_m", grid, {"ln_o1o2_m1m2"}).columns[0];
  std::vector<double> crossings;
  int last_sign = 0;
  double last_n = 0.0, last_diff = 0.0;
  for (size_t i = 0; i < grid.size(); ++i) {
    if (std::max(ln0[i], ln25[i]) <= kEntangledCutoff) continue;
    const double diff = ln25[i] - ln0[i];
    const int sign = diff > 0.0 ? 1 : (diff < 0.0 ? -1 : 0);
    if (sign != 0 && last_sign != 0 && sign != last_sign) {
      crossings.push_back(last_n + (grid[i] - last_n) * last_diff / (last_diff - diff));
    }
    if (sign != 0) {
      last_sign = sign;
      last_n = grid[i];
      last_diff = diff;
    }
  }
  const bool pass = crossings.size() == 1 && crossings[0] >= kCrossingLow &&
                    crossings[0] <= kCrossingHigh;
  std::string where;
  for (double c : crossings) where += fmt(" %.2f", c);
  return {pass, fmt("%zu crossing(s) at n_M =%s (want one in %.0f..%.0f)", crossings.size(),
                    where.empty() ? " none" : where.c_str(), kCrossingLow, kCrossingHigh)};
}

Outcome local_pair_suppression() {
  const std::vector<double> grid = linspace(0.0, 250.0, 25);
  const auto ln0 = sweep(operating_point(0.0, 0.0), "n_m", grid, {"ln_o1m1"}).columns[0];
  const auto ln25 = sweep(operating_point(0.25, 0.0), "n_m", grid, {"ln_o1m1"}).columns[0];
  int violations = 0;
  double worst = -INFINITY;
  for (size_t i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, ln25[i] - ln0[i]);
    if (!(ln25[i] <= ln0[i] + kOrderingSlack)) ++violations;
  }
  return {violations == 0,
          fmt("%d of %zu points with LN(eta=0.25) > LN(eta=0); max difference %.3e, "
              "LN(eta=0) at n_M=0 is %.4f",
              violations, grid.size(), worst, ln0[0])};
}

Outcome no_optical_entanglement() {
  double worst = 0.0;
  int points = 0;
  for (double eta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (double n_in : {0.0, 1.0, 2.0, 5.0, 10.0}) {
      const ModelParams m = SimplifiedParams{0.0, 1.0, eta, n_in, true};
      worst = std::max(worst,
                       evaluate_metric(Metric::kLnO1O2, m, *steady_state(m).covariance));
      ++points;
    }
  }
  for (double eta : {0.0, 0.1, 0.25, 0.4, 0.5}) {
    for (double n_m : {0.0, 60.0, 120.0, 180.0, 240.0}) {
      const ModelParams m = operating_point(eta, n_m);
      worst = std::max(worst,
                       evaluate_metric(Metric::kLnO1O2, m, *steady_state(m).covariance));
      ++points;
    }
  }
  return {worst <= kOpticalLnCeiling,
          fmt("max LN(O1:O2) = %.3e over %d points (ceiling %.0e)", worst, points,
              kOpticalLnCeiling)};
}

Outcome fig2_shape() {
  const std::vector<double> etas = linspace(0.0, 0.95, 20);
  bool increasing = true;
  for (double n_in : {1.0, 2.0, 5.0}) {
    const auto d =
        sweep(SimplifiedParams{0.0, 1.0, 0.0, n_in, true}, "eta", etas, {"discord_o1o2"})
            .columns[0];
    for (size_t i = 1; i < d.size(); ++i) increasing = increasing && d[i] > d[i - 1];
  }
  auto discord = [](double eta, double n_in) {
    const ModelParams m = SimplifiedParams{0.0, 1.0, eta, n_in, true};
    return evaluate_metric(Metric::kDiscordO1O2, m, *steady_state(m).covariance);
  };
  double vacuum = 0.0;
  for (double eta : etas) vacuum = std::max(vacuum, discord(eta, 0.0));
  const double hot = discord(0.5, 1e4), warm = discord(0.5, 1.0);
  const bool pass = increasing && vacuum == 0.0 && hot < warm;
  return {pass, fmt("strictly increasing in eta: %s; max D(n_in=0) = %.1e; "
                    "D(n_in=1e4) = %.4e < D(n_in=1) = %.4e: %s",
                    increasing ? "yes" : "no", vacuum, hot, warm, hot < warm ? "yes" : "no")};
}

Outcome additivity() {
  const std::vector<double> grid = linspace(0.0, 250.0, 25);
  double worst_sum = 0.0, worst_cross = 0.0, max_total = 0.0;
  for (double n_m : grid) {
    const ModelParams m = operating_point(0.25, n_m);
    const CovarianceMatrix c = *steady_state(m).covariance;
    const PlusMinusEntanglement pm = plus_minus_decomposition(c);
    const double total = evaluate_metric(Metric::kLnO1O2M1M2, m, c);
    max_total = std::max(max_total, total);
    worst_sum = std::max(worst_sum, std::abs(pm.plus + pm.minus - total));
    worst_cross = std::max(worst_cross, pm.cross);
  }
  return {worst_sum <= kAdditivityTol && worst_cross <= kCrossCeiling,
          fmt("max |e+ + e- - LN| = %.2e (tol %.0e), max cross LN = %.2e, max LN = %.4f",
              worst_sum, kAdditivityTol, worst_cross, max_total)};
}

struct Activation {
  double first_discord = NAN, first_ln = NAN;
  double discord_gap = NAN, ln_gap = NAN;
  double final_ln = NAN, steady_ln = NAN;
};

Activation activation(double n_m) {
  const FullParams p = operating_point(0.25, n_m);
  TransientOptions opts;
  opts.t_final_kappa = 150.0;
  opts.sample_interval_kappa = 0.1;
  const TransientSeries s = activation_transient(p, opts);
  const ModelParams m = p;
  const CovarianceMatrix c = *steady_state(m).covariance;
  Activation a;
  for (size_t i = 0; i < s.t_kappa.size(); ++i) {
    if (std::isnan(a.first_discord) && s.discord_o1o2[i] > kActivationLevel) {
      a.first_discord = s.t_kappa[i];
    }
    if (std::isnan(a.first_ln) && s.ln_o1o2_m1m2[i] > kActivationLevel) a.first_ln = s.t_kappa[i];
  }
  a.discord_gap =
      std::abs(s.discord_o1o2.back() - evaluate_metric(Metric::kDiscordO1O2, m, c));
  a.steady_ln = evaluate_metric(Metric::kLnO1O2M1M2, m, c);
  a.final_ln = s.ln_o1o2_m1m2.back();
  a.ln_gap = std::abs(a.final_ln - a.steady_ln);
  return a;
}

Outcome activation_ordering() {
  const Activation a = activation(240.0);
  const bool ordered = !std::isnan(a.first_discord) && !std::isnan(a.first_ln) &&
                       a.first_ln > a.first_discord;
  const bool plateau = a.discord_gap <= kPlateauMatch && a.ln_gap <= kPlateauMatch;
  std::string detail =
      fmt("n_M=240: D_G > %.0e at t = %.1f/kappa, LN > %.0e at %s; plateau gaps D %.1e, "
          "LN %.1e (steady LN %.2e)",
          kActivationLevel, a.first_discord, kActivationLevel,
          std::isnan(a.first_ln) ? "never" : fmt("t = %.1f/kappa", a.first_ln).c_str(),
          a.discord_gap, a.ln_gap, a.steady_ln);
  if (!ordered) {
    // Diagnostic only: the same protocol below the computed threshold.
    const Activation b = activation(200.0);
    detail += fmt("; diagnostic n_M=200: D_G at %.1f/kappa, LN at %.1f/kappa", b.first_discord,
                  b.first_ln);
  }
  return {ordered && plateau, detail};
}

Outcome oracle_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240901ULL);
  double worst = 0.0;
  for (int k = 0; k < kOracleSystems; ++k) {
    const int n_modes = 1 + k % 4;
    const DriftDiffusion dd = oracle::random_stable_system(n_modes, rng);
    Eigen::EigenSolver<Eigen::MatrixXd> es(dd.a, false);
    const double slowest = -es.eigenvalues().real().maxCoeff();
    const CovarianceMatrix steady = solve_steady(dd);
    const Trajectory tr = evolve_covariance(dd, CovarianceMatrix::Vacuum(n_modes),
                                            25.0 / slowest, default_time_step(dd), 1 << 30);
    const double rel = (tr.states.back().entries() - steady.entries()).norm() /
                       steady.entries().norm();
    worst = std::max(worst, rel);
  }
  const double elapsed = seconds_since(start);
  return {worst <= kOracleRelTol && elapsed < kOracleSeconds,
          fmt("%d systems, max relative difference %.2e (tol %.0e), %.2f s", kOracleSystems,
              worst, kOracleRelTol, elapsed)};
}

Outcome measure_identities() {
  const double log2e = 1.0 / std::numbers::ln2;
  double worst_identity = 0.0, worst_invariance = 0.0, min_nu = INFINITY;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  auto track = [&](const CovarianceMatrix& c) {
    min_nu = std::min(min_nu, min_symplectic_eigenvalue(c));
  };
  auto invariance = [&](const CovarianceMatrix& c) {
    for (int trial = 0; trial < 5; ++trial) {
      const CovarianceMatrix r = rotate_basis(
          c, phase_rotation(2, 0, angle(rng)) * phase_rotation(2, 1, angle(rng)));
      track(r);
      worst_invariance = std::max(
          {worst_invariance, std::abs(gaussian_discord(r) - gaussian_discord(c)),
           std::abs(log_negativity_two_mode(r) - log_negativity_two_mode(c))});
    }
  };
  for (int k = 1; k <= 10; ++k) {
    const double r = 0.1 * k;
    const CovarianceMatrix c = CovarianceMatrix::TwoModeSqueezedVacuum(r);
    track(c);
    const double f = entropy_f(std::cosh(2.0 * r));
    worst_identity = std::max({worst_identity, std::abs(gaussian_discord(c) - f),
                               std::abs(log_negativity_two_mode(c) - 2.0 * r * log2e)});
    invariance(c);
  }
  for (int trial = 0; trial < 20; ++trial) {
    const CovarianceMatrix c = oracle::random_physical_state(2, rng);
    track(c);
    invariance(c);
  }
  for (double n_m : {0.0, 120.0, 240.0}) {
    const SteadyState s = steady_state(operating_point(0.25, n_m));
    track(*s.covariance);
    track(reduce_modes(*s.covariance, {1, 3}));
  }
  const bool pass = worst_identity <= kIdentityTol && worst_invariance <= kInvarianceTol &&
                    min_nu >= 0.5 - kPhysicalTol;
  return {pass, fmt("identity error %.1e (tol %.0e), rotation drift %.1e (tol %.0e), "
                    "min symplectic eigenvalue %.6f",
                    worst_identity, kIdentityTol, worst_invariance, kInvarianceTol, min_nu)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "discord plateau", discord_plateau},
      {2, "entanglement thresholds", thresholds},
      {3, "negativity crossing", crossing},
      {4, "local pair suppression", local_pair_suppression},
      {5, "no optical entanglement", no_optical_entanglement},
      {6, "discord versus transmissivity and noise", fig2_shape},
      {7, "plus/minus additivity", additivity},
      {8, "activation ordering", activation_ordering},
      {9, "steady versus long-time evolution", oracle_equivalence},
      {10, "Gaussian measure identities", measure_identities},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2d %-40s %s  %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
