#include "hotcold/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace hotcold::analysis {

std::array<Vec2, 4> threeStepPositions(double phi_deg, double step) {
  std::array<Vec2, 4> out;
  Pose2d pose(0.0, 0.0, 0.0);
  out[0] = pose.position;
  pose = advance(pose, step);
  out[1] = pose.position;
  pose = advance(rotate(pose, deg2rad(phi_deg)), step);
  out[2] = pose.position;
  pose = advance(rotate(pose, deg2rad(phi_deg)), step);
  out[3] = pose.position;
  return out;
}

namespace {

int ceilDiv(int num, int den) {
  const int q = num / den;
  return (num % den != 0 && ((num > 0) == (den > 0))) ? q + 1 : q;
}

}  // namespace

std::optional<int> rotationsToReach(int phi_deg, int theta_deg, int epsilon_deg) {
  for (int kappa = 0; kappa <= phi_deg; ++kappa) {
    const int lo = theta_deg - epsilon_deg + 360 * kappa;
    const int hi = theta_deg + epsilon_deg + 360 * kappa;
    const int omega = std::max(0, ceilDiv(lo, phi_deg));
    if (omega * phi_deg <= hi) return omega;
  }
  return std::nullopt;
}

const RotationSweepCell& RotationSweep::cell(int phi_deg, int epsilon_deg) const {
  const int cols = eps_max - eps_min + 1;
  return cells.at(static_cast<std::size_t>((phi_deg - phi_min) * cols + (epsilon_deg - eps_min)));
}

const RotationSweepSummary& RotationSweep::summary(int phi_deg) const {
  return per_phi.at(static_cast<std::size_t>(phi_deg - phi_min));
}

RotationSweep rotationSweep(int phi_min, int phi_max, int eps_min, int eps_max) {
  if (phi_min < 1 || phi_max > 359 || phi_min > phi_max)
    throw std::invalid_argument("rotationSweep: phi range must lie in [1, 359]");
  if (eps_min < 0 || eps_max > 179 || eps_min > eps_max)
    throw std::invalid_argument("rotationSweep: bad epsilon range");

  RotationSweep sweep;
  sweep.phi_min = phi_min;
  sweep.phi_max = phi_max;
  sweep.eps_min = eps_min;
  sweep.eps_max = eps_max;

  double best = std::numeric_limits<double>::infinity();
  for (int phi = phi_min; phi <= phi_max; ++phi) {
    double valid_sum = 0.0;
    int valid = 0;
    for (int eps = eps_min; eps <= eps_max; ++eps) {
      RotationSweepCell c;
      c.phi_deg = phi;
      c.epsilon_deg = eps;
      c.per_theta.reserve(360);
      long total = 0;
      bool ok = true;
      for (int theta = 0; theta < 360; ++theta) {
        const auto omega = rotationsToReach(phi, theta, eps);
        c.per_theta.push_back(omega);
        if (omega) {
          total += *omega;
        } else {
          ok = false;
        }
      }
      if (ok) {
        c.mean_rotations = static_cast<double>(total) / 360.0;
        valid_sum += *c.mean_rotations;
        ++valid;
      }
      sweep.cells.push_back(std::move(c));
    }
    RotationSweepSummary s;
    s.phi_deg = phi;
    const int n_eps = eps_max - eps_min + 1;
    s.percent_valid = 100.0 * valid / n_eps;
    s.overall_mean = valid > 0 ? valid_sum / valid : std::numeric_limits<double>::quiet_NaN();
    if (valid == n_eps && s.overall_mean < best) {
      best = s.overall_mean;
      sweep.best_fully_valid_phi = phi;
    }
    sweep.per_phi.push_back(s);
  }
  return sweep;
}

namespace {

struct UnitCircleTable {
  std::array<double, 360> c{};
  std::array<double, 360> s{};
  UnitCircleTable() {
    for (int d = 0; d < 360; ++d) {
      c[static_cast<std::size_t>(d)] = std::cos(deg2rad(static_cast<double>(d)));
      s[static_cast<std::size_t>(d)] = std::sin(deg2rad(static_cast<double>(d)));
    }
  }
};

const UnitCircleTable& unitCircle() {
  static const UnitCircleTable table;
  return table;
}

}  // namespace

// Exact geometric ties (target reached at exactly tau, equal successive
// distances) must not hinge on the last bit of a rounded sqrt.
constexpr double kDistanceTieM = 1e-9;

StepCount exhaustiveStepCount(int phi_deg, int rho, int beta_deg, int tau, int step_cap) {
  const auto& uc = unitCircle();
  const int beta = ((beta_deg % 360) + 360) % 360;
  const double tx = rho * uc.c[static_cast<std::size_t>(beta)];
  const double ty = rho * uc.s[static_cast<std::size_t>(beta)];
  const int phi = ((phi_deg % 360) + 360) % 360;

  // Headings stay on the integer-degree grid, so the table is exact.
  double x = 0.0, y = 0.0;
  int heading = 0;
  // The start distance is rho by construction; recomputing it from the
  // table would put rho == tau cases on either side of the threshold.
  double previous = static_cast<double>(rho);
  StepCount out;
  while (previous > tau + kDistanceTieM) {
    if (out.steps >= step_cap) {
      out.cap_reached = true;
      break;
    }
    x += uc.c[static_cast<std::size_t>(heading)];
    y += uc.s[static_cast<std::size_t>(heading)];
    ++out.steps;
    const double dx = tx - x;
    const double dy = ty - y;
    const double current = std::sqrt(dx * dx + dy * dy);
    if (current > previous + kDistanceTieM) heading = (heading + phi) % 360;
    previous = current;
  }
  return out;
}

std::int64_t ExhaustiveSweepConfig::runCount() const {
  return static_cast<std::int64_t>(phi_max - phi_min + 1) * (rho_max - rho_min + 1) *
         (beta_max - beta_min + 1) * (tau_max - tau_min + 1);
}

const ExhaustiveCell& ExhaustiveSweep::cell(int phi_deg, int tau) const {
  const int cols = config.tau_max - config.tau_min + 1;
  return cells.at(
      static_cast<std::size_t>((phi_deg - config.phi_min) * cols + (tau - config.tau_min)));
}

double ExhaustiveSweep::overallMean(int phi_deg) const {
  return overall_mean.at(static_cast<std::size_t>(phi_deg - config.phi_min));
}

ExhaustiveSweep exhaustiveSweep(const ExhaustiveSweepConfig& config) {
  if (config.phi_min > config.phi_max || config.rho_min > config.rho_max ||
      config.beta_min > config.beta_max || config.tau_min > config.tau_max)
    throw std::invalid_argument("exhaustiveSweep: empty grid");

  ExhaustiveSweep sweep;
  sweep.config = config;
  const int n_phi = config.phi_max - config.phi_min + 1;
  const int n_tau = config.tau_max - config.tau_min + 1;
  const double per_cell =
      static_cast<double>(config.rho_max - config.rho_min + 1) * (config.beta_max - config.beta_min + 1);
  sweep.cells.resize(static_cast<std::size_t>(n_phi * n_tau));

  // One task per (phi, tau) cell; each writes only its own slot.
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int task = next++; task < n_phi * n_tau; task = next++) {
      const int phi = config.phi_min + task / n_tau;
      const int tau = config.tau_min + task % n_tau;
      std::int64_t total = 0;
      std::int64_t caps = 0;
      for (int rho = config.rho_min; rho <= config.rho_max; ++rho) {
        for (int beta = config.beta_min; beta <= config.beta_max; ++beta) {
          const StepCount sc = exhaustiveStepCount(phi, rho, beta, tau, config.step_cap);
          total += sc.steps;
          caps += sc.cap_reached ? 1 : 0;
        }
      }
      auto& c = sweep.cells[static_cast<std::size_t>(task)];
      c.phi_deg = phi;
      c.tau = tau;
      c.mean_steps = static_cast<double>(total) / per_cell;
      c.cap_hits = caps;
    }
  };

  unsigned workers = config.workers ? config.workers : std::thread::hardware_concurrency();
  workers = std::clamp(workers, 1u, static_cast<unsigned>(n_phi * n_tau));
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < workers; ++i) pool.emplace_back(worker);
    worker();
  }

  double best = std::numeric_limits<double>::infinity();
  for (int p = 0; p < n_phi; ++p) {
    double sum = 0.0;
    for (int t = 0; t < n_tau; ++t) {
      const auto& c = sweep.cells[static_cast<std::size_t>(p * n_tau + t)];
      sum += c.mean_steps;
      sweep.cap_hits += c.cap_hits;
    }
    const double mean = sum / n_tau;
    sweep.overall_mean.push_back(mean);
    if (mean < best) {
      best = mean;
      sweep.best_phi = config.phi_min + p;
    }
  }
  sweep.runs = config.runCount();
  return sweep;
}

ThresholdCoefficients thresholdCoefficients(double phi_deg) {
  const double phi = deg2rad(phi_deg);
  const double sin1 = std::sin(phi), cos1 = std::cos(phi);
  const double sin2 = std::sin(2.0 * phi), cos2 = std::cos(2.0 * phi);
  const double half_cos_sq = std::pow(std::cos(phi / 2.0), 2);
  const double sum_sin = sin1 + sin2;
  const double sum_cos = cos1 + cos2;

  ThresholdCoefficients k{};
  k.r1_s = 0.5 / sin1;
  k.r1_t = cos1 / sin1;
  k.r2_s = (4.0 * half_cos_sq - 1.0) / (2.0 * sin2);
  k.r2_t = cos2 / sin2;
  k.r3_s = 2.0 * half_cos_sq / sum_sin;
  k.r3_t = sum_cos / sum_sin;
  return k;
}

LemmaThresholds lemma2Thresholds(double s, double t, double phi_deg) {
  if (!(s > 0.0)) throw std::domain_error("lemma2Thresholds: step must be > 0");
  if (!(t > s / 2.0)) throw std::domain_error("lemma2Thresholds: requires t > s/2");
  if (!(phi_deg >= 90.0 && phi_deg <= 180.0))
    throw std::domain_error("lemma2Thresholds: requires 90 <= phi <= 180");
  const ThresholdCoefficients k = thresholdCoefficients(phi_deg);
  LemmaThresholds out;
  out.s = s;
  out.t = t;
  out.phi_deg = phi_deg;
  out.r1_threshold = k.r1_s * s + k.r1_t * t;
  out.r2_threshold = k.r2_s * s + k.r2_t * t;
  out.r3_threshold = k.r3_s * s + k.r3_t * t;
  return out;
}

LemmaReport verifyLemmas(int trials, Rng& rng, double phi_deg, double boundary_band) {
  // The threshold directions (r > r1, r < r2, r < r3) hold when
  // sin(phi) > 0, sin(2 phi) < 0 and sin(phi) + sin(2 phi) < 0.
  if (!(phi_deg > 120.0 && phi_deg < 180.0))
    throw std::domain_error("verifyLemmas: phi must lie in (120, 180)");

  LemmaReport report;
  report.trials = trials;
  report.phi_deg = phi_deg;
  report.symbolic = thresholdCoefficients(phi_deg);
  const double phi = deg2rad(phi_deg);

  std::uniform_real_distribution<double> step_dist(0.1, 10.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> ratio(0.5, 10.0);

  for (int trial = 0; trial < trials; ++trial) {
    const double s = step_dist(rng);

    // Hot mode: one forward step from A towards +x.
    {
      const Vec2 target(10.0 * s * unit(rng), 10.0 * s * unit(rng));
      const Pose2d a(0.0, 0.0, 0.0);
      const Pose2d b = advance(a, s);
      const double horizontal = target.x() - a.position.x();
      if (std::abs(horizontal - s / 2.0) > boundary_band * s) {
        ++report.lemma1_checked;
        const bool approached = distance(b.position, target) <= distance(a.position, target);
        if (approached != (horizontal >= s / 2.0)) ++report.lemma1_violations;
      }
    }

    // Cold mode: robot at C heading +x has just stepped past the target,
    // which sits t behind and r to the side.
    {
      double t = s * ratio(rng);
      if (!(t > s / 2.0)) t = std::nextafter(s / 2.0, 2.0 * s);
      const double r = 15.0 * s * unit(rng);
      const LemmaThresholds th = lemma2Thresholds(s, t, phi_deg);
      const Vec2 target(-t, r);
      const Pose2d c(0.0, 0.0, 0.0);
      const Pose2d d = advance(rotate(c, phi), s);
      const Pose2d e = advance(rotate(d, phi), s);
      const double cp = distance(c.position, target);
      const double dp = distance(d.position, target);
      const double ep = distance(e.position, target);
      const double band = boundary_band * (s + t);

      const bool first_decidable = std::abs(r - th.r1_threshold) > band;
      if (first_decidable) {
        ++report.first_rotation_checked;
        if ((dp < cp) != (r > th.r1_threshold)) ++report.first_rotation_violations;
      }
      if (first_decidable && !(dp < cp)) {
        if (std::abs(r - th.r2_threshold) > band) {
          ++report.second_rotation_checked;
          const bool approached = ep < dp;
          if (!approached || approached != (r < th.r2_threshold))
            ++report.second_rotation_violations;
        }
        if (std::abs(r - th.r3_threshold) > band) {
          ++report.net_approach_checked;
          const bool closer = ep < cp;
          if (!closer || closer != (r < th.r3_threshold)) ++report.net_approach_violations;
        }
      }
    }

    // Threshold ordering on an independent (s, t) draw.
    {
      const double s2 = step_dist(rng);
      double t2 = s2 * ratio(rng);
      if (!(t2 > s2 / 2.0)) t2 = std::nextafter(s2 / 2.0, 2.0 * s2);
      const LemmaThresholds th = lemma2Thresholds(s2, t2, phi_deg);
      ++report.ordering_checked;
      if (!(th.r1_threshold < th.r2_threshold)) ++report.ordering_r1_r2_violations;
      if (!(th.r1_threshold < th.r3_threshold)) ++report.ordering_r1_r3_violations;
    }
  }
  return report;
}

}  // namespace hotcold::analysis
