#ifndef HOTCOLD_ANALYSIS_HPP_
#define HOTCOLD_ANALYSIS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "hotcold/channel.hpp"
#include "hotcold/geometry.hpp"

namespace hotcold::analysis {

// ---------------------------------------------------------------------------
// Geometric bounds on the rotation angle
// ---------------------------------------------------------------------------

/// Open interval of useful fixed rotation angles (degrees). At 120 the third
/// step lands back on the start; at 144 it lands on the far border of the
/// region that must contain the target.
constexpr double kGeometricLowerDeg = 120.0;
constexpr double kGeometricUpperDeg = 144.0;

constexpr bool isAdmissibleRotation(double phi_deg) {
  return phi_deg > kGeometricLowerDeg && phi_deg < kGeometricUpperDeg;
}

/// Positions after 0..3 steps of length `step`, starting at the origin with
/// heading +x and rotating CCW by `phi_deg` before the second and third step.
std::array<Vec2, 4> threeStepPositions(double phi_deg, double step);

// ---------------------------------------------------------------------------
// Rotation count sweep
// ---------------------------------------------------------------------------

/// Smallest omega >= 0 with (omega * phi) mod 360 inside [theta - eps,
/// theta + eps] (circularly). Scans the wrap count kappa = 0..phi and takes
/// the first kappa whose interval [(theta - eps + 360 kappa) / phi,
/// (theta + eps + 360 kappa) / phi] contains an integer.
std::optional<int> rotationsToReach(int phi_deg, int theta_deg, int epsilon_deg);

struct RotationSweepCell {
  int phi_deg = 0;
  int epsilon_deg = 0;
  std::optional<double> mean_rotations;  // nullopt when some theta is unreachable
  std::vector<std::optional<int>> per_theta;
};

struct RotationSweepSummary {
  int phi_deg = 0;
  double overall_mean = 0.0;  // over valid epsilon cells
  double percent_valid = 0.0;
};

struct RotationSweep {
  int phi_min = 0, phi_max = 0, eps_min = 0, eps_max = 0;
  std::vector<RotationSweepCell> cells;  // row-major: phi, then epsilon
  std::vector<RotationSweepSummary> per_phi;
  /// Lowest overall mean among angles with every trial valid.
  std::optional<int> best_fully_valid_phi;

  const RotationSweepCell& cell(int phi_deg, int epsilon_deg) const;
  const RotationSweepSummary& summary(int phi_deg) const;
};

RotationSweep rotationSweep(int phi_min = 121, int phi_max = 143, int eps_min = 0,
                            int eps_max = 30);

// ---------------------------------------------------------------------------
// Exhaustive step-count simulation
// ---------------------------------------------------------------------------

constexpr int kExhaustiveStepCap = 10'000;

struct StepCount {
  int steps = 0;
  bool cap_reached = false;
};

/// Noise-free Hot-Cold walk with unit steps: the robot starts at the origin
/// heading 0 degrees, the target sits rho steps away at bearing beta. After
/// every step the robot rotates by phi (CCW) if it is strictly farther than
/// before the step. Counts steps until the distance is <= tau.
StepCount exhaustiveStepCount(int phi_deg, int rho, int beta_deg, int tau,
                              int step_cap = kExhaustiveStepCap);

struct ExhaustiveCell {
  int phi_deg = 0;
  int tau = 0;
  double mean_steps = 0.0;  // over rho and beta
  std::int64_t cap_hits = 0;
};

struct ExhaustiveSweepConfig {
  int phi_min = 121, phi_max = 143;
  int rho_min = 10, rho_max = 100;
  int beta_min = 0, beta_max = 359;
  int tau_min = 1, tau_max = 10;
  int step_cap = kExhaustiveStepCap;
  unsigned workers = 0;  // 0 = hardware concurrency

  std::int64_t runCount() const;
};

struct ExhaustiveSweep {
  ExhaustiveSweepConfig config;
  std::vector<ExhaustiveCell> cells;  // row-major: phi, then tau
  std::vector<double> overall_mean;   // per phi, over tau
  std::int64_t runs = 0;
  std::int64_t cap_hits = 0;
  int best_phi = 0;

  const ExhaustiveCell& cell(int phi_deg, int tau) const;
  double overallMean(int phi_deg) const;
};

ExhaustiveSweep exhaustiveSweep(const ExhaustiveSweepConfig& config = {});

// ---------------------------------------------------------------------------
// Convergence lemmas
// ---------------------------------------------------------------------------

/// Thresholds on the target's signed lateral offset r after the robot has
/// entered Cold mode, for step s and horizontal distance t > s/2:
///   r1: approach right after the first rotation iff r > r1
///   r2: the second rotation approaches iff r < r2
///   r3: after two rotations the robot is closer than before them iff r < r3
struct LemmaThresholds {
  double s = 0.0;
  double t = 0.0;
  double phi_deg = 0.0;
  double r1_threshold = 0.0;
  double r2_threshold = 0.0;
  double r3_threshold = 0.0;
};

/// Linear coefficients r = a s + b t of each threshold at a given angle.
struct ThresholdCoefficients {
  double r1_s, r1_t, r2_s, r2_t, r3_s, r3_t;
};

ThresholdCoefficients thresholdCoefficients(double phi_deg);

/// Rounded coefficients printed for 137 degrees in the original derivation.
constexpr ThresholdCoefficients kPrintedCoefficients137{0.7304, -1.0649, 0.2294,
                                                        -0.0629, -0.8646, 2.1251};

/// Throws std::domain_error unless t > s/2 and 90 <= phi <= 180.
LemmaThresholds lemma2Thresholds(double s, double t, double phi_deg);

struct LemmaReport {
  int trials = 0;
  double phi_deg = 137.0;
  int lemma1_checked = 0;
  int lemma1_violations = 0;
  int first_rotation_checked = 0;
  int first_rotation_violations = 0;
  int second_rotation_checked = 0;
  int second_rotation_violations = 0;
  int net_approach_checked = 0;
  int net_approach_violations = 0;
  int ordering_checked = 0;
  int ordering_r1_r2_violations = 0;
  int ordering_r1_r3_violations = 0;
  ThresholdCoefficients symbolic{};
  ThresholdCoefficients printed = kPrintedCoefficients137;

  int totalViolations() const {
    return lemma1_violations + first_rotation_violations + second_rotation_violations +
           net_approach_violations + ordering_r1_r2_violations + ordering_r1_r3_violations;
  }
};

/// Randomized geometric check of both lemmas. Samples within `boundary_band`
/// (relative) of a threshold are skipped as numerically undecidable.
LemmaReport verifyLemmas(int trials, Rng& rng, double phi_deg = 137.0,
                         double boundary_band = 1e-9);

}  // namespace hotcold::analysis

#endif  // HOTCOLD_ANALYSIS_HPP_
