#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "melonlab/env.hpp"
#include "melonlab/melon.hpp"
#include "melonlab/path.hpp"
#include "melonlab/point.hpp"
#include "melonlab/region.hpp"

namespace melonlab {

// Default constant in the guard k <= c1 * n. MELONLAB_GUARD_C1 overrides it.
inline constexpr double kDefaultGuardC1 = 1.0 / 32.0;
double guard_c1();

// One flight-corridor leg: an upright path from start to end that stays in
// the parallelogram of the given half-width (transverse units) around the
// segment joining them.
struct Segment {
  Point start;
  Point end;
  int half_width = 0;

  Parallelogram corridor() const { return {start, end, half_width}; }
};

enum class Phase { kTakeOff = 0, kClimb, kCruise, kDescent, kLanding };
inline constexpr int kPhaseCount = 5;
const char* phase_name(Phase phase);

// Lattice geometry of one constructed curve. Take-off and landing are fixed
// staircases; the other phases are sequences of corridor legs, each starting
// one step after the previous leg's end.
struct CurvePlan {
  std::vector<Point> take_off;
  std::vector<Segment> climb;    // level j = 0..N-1, legs s = 1..k
  std::vector<Segment> cruise;   // legs s = 1..k
  std::vector<Segment> descent;  // reflection of the partner curve's climb
  std::vector<Point> landing;    // reflection of the partner curve's take-off
};

// Real-valued dyadic geometry plus its floored lattice realisation. Curves
// are indexed 1..m left to right (curves[i-1]).
//
//   s0      = (n/k)^(1/3),            2^N in s0 * [1, 2)
//   ell_0   = k^(2/3) n^(1/3),        ell_j = ell_{j-1} + 2^(3(j-1)/2) sqrt(k n) / 3
//   pos_i^j = (m/2 - i) 2^j s0,       sep_j = 2^j s0,      h = ell_N
//
// A point at level ell and transverse position p is
// (floor(ell) - floor(p), floor(ell) + floor(p)).
struct CorridorPlan {
  int n = 0;
  int k = 0;
  int m = 0;
  double c1 = kDefaultGuardC1;
  double s0 = 0.0;
  int N = 0;
  std::vector<double> ell;                // ell_0..ell_N
  std::vector<double> sep;                // sep_0..sep_N
  std::vector<std::vector<double>> pos;   // pos[i-1][j]
  double h = 0.0;
  std::vector<double> cruise_levels;      // ell'_0..ell'_k
  std::vector<CurvePlan> curves;
  bool climb_skipped = false;
  // Raw |x - y| allowance: 2 m k^(-2/3) n^(2/3) + sep_N / 2 + 1.
  double tf_bound = 0.0;

  // Height of a level-j climb corridor, ell_{j+1} - ell_j, over its k legs.
  double leg_height(int j) const { return (ell[j + 1] - ell[j]) / k; }
};

// Materialises the geometry and checks every guard: 1 <= m <= k <= c1 n,
// 2 m k^(-2/3) n^(2/3) < n, 2 ell_0 >= m + 1, h <= n/2, waypoints inside the
// square and every leg admitting an upright path inside its corridor.
// Violations throw GuardViolation naming the failing inequality.
CorridorPlan plan(int n, int k, int m, std::optional<double> c1 = std::nullopt);

// The m take-off staircases: (1, m+1-i) right, then up to the level-0 anchor.
std::vector<UprightPath> take_off(const CorridorPlan& plan);

struct Construction {
  Watermelon melon;  // m curves, left to right
  std::array<std::int64_t, kPhaseCount> phase_weight{};
  int tf_raw = 0;
  bool tf_within_bound = true;
};

// Concatenates take-off, exact corridor optima for every leg, and landing.
// Throws InternalError if the resulting curves are not disjoint and anchored.
Construction build(const Environment& env, const CorridorPlan& plan);

}  // namespace melonlab
