#pragma once

#include <cstdint>
#include <vector>

#include "melonlab/env.hpp"
#include "melonlab/point.hpp"
#include "melonlab/region.hpp"

namespace melonlab {

// Exhaustive oracle for tiny instances. Enumerates every tuple of pairwise
// disjoint upright paths with the requested endpoints.
enum class BruteVariant {
  kAnchored,     // (1, k-i+1) -> (n, n-i+1)
  kStrip,        // anchored, every vertex with |x - y| <= width
  kPointToLine,  // (1, k-i+1) -> distinct vertices of x + y = 2 * n_line
  kFree,         // any k disjoint upright paths in the square
};

struct BruteRequest {
  BruteVariant variant = BruteVariant::kAnchored;
  int k = 1;
  int width = 0;
  int n_line = 0;
};

inline constexpr int kBruteMaxSide = 7;
inline constexpr int kBruteMaxK = 3;
inline constexpr int kBruteFreeMaxSide = 5;
inline constexpr int kBruteFreeMaxK = 2;
inline constexpr int kBrutePathMaxSide = 8;

struct BruteResult {
  std::int64_t weight = 0;
  // Distinct vertex sets (unions of the k curves) attaining the optimum,
  // each sorted; sorted lexicographically.
  std::vector<std::vector<Point>> optimizers;
};

// Throws GuardViolation beyond side 7 / k 3 (side 5 / k 2 for kFree) and
// Infeasible when no admissible tuple exists.
BruteResult brute_force(const Environment& env, const BruteRequest& request);

// Single path start -> end through allowed cells only.
BruteResult brute_force_path(const Environment& env, Point start, Point end, const CellMask& allowed);

}  // namespace melonlab
