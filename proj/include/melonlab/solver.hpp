#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "melonlab/env.hpp"
#include "melonlab/melon.hpp"
#include "melonlab/path.hpp"
#include "melonlab/region.hpp"

namespace melonlab {

struct SolveOptions {
  // When set, the environment is jittered with this sub-seed before solving
  // and the returned melon is at the jittered scale.
  std::optional<std::uint64_t> jitter;
};

// Maximum-weight k vertex-disjoint upright paths in [1,n]^2, anchored at
// (1, k-i+1) -> (n, n-i+1). Throws InvalidArgument unless 1 <= k <= n.
Watermelon solve_melon(const Environment& env, int k, const SolveOptions& options = {});

struct ProfileResult {
  MelonProfile profile;
  std::vector<Watermelon> melons;  // melons[k-1] is the k-melon, if kept
};

// X_n^1..X_n^K on one residual network, adding one source/sink pair and one
// augmentation per k. Each melon equals what solve_melon would weigh.
ProfileResult solve_profile(const Environment& env, int K, const SolveOptions& options = {},
                            bool keep_melons = true);

// Narrowest strip |x - y| <= w holding k disjoint anchored paths: min(k, n-1).
// With w = k - 1 every other anti-diagonal has only k - 1 cells in the strip.
int min_strip_width(int n, int k);

// Melon confined to |x - y| <= w. Throws Infeasible when w < min_strip_width.
Watermelon solve_strip(const Environment& env, int k, int w, const SolveOptions& options = {});

// k disjoint paths from (1, k-i+1) to distinct vertices of the line
// x + y = 2 * n_line, inside {x, y >= 1, x + y <= 2 * n_line}. The domain is
// clipped to the environment square, so pass an environment of side
// 2 * n_line - 1 for the full triangle.
Watermelon solve_point_to_line(const Environment& env, int n_line, int k,
                               const SolveOptions& options = {});

// Melon with arbitrary sources, sinks and allowed cells; the general entry
// point behind the variants above. Sources and sinks must lie in the region.
Watermelon solve_region(const Environment& env, const CellMask& region,
                        const std::vector<Point>& sources, const std::vector<Point>& sinks, int k);

struct CorridorPath {
  std::int64_t weight = 0;
  UprightPath path;
};

// Heaviest upright path start -> end that never leaves the allowed cells,
// by dynamic programming over the bounding box. Throws Infeasible when no
// such path exists.
CorridorPath solve_corridor(const Environment& env, Point start, Point end);
CorridorPath solve_corridor(const Environment& env, Point start, Point end, const CellMask& allowed);
CorridorPath solve_corridor(const Environment& env, Point start, Point end,
                            const Parallelogram& corridor);
CorridorPath solve_corridor(const Environment& env, Point start, Point end,
                            const std::function<bool(Point)>& allowed);

}  // namespace melonlab
