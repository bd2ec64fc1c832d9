#include "melonlab/solver.hpp"

#include <algorithm>
#include <string>

#include "internal/flow.hpp"
#include "melonlab/error.hpp"

namespace melonlab {

namespace {

Environment prepared(const Environment& env, const SolveOptions& options) {
  return options.jitter ? env.jittered(*options.jitter) : env;
}

void check_k(int k, int n) {
  if (k < 1 || k > n) {
    throw InvalidArgument("k = " + std::to_string(k) + " must lie in [1, " + std::to_string(n) + "]");
  }
}

}  // namespace

Watermelon solve_region(const Environment& env, const CellMask& region,
                        const std::vector<Point>& sources, const std::vector<Point>& sinks, int k) {
  if (k < 1) throw InvalidArgument("k must be positive");
  if (static_cast<int>(sources.size()) < k || static_cast<int>(sinks.size()) < k) {
    throw InvalidArgument("fewer terminals than curves");
  }
  detail::FlowSolver flow(env, region);
  for (const auto& s : sources) flow.add_source(s);
  for (const auto& t : sinks) flow.add_sink(t);
  for (int i = 0; i < k; ++i) {
    if (!flow.augment()) {
      throw Infeasible("only " + std::to_string(i) + " of " + std::to_string(k) +
                       " disjoint paths fit in the region");
    }
  }
  return make_watermelon(env, flow.paths());
}

Watermelon solve_melon(const Environment& base, int k, const SolveOptions& options) {
  check_k(k, base.n());
  const Environment env = prepared(base, options);
  const int n = env.n();
  std::vector<Point> sources, sinks;
  for (int i = 1; i <= k; ++i) {
    sources.push_back({1, k - i + 1});
    sinks.push_back({n, n - i + 1});
  }
  return solve_region(env, CellMask::full(n), sources, sinks, k);
}

ProfileResult solve_profile(const Environment& base, int K, const SolveOptions& options,
                            bool keep_melons) {
  check_k(K, base.n());
  const Environment env = prepared(base, options);
  const int n = env.n();
  ProfileResult result;
  result.profile.n = n;
  result.profile.scale_bits = env.scale_bits();
  detail::FlowSolver flow(env, CellMask::full(n));
  // Canonical endpoints of the k-melon are those of the (k-1)-melon plus
  // (1,k) and (n, n-k+1), so one more augmentation extends the optimum.
  for (int k = 1; k <= K; ++k) {
    flow.add_source({1, k});
    flow.add_sink({n, n - k + 1});
    if (!flow.augment()) throw InternalError("profile augmentation failed at k = " + std::to_string(k));
    result.profile.X.push_back(flow.weight());
    if (keep_melons) result.melons.push_back(make_watermelon(env, flow.paths()));
  }
  return result;
}

int min_strip_width(int n, int k) {
  check_k(k, n);
  return std::min(k, n - 1);
}

Watermelon solve_strip(const Environment& base, int k, int w, const SolveOptions& options) {
  check_k(k, base.n());
  const int need = min_strip_width(base.n(), k);
  if (w < need) {
    throw Infeasible("strip width " + std::to_string(w) + " cannot hold " + std::to_string(k) +
                     " disjoint anchored paths (needs w >= " + std::to_string(need) + ")");
  }
  const Environment env = prepared(base, options);
  const int n = env.n();
  std::vector<Point> sources, sinks;
  for (int i = 1; i <= k; ++i) {
    sources.push_back({1, k - i + 1});
    sinks.push_back({n, n - i + 1});
  }
  return solve_region(env, CellMask::strip(n, w), sources, sinks, k);
}

Watermelon solve_point_to_line(const Environment& base, int n_line, int k,
                               const SolveOptions& options) {
  if (n_line < 1) throw InvalidArgument("line index must be positive");
  check_k(k, n_line);
  const Environment env = prepared(base, options);
  const int side = env.n();
  const int line_time = 2 * n_line;
  if (k > side) throw InvalidArgument("k exceeds the environment side");
  std::vector<Point> sources, sinks;
  for (int i = 1; i <= k; ++i) sources.push_back({1, k - i + 1});
  for (int x = 1; x <= side; ++x) {
    const int y = line_time - x;
    if (y >= 1 && y <= side) sinks.push_back({x, y});
  }
  if (static_cast<int>(sinks.size()) < k) {
    throw Infeasible("the line x + y = " + std::to_string(line_time) +
                     " meets the environment in fewer than k vertices");
  }
  Watermelon melon = solve_region(env, CellMask::below_line(side, line_time), sources, sinks, k);
  melon.n = n_line;
  return melon;
}

}  // namespace melonlab
