#include <algorithm>
#include <string>
#include <vector>

#include "melonlab/error.hpp"
#include "melonlab/kernels.hpp"
#include "melonlab/solver.hpp"

namespace melonlab {

namespace {

std::string show(Point p) { return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")"; }

template <typename Allowed>
CorridorPath corridor_dp(const Environment& env, Point start, Point end, const Allowed& allowed) {
  if (!env.contains(start) || !env.contains(end)) {
    throw InvalidArgument("corridor endpoints must lie in the environment");
  }
  if (end.x < start.x || end.y < start.y) {
    throw Infeasible("no upright path from " + show(start) + " to " + show(end));
  }
  if (!allowed(start) || !allowed(end)) {
    throw Infeasible("corridor endpoint " + show(allowed(start) ? end : start) +
                     " lies outside the corridor");
  }
  const int sx = start.x, sy = start.y, ex = end.x, ey = end.y;
  const int width = ex - sx + 1;
  const int ts = start.time(), te = end.time();
  constexpr std::int64_t kNeg = kernels::kNegInf;

  // Slot 0 is a permanent -inf guard so that prev[x - 1] is always readable.
  std::vector<std::int64_t> prev(static_cast<std::size_t>(width) + 2, kNeg);
  std::vector<std::int64_t> cur(prev.size(), kNeg);
  std::vector<std::int64_t> weight(static_cast<std::size_t>(width), kNeg);
  std::vector<std::uint8_t> choice(static_cast<std::size_t>(te - ts + 1) *
                                   static_cast<std::size_t>(width));
  std::vector<std::uint8_t> took(static_cast<std::size_t>(width));

  prev[1] = env.raw(start);
  for (int t = ts + 1; t <= te; ++t) {
    const int lo = std::max(sx, t - ey);
    const int hi = std::min(ex, t - sy);
    const auto len = static_cast<std::size_t>(hi - lo + 1);
    for (int x = lo; x <= hi; ++x) {
      const Point p{x, t - x};
      weight[static_cast<std::size_t>(x - lo)] = allowed(p) ? env.raw(p) : kNeg;
    }
    const std::size_t off = static_cast<std::size_t>(lo - sx) + 1;
    std::fill(cur.begin(), cur.end(), kNeg);
    kernels::relax(prev.data() + off - 1, prev.data() + off, weight.data(), kNeg,
                   cur.data() + off, took.data(), len);
    std::copy_n(took.begin(), len,
                choice.begin() + static_cast<std::ptrdiff_t>(
                                     static_cast<std::size_t>(t - ts) * static_cast<std::size_t>(width) +
                                     static_cast<std::size_t>(lo - sx)));
    std::swap(prev, cur);
  }

  const std::int64_t best = prev[static_cast<std::size_t>(ex - sx) + 1];
  if (best < 0) {
    throw Infeasible("no path from " + show(start) + " to " + show(end) + " inside the corridor");
  }
  std::vector<Point> vertices(static_cast<std::size_t>(te - ts + 1));
  Point p = end;
  for (int t = te; t > ts; --t) {
    vertices[static_cast<std::size_t>(t - ts)] = p;
    const bool left = choice[static_cast<std::size_t>(t - ts) * static_cast<std::size_t>(width) +
                             static_cast<std::size_t>(p.x - sx)] != 0;
    p = left ? p - kStepRight : p - kStepUp;
  }
  vertices[0] = p;
  if (p != start) throw InternalError("corridor traceback did not return to the start");
  return {best, UprightPath(std::move(vertices))};
}

}  // namespace

CorridorPath solve_corridor(const Environment& env, Point start, Point end) {
  return corridor_dp(env, start, end, [](Point) { return true; });
}

CorridorPath solve_corridor(const Environment& env, Point start, Point end, const CellMask& allowed) {
  return corridor_dp(env, start, end, [&](Point p) { return allowed.contains(p); });
}

CorridorPath solve_corridor(const Environment& env, Point start, Point end,
                            const Parallelogram& corridor) {
  return corridor_dp(env, start, end, [&](Point p) { return corridor.contains(p); });
}

CorridorPath solve_corridor(const Environment& env, Point start, Point end,
                            const std::function<bool(Point)>& allowed) {
  return corridor_dp(env, start, end, allowed);
}

}  // namespace melonlab
