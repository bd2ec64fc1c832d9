#include "melonlab/construction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

#include "melonlab/error.hpp"
#include "melonlab/solver.hpp"

namespace melonlab {

namespace {

// Coordinates are rounded down; the epsilon keeps exact values such as
// cbrt(8^3) from landing one below their integer.
int fl(double v) { return static_cast<int>(std::floor(v + 1e-9)); }

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  const std::int64_t q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

Point waypoint(double level, double pos) {
  const int l = fl(level);
  const int p = fl(pos);
  return {l - p, l + p};
}

std::string show(Point p) { return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")"; }

std::string num(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

[[noreturn]] void fail(const std::string& what) { throw GuardViolation("construction guard: " + what); }

// Is there an upright path start -> end inside the corridor?
bool leg_feasible(const Segment& seg) {
  const Parallelogram corridor = seg.corridor();
  if (seg.end.x < seg.start.x || seg.end.y < seg.start.y) return false;
  if (!corridor.contains(seg.start) || !corridor.contains(seg.end)) return false;
  const int w = seg.end.x - seg.start.x + 1;
  const int h = seg.end.y - seg.start.y + 1;
  std::vector<std::uint8_t> reach(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
  const auto at = [&](int dx, int dy) -> std::uint8_t& {
    return reach[static_cast<std::size_t>(dy) * static_cast<std::size_t>(w) + static_cast<std::size_t>(dx)];
  };
  for (int dy = 0; dy < h; ++dy) {
    for (int dx = 0; dx < w; ++dx) {
      const Point p{seg.start.x + dx, seg.start.y + dy};
      if (!corridor.contains(p)) continue;
      if (dx == 0 && dy == 0) {
        at(0, 0) = 1;
      } else {
        at(dx, dy) = (dx > 0 && at(dx - 1, dy)) || (dy > 0 && at(dx, dy - 1));
      }
    }
  }
  return at(w - 1, h - 1) != 0;
}

// Lattice anti-diagonal range of a corridor at time t (ignoring parity).
std::pair<std::int64_t, std::int64_t> band_at(const Segment& seg, int t) {
  const std::int64_t ts = seg.start.time();
  const std::int64_t dt = seg.end.time() - ts;
  if (dt == 0) return {seg.start.antidiag(), seg.start.antidiag()};
  const std::int64_t as = seg.start.antidiag();
  const std::int64_t ae = seg.end.antidiag();
  const std::int64_t centre = as * dt + (ae - as) * (t - ts);
  const std::int64_t reach = 2 * static_cast<std::int64_t>(seg.half_width) * dt;
  return {-floor_div(-(centre - reach), dt), floor_div(centre + reach, dt)};
}

std::vector<Point> staircase(Point start, Point corner, Point end) {
  std::vector<Point> out;
  for (Point p = start; p != corner; p = p + kStepRight) out.push_back(p);
  for (Point p = corner; p != end; p = p + kStepUp) out.push_back(p);
  out.push_back(end);
  return out;
}

}  // namespace

double guard_c1() {
  const char* text = std::getenv("MELONLAB_GUARD_C1");
  if (text == nullptr || *text == '\0') return kDefaultGuardC1;
  char* endp = nullptr;
  const double v = std::strtod(text, &endp);
  if (endp == text || *endp != '\0' || !(v > 0.0)) {
    throw InvalidArgument(std::string("MELONLAB_GUARD_C1 must be a positive number, got '") + text + "'");
  }
  return v;
}

const char* phase_name(Phase phase) {
  switch (phase) {
    case Phase::kTakeOff:
      return "take_off";
    case Phase::kClimb:
      return "climb";
    case Phase::kCruise:
      return "cruise";
    case Phase::kDescent:
      return "descent";
    case Phase::kLanding:
      return "landing";
  }
  return "unknown";
}

CorridorPlan plan(int n, int k, int m, std::optional<double> c1_opt) {
  if (n < 1) throw InvalidArgument("n must be positive");
  CorridorPlan out;
  out.n = n;
  out.k = k;
  out.m = m;
  out.c1 = c1_opt.value_or(guard_c1());
  if (m < 1 || m > k) fail("1 <= m <= k fails for m = " + std::to_string(m) + ", k = " + std::to_string(k));
  if (k > out.c1 * n) {
    fail("k <= c1 n fails: k = " + std::to_string(k) + " > " + num(out.c1 * n) + " (c1 = " + num(out.c1) + ")");
  }
  const double nd = n, kd = k, md = m;
  const double excursion = 2.0 * md * std::cbrt(nd * nd / (kd * kd));
  if (!(excursion < nd)) fail("2 m k^(-2/3) n^(2/3) < n fails: " + num(excursion) + " >= " + num(nd));

  out.s0 = std::cbrt(nd / kd);
  while (std::ldexp(1.0, out.N) < out.s0 * (1.0 - 1e-12)) ++out.N;
  out.climb_skipped = out.N == 0;

  out.ell.push_back(std::cbrt(kd * kd * nd));
  if (2.0 * out.ell[0] < md + 1.0) {
    fail("2 k^(2/3) n^(1/3) >= m + 1 fails: " + num(2.0 * out.ell[0]) + " < " + num(md + 1.0));
  }
  const double root_kn = std::sqrt(kd * nd);
  for (int j = 1; j <= out.N; ++j) {
    out.ell.push_back(out.ell[j - 1] + std::pow(2.0, 1.5 * (j - 1)) * root_kn / 3.0);
  }
  for (int j = 0; j <= out.N; ++j) out.sep.push_back(std::ldexp(out.s0, j));
  out.pos.assign(static_cast<std::size_t>(m), {});
  for (int i = 1; i <= m; ++i) {
    for (int j = 0; j <= out.N; ++j) {
      out.pos[i - 1].push_back((md / 2.0 - i) * out.sep[j]);
    }
  }
  out.h = out.ell[out.N];
  if (out.h > nd / 2.0) fail("h <= n/2 fails: h = " + num(out.h) + ", n/2 = " + num(nd / 2.0));
  for (int s = 0; s <= k; ++s) out.cruise_levels.push_back(out.h + s * (nd + 1.0 - 2.0 * out.h) / kd);
  out.tf_bound = excursion + out.sep[out.N] / 2.0 + 1.0;

  out.curves.resize(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) {
    CurvePlan& cp = out.curves[i - 1];
    const auto& pos = out.pos[i - 1];

    const Point start{1, m + 1 - i};
    const Point anchor = waypoint(out.ell[0], pos[0]);
    if (anchor.x < 1 || anchor.y < start.y) {
      fail("take-off anchor " + show(anchor) + " of curve " + std::to_string(i) +
           " is not up-right of " + show(start));
    }
    cp.take_off = staircase(start, {anchor.x, start.y}, anchor);

    for (int j = 0; j < out.N; ++j) {
      const int hw = fl(out.sep[j] / 2.0 - 1.0);
      for (int s = 1; s <= k; ++s) {
        const auto level = [&](int t) {
          return t == 0 ? out.ell[j] : t == k ? out.ell[j + 1] : out.ell[j] + t * (out.ell[j + 1] - out.ell[j]) / kd;
        };
        const auto trans = [&](int t) {
          return t == 0 ? pos[j] : t == k ? pos[j + 1] : pos[j] + t * (pos[j + 1] - pos[j]) / kd;
        };
        const Point a = waypoint(level(s - 1), trans(s - 1));
        const Point b = waypoint(level(s), trans(s));
        const Point shift = b.antidiag() < a.antidiag() ? kStepUp : kStepRight;
        cp.climb.push_back({a + shift, b, hw});
      }
    }
  }

  const int hw_cruise = fl(out.sep[out.N] / 2.0 - 1.0);
  const std::int64_t l0 = fl(out.h);
  const std::int64_t l1 = n + 1 - l0;
  for (int i = 1; i <= m; ++i) {
    CurvePlan& cp = out.curves[i - 1];
    const std::int64_t p0 = fl(out.pos[i - 1][out.N]);
    const std::int64_t p1 = -fl(out.pos[m - i][out.N]);
    const auto vertex = [&](int s) {
      const std::int64_t l = l0 + floor_div(s * (l1 - l0), k);
      const std::int64_t p = p0 + floor_div(s * (p1 - p0), k);
      return Point{static_cast<int>(l - p), static_cast<int>(l + p)};
    };
    for (int s = 1; s <= k; ++s) {
      const Point end = s == k ? vertex(k) - kStepRight : vertex(s);
      cp.cruise.push_back({vertex(s - 1) + kStepRight, end, hw_cruise});
    }
    const CurvePlan& partner = out.curves[m - i];
    for (auto it = partner.climb.rbegin(); it != partner.climb.rend(); ++it) {
      cp.descent.push_back({reflect(it->end, n), reflect(it->start, n), it->half_width});
    }
    for (auto it = partner.take_off.rbegin(); it != partner.take_off.rend(); ++it) {
      cp.landing.push_back(reflect(*it, n));
    }
  }

  // Lattice checks: everything inside the square, legs chained by one step,
  // every corridor passable, and neighbouring curves' corridors apart.
  const auto inside = [n](Point p) { return p.x >= 1 && p.y >= 1 && p.x <= n && p.y <= n; };
  for (int i = 1; i <= m; ++i) {
    const CurvePlan& cp = out.curves[i - 1];
    Point last = cp.take_off.back();
    const auto check_legs = [&](const std::vector<Segment>& legs, const char* phase) {
      for (std::size_t s = 0; s < legs.size(); ++s) {
        const Segment& seg = legs[s];
        const std::string where = std::string(phase) + " leg " + std::to_string(s + 1) + " of curve " + std::to_string(i);
        if (!inside(seg.start) || !inside(seg.end)) fail(where + " leaves the square");
        const Point step = seg.start - last;
        if (step != kStepRight && step != kStepUp) fail(where + " does not continue from " + show(last));
        if (seg.half_width < 1) fail(where + " has corridor half-width " + std::to_string(seg.half_width) + " < 1");
        if (!leg_feasible(seg)) {
          fail(where + " admits no upright path " + show(seg.start) + " -> " + show(seg.end) +
               " inside its corridor");
        }
        last = seg.end;
      }
    };
    check_legs(cp.climb, "climb");
    check_legs(cp.cruise, "cruise");
    check_legs(cp.descent, "descent");
    const Point step = cp.landing.front() - last;
    if (step != kStepRight && step != kStepUp) fail("landing of curve " + std::to_string(i) + " is detached");
    if (cp.landing.back() != Point{n, n + 1 - i}) fail("landing of curve " + std::to_string(i) + " misses its sink");
  }
  for (int i = 1; i < m; ++i) {
    const CurvePlan& a = out.curves[i - 1];
    const CurvePlan& b = out.curves[i];
    const auto apart = [&](const std::vector<Segment>& la, const std::vector<Segment>& lb) {
      for (std::size_t s = 0; s < la.size(); ++s) {
        for (int t = la[s].start.time(); t <= la[s].end.time(); ++t) {
          if (band_at(la[s], t).second >= band_at(lb[s], t).first) {
            fail("corridors of curves " + std::to_string(i) + " and " + std::to_string(i + 1) +
                 " overlap at time " + std::to_string(t));
          }
        }
      }
    };
    apart(a.climb, b.climb);
    apart(a.cruise, b.cruise);
    apart(a.descent, b.descent);
  }
  return out;
}

std::vector<UprightPath> take_off(const CorridorPlan& plan) {
  std::vector<UprightPath> out;
  for (const auto& cp : plan.curves) out.emplace_back(cp.take_off);
  return out;
}

Construction build(const Environment& env, const CorridorPlan& plan) {
  if (env.n() != plan.n) throw InvalidArgument("environment side does not match the plan");
  Construction result;
  std::vector<UprightPath> curves;
  for (std::size_t i = 0; i < plan.curves.size(); ++i) {
    const CurvePlan& cp = plan.curves[i];
    std::vector<Point> vertices;
    const auto append = [&](std::span<const Point> part, Phase phase) {
      if (!vertices.empty()) {
        const Point step = part.front() - vertices.back();
        if (step != kStepRight && step != kStepUp) {
          throw InternalError("construction pieces of curve " + std::to_string(i + 1) + " do not join");
        }
      }
      for (const Point& p : part) {
        vertices.push_back(p);
        result.phase_weight[static_cast<std::size_t>(phase)] += env.raw(p);
      }
    };
    const auto legs = [&](const std::vector<Segment>& segs, Phase phase) {
      for (const Segment& seg : segs) {
        CorridorPath best;
        try {
          best = solve_corridor(env, seg.start, seg.end, seg.corridor());
        } catch (const Infeasible& e) {
          throw InternalError(std::string("corridor mis-tiling in ") + phase_name(phase) + ": " + e.what());
        }
        append(best.path.vertices(), phase);
      }
    };
    append(cp.take_off, Phase::kTakeOff);
    legs(cp.climb, Phase::kClimb);
    legs(cp.cruise, Phase::kCruise);
    legs(cp.descent, Phase::kDescent);
    append(cp.landing, Phase::kLanding);
    curves.emplace_back(std::move(vertices));
  }
  try {
    result.melon = make_watermelon(env, std::move(curves));
  } catch (const InvalidArgument& e) {
    throw InternalError(std::string("constructed curves are not disjoint: ") + e.what());
  }
  const MelonAudit audit = audit_melon(result.melon, EndpointRule::kSquare, &env);
  if (!audit.ok()) throw InternalError("constructed melon fails audit: " + audit.failures.front());
  result.tf_raw = result.melon.fluctuation().raw;
  result.tf_within_bound = result.tf_raw <= plan.tf_bound;
  return result;
}

}  // namespace melonlab
