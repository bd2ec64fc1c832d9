#include "melonlab/brute_force.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <string>

#include "melonlab/error.hpp"

namespace melonlab {

namespace {

struct Candidate {
  std::uint64_t cells = 0;
  std::int64_t weight = 0;
};

class Enumerator {
 public:
  Enumerator(const Environment& env, const CellMask& allowed) : env_(env), allowed_(allowed) {}

  std::uint64_t bit(Point p) const { return std::uint64_t{1} << env_.index(p); }

  // Every upright path from start to any of the ends, all inside allowed.
  std::vector<Candidate> paths(Point start, const std::vector<Point>& ends) const {
    std::vector<Candidate> out;
    if (!allowed_.contains(start)) return out;
    walk(start, ends, {bit(start), env_.raw(start)}, out);
    return out;
  }

 private:
  void walk(Point p, const std::vector<Point>& ends, Candidate acc, std::vector<Candidate>& out) const {
    if (std::find(ends.begin(), ends.end(), p) != ends.end()) out.push_back(acc);
    for (Point step : {kStepRight, kStepUp}) {
      const Point q = p + step;
      if (!allowed_.contains(q)) continue;
      walk(q, ends, {acc.cells | bit(q), acc.weight + env_.raw(q)}, out);
    }
  }

  const Environment& env_;
  const CellMask& allowed_;
};

struct Search {
  const std::vector<std::vector<Candidate>>* lists = nullptr;
  bool shared_list = false;
  std::int64_t best = -1;
  std::set<std::uint64_t> optimal;

  void run(std::size_t depth, std::size_t from, std::uint64_t cells, std::int64_t weight) {
    if (depth == lists->size()) {
      if (weight > best) {
        best = weight;
        optimal.clear();
      }
      if (weight == best) optimal.insert(cells);
      return;
    }
    const auto& list = (*lists)[depth];
    for (std::size_t i = shared_list ? from : 0; i < list.size(); ++i) {
      if (list[i].cells & cells) continue;
      run(depth + 1, i + 1, cells | list[i].cells, weight + list[i].weight);
    }
  }
};

BruteResult finish(const Environment& env, const Search& search) {
  if (search.best < 0) throw Infeasible("no admissible path tuple");
  BruteResult result;
  result.weight = search.best;
  for (std::uint64_t cells : search.optimal) {
    std::vector<Point> set;
    for (int y = 1; y <= env.n(); ++y) {
      for (int x = 1; x <= env.n(); ++x) {
        if (cells & (std::uint64_t{1} << env.index({x, y}))) set.push_back({x, y});
      }
    }
    std::sort(set.begin(), set.end());
    result.optimizers.push_back(std::move(set));
  }
  std::sort(result.optimizers.begin(), result.optimizers.end());
  return result;
}

}  // namespace

BruteResult brute_force(const Environment& env, const BruteRequest& request) {
  const int n = env.n();
  const int k = request.k;
  const bool free = request.variant == BruteVariant::kFree;
  const int max_side = free ? kBruteFreeMaxSide : kBruteMaxSide;
  const int max_k = free ? kBruteFreeMaxK : kBruteMaxK;
  if (n > max_side || k > max_k) {
    throw GuardViolation("brute force limited to side <= " + std::to_string(max_side) +
                         " and k <= " + std::to_string(max_k));
  }
  if (k < 1 || k > n) throw InvalidArgument("k out of range for brute force");

  CellMask allowed = CellMask::full(n);
  if (request.variant == BruteVariant::kStrip) allowed = CellMask::strip(n, request.width);
  if (request.variant == BruteVariant::kPointToLine) {
    if (request.n_line < k) throw InvalidArgument("point-to-line brute force needs n_line >= k");
    allowed = CellMask::below_line(n, 2 * request.n_line);
  }
  const Enumerator enumerate(env, allowed);

  std::vector<std::vector<Candidate>> lists;
  Search search;
  search.lists = &lists;
  if (free) {
    std::vector<Candidate> all;
    for (int sy = 1; sy <= n; ++sy) {
      for (int sx = 1; sx <= n; ++sx) {
        std::vector<Point> ends;
        for (int ey = sy; ey <= n; ++ey) {
          for (int ex = sx; ex <= n; ++ex) ends.push_back({ex, ey});
        }
        auto found = enumerate.paths({sx, sy}, ends);
        all.insert(all.end(), found.begin(), found.end());
      }
    }
    lists.assign(static_cast<std::size_t>(k), all);
    search.shared_list = true;
  } else {
    std::vector<Point> line;
    if (request.variant == BruteVariant::kPointToLine) {
      for (int x = 1; x <= n; ++x) {
        const Point p{x, 2 * request.n_line - x};
        if (allowed.contains(p)) line.push_back(p);
      }
    }
    for (int i = 1; i <= k; ++i) {
      const Point start{1, k - i + 1};
      const std::vector<Point> ends =
          request.variant == BruteVariant::kPointToLine ? line : std::vector<Point>{{n, n - i + 1}};
      lists.push_back(enumerate.paths(start, ends));
    }
  }
  search.run(0, 0, 0, 0);
  return finish(env, search);
}

BruteResult brute_force_path(const Environment& env, Point start, Point end, const CellMask& allowed) {
  if (env.n() > kBrutePathMaxSide) throw GuardViolation("path brute force limited to side <= 8");
  const Enumerator enumerate(env, allowed);
  std::vector<std::vector<Candidate>> lists{enumerate.paths(start, {end})};
  Search search;
  search.lists = &lists;
  search.run(0, 0, 0, 0);
  return finish(env, search);
}

}  // namespace melonlab
