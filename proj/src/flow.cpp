#include "internal/flow.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <string>

#include "melonlab/error.hpp"
#include "melonlab/kernels.hpp"

namespace melonlab::detail {

namespace {

constexpr __int128 kInf = static_cast<__int128>(std::numeric_limits<std::int64_t>::max()) << 32;

std::string show(Point p) { return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")"; }

}  // namespace

FlowSolver::FlowSolver(const Environment& env, const CellMask& region) : env_(env), n_(env.n()) {
  if (region.n() != n_) throw InvalidArgument("region and environment sides differ");
  env.total_raw();  // mass guard
  const std::size_t cells = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
  region_.resize(cells);
  weight_of_.assign(env.raw_weights().begin(), env.raw_weights().end());
  for (int c = 0; c < static_cast<int>(cells); ++c) region_[c] = region.contains(point_of(c)) ? 1 : 0;
  pi_.assign(2 * cells, 0);
  dist_.assign(2 * cells, kInf);
  pred_.assign(2 * cells, -1);
  done_.assign(2 * cells, 0);
  used_.assign(cells, 0);
  next_.assign(cells, kNone);
  prev_.assign(cells, kNone);
  source_.assign(cells, 0);
  sink_.assign(cells, 0);
  init_potentials();
}

int FlowSolver::cell_of(Point p) const {
  if (!env_.contains(p)) throw InvalidArgument("terminal " + show(p) + " outside the environment");
  const int c = (p.y - 1) * n_ + (p.x - 1);
  if (!region_[c]) throw InvalidArgument("terminal " + show(p) + " outside the allowed region");
  return c;
}

bool FlowSolver::can_step(int c, Dir d) const {
  const Point p = point_of(c);
  if (d == kRight ? p.x == n_ : p.y == n_) return false;
  return region_[step(c, d)] != 0;
}

void FlowSolver::add_source(Point p) {
  const int c = cell_of(p);
  if (source_[c]) throw InvalidArgument("duplicate source " + show(p));
  source_[c] = 1;
  source_order_.push_back(c);
}

void FlowSolver::add_sink(Point p) {
  const int c = cell_of(p);
  if (sink_[c]) throw InvalidArgument("duplicate sink " + show(p));
  sink_[c] = 1;
}

// Shortest distances from a virtual root joined to every node by a zero arc:
// with G(v) = w(v) + max(0, G(left), G(below)) over the region,
// d(out v) = -G(v) and d(in v) = w(v) - G(v). Computed one anti-diagonal at a
// time; cells outside the region contribute 0, which the kernel's floor of 0
// produces from their -inf weight.
void FlowSolver::init_potentials() {
  const std::size_t slots = static_cast<std::size_t>(n_) + 2;
  std::vector<std::int64_t> prev(slots, 0), cur(slots, 0), w(static_cast<std::size_t>(n_));
  std::vector<std::uint8_t> took(static_cast<std::size_t>(n_));
  for (int t = 2; t <= 2 * n_; ++t) {
    const int lo = std::max(1, t - n_);
    const int hi = std::min(n_, t - 1);
    const auto len = static_cast<std::size_t>(hi - lo + 1);
    for (int x = lo; x <= hi; ++x) {
      const int c = (t - x - 1) * n_ + (x - 1);
      w[static_cast<std::size_t>(x - lo)] = region_[c] ? weight_of_[c] : kernels::kNegInf;
    }
    std::fill(cur.begin(), cur.end(), 0);
    kernels::relax(prev.data() + lo - 1, prev.data() + lo, w.data(), 0, cur.data() + lo, took.data(),
                   len);
    for (int x = lo; x <= hi; ++x) {
      const int c = (t - x - 1) * n_ + (x - 1);
      const std::int64_t g = cur[static_cast<std::size_t>(x)];
      pi_[2 * c] = static_cast<Wide>(weight_of_[c]) - g;
      pi_[2 * c + 1] = -static_cast<Wide>(g);
    }
    std::swap(prev, cur);
  }
}

void FlowSolver::relax(int u, int v, std::int64_t cost, Wide du) {
  if (done_[v]) return;
  const Wide nd = du + cost + pi_[u] - pi_[v];
  if (nd < dist_[v]) {
    dist_[v] = nd;
    pred_[v] = u;
    heap_.emplace_back(nd, v);
    std::push_heap(heap_.begin(), heap_.end(), std::greater<>());
  } else if (nd == dist_[v] && pred_[v] >= 0 &&
             point_of(u / 2).antidiag() < point_of(pred_[v] / 2).antidiag()) {
    // Equal-length alternatives: keep the leftmost predecessor.
    pred_[v] = u;
  }
}

bool FlowSolver::augment() {
  Wide c_root = -kInf;
  bool any_source = false;
  for (int s : source_order_) {
    if (source_[s] == 1) {
      c_root = std::max(c_root, pi_[2 * s]);
      any_source = true;
    }
  }
  Wide pi_t = kInf;
  bool any_sink = false;
  for (std::size_t c = 0; c < sink_.size(); ++c) {
    if (sink_[c] == 1) {
      pi_t = std::min(pi_t, pi_[2 * c + 1]);
      any_sink = true;
    }
  }
  if (!any_source || !any_sink) return false;

  std::fill(dist_.begin(), dist_.end(), kInf);
  std::fill(pred_.begin(), pred_.end(), -1);
  std::fill(done_.begin(), done_.end(), 0);
  heap_.clear();
  for (int s : source_order_) {
    if (source_[s] != 1) continue;
    const Wide d = c_root - pi_[2 * s];
    if (d < dist_[2 * s]) {
      dist_[2 * s] = d;
      heap_.emplace_back(d, 2 * s);
      std::push_heap(heap_.begin(), heap_.end(), std::greater<>());
    }
  }

  Wide best_t = kInf;
  int best_sink = -1;
  while (!heap_.empty()) {
    std::pop_heap(heap_.begin(), heap_.end(), std::greater<>());
    const auto [d, u] = heap_.back();
    heap_.pop_back();
    if (done_[u] || d != dist_[u]) continue;
    if (d > best_t) break;
    done_[u] = 1;
    const int c = u / 2;
    if (u % 2 == 0) {
      if (!used_[c]) relax(u, u + 1, -weight_of_[c], d);
      if (prev_[c] == kRight) relax(u, 2 * (c - 1) + 1, 0, d);
      if (prev_[c] == kUp) relax(u, 2 * (c - n_) + 1, 0, d);
    } else {
      if (used_[c]) relax(u, u - 1, weight_of_[c], d);
      for (Dir dir : {kRight, kUp}) {
        if (next_[c] != dir && can_step(c, dir)) relax(u, 2 * step(c, dir), 0, d);
      }
      if (sink_[c] == 1) {
        const Wide cand = d + pi_[u] - pi_t;
        if (cand < best_t ||
            (cand == best_t && point_of(c).antidiag() < point_of(best_sink).antidiag())) {
          best_t = cand;
          best_sink = c;
        }
      }
    }
  }
  if (best_sink < 0) return false;

  // Capped potential update keeps every residual reduced cost nonnegative;
  // subtracting c_root pins the implicit source at potential zero.
  for (std::size_t v = 0; v < pi_.size(); ++v) {
    pi_[v] += (done_[v] ? std::min(dist_[v], best_t) : best_t) - c_root;
  }

  cost_ += best_t - c_root + pi_t;  // true length of the augmenting path
  int v = 2 * best_sink + 1;
  sink_[best_sink] = 2;
  while (true) {
    const int u = pred_[v];
    if (u < 0) {
      if (v % 2 != 0 || source_[v / 2] != 1) throw InternalError("augmenting path lost its source");
      source_[v / 2] = 2;
      break;
    }
    apply(u, v, best_sink);
    v = u;
  }
  ++flow_;

  std::int64_t total = 0;
  for (std::size_t c = 0; c < used_.size(); ++c) {
    if (used_[c]) total += weight_of_[c];
  }
  if (static_cast<Wide>(total) != -cost_) {
    throw InternalError("flow cost and carried weight disagree");
  }
  weight_ = total;
  return true;
}

void FlowSolver::apply(int u, int v, int) {
  const int cu = u / 2;
  const int cv = v / 2;
  const bool u_in = u % 2 == 0;
  const bool v_in = v % 2 == 0;
  if (cu == cv) {
    if (u_in && !v_in) {
      used_[cu] = 1;
    } else if (!u_in && v_in) {
      used_[cu] = 0;
    } else {
      throw InternalError("malformed arc inside one cell");
    }
    return;
  }
  const auto dir_between = [&](int from, int to) -> Dir {
    if (to == from + 1) return kRight;
    if (to == from + n_) return kUp;
    throw InternalError("augmenting path uses a non-lattice arc");
  };
  if (!u_in && v_in) {
    const Dir d = dir_between(cu, cv);
    next_[cu] = d;
    prev_[cv] = d;
  } else if (u_in && !v_in) {
    // Cancels flow on the grid arc cv -> cu.
    const Dir d = dir_between(cv, cu);
    if (next_[cv] == d) next_[cv] = kNone;
    if (prev_[cu] == d) prev_[cu] = kNone;
  } else {
    throw InternalError("augmenting path joins two nodes of the same side");
  }
}

std::vector<UprightPath> FlowSolver::paths() const {
  std::vector<UprightPath> out;
  for (int s : source_order_) {
    if (source_[s] != 2) continue;
    std::vector<Point> vertices;
    int c = s;
    while (true) {
      if (!used_[c]) throw InternalError("flow path enters an unused cell");
      vertices.push_back(point_of(c));
      if (next_[c] == kNone) break;
      c = step(c, static_cast<Dir>(next_[c]));
      if (vertices.size() > used_.size()) throw InternalError("flow decomposition cycles");
    }
    if (sink_[c] != 2) throw InternalError("flow path ends away from a saturated sink");
    out.emplace_back(std::move(vertices));
  }
  return out;
}

}  // namespace melonlab::detail
