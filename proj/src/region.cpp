#include "melonlab/region.hpp"

#include <algorithm>
#include <cstdlib>

#include "melonlab/error.hpp"

namespace melonlab {

CellMask::CellMask(int n, bool fill) : n_(n) {
  if (n < 1) throw InvalidArgument("cell mask side must be positive");
  cells_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), fill ? 1 : 0);
}

CellMask CellMask::strip(int n, int w) {
  if (w < 0) throw InvalidArgument("strip width must be nonnegative");
  return from_predicate(n, [w](Point p) { return std::abs(p.antidiag()) <= w; });
}

CellMask CellMask::below_line(int n, int line_time) {
  return from_predicate(n, [line_time](Point p) { return p.time() <= line_time; });
}

CellMask CellMask::from_predicate(int n, const std::function<bool(Point)>& pred) {
  CellMask mask(n, false);
  for (int y = 1; y <= n; ++y) {
    for (int x = 1; x <= n; ++x) {
      if (pred({x, y})) mask.set({x, y}, true);
    }
  }
  return mask;
}

std::size_t CellMask::count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

CellMask& CellMask::operator&=(const CellMask& other) {
  if (other.n_ != n_) throw InvalidArgument("cell masks of different sides");
  for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] &= other.cells_[i];
  return *this;
}

bool Parallelogram::contains(Point p) const {
  const std::int64_t ts = start.time();
  const std::int64_t te = end.time();
  const std::int64_t t = p.time();
  if (t < ts || t > te) return false;
  const std::int64_t as = start.antidiag();
  const std::int64_t ae = end.antidiag();
  if (te == ts) return p == start;
  // |a * dT - (a_s * dT + (a_e - a_s)(t - t_s))| <= 2 * half_width * dT
  const std::int64_t dt = te - ts;
  const std::int64_t lhs = p.antidiag() * dt - (as * dt + (ae - as) * (t - ts));
  return std::abs(lhs) <= 2 * static_cast<std::int64_t>(half_width) * dt;
}

}  // namespace melonlab
