#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "melonlab/point.hpp"

namespace melonlab {

// Subset of the lattice square [1,n]^2, stored as one byte per cell.
class CellMask {
 public:
  CellMask() = default;
  CellMask(int n, bool fill);

  static CellMask full(int n) { return CellMask(n, true); }
  // {|x - y| <= w}.
  static CellMask strip(int n, int w);
  // {x + y <= line_time}; the point-to-line domain clipped to the square.
  static CellMask below_line(int n, int line_time);
  static CellMask from_predicate(int n, const std::function<bool(Point)>& pred);

  int n() const { return n_; }
  bool contains(Point p) const {
    return p.x >= 1 && p.y >= 1 && p.x <= n_ && p.y <= n_ && cells_[index(p)] != 0;
  }
  void set(Point p, bool on) { cells_[index(p)] = on ? 1 : 0; }
  std::size_t count() const;

  CellMask& operator&=(const CellMask& other);

 private:
  std::size_t index(Point p) const {
    return static_cast<std::size_t>(p.y - 1) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(p.x - 1);
  }

  int n_ = 0;
  std::vector<std::uint8_t> cells_;
};

// Lattice parallelogram around the segment start -> end. In (time,
// antidiagonal) coordinates it is {T_s <= t <= T_e, |a - a_line(t)| <= 2 *
// half_width}, where a_line interpolates linearly between the endpoints. The
// factor 2 converts a transverse offset p along (-1,1) into a = x - y = -2p.
struct Parallelogram {
  Point start;
  Point end;
  int half_width = 0;

  bool contains(Point p) const;
};

}  // namespace melonlab
