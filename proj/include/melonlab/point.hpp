#pragma once

#include <compare>
#include <cstdint>

namespace melonlab {

// Lattice vertex, 1-based. Time t = x + y, anti-diagonal coordinate a = x - y.
struct Point {
  int x = 0;
  int y = 0;

  constexpr int time() const { return x + y; }
  constexpr int antidiag() const { return x - y; }

  friend constexpr auto operator<=>(const Point&, const Point&) = default;
  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
};

inline constexpr Point kStepRight{1, 0};
inline constexpr Point kStepUp{0, 1};

// Point reflection of the square [1,n]^2 through its centre.
constexpr Point reflect(Point p, int n) { return {n + 1 - p.x, n + 1 - p.y}; }

// Point with given time and anti-diagonal coordinate; t and a must share parity.
constexpr Point from_time_antidiag(int t, int a) { return {(t + a) / 2, (t - a) / 2}; }

}  // namespace melonlab
