#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "melonlab/env.hpp"
#include "melonlab/point.hpp"

namespace melonlab {

// Monotone lattice path with unit steps (1,0) or (0,1). Visits exactly one
// vertex per time t = x + y on its time range [t_min, t_max].
class UprightPath {
 public:
  UprightPath() = default;
  // Throws InvalidArgument unless the vertices form a non-empty upright path.
  explicit UprightPath(std::vector<Point> vertices);

  std::span<const Point> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  const Point& front() const { return vertices_.front(); }
  const Point& back() const { return vertices_.back(); }

  int t_min() const { return vertices_.front().time(); }
  int t_max() const { return vertices_.back().time(); }
  bool covers(int t) const { return !empty() && t >= t_min() && t <= t_max(); }
  Point at_time(int t) const { return vertices_[static_cast<std::size_t>(t - t_min())]; }
  int antidiag_at(int t) const { return at_time(t).antidiag(); }

  friend bool operator==(const UprightPath&, const UprightPath&) = default;

 private:
  std::vector<Point> vertices_;
};

// Result of comparing two paths under the left-of partial order. Left means
// smaller x - y on every shared time.
enum class Order {
  kStrictlyLeft,   // a(t) < b(t) on the whole shared range
  kLeftOrEqual,    // a(t) <= b(t), with equality somewhere
  kNotLeft,        // a(t) > b(t) somewhere
  kIncomparable,   // time ranges are disjoint
};

Order precedes(const UprightPath& a, const UprightPath& b);

inline bool is_left_of_or_equal(Order o) {
  return o == Order::kStrictlyLeft || o == Order::kLeftOrEqual;
}

// Distance from the diagonal y = x. `raw` is max |x - y| (exact), `euclidean`
// is raw / sqrt(2).
struct Fluctuation {
  int raw = 0;
  double euclidean = 0.0;
};

Fluctuation transversal_fluctuation(const UprightPath& path);
Fluctuation transversal_fluctuation(std::span<const UprightPath> paths);

std::int64_t path_weight(const Environment& env, const UprightPath& path);

}  // namespace melonlab
