#include "melonlab/path.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "melonlab/error.hpp"

namespace melonlab {

UprightPath::UprightPath(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw InvalidArgument("an upright path needs at least one vertex");
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    const auto step = vertices_[i] - vertices_[i - 1];
    if (step != kStepRight && step != kStepUp) {
      throw InvalidArgument("non-upright step from (" + std::to_string(vertices_[i - 1].x) + "," +
                            std::to_string(vertices_[i - 1].y) + ") to (" +
                            std::to_string(vertices_[i].x) + "," +
                            std::to_string(vertices_[i].y) + ")");
    }
  }
}

Order precedes(const UprightPath& a, const UprightPath& b) {
  const int lo = std::max(a.t_min(), b.t_min());
  const int hi = std::min(a.t_max(), b.t_max());
  if (lo > hi) return Order::kIncomparable;
  bool strict = true;
  for (int t = lo; t <= hi; ++t) {
    const int da = a.antidiag_at(t);
    const int db = b.antidiag_at(t);
    if (da > db) return Order::kNotLeft;
    if (da == db) strict = false;
  }
  return strict ? Order::kStrictlyLeft : Order::kLeftOrEqual;
}

Fluctuation transversal_fluctuation(const UprightPath& path) {
  int raw = 0;
  for (const auto& v : path.vertices()) raw = std::max(raw, std::abs(v.antidiag()));
  return {raw, raw / std::sqrt(2.0)};
}

Fluctuation transversal_fluctuation(std::span<const UprightPath> paths) {
  int raw = 0;
  for (const auto& p : paths) raw = std::max(raw, transversal_fluctuation(p).raw);
  return {raw, raw / std::sqrt(2.0)};
}

std::int64_t path_weight(const Environment& env, const UprightPath& path) {
  std::int64_t total = 0;
  for (const auto& v : path.vertices()) {
    if (!env.contains(v)) {
      throw InvalidArgument("path vertex (" + std::to_string(v.x) + "," + std::to_string(v.y) +
                            ") lies outside the environment");
    }
    total += env.raw(v);
  }
  return total;
}

}  // namespace melonlab
