#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "melonlab/env.hpp"
#include "melonlab/path.hpp"

namespace melonlab {

// k pairwise vertex-disjoint upright paths, labelled left to right. Weights are
// raw integers at `scale_bits`; curves[i] is the (i+1)-th curve from the left.
struct Watermelon {
  int n = 0;
  int k = 0;
  int scale_bits = 0;
  std::vector<UprightPath> curves;
  std::vector<std::int64_t> per_curve_weight;
  std::int64_t weight = 0;

  double real(std::int64_t raw) const;
  double real_weight() const { return real(weight); }
  std::int64_t lightest_curve() const;
  Fluctuation fluctuation() const { return transversal_fluctuation(curves); }
};

// Orders the curves, weighs them against env and fills in a Watermelon.
Watermelon make_watermelon(const Environment& env, std::vector<UprightPath> curves);

// Returns the unique left-to-right labelling of pairwise disjoint paths.
// Throws InvalidArgument if two paths have disjoint time ranges, share a
// vertex, or cross.
std::vector<UprightPath> order_curves(std::vector<UprightPath> paths);

// Melon weights X_n^1..X_n^K (X[0] is X_n^1) and increments
// Y_{n,k} = X_n^k - X_n^{k-1} with Y_{n,1} = X_n^1.
struct MelonProfile {
  int n = 0;
  int scale_bits = 0;
  std::vector<std::int64_t> X;

  int K() const { return static_cast<int>(X.size()); }
  std::int64_t x(int k) const { return X[static_cast<std::size_t>(k - 1)]; }
  std::vector<std::int64_t> increments() const;
  std::int64_t y(int k) const { return k == 1 ? x(1) : x(k) - x(k - 1); }
};

struct MonotoneReport {
  bool ok = true;        // Y non-increasing
  bool strict = true;    // Y strictly decreasing
  std::optional<int> first_violation;  // smallest k with Y_k > Y_{k-1}
  std::optional<int> first_tie;        // smallest k with Y_k == Y_{k-1}
};

MonotoneReport check_monotone(const MelonProfile& profile);

struct InterlaceWitness {
  int curve = 0;           // 1-based index i of the small melon's curve
  bool against_left = true;  // failed big[i] <= small[i]; else small[i] <= big[i+1]
  int t = 0;
  Point small_vertex;
  Point big_vertex;
};

struct InterlaceReport {
  bool ok = true;
  std::optional<InterlaceWitness> witness;
};

// big[i] <= small[i] <= big[i+1] for every i, skipping comparisons whose time
// ranges do not meet. Throws InvalidArgument unless big.k == small.k + 1.
InterlaceReport is_interlaced(const Watermelon& small, const Watermelon& big);

struct AveragingReport {
  bool ok = true;
  std::optional<int> first_violation;  // j with lightest curve < X^j - X^{j-1}
};

// For each j-melon (melons[j-1]), its lightest curve weighs at least
// X^j - X^{j-1}.
AveragingReport check_averaging(const MelonProfile& profile,
                                std::span<const std::vector<std::int64_t>> per_curve_by_j);
AveragingReport check_averaging(const MelonProfile& profile, std::span<const Watermelon> melons);

// Structural audit of a melon: disjointness, ordering, anchored endpoints and
// weight bookkeeping. Each failure is one human-readable line.
struct MelonAudit {
  std::vector<std::string> failures;
  bool disjoint = true;
  bool ordered = true;
  bool anchored = true;
  bool weights_consistent = true;
  bool ok() const { return failures.empty(); }
};

enum class EndpointRule { kSquare, kPointToLine, kNone };

MelonAudit audit_melon(const Watermelon& melon, EndpointRule rule = EndpointRule::kSquare,
                       const Environment* env = nullptr);

}  // namespace melonlab
