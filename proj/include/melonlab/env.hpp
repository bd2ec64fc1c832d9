#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "melonlab/point.hpp"

namespace melonlab {

enum class DistKind { kExponential, kGeometric, kOnes, kFile };

// Vertex-weight law. Exponential is rate one; geometric(p) has
// P(xi = j) = p^(j-1) (1 - p) on j >= 1.
struct DistributionSpec {
  DistKind kind = DistKind::kExponential;
  double p = 0.0;

  static DistributionSpec exponential() { return {DistKind::kExponential, 0.0}; }
  static DistributionSpec geometric(double p);
  static DistributionSpec ones() { return {DistKind::kOnes, 0.0}; }
  static DistributionSpec file() { return {DistKind::kFile, 0.0}; }

  // Accepts the CLI spellings: exp, geom:<p>, ones, file.
  static DistributionSpec parse(std::string_view text);
  std::string tag() const;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

// Diagonal growth constant: E[X_n] / n -> mu. Exponential 4, geometric
// (1 + sqrt p)^2 / (1 - p), all-ones 2. NaN for file-backed weights.
double mu_of(const DistributionSpec& dist);

// Raw weights are exact integers; the real value of a raw entry r is
// r * 2^-scale_bits. Integer laws use scale 0, quantized exponentials 32,
// jittered environments 48.
inline constexpr int kFixedPointBits = 32;
inline constexpr int kJitterBits = 48;
inline constexpr int kJitterRangeBits = 16;

class Environment {
 public:
  Environment(int n, int scale_bits, DistributionSpec dist, std::uint64_t seed,
              std::vector<std::int64_t> raw,
              std::optional<std::uint64_t> jitter_seed = std::nullopt);

  int n() const { return n_; }
  int scale_bits() const { return scale_bits_; }
  const DistributionSpec& dist() const { return dist_; }
  std::uint64_t seed() const { return seed_; }
  const std::optional<std::uint64_t>& jitter_seed() const { return jitter_seed_; }

  bool contains(Point p) const { return p.x >= 1 && p.y >= 1 && p.x <= n_ && p.y <= n_; }
  std::size_t index(Point p) const {
    return static_cast<std::size_t>(p.y - 1) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(p.x - 1);
  }
  std::int64_t raw(Point p) const { return raw_[index(p)]; }
  std::int64_t raw(int x, int y) const { return raw(Point{x, y}); }
  double value(Point p) const { return to_real(raw(p)); }

  // Row-major, row y = 1 first.
  std::span<const std::int64_t> raw_weights() const { return raw_; }

  double to_real(std::int64_t raw_value) const;
  // "int", "fp32.32" or "fp16.48".
  std::string repr_tag() const;

  // Sum of all raw weights; throws GuardViolation if it does not fit in 62
  // bits, which bounds every path or flow cost computed on this grid.
  std::int64_t total_raw() const;

  // Adds i.i.d. uniform integers in [0, 2^16) at resolution 2^-48 to break
  // ties; the base weights are rescaled to 2^-48 first.
  Environment jittered(std::uint64_t sub_seed) const;

  // The [1,side]^2 corner. For generated environments this equals
  // generate(side, dist, seed) bit for bit.
  Environment subgrid(int side) const;

  friend bool operator==(const Environment&, const Environment&) = default;

 private:
  int n_;
  int scale_bits_;
  DistributionSpec dist_;
  std::uint64_t seed_;
  std::optional<std::uint64_t> jitter_seed_;
  std::vector<std::int64_t> raw_;
};

Environment generate(int n, const DistributionSpec& dist, std::uint64_t seed);

// Hand-built environment (tests, imported data). values are row-major, y = 1
// first, already in raw units at the given scale.
Environment make_environment(int n, std::vector<std::int64_t> values, int scale_bits = 0);

// Text format:
//   lpp-env 1
//   n=<n> dist=<tag> seed=<u64> repr=<int|fp32.32|fp16.48> [jitter=<u64>]
//   n rows of n raw integers, row y = 1 first.
void save(const Environment& env, std::ostream& out);
Environment load(std::istream& in);
void save_file(const Environment& env, const std::string& path);
Environment load_file(const std::string& path);

}  // namespace melonlab
