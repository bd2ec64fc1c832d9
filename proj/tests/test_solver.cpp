#include <doctest.h>

#include <optional>
#include <vector>

#include "melonlab/brute_force.hpp"
#include "melonlab/error.hpp"
#include "melonlab/solver.hpp"

using namespace melonlab;

namespace {

void check_anchored(const Environment& env, const Watermelon& m) {
  const auto audit = audit_melon(m, EndpointRule::kSquare, &env);
  for (const auto& line : audit.failures) MESSAGE(line);
  CHECK(audit.ok());
}

}  // namespace

TEST_CASE("two by two example") {
  const auto env = make_environment(2, {1, 3, 2, 4});
  const auto one = solve_melon(env, 1);
  CHECK(one.weight == 8);
  const auto two = solve_melon(env, 2);
  CHECK(two.weight == 10);
  CHECK(two.per_curve_weight == std::vector<std::int64_t>{6, 4});
  check_anchored(env, two);
}

TEST_CASE("melon weights agree with an independent enumeration") {
  // Values computed by a separate exhaustive implementation and frozen here.
  struct Frozen {
    int n;
    DistributionSpec dist;
    std::uint64_t seed;
    std::vector<std::int64_t> X;
  };
  const std::vector<Frozen> cases{
      {4, DistributionSpec::exponential(), 7, {66008215572, 96649063939, 112784383216}},
      {5, DistributionSpec::geometric(0.5), 11, {28, 43, 53}},
      {5, DistributionSpec::exponential(), 2024, {58233404621, 75444700485, 81617735050}},
  };
  for (const auto& c : cases) {
    const auto env = generate(c.n, c.dist, c.seed);
    const auto profile = solve_profile(env, 3);
    CHECK(profile.profile.X == c.X);
    for (int k = 1; k <= 3; ++k) {
      const auto m = solve_melon(env, k);
      CHECK(m.weight == c.X[static_cast<std::size_t>(k - 1)]);
      check_anchored(env, m);
    }
  }
}

TEST_CASE("all-ones weights count vertices") {
  for (int n : {1, 3, 8, 20}) {
    const auto env = generate(n, DistributionSpec::ones(), 0);
    for (int k = 1; k <= n; ++k) CHECK(solve_melon(env, k).weight == std::int64_t{k} * (2 * n - k));
  }
}

TEST_CASE("k = n covers the whole grid") {
  const auto env = generate(9, DistributionSpec::exponential(), 5);
  CHECK(solve_melon(env, 9).weight == env.total_raw());
}

TEST_CASE("k out of range") {
  const auto env = generate(4, DistributionSpec::ones(), 0);
  CHECK_THROWS_AS(solve_melon(env, 0), InvalidArgument);
  CHECK_THROWS_AS(solve_melon(env, 5), InvalidArgument);
}

TEST_CASE("incremental profile equals fresh solves") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto env = generate(24, DistributionSpec::geometric(0.3), seed);
    const auto prof = solve_profile(env, 10);
    REQUIRE(prof.melons.size() == 10);
    for (int k = 1; k <= 10; ++k) {
      const auto fresh = solve_melon(env, k);
      CHECK(prof.profile.x(k) == fresh.weight);
      CHECK(prof.melons[static_cast<std::size_t>(k - 1)].weight == fresh.weight);
      check_anchored(env, prof.melons[static_cast<std::size_t>(k - 1)]);
    }
  }
  const auto env = generate(10, DistributionSpec::exponential(), 1);
  CHECK(solve_profile(env, 4, {}, false).melons.empty());
}

TEST_CASE("strip melons") {
  const auto env = generate(16, DistributionSpec::exponential(), 8);
  const int k = 3;
  CHECK(solve_strip(env, k, 15).weight == solve_melon(env, k).weight);
  CHECK(min_strip_width(16, k) == k);
  CHECK(min_strip_width(16, 1) == 1);
  CHECK(min_strip_width(1, 1) == 0);
  CHECK(min_strip_width(3, 3) == 2);
  CHECK_THROWS_AS(solve_strip(env, k, k - 2), Infeasible);
  CHECK_THROWS_AS(solve_strip(env, k, k - 1), Infeasible);

  std::int64_t prev = 0;
  for (int w = k; w <= 15; ++w) {
    const auto m = solve_strip(env, k, w);
    CHECK(m.weight >= prev);
    prev = m.weight;
    CHECK(m.fluctuation().raw <= w);
    check_anchored(env, m);
  }

  const auto ones = generate(10, DistributionSpec::ones(), 0);
  CHECK(solve_strip(ones, 4, 4).weight == 4 * (20 - 4));
  CHECK(solve_strip(ones, 1, 1).weight == 19);
  CHECK_THROWS_AS(solve_strip(ones, 1, 0), Infeasible);
}

TEST_CASE("strip and point-to-line agree with exhaustive search") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto env = generate(6, DistributionSpec::geometric(0.5), 300 + seed);
    for (int k = 1; k <= 3; ++k) {
      for (int w = 0; w <= 3; ++w) {
        if (w < min_strip_width(6, k)) {
          CHECK_THROWS_AS(brute_force(env, {BruteVariant::kStrip, k, w, 0}), Infeasible);
          CHECK_THROWS_AS(solve_strip(env, k, w), Infeasible);
          continue;
        }
        const auto want = brute_force(env, {BruteVariant::kStrip, k, w, 0});
        CHECK(solve_strip(env, k, w).weight == want.weight);
      }
    }
    const auto tri = generate(7, DistributionSpec::geometric(0.5), 500 + seed);
    for (int k = 1; k <= 3; ++k) {
      const auto want = brute_force(tri, {BruteVariant::kPointToLine, k, 0, 4});
      const auto got = solve_point_to_line(tri, 4, k);
      CHECK(got.weight == want.weight);
      CHECK(got.n == 4);
      CHECK(audit_melon(got, EndpointRule::kPointToLine, &tri).ok());
    }
  }
}

TEST_CASE("point-to-line basics") {
  const auto ones = generate(9, DistributionSpec::ones(), 0);
  CHECK(solve_point_to_line(ones, 5, 1).weight == 9);
  // Curves start at times 4, 3, 2 and end at time 10.
  CHECK(solve_point_to_line(ones, 5, 3).weight == 7 + 8 + 9);
  CHECK_THROWS_AS(solve_point_to_line(ones, 0, 1), InvalidArgument);

  // The endpoints are free, so Z dominates the anchored melon on the corner.
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto env = generate(31, DistributionSpec::exponential(), seed);
    const auto corner = env.subgrid(16);
    for (int k : {1, 2, 4}) CHECK(solve_point_to_line(env, 16, k).weight >= solve_melon(corner, k).weight);
  }
}

TEST_CASE("jittered solve") {
  const auto env = generate(12, DistributionSpec::geometric(0.5), 4);
  const auto m = solve_melon(env, 3, SolveOptions{77});
  CHECK(m.scale_bits == kJitterBits);
  const auto j = env.jittered(77);
  CHECK(m.weight == solve_melon(j, 3).weight);
  // The jitter only adds noise below the integer scale.
  CHECK((m.weight >> kJitterBits) >= solve_melon(env, 3).weight - 1);
  CHECK((m.weight >> kJitterBits) <= solve_melon(env, 3).weight + 1);
}

TEST_CASE("general regions") {
  const auto env = generate(6, DistributionSpec::exponential(), 9);
  const auto m = solve_region(env, CellMask::full(6), {{1, 2}, {1, 1}}, {{6, 6}, {6, 5}}, 2);
  CHECK(m.weight == solve_melon(env, 2).weight);
  CHECK_THROWS_AS(solve_region(env, CellMask::full(6), {{1, 1}}, {{6, 6}}, 2), InvalidArgument);
  auto blocked = CellMask::full(6);
  for (int x = 1; x <= 6; ++x) blocked.set({x, 7 - x}, x == 1);
  CHECK_THROWS_AS(solve_region(env, blocked, {{1, 2}, {1, 1}}, {{6, 6}, {6, 5}}, 2), Infeasible);
}
