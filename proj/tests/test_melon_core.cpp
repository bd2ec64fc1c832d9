#include <doctest.h>

#include <cmath>

#include "melonlab/error.hpp"
#include "melonlab/melon.hpp"
#include "melonlab/path.hpp"

using namespace melonlab;

namespace {

UprightPath P(std::vector<Point> v) { return UprightPath(std::move(v)); }

// (1,1)=1, (2,1)=3, (1,2)=2, (2,2)=4
Environment small_env() { return make_environment(2, {1, 3, 2, 4}); }

}  // namespace

TEST_CASE("upright path validation") {
  CHECK_THROWS_AS(UprightPath(std::vector<Point>{}), InvalidArgument);
  CHECK_THROWS_AS(P({{1, 1}, {2, 2}}), InvalidArgument);
  CHECK_THROWS_AS(P({{2, 1}, {1, 1}}), InvalidArgument);
  const auto p = P({{1, 1}, {2, 1}, {2, 2}, {2, 3}});
  CHECK(p.t_min() == 2);
  CHECK(p.t_max() == 5);
  CHECK(p.at_time(4) == Point{2, 2});
  CHECK(p.antidiag_at(5) == -1);
}

TEST_CASE("precedes") {
  const auto a = P({{1, 2}, {2, 2}});
  const auto b = P({{1, 1}, {2, 1}});
  CHECK(precedes(a, a) == Order::kLeftOrEqual);
  CHECK(precedes(a, b) == Order::kStrictlyLeft);  // shared t = 3: -1 < 1
  CHECK(precedes(b, a) == Order::kNotLeft);
  const auto early = P({{1, 1}, {1, 2}});  // t in [2, 3]
  const auto late = P({{2, 3}, {3, 3}});   // t in [5, 6]
  CHECK(precedes(early, late) == Order::kIncomparable);
  CHECK(is_left_of_or_equal(Order::kLeftOrEqual));
  CHECK_FALSE(is_left_of_or_equal(Order::kIncomparable));
}

TEST_CASE("transversal fluctuation") {
  const auto stair = transversal_fluctuation(P({{1, 1}, {2, 1}, {2, 2}}));
  CHECK(stair.raw == 1);
  CHECK(stair.euclidean == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(transversal_fluctuation(P({{1, 1}})).raw == 0);
  const int n = 9;
  std::vector<Point> corner;
  for (int x = 1; x <= n; ++x) corner.push_back({x, 1});
  for (int y = 2; y <= n; ++y) corner.push_back({n, y});
  CHECK(transversal_fluctuation(P(corner)).raw == n - 1);
}

TEST_CASE("interlacing on the n = 2 example") {
  const Environment env = small_env();
  const Watermelon one = make_watermelon(env, {P({{1, 1}, {2, 1}, {2, 2}})});
  const Watermelon two = make_watermelon(env, {P({{1, 2}, {2, 2}}), P({{1, 1}, {2, 1}})});
  CHECK(is_interlaced(one, two).ok);
  CHECK_THROWS_AS(is_interlaced(two, two), InvalidArgument);
  CHECK_THROWS_AS(is_interlaced(one, one), InvalidArgument);
}

TEST_CASE("interlacing violation carries a witness") {
  const Environment env = make_environment(3, std::vector<std::int64_t>(9, 1));
  // Small curve hugs the top-left, to the left of big[1].
  const Watermelon small = make_watermelon(env, {P({{1, 1}, {1, 2}, {1, 3}, {2, 3}, {3, 3}})});
  const Watermelon big =
      make_watermelon(env, {P({{1, 2}, {2, 2}, {2, 3}}), P({{1, 1}, {2, 1}, {3, 1}, {3, 2}})});
  const auto r = is_interlaced(small, big);
  REQUIRE_FALSE(r.ok);
  REQUIRE(r.witness);
  CHECK(r.witness->curve == 1);
  CHECK(r.witness->against_left);
  CHECK(r.witness->t == 4);
  CHECK(r.witness->small_vertex == Point{1, 3});
  CHECK(r.witness->big_vertex == Point{2, 2});
}

TEST_CASE("increment monotonicity") {
  SUBCASE("all-ones counting profile") {
    const int n = 12;
    MelonProfile p{n, 0, {}};
    for (int k = 1; k <= n; ++k) p.X.push_back(static_cast<std::int64_t>(k) * (2 * n - k));
    for (int k = 1; k <= n; ++k) CHECK(p.y(k) == 2 * n - 2 * k + 1);
    const auto r = check_monotone(p);
    CHECK(r.ok);
    CHECK(r.strict);
  }
  SUBCASE("2x2 example") {
    const MelonProfile p{2, 0, {8, 10}};
    CHECK(p.increments() == std::vector<std::int64_t>{8, 2});
    CHECK(check_monotone(p).ok);
  }
  SUBCASE("corrupted") {
    const MelonProfile p{4, 0, {5, 11}};
    const auto r = check_monotone(p);
    CHECK_FALSE(r.ok);
    CHECK(r.first_violation == std::optional<int>(2));
  }
  SUBCASE("ties are monotone but not strict") {
    const auto r = check_monotone(MelonProfile{4, 0, {5, 9, 13}});
    CHECK(r.ok);
    CHECK_FALSE(r.strict);
    CHECK(r.first_tie == std::optional<int>(3));
  }
}

TEST_CASE("averaging inequality") {
  SUBCASE("2x2 example") {
    const MelonProfile p{2, 0, {8, 10}};
    const std::vector<std::vector<std::int64_t>> per{{8}, {6, 4}};
    CHECK(check_averaging(p, per).ok);
  }
  SUBCASE("all-ones equality") {
    const int n = 6;
    MelonProfile p{n, 0, {}};
    std::vector<std::vector<std::int64_t>> per;
    for (int j = 1; j <= 3; ++j) {
      p.X.push_back(static_cast<std::int64_t>(j) * (2 * n - j));
      std::vector<std::int64_t> w;
      for (int i = 1; i <= j; ++i) w.push_back(2 * n - j);
      // Equal split is not required; put the lightest curve exactly at Y_j.
      w.back() = 2 * n - 2 * j + 1;
      w.front() += (2 * n - j) - w.back();
      per.push_back(w);
    }
    CHECK(check_averaging(p, per).ok);
  }
  SUBCASE("violation") {
    const MelonProfile p{2, 0, {8, 10}};
    const std::vector<std::vector<std::int64_t>> per{{8}, {9, 1}};
    const auto r = check_averaging(p, per);
    CHECK_FALSE(r.ok);
    CHECK(r.first_violation == std::optional<int>(2));
  }
}

TEST_CASE("order_curves") {
  const auto c1 = P({{1, 3}, {1, 4}, {2, 4}, {3, 4}, {4, 4}});
  const auto c2 = P({{1, 2}, {2, 2}, {2, 3}, {3, 3}, {4, 3}});
  const auto c3 = P({{1, 1}, {2, 1}, {3, 1}, {3, 2}, {4, 2}});
  CHECK(order_curves({c3, c2, c1}) == std::vector<UprightPath>{c1, c2, c3});
  CHECK(order_curves({c2, c3, c1}) == std::vector<UprightPath>{c1, c2, c3});
  CHECK_THROWS_AS(order_curves({P({{1, 1}, {1, 2}}), P({{3, 3}, {4, 3}})}), InvalidArgument);
  CHECK_THROWS_AS(order_curves({c1, P({{2, 4}, {3, 4}})}), InvalidArgument);
  // Crossing paths without a shared vertex cannot happen on the lattice, but
  // a path that switches sides does.
  CHECK_THROWS_AS(order_curves({P({{1, 2}, {2, 2}, {3, 2}}), P({{2, 1}, {2, 2}})}), InvalidArgument);
}

TEST_CASE("melon bookkeeping and audit") {
  const Environment env = small_env();
  const Watermelon two = make_watermelon(env, {P({{1, 1}, {2, 1}}), P({{1, 2}, {2, 2}})});
  CHECK(two.k == 2);
  CHECK(two.curves[0].front() == Point{1, 2});
  CHECK(two.per_curve_weight == std::vector<std::int64_t>{6, 4});
  CHECK(two.weight == 10);
  CHECK(two.lightest_curve() == 4);
  CHECK(audit_melon(two, EndpointRule::kSquare, &env).ok());

  Watermelon broken = two;
  broken.curves[1] = P({{1, 2}, {2, 2}});
  const auto audit = audit_melon(broken);
  CHECK_FALSE(audit.ok());
  CHECK_FALSE(audit.disjoint);
  bool mentions = false;
  for (const auto& f : audit.failures) mentions = mentions || f.find("(1,2)") != std::string::npos;
  CHECK(mentions);

  Watermelon heavy = two;
  heavy.weight = 11;
  CHECK_FALSE(audit_melon(heavy).weights_consistent);

  const Watermelon off = make_watermelon(env, {P({{2, 1}, {2, 2}})});
  CHECK_FALSE(audit_melon(off).anchored);
}
