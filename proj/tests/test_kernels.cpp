#include <doctest.h>

#include <random>
#include <vector>

#include "melonlab/kernels.hpp"

using namespace melonlab;
using namespace melonlab::kernels;

namespace {

struct Case {
  std::vector<std::int64_t> left, below, weight;
};

Case random_case(std::mt19937_64& gen, std::size_t len) {
  std::uniform_int_distribution<std::int64_t> value(0, std::int64_t{1} << 40);
  std::uniform_int_distribution<int> pick(0, 9);
  Case c;
  for (std::size_t i = 0; i < len; ++i) {
    std::int64_t a = value(gen), b = value(gen), w = value(gen);
    switch (pick(gen)) {
      case 0: a = kNegInf; break;
      case 1: b = kNegInf; break;
      case 2: b = a; break;  // tie
      case 3: w = kNegInf; break;
      case 4: a = b = kNegInf; break;
      default: break;
    }
    c.left.push_back(a);
    c.below.push_back(b);
    c.weight.push_back(w);
  }
  return c;
}

}  // namespace

TEST_CASE("scalar relax reference") {
  const std::int64_t left[] = {5, 3, kNegInf, 7};
  const std::int64_t below[] = {4, 3, 2, kNegInf};
  const std::int64_t w[] = {1, 10, 1, kNegInf};
  std::int64_t out[4];
  std::uint8_t took[4];
  relax_scalar(left, below, w, 0, out, took, 4);
  CHECK(out[0] == 6);
  CHECK(took[0] == 1);
  CHECK(out[1] == 13);
  CHECK(took[1] == 0);  // tie prefers below
  CHECK(out[2] == 3);
  CHECK(took[2] == 0);
  CHECK(out[3] == 0);  // excluded cell clamps to the floor
}

TEST_CASE("every supported ISA matches the scalar kernel") {
  std::mt19937_64 gen(2024);
  for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
    if (!isa_supported(isa)) continue;
    CAPTURE(isa_name(isa));
    const RelaxFn fn = relax_for(isa);
    for (std::size_t len = 0; len <= 67; ++len) {
      for (std::int64_t floor : {kNegInf, std::int64_t{0}}) {
        const Case c = random_case(gen, len);
        std::vector<std::int64_t> want(len), got(len);
        std::vector<std::uint8_t> want_took(len), got_took(len);
        relax_scalar(c.left.data(), c.below.data(), c.weight.data(), floor, want.data(), want_took.data(), len);
        fn(c.left.data(), c.below.data(), c.weight.data(), floor, got.data(), got_took.data(), len);
        CHECK(got == want);
        CHECK(got_took == want_took);
      }
    }
  }
}

TEST_CASE("dispatch") {
  CHECK(isa_supported(Isa::kScalar));
  CHECK(isa_supported(active_isa()));
  CHECK(isa_name(Isa::kAvx2) == "avx2");
  CHECK(relax_for(Isa::kScalar) == &relax_scalar);
  std::int64_t left[] = {1, 2, 3, 4, 5}, below[] = {5, 4, 3, 2, 1}, w[] = {1, 1, 1, 1, 1}, out[5];
  std::uint8_t took[5];
  relax(left, below, w, kNegInf, out, took, 5);
  CHECK(std::vector<std::int64_t>(out, out + 5) == std::vector<std::int64_t>{6, 5, 4, 5, 6});
}
