#include "melonlab/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>

namespace melonlab::kernels {

void relax_scalar(const std::int64_t* from_left, const std::int64_t* from_below,
                  const std::int64_t* weight, std::int64_t floor, std::int64_t* out,
                  std::uint8_t* took_left, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) {
    const bool left = from_left[i] > from_below[i];
    const std::int64_t best = left ? from_left[i] : from_below[i];
    out[i] = std::max(floor, weight[i] + best);
    took_left[i] = left ? 1 : 0;
  }
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

namespace {

Isa detect() {
  if (const char* forced = std::getenv("MELONLAB_SIMD"); forced && std::strcmp(forced, "scalar") == 0) {
    return Isa::kScalar;
  }
  if (isa_supported(Isa::kAvx2)) return Isa::kAvx2;
  if (isa_supported(Isa::kNeon)) return Isa::kNeon;
  return Isa::kScalar;
}

}  // namespace

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "scalar";
}

RelaxFn relax_for(Isa isa) {
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::kAvx2:
      return &relax_avx2;
#endif
#if defined(__aarch64__)
    case Isa::kNeon:
      return &relax_neon;
#endif
    default:
      return &relax_scalar;
  }
}

void relax(const std::int64_t* from_left, const std::int64_t* from_below,
           const std::int64_t* weight, std::int64_t floor, std::int64_t* out,
           std::uint8_t* took_left, std::size_t len) {
  static const RelaxFn fn = relax_for(active_isa());
  fn(from_left, from_below, weight, floor, out, took_left, len);
}

}  // namespace melonlab::kernels
