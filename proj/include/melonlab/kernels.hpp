#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>

namespace melonlab::kernels {

// Sentinel for "unreachable" in max-plus recurrences. Any in-range weight plus
// any value >= kNegInf stays representable, and results are clamped back.
inline constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min() / 2;

// One anti-diagonal of the last-passage recurrence:
//
//   out[i] = max(floor, weight[i] + max(from_left[i], from_below[i]))
//   took_left[i] = from_left[i] > from_below[i]
//
// Ties prefer the predecessor below. Excluded cells carry weight kNegInf.
// Weights and inputs must lie in [kNegInf, 2^61].
using RelaxFn = void (*)(const std::int64_t* from_left, const std::int64_t* from_below,
                         const std::int64_t* weight, std::int64_t floor, std::int64_t* out,
                         std::uint8_t* took_left, std::size_t len);

void relax_scalar(const std::int64_t* from_left, const std::int64_t* from_below,
                  const std::int64_t* weight, std::int64_t floor, std::int64_t* out,
                  std::uint8_t* took_left, std::size_t len);

#if defined(__x86_64__) || defined(_M_X64)
void relax_avx2(const std::int64_t* from_left, const std::int64_t* from_below,
                const std::int64_t* weight, std::int64_t floor, std::int64_t* out,
                std::uint8_t* took_left, std::size_t len);
#endif

#if defined(__aarch64__)
void relax_neon(const std::int64_t* from_left, const std::int64_t* from_below,
                const std::int64_t* weight, std::int64_t floor, std::int64_t* out,
                std::uint8_t* took_left, std::size_t len);
#endif

enum class Isa { kScalar, kAvx2, kNeon };

// Best variant supported by this CPU, unless MELONLAB_SIMD=scalar is set.
Isa active_isa();
std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);
RelaxFn relax_for(Isa isa);

// Dispatching entry point used by the solvers.
void relax(const std::int64_t* from_left, const std::int64_t* from_below,
           const std::int64_t* weight, std::int64_t floor, std::int64_t* out,
           std::uint8_t* took_left, std::size_t len);

}  // namespace melonlab::kernels
