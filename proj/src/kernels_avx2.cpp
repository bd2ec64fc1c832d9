#include "melonlab/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace melonlab::kernels {

// AVX2 has no 64-bit max; build it from cmpgt + blendv.
__attribute__((target("avx2"))) void relax_avx2(const std::int64_t* from_left,
                                                const std::int64_t* from_below,
                                                const std::int64_t* weight, std::int64_t floor,
                                                std::int64_t* out, std::uint8_t* took_left,
                                                std::size_t len) {
  const __m256i vfloor = _mm256_set1_epi64x(floor);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(from_left + i));
    const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(from_below + i));
    const __m256i w = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(weight + i));
    const __m256i gt = _mm256_cmpgt_epi64(a, b);
    const __m256i best = _mm256_blendv_epi8(b, a, gt);
    __m256i sum = _mm256_add_epi64(w, best);
    const __m256i low = _mm256_cmpgt_epi64(vfloor, sum);
    sum = _mm256_blendv_epi8(sum, vfloor, low);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), sum);
    const int mask = _mm256_movemask_pd(_mm256_castsi256_pd(gt));
    took_left[i] = static_cast<std::uint8_t>(mask & 1);
    took_left[i + 1] = static_cast<std::uint8_t>((mask >> 1) & 1);
    took_left[i + 2] = static_cast<std::uint8_t>((mask >> 2) & 1);
    took_left[i + 3] = static_cast<std::uint8_t>((mask >> 3) & 1);
  }
  if (i < len) {
    relax_scalar(from_left + i, from_below + i, weight + i, floor, out + i, took_left + i, len - i);
  }
}

}  // namespace melonlab::kernels

#endif
