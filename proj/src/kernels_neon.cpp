#include "melonlab/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace melonlab::kernels {

void relax_neon(const std::int64_t* from_left, const std::int64_t* from_below,
                const std::int64_t* weight, std::int64_t floor, std::int64_t* out,
                std::uint8_t* took_left, std::size_t len) {
  const int64x2_t vfloor = vdupq_n_s64(floor);
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    const int64x2_t a = vld1q_s64(from_left + i);
    const int64x2_t b = vld1q_s64(from_below + i);
    const int64x2_t w = vld1q_s64(weight + i);
    const uint64x2_t gt = vcgtq_s64(a, b);
    int64x2_t sum = vaddq_s64(w, vbslq_s64(gt, a, b));
    sum = vbslq_s64(vcgtq_s64(vfloor, sum), vfloor, sum);
    vst1q_s64(out + i, sum);
    took_left[i] = static_cast<std::uint8_t>(vgetq_lane_u64(gt, 0) & 1);
    took_left[i + 1] = static_cast<std::uint8_t>(vgetq_lane_u64(gt, 1) & 1);
  }
  if (i < len) {
    relax_scalar(from_left + i, from_below + i, weight + i, floor, out + i, took_left + i, len - i);
  }
}

}  // namespace melonlab::kernels

#endif
