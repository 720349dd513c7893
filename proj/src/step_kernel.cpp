#include "pcam/step_kernel.hpp"

#include <cmath>

#include "pcam/kernel.hpp"
#include "pcam/rng.hpp"

namespace pcam {

StepThresholds StepThresholds::make(const ModelParams& p) {
  StepThresholds th;
  for (int k = 0; k <= 4; ++k) {
    const int s = 2 * k - 4;
    const long double x = 2.0L * p.beta * (s + static_cast<long double>(p.h));
    // p_plus = sigmoid(x) in extended precision, then scaled to a u64 threshold.
    long double pp;
    if (x >= 0)
      pp = 1.0L / (1.0L + std::exp(-x));
    else
      pp = std::exp(x) / (1.0L + std::exp(x));
    const long double scaled = std::ldexp(pp, 64);
    std::uint64_t t = scaled >= 0x1.0p64L ? ~std::uint64_t{0}
                                          : static_cast<std::uint64_t>(scaled);
    if (t == 0) t = 1;
    th.t[k] = t;
  }
  return th;
}

void step_scalar(const StepThresholds& th, const TorusGeometry& g, const std::uint8_t* src,
                 std::uint8_t* dst, std::uint64_t rng_key, std::uint64_t counter_base) {
  const int rows = g.rows, cols = g.cols;
  for (int r = 0; r < rows; ++r) {
    const std::uint8_t* up = src + (r == 0 ? rows - 1 : r - 1) * cols;
    const std::uint8_t* dn = src + (r == rows - 1 ? 0 : r + 1) * cols;
    const std::uint8_t* row = src + r * cols;
    std::uint8_t* out = dst + r * cols;
    const std::uint64_t base = counter_base + static_cast<std::uint64_t>(r) * cols;
    for (int c = 0; c < cols; ++c) {
      const int lf = (c == 0 ? cols - 1 : c - 1);
      const int rt = (c == cols - 1 ? 0 : c + 1);
      const unsigned k = up[c] + dn[c] + row[lf] + row[rt];
      const std::uint64_t u = splitmix64(rng_key ^ ((base + c + 1) * 0x9E3779B97F4A7C15ULL));
      out[c] = u < th.t[k] ? 1 : 0;
    }
  }
}

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

StepFn select_step_kernel(bool allow_simd) {
#if defined(__x86_64__) || defined(_M_X64)
  if (allow_simd && cpu_has_avx2()) return &step_avx2;
#else
  (void)allow_simd;
#endif
  return &step_scalar;
}

const char* step_kernel_name(StepFn fn) {
#if defined(__x86_64__) || defined(_M_X64)
  if (fn == &step_avx2) return "avx2";
#endif
  return fn == &step_scalar ? "scalar" : "unknown";
}

std::vector<std::uint8_t> to_bytes(const SpinConfig& c) {
  std::vector<std::uint8_t> out(c.sites());
  for (int i = 0; i < c.sites(); ++i) out[i] = c.is_plus(i) ? 1 : 0;
  return out;
}

SpinConfig from_bytes(TorusGeometry g, const std::vector<std::uint8_t>& bytes) {
  SpinConfig c(g);
  for (int i = 0; i < g.sites(); ++i) c.set_spin(i, bytes[i] ? +1 : -1);
  return c;
}

}  // namespace pcam
