#pragma once

#include <cstdint>
#include <vector>

#include "pcam/geometry.hpp"
#include "pcam/params.hpp"

namespace pcam {

// One synchronous PCA update over a byte lattice (1 = spin up, 0 = spin down).
// Site i consumes the 64-bit word draw(key, counter_base + i); the spin becomes
// +1 iff that word is below threshold[k], k = number of up neighbors. Scalar
// and SIMD variants produce bit-identical lattices by construction, which the
// equivalence tests assert.

struct StepThresholds {
  // threshold[k] = round(2^64 * P(spin -> +1 | k up-neighbors)), clamped to
  // [1, 2^64-1] so every transition keeps positive probability.
  std::uint64_t t[5];

  static StepThresholds make(const ModelParams& p);
};

using StepFn = void (*)(const StepThresholds&, const TorusGeometry&,
                        const std::uint8_t* src, std::uint8_t* dst,
                        std::uint64_t rng_key, std::uint64_t counter_base);

void step_scalar(const StepThresholds&, const TorusGeometry&, const std::uint8_t* src,
                 std::uint8_t* dst, std::uint64_t rng_key, std::uint64_t counter_base);

#if defined(__x86_64__) || defined(_M_X64)
void step_avx2(const StepThresholds&, const TorusGeometry&, const std::uint8_t* src,
               std::uint8_t* dst, std::uint64_t rng_key, std::uint64_t counter_base);
#endif

bool cpu_has_avx2();

/// Fastest kernel supported at runtime (scalar when `allow_simd` is false or
/// the CPU lacks AVX2).
StepFn select_step_kernel(bool allow_simd = true);

const char* step_kernel_name(StepFn fn);

std::vector<std::uint8_t> to_bytes(const SpinConfig& c);
SpinConfig from_bytes(TorusGeometry g, const std::vector<std::uint8_t>& bytes);

}  // namespace pcam
