#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstring>
#include <vector>

#include "pcam/step_kernel.hpp"

namespace pcam {

namespace {

inline __m256i mul64(__m256i a, __m256i b) {
  const __m256i lo = _mm256_mul_epu32(a, b);
  const __m256i ahi = _mm256_srli_epi64(a, 32);
  const __m256i bhi = _mm256_srli_epi64(b, 32);
  const __m256i cross =
      _mm256_add_epi64(_mm256_mul_epu32(ahi, b), _mm256_mul_epu32(a, bhi));
  return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

inline __m256i splitmix64_v(__m256i z) {
  const __m256i c0 = _mm256_set1_epi64x(static_cast<long long>(0x9E3779B97F4A7C15ULL));
  const __m256i c1 = _mm256_set1_epi64x(static_cast<long long>(0xBF58476D1CE4E5B9ULL));
  const __m256i c2 = _mm256_set1_epi64x(static_cast<long long>(0x94D049BB133111EBULL));
  z = _mm256_add_epi64(z, c0);
  z = mul64(_mm256_xor_si256(z, _mm256_srli_epi64(z, 30)), c1);
  z = mul64(_mm256_xor_si256(z, _mm256_srli_epi64(z, 27)), c2);
  return _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
}

// Unsigned 64-bit a < b via sign-bit flip.
inline __m256i cmplt_epu64(__m256i a, __m256i b) {
  const __m256i bias = _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ULL));
  return _mm256_cmpgt_epi64(_mm256_xor_si256(b, bias), _mm256_xor_si256(a, bias));
}

}  // namespace

void step_avx2(const StepThresholds& th, const TorusGeometry& g, const std::uint8_t* src,
               std::uint8_t* dst, std::uint64_t rng_key, std::uint64_t counter_base) {
  const int rows = g.rows, cols = g.cols;
  const int n = rows * cols;

  // Pass 1: neighbor counts per site, rows processed with a wrap halo.
  static thread_local std::vector<std::uint8_t> cnt_buf, halo_buf;
  cnt_buf.resize(static_cast<std::size_t>(n) + 32);
  halo_buf.resize(static_cast<std::size_t>(cols) + 34);
  for (int r = 0; r < rows; ++r) {
    const std::uint8_t* up = src + (r == 0 ? rows - 1 : r - 1) * cols;
    const std::uint8_t* dn = src + (r == rows - 1 ? 0 : r + 1) * cols;
    const std::uint8_t* row = src + r * cols;
    std::uint8_t* cnt = cnt_buf.data() + r * cols;
    std::uint8_t* halo = halo_buf.data();
    halo[0] = row[cols - 1];
    std::memcpy(halo + 1, row, cols);
    halo[cols + 1] = row[0];
    std::memset(halo + cols + 2, 0, 32);
    int c = 0;
    for (; c + 32 <= cols; c += 32) {
      const __m256i u = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(up + c));
      const __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dn + c));
      const __m256i lf = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(halo + c));
      const __m256i rt = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(halo + c + 2));
      const __m256i s = _mm256_add_epi8(_mm256_add_epi8(u, d), _mm256_add_epi8(lf, rt));
      _mm256_storeu_si256(reinterpret_cast<__m256i*>(cnt + c), s);
    }
    for (; c < cols; ++c) cnt[c] = up[c] + dn[c] + halo[c] + halo[c + 2];
  }

  // Pass 2: counter RNG + threshold compare, four sites per vector.
  const __m256i key = _mm256_set1_epi64x(static_cast<long long>(rng_key));
  const __m256i gold = _mm256_set1_epi64x(static_cast<long long>(0x9E3779B97F4A7C15ULL));
  const std::uint8_t* cnt = cnt_buf.data();
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    const std::uint64_t c0 = counter_base + i + 1;
    const __m256i ctr = _mm256_add_epi64(_mm256_set1_epi64x(static_cast<long long>(c0)),
                                         _mm256_set_epi64x(3, 2, 1, 0));
    const __m256i z = _mm256_xor_si256(key, mul64(ctr, gold));
    const __m256i u = splitmix64_v(z);
    std::uint32_t c4;
    std::memcpy(&c4, cnt + i, 4);
    const __m256i idx = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(static_cast<int>(c4)));
    const __m256i thr = _mm256_i64gather_epi64(
        reinterpret_cast<const long long*>(th.t), idx, 8);
    const __m256i lt = cmplt_epu64(u, thr);
    const int mask = _mm256_movemask_pd(_mm256_castsi256_pd(lt));
    dst[i + 0] = mask & 1;
    dst[i + 1] = (mask >> 1) & 1;
    dst[i + 2] = (mask >> 2) & 1;
    dst[i + 3] = (mask >> 3) & 1;
  }
  for (; i < n; ++i) {
    const std::uint64_t z =
        rng_key ^ ((counter_base + i + 1) * 0x9E3779B97F4A7C15ULL);
    std::uint64_t u = z + 0x9E3779B97F4A7C15ULL;
    u = (u ^ (u >> 30)) * 0xBF58476D1CE4E5B9ULL;
    u = (u ^ (u >> 27)) * 0x94D049BB133111EBULL;
    u ^= u >> 31;
    dst[i] = u < th.t[cnt[i]] ? 1 : 0;
  }
}

}  // namespace pcam

#endif  // x86_64
