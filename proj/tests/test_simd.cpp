#include <doctest.h>

#include "pcam/rng.hpp"
#include "pcam/step_kernel.hpp"

using namespace pcam;

namespace {

void fill_random(std::vector<std::uint8_t>& bytes, std::uint64_t seed) {
  const CounterRng rng = CounterRng::stream(seed, 0);
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = rng.draw(i) & 1;
}

}  // namespace

TEST_CASE("scalar and avx2 kernels produce identical lattices") {
  if (!cpu_has_avx2()) {
    MESSAGE("AVX2 not available; dispatch falls back to scalar");
    CHECK(select_step_kernel(true) == &step_scalar);
    return;
  }
  for (auto [rows, cols] : {std::pair{2, 2}, std::pair{6, 2}, std::pair{4, 6},
                            std::pair{12, 12}, std::pair{10, 34}}) {
    const TorusGeometry g(rows, cols);
    for (double beta : {1e-12, 0.8, 5.0, 50.0}) {
      const ModelParams p(0.7, beta);
      const StepThresholds th = StepThresholds::make(p);
      std::vector<std::uint8_t> src(g.sites()), a(g.sites()), b(g.sites());
      fill_random(src, rows * 1000 + cols + static_cast<int>(beta * 7));
      for (int step = 0; step < 20; ++step) {
        const std::uint64_t base = static_cast<std::uint64_t>(step) * g.sites();
        step_scalar(th, g, src.data(), a.data(), 42, base);
        step_avx2(th, g, src.data(), b.data(), 42, base);
        REQUIRE(a == b);
        src = a;
      }
    }
  }
}

TEST_CASE("runtime dispatch") {
  const StepFn fn = select_step_kernel(true);
  if (cpu_has_avx2())
    CHECK(std::string(step_kernel_name(fn)) == "avx2");
  else
    CHECK(std::string(step_kernel_name(fn)) == "scalar");
  CHECK(select_step_kernel(false) == &step_scalar);
}

TEST_CASE("thresholds are clamped to keep every transition possible") {
  const ModelParams cold(0.5, 200.0);
  const StepThresholds th = StepThresholds::make(cold);
  for (int k = 0; k <= 4; ++k) {
    CHECK(th.t[k] >= 1);
    // At S = -4 the flip-to-plus probability underflows but stays nonzero.
  }
  CHECK(th.t[0] == 1);
  CHECK(th.t[4] == ~std::uint64_t{0});
  // Monotone in the neighbor count.
  for (int k = 0; k < 4; ++k) CHECK(th.t[k] <= th.t[k + 1]);
}

TEST_CASE("byte conversion round-trip") {
  const TorusGeometry g(6, 4);
  const CounterRng rng = CounterRng::stream(4, 4);
  SpinConfig c(g);
  for (int i = 0; i < g.sites(); ++i) c.set_spin(i, (rng.draw(i) & 1) ? +1 : -1);
  CHECK(from_bytes(g, to_bytes(c)) == c);
}
