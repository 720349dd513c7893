#include <doctest.h>

#include <cmath>

#include "pcam/energy.hpp"
#include "pcam/enumeration.hpp"
#include "pcam/kernel.hpp"
#include "pcam/rng.hpp"

using namespace pcam;

TEST_CASE("local_prob closed form") {
  const TorusGeometry g(4, 4);
  const ModelParams p(0.5, 2.0);
  const SpinConfig plus = named_config(g, Fill::Plus);
  // All-plus, a = +1: 1/(1+e^{-2 beta (4+h)}).
  const double expect = 1.0 / (1.0 + std::exp(-2.0 * p.beta * (4.0 + p.h)));
  CHECK(local_prob(p, plus, 0, +1) == doctest::Approx(expect).epsilon(1e-14));

  // beta ~ 0: fair coin.
  const ModelParams hot(0.3, 1e-12);
  CHECK(local_prob(hot, plus, 3, +1) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(local_prob(hot, plus, 3, -1) == doctest::Approx(0.5).epsilon(1e-9));

  // S = -2, a = +1, beta = 1, h = 0.5: 1/(1+e^3).
  SpinConfig c = named_config(g, Fill::Minus);
  c.set_spin(g.index(0, 1), +1);
  REQUIRE(local_field(c, g.index(0, 0)) == -2);
  const ModelParams p2(0.5, 1.0);
  CHECK(local_prob(p2, c, g.index(0, 0), +1) ==
        doctest::Approx(1.0 / (1.0 + std::exp(3.0))).epsilon(1e-12));
  CHECK(1.0 / (1.0 + std::exp(3.0)) == doctest::Approx(0.047425873).epsilon(1e-7));
}

TEST_CASE("kernel row complement pair") {
  const TorusGeometry g(4, 2);
  const ModelParams p(0.7, 3.0);
  CounterRng rng = CounterRng::stream(11, 2);
  for (int t = 0; t < 8; ++t) {
    SpinConfig c(g);
    for (int i = 0; i < g.sites(); ++i)
      c.set_spin(i, (rng.draw(t * 64 + i) & 1) ? +1 : -1);
    const KernelRow row = kernel_row(p, c);
    for (int i = 0; i < g.sites(); ++i) {
      CHECK(row.p_plus[i] + row.p_minus(i) == 1.0);  // exact complement
      CHECK(row.p_plus[i] > 0.0);
      CHECK(row.p_plus[i] < 1.0);
    }
  }
}

TEST_CASE("log_step_prob row stochasticity on 2x2") {
  const TorusGeometry g(2, 2);
  const ModelParams p(0.5, 1.5);
  const SpinConfig src = named_config(g, Fill::ChessEven);
  double total = 0.0;
  for (std::uint32_t t = 0; t < 16; ++t)
    total += std::exp(log_step_prob(p, src, SpinConfig::from_state_id(g, t)));
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("log_step_prob closed forms") {
  const TorusGeometry g(4, 4);
  const ModelParams p(0.5, 2.0);
  const SpinConfig minus = named_config(g, Fill::Minus);
  const double per_site = -std::log1p(std::exp(-2.0 * p.beta * (4.0 - p.h)));
  CHECK(log_step_prob(p, minus, minus) ==
        doctest::Approx(16.0 * per_site).epsilon(1e-12));

  // Large beta: the chessboard swap has probability approaching one.
  const ModelParams cold(0.5, 50.0);
  const SpinConfig ce = named_config(g, Fill::ChessEven);
  const SpinConfig co = named_config(g, Fill::ChessOdd);
  CHECK(std::exp(log_step_prob(cold, ce, co)) >= 1.0 - 1e-10);
  CHECK(delta_cost(cold, ce, co) == 0.0);
  CHECK(delta_cost(cold, co, ce) == 0.0);

  CHECK_THROWS(log_step_prob(p, minus, named_config(TorusGeometry(2, 2), Fill::Minus)));
}

TEST_CASE("sample_step determinism and limits") {
  const TorusGeometry g(4, 4);
  const CounterRng rng = CounterRng::stream(123, 5);

  const ModelParams p(0.5, 1.0);
  const SpinConfig start = named_config(g, Fill::ChessEven);
  const SpinConfig a = sample_step(p, start, rng, 1000);
  const SpinConfig b = sample_step(p, start, rng, 1000);
  CHECK(a == b);

  // beta ~ 0: mean magnetization of sampled steps is near zero.
  const ModelParams hot(0.5, 1e-12);
  SpinConfig c = named_config(g, Fill::Minus);
  double mag = 0.0;
  const int steps = 10000;
  for (int t = 0; t < steps; ++t) {
    c = sample_step(hot, c, rng, std::uint64_t(t) * g.sites());
    mag += static_cast<double>(c.magnetization()) / g.sites();
  }
  CHECK(std::fabs(mag / steps) < 0.05);

  // beta = 50: all-plus is almost surely fixed.
  const ModelParams cold(0.5, 50.0);
  const SpinConfig plus = named_config(g, Fill::Plus);
  int stay = 0;
  for (int t = 0; t < 1000; ++t)
    if (sample_step(cold, plus, CounterRng::stream(9, t), 0) == plus) ++stay;
  CHECK(stay >= 999);
}

TEST_CASE("zero temperature map") {
  const TorusGeometry g(4, 4);
  const ModelParams p(0.5, 1.0);
  const SpinConfig minus = named_config(g, Fill::Minus);
  CHECK(zero_temp_map(p, minus) == minus);

  const SpinConfig ce = named_config(g, Fill::ChessEven);
  const SpinConfig co = named_config(g, Fill::ChessOdd);
  CHECK(zero_temp_map(p, ce) == co);
  CHECK(zero_temp_map(p, co) == ce);

  SpinConfig single = minus;
  single.set_spin(5, +1);
  CHECK(zero_temp_map(p, single) == minus);
}

TEST_CASE("pinned maps") {
  const TorusGeometry g(4, 4);
  const ModelParams p(0.5, 1.0);
  const SpinConfig minus = named_config(g, Fill::Minus);
  const SpinConfig ce = named_config(g, Fill::ChessEven);

  for (int j : {0, 5, 10}) {
    const SpinConfig f = pinned_map_fix(p, ce, j);
    const SpinConfig c = pinned_map_flip(p, ce, j);
    int diff = 0;
    for (int i = 0; i < 16; ++i) diff += f.spin(i) != c.spin(i);
    CHECK(diff == 1);
    CHECK(f.spin(j) == ce.spin(j));
    CHECK(c.spin(j) == -ce.spin(j));
  }
  CHECK(pinned_map_fix(p, minus, 3) == minus);
  SpinConfig single = minus;
  single.set_spin(3, +1);
  CHECK(pinned_map_flip(p, minus, 3) == single);
}

TEST_CASE("traps") {
  const TorusGeometry g(6, 6);
  const ModelParams p(0.5, 1.0);
  CHECK(is_stable_config(p, named_config(g, Fill::Plus)));
  CHECK(is_stable_pair(p, named_config(g, Fill::ChessEven)));
  CHECK(is_trap(p, named_config(g, Fill::ChessOdd)));

  // Non-interacting 2x2 plus rectangle in minus: stable configuration.
  const SpinConfig droplet =
      paint_rectangle(named_config(g, Fill::Minus), Rectangle{{1, 1}, 2, 2}, Fill::Plus);
  CHECK(is_stable_config(p, droplet));

  // Involution on traps.
  const SpinConfig tt = zero_temp_map(p, zero_temp_map(p, droplet));
  CHECK(tt == droplet);

  SpinConfig single = named_config(g, Fill::Minus);
  single.set_spin(7, +1);
  CHECK_FALSE(is_trap(p, single));
}

TEST_CASE("T is the beta->infty argmax of the kernel") {
  const TorusGeometry g(4, 4);
  const ModelParams cold(0.5, 50.0);
  CounterRng rng = CounterRng::stream(77, 0);
  int agree = 0, total = 0;
  for (int t = 0; t < 50; ++t) {
    SpinConfig c(g);
    for (int i = 0; i < 16; ++i) c.set_spin(i, (rng.draw(t * 16 + i) & 1) ? +1 : -1);
    const SpinConfig want = zero_temp_map(cold, c);
    for (int rep = 0; rep < 4; ++rep) {
      total += 1;
      if (sample_step(cold, c, CounterRng::stream(31, t * 4 + rep), 0) == want) ++agree;
    }
  }
  CHECK(static_cast<double>(agree) / total >= 0.99);
}

TEST_CASE("detailed balance at finite beta") {
  const TorusGeometry g(4, 2);
  for (double beta : {1.0, 2.0, 3.0}) {
    const ModelParams p(0.5, beta);
    CounterRng rng = CounterRng::stream(5, 17);
    for (int t = 0; t < 200; ++t) {
      const std::uint32_t a = static_cast<std::uint32_t>(rng.draw(2 * t) & 255);
      const std::uint32_t b = static_cast<std::uint32_t>(rng.draw(2 * t + 1) & 255);
      const SpinConfig x = SpinConfig::from_state_id(g, a);
      const SpinConfig y = SpinConfig::from_state_id(g, b);
      const double lhs = -p.beta * hamiltonian_G(p, x) + log_step_prob(p, x, y);
      const double rhs = -p.beta * hamiltonian_G(p, y) + log_step_prob(p, y, x);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
  }
}

TEST_CASE("h tie warning predicate") {
  CHECK(ModelParams(0.5, 1.0).h_near_tie());       // 2/h = 4
  CHECK_FALSE(ModelParams(0.9, 1.0).h_near_tie()); // 2/h = 2.22...
  CHECK_THROWS(ModelParams(1.5, 1.0));
  CHECK_THROWS(ModelParams(0.5, -1.0));
}
