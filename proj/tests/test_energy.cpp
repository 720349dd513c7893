#include <doctest.h>

#include <cmath>

#include "pcam/energy.hpp"
#include "pcam/kernel.hpp"
#include "pcam/rng.hpp"

using namespace pcam;

TEST_CASE("closed-form energies of named configurations") {
  for (double h : {0.3, 0.5, 0.9}) {
    for (auto [rows, cols] : {std::pair{4, 4}, std::pair{6, 2}, std::pair{6, 8}}) {
      const TorusGeometry g(rows, cols);
      const ModelParams p(h, 1.0);
      const double n = g.sites();
      CHECK(virtual_energy(p, named_config(g, Fill::Plus)) ==
            doctest::Approx(-n * (4 + 2 * h)).epsilon(1e-13));
      CHECK(virtual_energy(p, named_config(g, Fill::Minus)) ==
            doctest::Approx(-n * (4 - 2 * h)).epsilon(1e-13));
      CHECK(virtual_energy(p, named_config(g, Fill::ChessEven)) ==
            doctest::Approx(-4 * n).epsilon(1e-13));
      CHECK(virtual_energy(p, named_config(g, Fill::ChessOdd)) ==
            doctest::Approx(-4 * n).epsilon(1e-13));
    }
  }
  // 4x4, h = 0.5 reference values.
  const TorusGeometry g(4, 4);
  const ModelParams p(0.5, 1.0);
  CHECK(virtual_energy(p, named_config(g, Fill::Plus)) == doctest::Approx(-80.0));
  CHECK(virtual_energy(p, named_config(g, Fill::Minus)) == doctest::Approx(-48.0));
  CHECK(virtual_energy(p, named_config(g, Fill::ChessEven)) == doctest::Approx(-64.0));
}

TEST_CASE("hamiltonian G converges to H") {
  const TorusGeometry g(4, 4);
  const double log2 = std::log(2.0);
  for (Fill f : {Fill::Plus, Fill::Minus, Fill::ChessEven}) {
    const SpinConfig c = named_config(g, f);
    const ModelParams p(0.5, 100.0);
    // G = H + n log2 / beta - tail with the tail below 1e-40 at beta = 100.
    CHECK(std::fabs(hamiltonian_G(p, c) - g.sites() * log2 / p.beta - virtual_energy(p, c)) <=
          1e-6);
  }
  // All-plus closed form.
  const ModelParams p(0.5, 2.0);
  const SpinConfig plus = named_config(g, Fill::Plus);
  const double n = g.sites();
  const double expect =
      -n * p.h - (n / p.beta) * (std::log(std::cosh(p.beta * (4 + p.h))) + 0.0);
  CHECK(hamiltonian_G(p, plus) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("delta cost") {
  const TorusGeometry g(4, 4);
  const ModelParams p(0.5, 1.0);
  const SpinConfig plus = named_config(g, Fill::Plus);
  const SpinConfig minus = named_config(g, Fill::Minus);
  CHECK(delta_cost(p, minus, minus) == 0.0);
  CHECK(delta_cost(p, named_config(g, Fill::ChessEven), named_config(g, Fill::ChessOdd)) == 0.0);
  CHECK(delta_cost(p, plus, minus) ==
        doctest::Approx(2.0 * g.sites() * (4 + p.h)).epsilon(1e-13));
  // Delta(sigma, T sigma) = 0 always.
  CounterRng rng = CounterRng::stream(3, 3);
  for (int t = 0; t < 100; ++t) {
    SpinConfig c(g);
    for (int i = 0; i < 16; ++i) c.set_spin(i, (rng.draw(t * 16 + i) & 1) ? +1 : -1);
    CHECK(delta_cost(p, c, zero_temp_map(p, c)) == 0.0);
  }
}

TEST_CASE("transition energy symmetry") {
  const TorusGeometry g(4, 4);
  const ModelParams p(0.5, 1.0);
  const SpinConfig ce = named_config(g, Fill::ChessEven);
  const SpinConfig co = named_config(g, Fill::ChessOdd);
  CHECK(transition_energy(p, ce, co) == doctest::Approx(virtual_energy(p, ce)));
  CHECK(transition_energy(p, ce, ce) > virtual_energy(p, ce));  // Delta(c,c) > 0

  CounterRng rng = CounterRng::stream(21, 0);
  for (int t = 0; t < 10000; ++t) {
    SpinConfig x(g), y(g);
    for (int i = 0; i < 16; ++i) {
      x.set_spin(i, (rng.draw(t * 32 + i) & 1) ? +1 : -1);
      y.set_spin(i, (rng.draw(t * 32 + 16 + i) & 1) ? +1 : -1);
    }
    CHECK(transition_energy(p, x, y) ==
          doctest::Approx(transition_energy(p, y, x)).epsilon(1e-9));
  }
}

TEST_CASE("energy scale detection and exact forms") {
  const EnergyScale s = EnergyScale::from_h(0.5);
  REQUIRE(s.exact());
  CHECK(s.p == 1);
  CHECK(s.q == 2);
  CHECK(EnergyScale::from_h(0.9).q == 10);
  CHECK(EnergyScale::from_h(0.3).q == 10);
  CHECK_FALSE(EnergyScale::from_h(1.0 / 3.0 + 1e-7, 16).exact());

  const TorusGeometry g(4, 4);
  const ModelParams p(0.5, 1.0);
  CounterRng rng = CounterRng::stream(8, 1);
  for (int t = 0; t < 200; ++t) {
    SpinConfig x(g), y(g);
    for (int i = 0; i < 16; ++i) {
      x.set_spin(i, (rng.draw(t * 32 + i) & 1) ? +1 : -1);
      y.set_spin(i, (rng.draw(t * 32 + 16 + i) & 1) ? +1 : -1);
    }
    CHECK(virtual_energy_scaled(s, x) ==
          doctest::Approx(virtual_energy(p, x) * s.q).epsilon(1e-12));
    CHECK(delta_cost_scaled(s, x, y) ==
          doctest::Approx(delta_cost(p, x, y) * s.q).epsilon(1e-12));
    // Exact reversibility of scaled transition energies.
    CHECK(virtual_energy_scaled(s, x) + delta_cost_scaled(s, x, y) ==
          virtual_energy_scaled(s, y) + delta_cost_scaled(s, y, x));
  }
}
