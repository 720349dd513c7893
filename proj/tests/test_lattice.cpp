#include <doctest.h>

#include "pcam/geometry.hpp"
#include "pcam/rng.hpp"

using namespace pcam;

TEST_CASE("geometry validation") {
  CHECK_THROWS(TorusGeometry(3, 4));
  CHECK_THROWS(TorusGeometry(4, 0));
  CHECK_THROWS(TorusGeometry(1, 1));
  const TorusGeometry g(4, 6);
  CHECK(g.sites() == 24);
  CHECK(g.index(-1, 6) == 3 * 6 + 0);
  CHECK(g.index(4, -1) == 0 * 6 + 5);
}

TEST_CASE("named configurations") {
  const TorusGeometry g(4, 4);
  const SpinConfig minus = named_config(g, Fill::Minus);
  for (int i = 0; i < 16; ++i) CHECK(minus.spin(i) == -1);

  const SpinConfig ce = named_config(g, Fill::ChessEven);
  CHECK(ce.spin(g.index(0, 0)) == +1);
  CHECK(ce.spin(g.index(0, 1)) == -1);

  // chess_odd is the bitwise complement of chess_even.
  const SpinConfig co = named_config(g, Fill::ChessOdd);
  for (int i = 0; i < 16; ++i) CHECK(co.spin(i) == -ce.spin(i));
}

TEST_CASE("local field") {
  const TorusGeometry g(4, 4);
  const SpinConfig plus = named_config(g, Fill::Plus);
  for (int i = 0; i < 16; ++i) CHECK(local_field(plus, i) == 4);

  const SpinConfig ce = named_config(g, Fill::ChessEven);
  for (int i = 0; i < 16; ++i) {
    if (ce.spin(i) == +1) CHECK(local_field(ce, i) == -4);
    // Parity identity S = -4 sigma(i) on chessboards.
    CHECK(local_field(ce, i) == -4 * ce.spin(i));
  }

  SpinConfig single = named_config(g, Fill::Minus);
  single.set_spin(g.index(0, 0), +1);
  CHECK(local_field(single, g.index(0, 0)) == -4);
  CHECK(local_field(single, g.index(0, 1)) == -2);
}

TEST_CASE("local field double-counts wrap neighbors on length-2 dims") {
  const TorusGeometry g(6, 2);
  const SpinConfig ce = named_config(g, Fill::ChessEven);
  for (int i = 0; i < g.sites(); ++i) CHECK(local_field(ce, i) == -4 * ce.spin(i));

  SpinConfig c = named_config(g, Fill::Minus);
  c.set_spin(g.index(0, 1), +1);
  // (0,0) sees (0,1) twice through the length-2 wrap.
  CHECK(local_field(c, g.index(0, 0)) == 0);
}

TEST_CASE("paint rectangle") {
  const TorusGeometry g(6, 6);
  const SpinConfig minus = named_config(g, Fill::Minus);

  const SpinConfig a = paint_rectangle(minus, Rectangle{{0, 0}, 2, 2}, Fill::Plus);
  CHECK(a.plus_count() == 4);

  const SpinConfig b = paint_rectangle(minus, Rectangle{{0, 0}, 2, 3}, Fill::ChessEven);
  CHECK(b.plus_count() == 3);

  const SpinConfig c = paint_rectangle(minus, Rectangle{{0, 0}, 6, 6}, Fill::Plus);
  CHECK(c == named_config(g, Fill::Plus));

  // Chess parity is global: painting away from the anchor keeps the pattern.
  const SpinConfig d = paint_rectangle(minus, Rectangle{{3, 2}, 2, 2}, Fill::ChessEven);
  CHECK(d.spin(g.index(3, 2)) == (((3 + 2) % 2 == 0) ? +1 : -1));

  // Idempotence and commutation on disjoint rectangles.
  const Rectangle r1{{0, 0}, 2, 2}, r2{{3, 3}, 2, 2};
  const SpinConfig e1 = paint_rectangle(paint_rectangle(minus, r1, Fill::Plus), r2, Fill::ChessOdd);
  const SpinConfig e2 = paint_rectangle(paint_rectangle(minus, r2, Fill::ChessOdd), r1, Fill::Plus);
  CHECK(e1 == e2);
  CHECK(paint_rectangle(e1, r1, Fill::Plus) == e1);
}

TEST_CASE("serialization round-trips") {
  const TorusGeometry g(4, 6);
  CounterRng rng = CounterRng::stream(7, 0);
  for (int trial = 0; trial < 50; ++trial) {
    SpinConfig c(g);
    for (int i = 0; i < g.sites(); ++i)
      c.set_spin(i, (rng.draw(trial * 100 + i) & 1) ? +1 : -1);
    CHECK(SpinConfig::from_grid(c.to_grid()) == c);
    CHECK(SpinConfig::from_hex(g, c.to_hex()) == c);
  }
  CHECK_THROWS(SpinConfig::from_hex(g, "zz"));
  CHECK_THROWS(SpinConfig::from_grid("+-\n+"));
}

TEST_CASE("rectangle interaction rules") {
  // Lattice distance 1 means touching; one empty column between rectangles is
  // distance 2.
  const TorusGeometry g(12, 12);
  const Rectangle a{{0, 0}, 2, 2};
  CHECK(lattice_distance(g, a, Rectangle{{0, 2}, 2, 2}) == 1);
  CHECK(lattice_distance(g, a, Rectangle{{0, 3}, 2, 2}) == 2);
  CHECK(lattice_distance(g, a, Rectangle{{0, 4}, 2, 2}) == 3);

  // Same chess parity at distance 3: non-interacting.
  CHECK_FALSE(rectangles_interacting(g, a, Fill::ChessEven, Rectangle{{0, 4}, 2, 2},
                                     Fill::ChessEven));
  // Same chess parity at distance 2: interacting.
  CHECK(rectangles_interacting(g, a, Fill::ChessEven, Rectangle{{0, 3}, 2, 2},
                               Fill::ChessEven));
  // Opposite parity at distance 1: non-interacting.
  CHECK_FALSE(rectangles_interacting(g, a, Fill::ChessEven, Rectangle{{0, 2}, 2, 2},
                                     Fill::ChessOdd));
  // Opposite parity at distance 2 matches no listed condition: interacting.
  CHECK(rectangles_interacting(g, a, Fill::ChessEven, Rectangle{{0, 3}, 2, 2},
                               Fill::ChessOdd));
  // Plus pair at distance 2: interacting.
  CHECK(rectangles_interacting(g, a, Fill::Plus, Rectangle{{0, 3}, 2, 2}, Fill::Plus));
  // Plus pair at distance 3: non-interacting.
  CHECK_FALSE(rectangles_interacting(g, a, Fill::Plus, Rectangle{{0, 4}, 2, 2}, Fill::Plus));
  // Chess/plus at distance 1 with equal interface sides: non-interacting.
  CHECK_FALSE(rectangles_interacting(g, a, Fill::ChessEven, Rectangle{{0, 2}, 2, 2},
                                     Fill::Plus));
  // Chess/plus at distance 1 with unequal interface sides: interacting.
  CHECK(rectangles_interacting(g, a, Fill::ChessEven, Rectangle{{0, 2}, 3, 2}, Fill::Plus));
  CHECK_THROWS(rectangles_interacting(g, a, Fill::Minus, a, Fill::Plus));
}

TEST_CASE("strip classification") {
  const TorusGeometry g(6, 8);
  CHECK(Rectangle{{0, 0}, 1, 8}.is_strip(g));
  CHECK(Rectangle{{0, 0}, 6, 2}.is_strip(g));
  CHECK_FALSE(Rectangle{{0, 0}, 5, 7}.is_strip(g));
}
