#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace pcam {

struct Site {
  int row = 0;
  int col = 0;
  friend bool operator==(const Site&, const Site&) = default;
};

/// Even-by-even torus with row-major site linearization (index = row*cols + col).
///
/// Both dimensions must be even so that chessboard configurations are globally
/// consistent under wrap-around. Dimensions of length 2 are allowed: there the
/// two wrap neighbors of a site coincide and are counted twice by local_field.
struct TorusGeometry {
  int rows = 0;
  int cols = 0;

  TorusGeometry() = default;
  TorusGeometry(int r, int c);

  int sites() const { return rows * cols; }
  int wrap_row(int r) const { return ((r % rows) + rows) % rows; }
  int wrap_col(int c) const { return ((c % cols) + cols) % cols; }
  int index(int r, int c) const { return wrap_row(r) * cols + wrap_col(c); }
  int index(Site s) const { return index(s.row, s.col); }
  Site site(int idx) const { return Site{idx / cols, idx % cols}; }

  /// Neighbor indices in fixed order up, down, left, right.
  /// On a length-2 dimension the two entries along that axis coincide.
  std::array<int, 4> neighbors(int idx) const;

  friend bool operator==(const TorusGeometry&, const TorusGeometry&) = default;
};

enum class Fill : std::uint8_t { Plus, Minus, ChessEven, ChessOdd };

const char* fill_name(Fill f);
Fill fill_from_name(const std::string& name);

/// Sign of the global pattern `f` at lattice position (row, col).
/// Chessboard parity is anchored at (0,0): chess_even has +1 where row+col is even.
inline int fill_sign(Fill f, int row, int col) {
  switch (f) {
    case Fill::Plus: return +1;
    case Fill::Minus: return -1;
    case Fill::ChessEven: return ((row + col) & 1) ? -1 : +1;
    default: return ((row + col) & 1) ? +1 : -1;
  }
}

/// Axis-aligned rectangle of `height` rows by `width` cols anchored at `anchor`,
/// with wrap-around. A rectangle spanning a full torus dimension is a strip.
struct Rectangle {
  Site anchor;
  int height = 1;
  int width = 1;

  int l() const { return height < width ? height : width; }
  int m() const { return height < width ? width : height; }
  bool winds_rows(const TorusGeometry& g) const { return height >= g.rows; }
  bool winds_cols(const TorusGeometry& g) const { return width >= g.cols; }
  bool is_strip(const TorusGeometry& g) const { return winds_rows(g) || winds_cols(g); }
  bool contains(const TorusGeometry& g, int idx) const;
  std::vector<int> site_indices(const TorusGeometry& g) const;
};

/// Bit-packed spin configuration; bit i set means spin +1 at site i.
/// Padding bits above `sites()` are always zero, so equality and hashing are
/// plain word comparisons.
class SpinConfig {
 public:
  SpinConfig() = default;
  explicit SpinConfig(TorusGeometry g);

  const TorusGeometry& geometry() const { return geom_; }
  int sites() const { return geom_.sites(); }

  int spin(int idx) const {
    return (words_[idx >> 6] >> (idx & 63)) & 1 ? +1 : -1;
  }
  bool is_plus(int idx) const { return (words_[idx >> 6] >> (idx & 63)) & 1; }
  void set_spin(int idx, int s);
  void flip(int idx);

  int plus_count() const;
  int magnetization() const { return 2 * plus_count() - sites(); }

  const std::vector<std::uint64_t>& words() const { return words_; }

  /// State id for enumeration (requires sites() <= 64).
  std::uint64_t state_id() const;
  static SpinConfig from_state_id(TorusGeometry g, std::uint64_t id);

  std::string to_grid() const;
  static SpinConfig from_grid(const std::string& grid);

  std::string to_hex() const;
  static SpinConfig from_hex(TorusGeometry g, const std::string& hex);

  friend bool operator==(const SpinConfig& a, const SpinConfig& b) {
    return a.geom_ == b.geom_ && a.words_ == b.words_;
  }

 private:
  TorusGeometry geom_;
  std::vector<std::uint64_t> words_;
};

SpinConfig named_config(TorusGeometry g, Fill kind);

/// Sum of the four nearest-neighbor spins with periodic wrap (the local field S).
int local_field(const SpinConfig& config, int site_idx);
inline int local_field(const SpinConfig& config, Site s) {
  return local_field(config, config.geometry().index(s));
}

SpinConfig paint_rectangle(const SpinConfig& base, const Rectangle& rect, Fill fill);

/// Minimal torus L1 distance between the two site sets.
int lattice_distance(const TorusGeometry& g, const Rectangle& r1, const Rectangle& r2);

/// True when none of the five non-interaction conditions holds.
/// Fills are restricted to {plus, chess_even, chess_odd}.
bool rectangles_interacting(const TorusGeometry& g, const Rectangle& r1, Fill f1,
                            const Rectangle& r2, Fill f2);

}  // namespace pcam
