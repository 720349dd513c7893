#include "pcam/geometry.hpp"

#include <bit>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace pcam {

TorusGeometry::TorusGeometry(int r, int c) : rows(r), cols(c) {
  if (r < 2 || c < 2 || (r % 2) || (c % 2))
    throw std::invalid_argument("torus dimensions must be even and >= 2");
}

std::array<int, 4> TorusGeometry::neighbors(int idx) const {
  const int r = idx / cols, c = idx % cols;
  const int up = (r == 0 ? rows - 1 : r - 1);
  const int dn = (r == rows - 1 ? 0 : r + 1);
  const int lf = (c == 0 ? cols - 1 : c - 1);
  const int rt = (c == cols - 1 ? 0 : c + 1);
  return {up * cols + c, dn * cols + c, r * cols + lf, r * cols + rt};
}

const char* fill_name(Fill f) {
  switch (f) {
    case Fill::Plus: return "plus";
    case Fill::Minus: return "minus";
    case Fill::ChessEven: return "chess_even";
    default: return "chess_odd";
  }
}

Fill fill_from_name(const std::string& name) {
  if (name == "plus") return Fill::Plus;
  if (name == "minus") return Fill::Minus;
  if (name == "chess_even") return Fill::ChessEven;
  if (name == "chess_odd") return Fill::ChessOdd;
  throw std::invalid_argument("unknown fill: " + name);
}

bool Rectangle::contains(const TorusGeometry& g, int idx) const {
  const int r = idx / g.cols, c = idx % g.cols;
  int dr = r - g.wrap_row(anchor.row);
  if (dr < 0) dr += g.rows;
  int dc = c - g.wrap_col(anchor.col);
  if (dc < 0) dc += g.cols;
  return dr < height && dc < width;
}

std::vector<int> Rectangle::site_indices(const TorusGeometry& g) const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(height) * width);
  for (int dr = 0; dr < height && dr < g.rows; ++dr)
    for (int dc = 0; dc < width && dc < g.cols; ++dc)
      out.push_back(g.index(anchor.row + dr, anchor.col + dc));
  return out;
}

SpinConfig::SpinConfig(TorusGeometry g)
    : geom_(g), words_((g.sites() + 63) / 64, 0) {}

void SpinConfig::set_spin(int idx, int s) {
  const std::uint64_t mask = std::uint64_t{1} << (idx & 63);
  if (s > 0)
    words_[idx >> 6] |= mask;
  else
    words_[idx >> 6] &= ~mask;
}

void SpinConfig::flip(int idx) { words_[idx >> 6] ^= std::uint64_t{1} << (idx & 63); }

int SpinConfig::plus_count() const {
  int n = 0;
  for (auto w : words_) n += std::popcount(w);
  return n;
}

std::uint64_t SpinConfig::state_id() const {
  if (sites() > 64) throw std::logic_error("state_id needs <= 64 sites");
  return words_.empty() ? 0 : words_[0];
}

SpinConfig SpinConfig::from_state_id(TorusGeometry g, std::uint64_t id) {
  if (g.sites() > 64) throw std::logic_error("from_state_id needs <= 64 sites");
  SpinConfig c(g);
  c.words_[0] = id;
  return c;
}

std::string SpinConfig::to_grid() const {
  std::string out;
  out.reserve(static_cast<std::size_t>(geom_.rows) * (geom_.cols + 1));
  for (int r = 0; r < geom_.rows; ++r) {
    for (int c = 0; c < geom_.cols; ++c)
      out.push_back(is_plus(r * geom_.cols + c) ? '+' : '-');
    out.push_back('\n');
  }
  return out;
}

SpinConfig SpinConfig::from_grid(const std::string& grid) {
  std::vector<std::string> lines;
  std::istringstream in(grid);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) lines.push_back(line);
  if (lines.empty()) throw std::invalid_argument("empty grid");
  const int rows = static_cast<int>(lines.size());
  const int cols = static_cast<int>(lines[0].size());
  TorusGeometry g(rows, cols);
  SpinConfig cfg(g);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(lines[r].size()) != cols)
      throw std::invalid_argument("ragged grid");
    for (int c = 0; c < cols; ++c) {
      const char ch = lines[r][c];
      if (ch != '+' && ch != '-') throw std::invalid_argument("grid must be '+'/'-'");
      cfg.set_spin(r * cols + c, ch == '+' ? +1 : -1);
    }
  }
  return cfg;
}

std::string SpinConfig::to_hex() const {
  // Little-endian nibbles: first hex digit holds sites 0..3.
  const int digits = (sites() + 3) / 4;
  std::string out;
  out.reserve(digits);
  for (int d = 0; d < digits; ++d) {
    const int nib = static_cast<int>((words_[(d * 4) >> 6] >> ((d * 4) & 63)) & 0xF);
    out.push_back("0123456789abcdef"[nib]);
  }
  return out;
}

SpinConfig SpinConfig::from_hex(TorusGeometry g, const std::string& hex) {
  const int digits = (g.sites() + 3) / 4;
  if (static_cast<int>(hex.size()) != digits)
    throw std::invalid_argument("hex length mismatch");
  SpinConfig cfg(g);
  for (int d = 0; d < digits; ++d) {
    const char ch = hex[d];
    int nib;
    if (ch >= '0' && ch <= '9')
      nib = ch - '0';
    else if (ch >= 'a' && ch <= 'f')
      nib = ch - 'a' + 10;
    else if (ch >= 'A' && ch <= 'F')
      nib = ch - 'A' + 10;
    else
      throw std::invalid_argument("bad hex digit");
    cfg.words_[(d * 4) >> 6] |= std::uint64_t(nib) << ((d * 4) & 63);
  }
  // Reject set padding bits so canonical form is preserved.
  const int n = g.sites();
  if (n & 63) {
    const std::uint64_t pad = ~((std::uint64_t{1} << (n & 63)) - 1);
    if (cfg.words_.back() & pad) throw std::invalid_argument("padding bits set");
  }
  return cfg;
}

SpinConfig named_config(TorusGeometry g, Fill kind) {
  SpinConfig c(g);
  for (int r = 0; r < g.rows; ++r)
    for (int cc = 0; cc < g.cols; ++cc)
      c.set_spin(r * g.cols + cc, fill_sign(kind, r, cc));
  return c;
}

int local_field(const SpinConfig& config, int site_idx) {
  const auto nb = config.geometry().neighbors(site_idx);
  int s = 0;
  for (int j : nb) s += config.spin(j);
  return s;
}

SpinConfig paint_rectangle(const SpinConfig& base, const Rectangle& rect, Fill fill) {
  const TorusGeometry& g = base.geometry();
  SpinConfig out = base;
  for (int dr = 0; dr < rect.height && dr < g.rows; ++dr) {
    const int r = g.wrap_row(rect.anchor.row + dr);
    for (int dc = 0; dc < rect.width && dc < g.cols; ++dc) {
      const int c = g.wrap_col(rect.anchor.col + dc);
      out.set_spin(r * g.cols + c, fill_sign(fill, r, c));
    }
  }
  return out;
}

int lattice_distance(const TorusGeometry& g, const Rectangle& r1, const Rectangle& r2) {
  const auto s1 = r1.site_indices(g);
  const auto s2 = r2.site_indices(g);
  int best = g.rows + g.cols;
  for (int a : s1) {
    const int ar = a / g.cols, ac = a % g.cols;
    for (int b : s2) {
      const int br = b / g.cols, bc = b % g.cols;
      int dr = std::abs(ar - br);
      dr = std::min(dr, g.rows - dr);
      int dc = std::abs(ac - bc);
      dc = std::min(dc, g.cols - dc);
      best = std::min(best, dr + dc);
    }
  }
  return best;
}

namespace {

bool chess_fill(Fill f) { return f == Fill::ChessEven || f == Fill::ChessOdd; }

// Facing at lattice distance 1 along one axis with identical spans on the other.
bool equal_interface_sides(const TorusGeometry& g, const Rectangle& a, const Rectangle& b) {
  const int ar0 = g.wrap_row(a.anchor.row), ac0 = g.wrap_col(a.anchor.col);
  const int br0 = g.wrap_row(b.anchor.row), bc0 = g.wrap_col(b.anchor.col);
  const bool rows_aligned = ar0 == br0 && a.height == b.height;
  const bool cols_aligned = ac0 == bc0 && a.width == b.width;
  if (cols_aligned) {
    // b directly below or above a (touching along a full row side).
    if (g.wrap_row(ar0 + a.height) == br0) return true;
    if (g.wrap_row(br0 + b.height) == ar0) return true;
  }
  if (rows_aligned) {
    if (g.wrap_col(ac0 + a.width) == bc0) return true;
    if (g.wrap_col(bc0 + b.width) == ac0) return true;
  }
  return false;
}

}  // namespace

bool rectangles_interacting(const TorusGeometry& g, const Rectangle& r1, Fill f1,
                            const Rectangle& r2, Fill f2) {
  if (f1 == Fill::Minus || f2 == Fill::Minus)
    throw std::invalid_argument("minus fill has no interaction rule");
  const int d = lattice_distance(g, r1, r2);
  if (d >= 3 && f1 == f2) return false;
  if (d == 1 && chess_fill(f1) && chess_fill(f2) && f1 != f2) return false;
  if (d == 1 &&
      ((chess_fill(f1) && f2 == Fill::Plus) || (f1 == Fill::Plus && chess_fill(f2))) &&
      equal_interface_sides(g, r1, r2))
    return false;
  return true;
}

}  // namespace pcam
