#include "pcam/landscape.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pcam/energy.hpp"

namespace pcam {

namespace {

// Disjoint sets with path compression; roots carry component bookkeeping.
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
};

}  // namespace

template <class E>
std::vector<E> bottleneck_sweep(const EnumTables<E>& t, std::uint32_t x) {
  const std::uint32_t n = t.nstates;
  std::vector<E> dist(n);
  std::vector<char> done(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) dist[v] = t.trans_energy(x, v);
  dist[x] = t.H[x];  // single-state path has height H(x)
  done[x] = 1;
  // Relax from x's row first, then repeatedly settle the min-dist state.
  for (std::uint32_t it = 1; it < n; ++it) {
    std::uint32_t u = n;
    E best{};
    for (std::uint32_t v = 0; v < n; ++v) {
      if (!done[v] && (u == n || dist[v] < best)) {
        u = v;
        best = dist[v];
      }
    }
    if (u == n) break;
    done[u] = 1;
    const E du = dist[u];
    const E* lo = &t.dlo[std::size_t(u) * t.lo_size];
    const E* hi = &t.dhi[std::size_t(u) * t.hi_size];
    const E hu = t.H[u];
    for (std::uint32_t v = 0; v < n; ++v) {
      if (done[v]) continue;
      const E w = hu + lo[v & t.lo_mask] + hi[v >> t.lo_bits];
      const E nd = w > du ? w : du;
      if (nd < dist[v]) dist[v] = nd;
    }
  }
  return dist;
}

template <class E>
Landscape<E>::Landscape(const EnumTables<E>& tables) : tables_(&tables) {
  const std::uint32_t n = tables.nstates;

  // Minimum spanning tree of the complete transition-energy graph (Prim).
  std::vector<E> best(n);
  std::vector<std::uint32_t> best_from(n, 0);
  std::vector<char> in_tree(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) best[v] = tables.trans_energy(0, v);
  in_tree[0] = 1;
  struct Edge {
    E w;
    std::uint32_t a, b;
  };
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (std::uint32_t it = 1; it < n; ++it) {
    std::uint32_t u = n;
    for (std::uint32_t v = 0; v < n; ++v)
      if (!in_tree[v] && (u == n || best[v] < best[u])) u = v;
    edges.push_back({best[u], best_from[u], u});
    in_tree[u] = 1;
    const E* lo = &tables.dlo[std::size_t(u) * tables.lo_size];
    const E* hi = &tables.dhi[std::size_t(u) * tables.hi_size];
    const E hu = tables.H[u];
    for (std::uint32_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      const E w = hu + lo[v & tables.lo_mask] + hi[v >> tables.lo_bits];
      if (w < best[v]) {
        best[v] = w;
        best_from[v] = u;
      }
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.w < b.w; });

  // Kruskal over the MST edges: merge tree, stability levels, filtration.
  v_.assign(n, EnergyTraits<E>::infinity);
  parent_.assign(n, -1);
  node_threshold_.clear();
  node_min_h_.clear();
  UnionFind uf(static_cast<int>(n));
  std::vector<int> comp_node(n);            // union-find root -> merge-tree node id
  std::vector<E> comp_min(n);               // component minimum energy
  std::vector<std::uint32_t> comp_rep(n);   // a state attaining the minimum
  std::vector<std::vector<std::uint32_t>> at_min(n);  // unassigned states at the minimum
  for (std::uint32_t s = 0; s < n; ++s) {
    comp_node[s] = static_cast<int>(s);
    comp_min[s] = tables.H[s];
    comp_rep[s] = s;
    at_min[s] = {s};
  }

  int next_node = static_cast<int>(n);
  for (const Edge& e : edges) {
    int ra = uf.find(static_cast<int>(e.a));
    int rb = uf.find(static_cast<int>(e.b));
    if (ra == rb) continue;
    events_.push_back({e.w, comp_rep[ra], comp_rep[rb], e.w - comp_min[ra], e.w - comp_min[rb]});

    // States sitting at the higher minimum get their stability level now.
    const bool a_higher = comp_min[rb] < comp_min[ra];
    const bool b_higher = comp_min[ra] < comp_min[rb];
    if (a_higher)
      for (std::uint32_t s : at_min[ra]) v_[s] = e.w - tables.H[s];
    if (b_higher)
      for (std::uint32_t s : at_min[rb]) v_[s] = e.w - tables.H[s];

    // New merge-tree node adopting both components.
    parent_.push_back(-1);
    node_threshold_.push_back(e.w);
    const int node = next_node++;
    parent_[comp_node[ra]] = node;
    parent_[comp_node[rb]] = node;
    node_min_h_.push_back(std::min(comp_min[ra], comp_min[rb]));

    uf.parent[ra] = rb;
    comp_node[rb] = node;
    if (b_higher) {
      comp_min[rb] = comp_min[ra];
      comp_rep[rb] = comp_rep[ra];
      at_min[rb] = std::move(at_min[ra]);
    } else if (!a_higher) {
      // Equal minima: both sides stay unassigned.
      auto& dst = at_min[rb];
      auto& srcv = at_min[ra];
      if (dst.size() < srcv.size()) dst.swap(srcv);
      dst.insert(dst.end(), srcv.begin(), srcv.end());
    }
  }

  // Metastable identification.
  gamma_m_ = E{};
  bool have_gamma = false;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (v_[s] == EnergyTraits<E>::infinity) {
      x_s_.push_back(s);
      continue;
    }
    if (!have_gamma || gamma_m_ < v_[s]) {
      gamma_m_ = v_[s];
      have_gamma = true;
    }
  }
  for (std::uint32_t s = 0; s < n; ++s)
    if (v_[s] != EnergyTraits<E>::infinity && EnergyTraits<E>::same(v_[s], gamma_m_))
      x_m_.push_back(s);
}

template <class E>
std::vector<std::uint32_t> Landscape<E>::states_above(E v) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t s = 0; s < tables_->nstates; ++s)
    if (v_[s] > v) out.push_back(s);
  return out;
}

template <class E>
E Landscape<E>::oracle_phi(std::uint32_t x, std::uint32_t y) const {
  if (x == y) return tables_->H[x];
  // Threshold at the lowest common ancestor in the merge tree.
  std::vector<char> seen(parent_.size(), 0);
  int a = static_cast<int>(x);
  while (a != -1) {
    seen[a] = 1;
    a = parent_[a];
  }
  int b = static_cast<int>(y);
  while (b != -1 && !seen[b]) b = parent_[b];
  if (b < static_cast<int>(tables_->nstates) || b == -1)
    throw std::logic_error("merge tree is not a single tree");
  return node_threshold_[b - tables_->nstates];
}

template <class E>
E Landscape<E>::bottleneck_phi(std::uint32_t x, std::uint32_t y) const {
  if (x == y) return tables_->H[x];
  const auto& t = *tables_;
  const std::uint32_t n = t.nstates;
  std::vector<E> dist(n);
  std::vector<char> done(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) dist[v] = t.trans_energy(x, v);
  done[x] = 1;
  for (;;) {
    std::uint32_t u = n;
    for (std::uint32_t v = 0; v < n; ++v)
      if (!done[v] && (u == n || dist[v] < dist[u])) u = v;
    if (u == y) return dist[y];
    done[u] = 1;
    const E du = dist[u];
    const E* lo = &t.dlo[std::size_t(u) * t.lo_size];
    const E* hi = &t.dhi[std::size_t(u) * t.hi_size];
    const E hu = t.H[u];
    for (std::uint32_t v = 0; v < n; ++v) {
      if (done[v]) continue;
      const E w = hu + lo[v & t.lo_mask] + hi[v >> t.lo_bits];
      const E nd = w > du ? w : du;
      if (nd < dist[v]) dist[v] = nd;
    }
  }
}

template <class E>
E Landscape<E>::comm_height(std::uint32_t x, std::uint32_t y, PhiMethod m) const {
  return m == PhiMethod::BottleneckSearch ? bottleneck_phi(x, y) : oracle_phi(x, y);
}

template <class E>
E Landscape<E>::stability_level_sweep(std::uint32_t x) const {
  const auto& t = *tables_;
  const std::uint32_t n = t.nstates;
  const E hx = t.H[x];
  std::vector<E> dist(n);
  std::vector<char> done(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) dist[v] = t.trans_energy(x, v);
  done[x] = 1;
  for (std::uint32_t it = 1; it < n; ++it) {
    std::uint32_t u = n;
    for (std::uint32_t v = 0; v < n; ++v)
      if (!done[v] && (u == n || dist[v] < dist[u])) u = v;
    if (t.H[u] < hx) return dist[u] - hx;  // first reachable lower-energy state
    done[u] = 1;
    const E du = dist[u];
    const E* lo = &t.dlo[std::size_t(u) * t.lo_size];
    const E* hi = &t.dhi[std::size_t(u) * t.hi_size];
    const E hu = t.H[u];
    for (std::uint32_t v = 0; v < n; ++v) {
      if (done[v]) continue;
      const E w = hu + lo[v & t.lo_mask] + hi[v >> t.lo_bits];
      const E nd = w > du ? w : du;
      if (nd < dist[v]) dist[v] = nd;
    }
  }
  return EnergyTraits<E>::infinity;
}

template <class E>
E Landscape<E>::maximal_depth_excluding(std::uint32_t s) const {
  // Rising-threshold replay: when a component not containing s joins the
  // component of s, its depth (threshold minus component minimum) is the depth
  // of a maximal cycle of X \ {s}.
  const std::uint32_t n = tables_->nstates;
  UnionFind uf(static_cast<int>(n));
  std::vector<E> comp_min(n);
  std::vector<char> has_s(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) comp_min[v] = tables_->H[v];
  has_s[s] = 1;
  E out{};
  bool any = false;
  for (const auto& e : events_) {
    int ra = uf.find(static_cast<int>(e.rep_a));
    int rb = uf.find(static_cast<int>(e.rep_b));
    if (ra == rb) continue;
    const bool sa = has_s[ra], sb = has_s[rb];
    if (sa != sb) {
      const int other = sa ? rb : ra;
      const E depth = e.threshold - comp_min[other];
      if (!any || out < depth) {
        out = depth;
        any = true;
      }
    }
    uf.parent[ra] = rb;
    comp_min[rb] = std::min(comp_min[ra], comp_min[rb]);
    has_s[rb] = sa || sb;
  }
  return out;
}

namespace {
std::string fmt_energy(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

template <class E>
std::string Landscape<E>::landscape_csv() const {
  std::ostringstream out;
  out << "# pcam-csv v1 landscape\n";
  out << "state_hex,H,trap,V\n";
  for (std::uint32_t s = 0; s < tables_->nstates; ++s) {
    out << tables_->config(s).to_hex() << ',' << fmt_energy(tables_->to_double(tables_->H[s]))
        << ',' << int(tables_->trap[s]) << ',';
    if (v_[s] == EnergyTraits<E>::infinity)
      out << "inf";
    else
      out << fmt_energy(tables_->to_double(v_[s]));
    out << '\n';
  }
  return out.str();
}

template <class E>
std::string Landscape<E>::filtration_csv() const {
  std::ostringstream out;
  out << "# pcam-csv v1 filtration\n";
  out << "threshold,rep_a_hex,rep_b_hex,depth_a,depth_b\n";
  for (const auto& e : events_) {
    out << fmt_energy(tables_->to_double(e.threshold)) << ','
        << tables_->config(e.rep_a).to_hex() << ',' << tables_->config(e.rep_b).to_hex() << ','
        << fmt_energy(tables_->to_double(e.depth_a)) << ','
        << fmt_energy(tables_->to_double(e.depth_b)) << '\n';
  }
  return out.str();
}

template class Landscape<std::int64_t>;
template class Landscape<double>;
template std::vector<std::int64_t> bottleneck_sweep(const EnumTables<std::int64_t>&,
                                                    std::uint32_t);
template std::vector<double> bottleneck_sweep(const EnumTables<double>&, std::uint32_t);

double comm_height_restricted(const ModelParams& p, const std::vector<SpinConfig>& states,
                              int x_idx, int y_idx) {
  const int k = static_cast<int>(states.size());
  std::vector<double> hvals(k);
  for (int i = 0; i < k; ++i) hvals[i] = virtual_energy(p, states[i]);
  auto w = [&](int a, int b) { return hvals[a] + delta_cost(p, states[a], states[b]); };
  if (x_idx == y_idx) return hvals[x_idx];
  std::vector<double> dist(k, HUGE_VAL);
  std::vector<char> done(k, 0);
  for (int v = 0; v < k; ++v)
    if (v != x_idx) dist[v] = w(x_idx, v);
  done[x_idx] = 1;
  for (;;) {
    int u = -1;
    for (int v = 0; v < k; ++v)
      if (!done[v] && (u == -1 || dist[v] < dist[u])) u = v;
    if (u < 0) throw std::logic_error("restricted search exhausted");
    if (u == y_idx) return dist[u];
    done[u] = 1;
    for (int v = 0; v < k; ++v) {
      if (done[v]) continue;
      const double nd = std::max(dist[u], w(u, v));
      if (nd < dist[v]) dist[v] = nd;
    }
  }
}

}  // namespace pcam
