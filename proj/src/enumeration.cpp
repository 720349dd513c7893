#include "pcam/enumeration.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace pcam {

namespace {

void check_cap(TorusGeometry g, int cap) {
  if (g.sites() > cap)
    throw std::invalid_argument("state space too large: " + std::to_string(g.sites()) +
                                " sites exceeds enumeration cap " + std::to_string(cap));
  if (g.sites() > 31) throw std::invalid_argument("enumeration limited to 31 sites");
}

// Neighbor-count of site i in state bits (0..4 up-neighbors, duplicates on
// length-2 dims), giving S = 2*count - 4.
struct NeighborIndex {
  std::vector<std::array<int, 4>> nb;
  explicit NeighborIndex(TorusGeometry g) {
    nb.resize(g.sites());
    for (int i = 0; i < g.sites(); ++i) nb[i] = g.neighbors(i);
  }
  int field(std::uint32_t bits, int i) const {
    int c = 0;
    for (int j : nb[i]) c += (bits >> j) & 1u;
    return 2 * c - 4;
  }
};

template <class E, class PerSite>
void build_tables(TorusGeometry g, const ModelParams& p, int cap, EnumTables<E>& t,
                  PerSite per_site) {
  check_cap(g, cap);
  t.geom = g;
  t.params = p;
  t.n = g.sites();
  t.nstates = std::uint32_t{1} << t.n;
  t.lo_bits = (t.n + 1) / 2;
  t.hi_bits = t.n - t.lo_bits;
  t.lo_size = std::uint32_t{1} << t.lo_bits;
  t.hi_size = std::uint32_t{1} << t.hi_bits;
  t.lo_mask = t.lo_size - 1;

  const NeighborIndex nbi(g);
  t.H.resize(t.nstates);
  t.trap.resize(t.nstates);
  t.dlo.assign(std::size_t(t.nstates) * t.lo_size, E{});
  t.dhi.assign(std::size_t(t.nstates) * t.hi_size, E{});

  std::vector<E> cost_plus(t.n), cost_minus(t.n);
  for (std::uint32_t s = 0; s < t.nstates; ++s) {
    E h_energy{};
    std::uint32_t tmap = 0;
    for (int i = 0; i < t.n; ++i) {
      const int field = nbi.field(s, i);
      per_site(field, (s >> i) & 1u, h_energy, cost_plus[i], cost_minus[i]);
      if (field >= 0) tmap |= std::uint32_t{1} << i;  // field + h > 0 iff S >= 0 (S even, h in (0,1))
    }
    t.H[s] = h_energy;

    // Trap flag from the zero-temperature map.
    if (tmap == s) {
      t.trap[s] = 1;
    } else {
      std::uint32_t t2 = 0;
      for (int i = 0; i < t.n; ++i)
        if (nbi.field(tmap, i) >= 0) t2 |= std::uint32_t{1} << i;
      t.trap[s] = (t2 == s) ? 2 : 0;
    }

    // Subset-sum tables over the two halves, all-minus baseline folded into lo.
    E* lo = &t.dlo[std::size_t(s) * t.lo_size];
    E* hi = &t.dhi[std::size_t(s) * t.hi_size];
    E base{};
    for (int i = 0; i < t.n; ++i) base += cost_minus[i];
    lo[0] = base;
    for (std::uint32_t m = 1; m < t.lo_size; ++m) {
      const int b = std::countr_zero(m);
      lo[m] = lo[m & (m - 1)] + cost_plus[b] - cost_minus[b];
    }
    hi[0] = E{};
    for (std::uint32_t m = 1; m < t.hi_size; ++m) {
      const int b = std::countr_zero(m);
      const int site = t.lo_bits + b;
      hi[m] = hi[m & (m - 1)] + cost_plus[site] - cost_minus[site];
    }
  }
}

}  // namespace

template <>
double EnumTables<std::int64_t>::to_double(std::int64_t v) const {
  return static_cast<double>(v) / static_cast<double>(scale.q);
}
template <>
double EnumTables<double>::to_double(double v) const {
  return v;
}
template <class E>
double EnumTables<E>::h_double(std::uint32_t s) const {
  return to_double(H[s]);
}
template struct EnumTables<std::int64_t>;
template struct EnumTables<double>;

ExactTables enumerate_exact(TorusGeometry g, const ModelParams& p, int cap) {
  const EnergyScale scale = EnergyScale::from_h(p.h);
  if (!scale.exact())
    throw std::invalid_argument("h has no small rational representation; use float mode");
  ExactTables t;
  t.scale = scale;
  const std::int64_t q = scale.q, pp = scale.p;
  build_tables<std::int64_t>(g, p, cap, t,
                             [&](int field, std::uint32_t up, std::int64_t& h_acc,
                                 std::int64_t& cplus, std::int64_t& cminus) {
                               const std::int64_t f = q * field + pp;
                               const std::int64_t a = f < 0 ? -f : f;
                               h_acc += -(up ? pp : -pp) - a;
                               cplus = f < 0 ? 2 * a : 0;
                               cminus = f > 0 ? 2 * a : 0;
                             });
  return t;
}

FloatTables enumerate_float(TorusGeometry g, const ModelParams& p, int cap) {
  FloatTables t;
  const double h = p.h;
  build_tables<double>(g, p, cap, t,
                       [&](int field, std::uint32_t up, double& h_acc, double& cplus,
                           double& cminus) {
                         const double f = field + h;
                         const double a = std::fabs(f);
                         h_acc += -(up ? h : -h) - a;
                         cplus = f < 0 ? 2 * a : 0;
                         cminus = f > 0 ? 2 * a : 0;
                       });
  return t;
}

LogProbTables build_log_prob_tables(TorusGeometry g, const ModelParams& p, int cap) {
  check_cap(g, cap);
  LogProbTables t;
  t.geom = g;
  t.params = p;
  t.n = g.sites();
  t.nstates = std::uint32_t{1} << t.n;
  t.lo_bits = (t.n + 1) / 2;
  t.hi_bits = t.n - t.lo_bits;
  t.lo_size = std::uint32_t{1} << t.lo_bits;
  t.hi_size = std::uint32_t{1} << t.hi_bits;
  t.lo_mask = t.lo_size - 1;

  const NeighborIndex nbi(g);
  t.lo.assign(std::size_t(t.nstates) * t.lo_size, 0.0);
  t.hi.assign(std::size_t(t.nstates) * t.hi_size, 0.0);
  std::vector<double> lp(t.n), lm(t.n);
  for (std::uint32_t s = 0; s < t.nstates; ++s) {
    for (int i = 0; i < t.n; ++i) {
      const double x = 2.0 * p.beta * (nbi.field(s, i) + p.h);
      lp[i] = log_sigmoid(x);
      lm[i] = log_sigmoid(-x);
    }
    double* lo = &t.lo[std::size_t(s) * t.lo_size];
    double* hi = &t.hi[std::size_t(s) * t.hi_size];
    double base = 0.0;
    for (int i = 0; i < t.n; ++i) base += lm[i];
    lo[0] = base;
    for (std::uint32_t m = 1; m < t.lo_size; ++m) {
      const int b = std::countr_zero(m);
      lo[m] = lo[m & (m - 1)] + lp[b] - lm[b];
    }
    hi[0] = 0.0;
    for (std::uint32_t m = 1; m < t.hi_size; ++m) {
      const int b = std::countr_zero(m);
      const int site = t.lo_bits + b;
      hi[m] = hi[m & (m - 1)] + lp[site] - lm[site];
    }
  }
  return t;
}

double log_sum_exp(const std::vector<double>& v) {
  double mx = -HUGE_VAL;
  for (double x : v) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

void LogAccumulator::add(double l) {
  if (l <= -1e308) return;
  if (l <= mx) {
    s += std::exp(l - mx);
  } else {
    s = s * std::exp(mx - l) + 1.0;
    mx = l;
  }
}

double LogAccumulator::log_total() const {
  if (s <= 0.0) return -1e308;
  return mx + std::log(s);
}

GibbsTable build_gibbs(TorusGeometry g, const ModelParams& p, int cap) {
  check_cap(g, cap);
  const int n = g.sites();
  const std::uint32_t nstates = std::uint32_t{1} << n;
  const NeighborIndex nbi(g);
  GibbsTable gt;
  gt.g_value.resize(nstates);
  gt.log_mu.resize(nstates);
  const double log2 = 0.6931471805599453094;
  for (std::uint32_t s = 0; s < nstates; ++s) {
    double mag = 0.0, lc = 0.0;
    for (int i = 0; i < n; ++i) {
      mag += ((s >> i) & 1u) ? 1.0 : -1.0;
      const double x = p.beta * (nbi.field(s, i) + p.h);
      const double a = std::fabs(x);
      lc += a + std::log1p(std::exp(-2.0 * a)) - log2;
    }
    gt.g_value[s] = -p.h * mag - lc / p.beta;
    gt.log_mu[s] = -p.beta * gt.g_value[s];
  }
  gt.log_z = log_sum_exp(gt.log_mu);
  for (auto& lm : gt.log_mu) lm -= gt.log_z;
  return gt;
}

}  // namespace pcam
