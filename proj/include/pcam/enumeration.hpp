#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pcam/energy.hpp"
#include "pcam/geometry.hpp"
#include "pcam/kernel.hpp"
#include "pcam/params.hpp"

namespace pcam {

inline constexpr int kDefaultEnumCap = 13;  // sites; 8192 states

template <class E>
struct EnergyTraits;

template <>
struct EnergyTraits<std::int64_t> {
  static constexpr std::int64_t infinity = INT64_MAX;
  static bool same(std::int64_t a, std::int64_t b) { return a == b; }
};

template <>
struct EnergyTraits<double> {
  static constexpr double infinity = 1e300;
  static bool same(double a, double b) { return a < b ? b - a <= 1e-9 : a - b <= 1e-9; }
};

/// Fully enumerated state space with O(1) energy-cost evaluation.
///
/// Delta rows factorize over sites, so each row is stored as two half-word
/// subset-sum tables: delta(s, t) = dlo[s][t & lo_mask] + dhi[s][t >> lo_bits].
template <class E>
struct EnumTables {
  TorusGeometry geom;
  ModelParams params;
  EnergyScale scale;  // valid when E == int64_t
  int n = 0;
  int lo_bits = 0, hi_bits = 0;
  std::uint32_t nstates = 0, lo_size = 0, hi_size = 0, lo_mask = 0;

  std::vector<E> H;
  std::vector<std::uint8_t> trap;  // 0 none, 1 stable config, 2 stable-pair member
  std::vector<E> dlo, dhi;

  E delta(std::uint32_t s, std::uint32_t t) const {
    return dlo[std::size_t(s) * lo_size + (t & lo_mask)] +
           dhi[std::size_t(s) * hi_size + (t >> lo_bits)];
  }
  E trans_energy(std::uint32_t s, std::uint32_t t) const { return H[s] + delta(s, t); }

  double h_double(std::uint32_t s) const;
  double to_double(E v) const;

  SpinConfig config(std::uint32_t s) const { return SpinConfig::from_state_id(geom, s); }
};

using ExactTables = EnumTables<std::int64_t>;
using FloatTables = EnumTables<double>;

/// Enumerates all 2^n states (n <= cap). The exact variant requires h to have
/// a small-denominator rational representation.
ExactTables enumerate_exact(TorusGeometry g, const ModelParams& p, int cap = kDefaultEnumCap);
FloatTables enumerate_float(TorusGeometry g, const ModelParams& p, int cap = kDefaultEnumCap);

/// Per-state factorized log transition probabilities at one beta:
/// log p(s, t) = lo[s][t & lo_mask] + hi[s][t >> lo_bits].
struct LogProbTables {
  TorusGeometry geom;
  ModelParams params;
  int n = 0;
  int lo_bits = 0, hi_bits = 0;
  std::uint32_t nstates = 0, lo_size = 0, hi_size = 0, lo_mask = 0;
  std::vector<double> lo, hi;

  double logp(std::uint32_t s, std::uint32_t t) const {
    return lo[std::size_t(s) * lo_size + (t & lo_mask)] +
           hi[std::size_t(s) * hi_size + (t >> lo_bits)];
  }
};

LogProbTables build_log_prob_tables(TorusGeometry g, const ModelParams& p,
                                    int cap = kDefaultEnumCap);

/// Gibbs measure over the enumerated space, stored in log space.
struct GibbsTable {
  double log_z = 0.0;                // log sum_x exp(-beta G(x))
  std::vector<double> log_mu;        // normalized: logsumexp(log_mu) == 0
  std::vector<double> g_value;       // finite-beta Hamiltonian G(x)
};

GibbsTable build_gibbs(TorusGeometry g, const ModelParams& p, int cap = kDefaultEnumCap);

/// Numerically stable log(sum(exp(v))).
double log_sum_exp(const std::vector<double>& v);

/// Streaming log-sum-exp accumulator for sums of positive terms given in logs.
struct LogAccumulator {
  double mx = -1e308;
  double s = 0.0;
  void add(double l);
  double log_total() const;
};

}  // namespace pcam
