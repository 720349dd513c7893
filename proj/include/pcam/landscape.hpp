#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcam/enumeration.hpp"

namespace pcam {

enum class PhiMethod { BottleneckSearch, ThresholdOracle };

/// One union event of the rising-threshold filtration. Components are named by
/// their minimum-energy representative state at merge time.
template <class E>
struct FiltrationEvent {
  E threshold;
  std::uint32_t rep_a, rep_b;
  E depth_a, depth_b;  // threshold minus each side's component minimum energy
};

/// Exact energy landscape of an enumerated instance: per-state stability
/// levels, metastable set, and the single-linkage merge tree of transition
/// energies (the persistent form of the threshold-connectivity oracle).
template <class E>
class Landscape {
 public:
  explicit Landscape(const EnumTables<E>& tables);

  const EnumTables<E>& tables() const { return *tables_; }

  E h(std::uint32_t s) const { return tables_->H[s]; }

  /// Stability level V_x (scaled); infinity for ground states.
  E stability_level(std::uint32_t s) const { return v_[s]; }
  bool is_ground(std::uint32_t s) const { return v_[s] == EnergyTraits<E>::infinity; }

  E gamma_m() const { return gamma_m_; }
  const std::vector<std::uint32_t>& ground_states() const { return x_s_; }
  const std::vector<std::uint32_t>& metastable_states() const { return x_m_; }
  std::vector<std::uint32_t> states_above(E v) const;  // X_V = {x : V_x > v}

  /// Communication height between two states.
  E comm_height(std::uint32_t x, std::uint32_t y, PhiMethod m) const;

  /// Maximal depth of the maximal cycles inside X minus {s}.
  E maximal_depth_excluding(std::uint32_t s) const;

  /// Independent per-state sweep: best-first expansion from x until a strictly
  /// lower-energy state is reached.
  E stability_level_sweep(std::uint32_t x) const;

  const std::vector<FiltrationEvent<E>>& filtration_events() const { return events_; }

  std::string landscape_csv() const;
  std::string filtration_csv() const;

 private:
  const EnumTables<E>* tables_;
  std::vector<E> v_;
  E gamma_m_{};
  std::vector<std::uint32_t> x_s_, x_m_;

  // Merge tree: leaves are states, internal nodes appended in threshold order.
  std::vector<int> parent_;
  std::vector<E> node_threshold_;  // internal nodes only (index - nstates)
  std::vector<E> node_min_h_;
  std::vector<FiltrationEvent<E>> events_;

  E bottleneck_phi(std::uint32_t x, std::uint32_t y) const;
  E oracle_phi(std::uint32_t x, std::uint32_t y) const;
};

using ExactLandscape = Landscape<std::int64_t>;
using FloatLandscape = Landscape<double>;

/// Bottleneck best-first sweep from x over all states; dist[y] = Phi(x, y)
/// once the sweep finishes.
template <class E>
std::vector<E> bottleneck_sweep(const EnumTables<E>& t, std::uint32_t x);

/// Upper bound on Phi(x, y) within a caller-supplied restricted set of
/// configurations (the complete graph on the subset).
double comm_height_restricted(const ModelParams& p, const std::vector<SpinConfig>& states,
                              int x_idx, int y_idx);

}  // namespace pcam
