#pragma once

#include <cmath>
#include <vector>

#include "pcam/geometry.hpp"
#include "pcam/params.hpp"
#include "pcam/rng.hpp"

namespace pcam {

/// log(1/(1+e^{-x})) evaluated without overflow for any x.
inline double log_sigmoid(double x) {
  return x < 0.0 ? x - std::log1p(std::exp(x)) : -std::log1p(std::exp(-x));
}

inline double sigmoid(double x) {
  return x < 0.0 ? std::exp(x) / (1.0 + std::exp(x)) : 1.0 / (1.0 + std::exp(-x));
}

/// p_{i,sigma}(a) = 1/(1+exp(-2 beta a (S_sigma(i)+h))).
double local_prob(const ModelParams& p, const SpinConfig& c, int site, int a);

/// Per-site factorized update probabilities for one source configuration.
/// p_minus(i) is stored as the exact complement 1 - p_plus(i).
struct KernelRow {
  std::vector<double> p_plus;
  std::vector<double> log_p_plus;
  std::vector<double> log_p_minus;

  double p_minus(int i) const { return 1.0 - p_plus[i]; }
};

KernelRow kernel_row(const ModelParams& p, const SpinConfig& c);

/// log p(src, dst) = sum_i log p_{i,src}(dst(i)); finite for every pair.
double log_step_prob(const ModelParams& p, const SpinConfig& src, const SpinConfig& dst);

/// One synchronous update. Site i consumes draw counter `step_base + i` of
/// `rng` (row-major order), one draw per site.
SpinConfig sample_step(const ModelParams& p, const SpinConfig& c, const CounterRng& rng,
                       std::uint64_t step_base = 0);

/// Zero-temperature map T: output spin = sign of S_sigma(i) + h.
SpinConfig zero_temp_map(const ModelParams& p, const SpinConfig& c);

/// T except site j keeps its input spin.
SpinConfig pinned_map_fix(const ModelParams& p, const SpinConfig& c, int j);
/// T except site j negates its input spin.
SpinConfig pinned_map_flip(const ModelParams& p, const SpinConfig& c, int j);

inline SpinConfig pinned_map_fix(const ModelParams& p, const SpinConfig& c, Site j) {
  return pinned_map_fix(p, c, c.geometry().index(j));
}
inline SpinConfig pinned_map_flip(const ModelParams& p, const SpinConfig& c, Site j) {
  return pinned_map_flip(p, c, c.geometry().index(j));
}

bool is_stable_config(const ModelParams& p, const SpinConfig& c);  // T(c) == c
bool is_stable_pair(const ModelParams& p, const SpinConfig& c);    // T(c) != c, T(T(c)) == c
bool is_trap(const ModelParams& p, const SpinConfig& c);

}  // namespace pcam
