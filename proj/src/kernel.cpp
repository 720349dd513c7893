#include "pcam/kernel.hpp"

#include <stdexcept>

#include "pcam/step_kernel.hpp"

namespace pcam {

double local_prob(const ModelParams& p, const SpinConfig& c, int site, int a) {
  const double x = 2.0 * p.beta * a * (local_field(c, site) + p.h);
  return sigmoid(x);
}

KernelRow kernel_row(const ModelParams& p, const SpinConfig& c) {
  const int n = c.sites();
  KernelRow row;
  row.p_plus.resize(n);
  row.log_p_plus.resize(n);
  row.log_p_minus.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = 2.0 * p.beta * (local_field(c, i) + p.h);
    row.p_plus[i] = sigmoid(x);
    row.log_p_plus[i] = log_sigmoid(x);
    row.log_p_minus[i] = log_sigmoid(-x);
  }
  return row;
}

double log_step_prob(const ModelParams& p, const SpinConfig& src, const SpinConfig& dst) {
  if (!(src.geometry() == dst.geometry()))
    throw std::invalid_argument("log_step_prob: geometry mismatch");
  const int n = src.sites();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = 2.0 * p.beta * dst.spin(i) * (local_field(src, i) + p.h);
    sum += log_sigmoid(x);
  }
  return sum;
}

SpinConfig sample_step(const ModelParams& p, const SpinConfig& c, const CounterRng& rng,
                       std::uint64_t step_base) {
  const StepThresholds th = StepThresholds::make(p);
  const auto src = to_bytes(c);
  std::vector<std::uint8_t> dst(src.size());
  step_scalar(th, c.geometry(), src.data(), dst.data(), rng.key, step_base);
  return from_bytes(c.geometry(), dst);
}

SpinConfig zero_temp_map(const ModelParams& p, const SpinConfig& c) {
  const int n = c.sites();
  SpinConfig out(c.geometry());
  for (int i = 0; i < n; ++i)
    out.set_spin(i, local_field(c, i) + p.h > 0.0 ? +1 : -1);
  return out;
}

SpinConfig pinned_map_fix(const ModelParams& p, const SpinConfig& c, int j) {
  SpinConfig out = zero_temp_map(p, c);
  out.set_spin(j, c.spin(j));
  return out;
}

SpinConfig pinned_map_flip(const ModelParams& p, const SpinConfig& c, int j) {
  SpinConfig out = zero_temp_map(p, c);
  out.set_spin(j, -c.spin(j));
  return out;
}

bool is_stable_config(const ModelParams& p, const SpinConfig& c) {
  return zero_temp_map(p, c) == c;
}

bool is_stable_pair(const ModelParams& p, const SpinConfig& c) {
  const SpinConfig t = zero_temp_map(p, c);
  if (t == c) return false;
  return zero_temp_map(p, t) == c;
}

bool is_trap(const ModelParams& p, const SpinConfig& c) {
  const SpinConfig t = zero_temp_map(p, c);
  return t == c || zero_temp_map(p, t) == c;
}

}  // namespace pcam
