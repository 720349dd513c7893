#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pcam/geometry.hpp"
#include "pcam/kernel.hpp"
#include "pcam/params.hpp"
#include "pcam/step_kernel.hpp"

namespace pcam {

/// Target-set membership test cheap enough to run once per simulated step.
class TargetSpec {
 public:
  enum class Kind { Config, ConfigSet, Trap, MagnetizationAtLeast };

  static TargetSpec config(const SpinConfig& c, std::string name);
  static TargetSpec config_set(const std::vector<SpinConfig>& cs, std::string name);
  static TargetSpec trap(std::string name = "trap");
  static TargetSpec magnetization_at_least(int m, std::string name = "mag");

  const std::string& name() const { return name_; }
  bool matches(const ModelParams& p, const TorusGeometry& g,
               const std::vector<std::uint8_t>& bytes, int plus_count) const;

 private:
  Kind kind_ = Kind::Trap;
  std::string name_;
  std::vector<std::vector<std::uint8_t>> members_;
  std::vector<int> member_plus_;
  int mag_threshold_ = 0;
};

struct TrialResult {
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  double beta = 0.0;
  std::uint64_t hit_time = 0;  // steps; meaningful only when !capped
  int target_index = -1;       // which target matched first
  bool capped = false;
};

struct HittingOptions {
  int trials = 100;
  std::uint64_t step_cap = 1'000'000;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency
  bool allow_simd = true;
};

/// Independent trials from `start`; each trial uses rng sub-stream
/// stream(seed, trial) with one draw per site per step in row-major order.
std::vector<TrialResult> run_hitting_trials(const ModelParams& p, const SpinConfig& start,
                                            const std::vector<TargetSpec>& targets,
                                            const HittingOptions& opt);

struct SummaryStats {
  double mean = 0.0;
  double stddev = 0.0;
  double stderr_mean = 0.0;
  std::uint64_t count = 0;
  std::uint64_t capped = 0;
};

SummaryStats summarize_hit_times(const std::vector<TrialResult>& results);

struct VisitBeforeResult {
  double estimate = 0.0;  // P(tau_A < tau_B)
  double wilson_lo = 0.0;
  double wilson_hi = 1.0;
  int hits_a = 0;
  int hits_b = 0;
  int capped = 0;
};

VisitBeforeResult visit_before(const ModelParams& p, const SpinConfig& start,
                               const TargetSpec& a, const TargetSpec& b,
                               const HittingOptions& opt);

struct ArrheniusFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least-squares fit of log(mean hit time) against beta.
ArrheniusFit arrhenius_fit(const std::vector<std::pair<double, double>>& beta_mean);

struct RecurrenceReport {
  std::uint64_t trap_cap = 0;    // ceil(exp(beta (V* + eps)))
  std::uint64_t ground_cap = 0;  // ceil(exp(beta (Gamma + eps)))
  int trials = 0;
  int trap_exceed = 0;    // trials not reaching {+1, c^e, c^o, -1} within trap_cap
  int ground_exceed = 0;  // trials not reaching +1 within ground_cap
  double trap_exceed_hi = 1.0;  // Wilson upper bounds
  double ground_exceed_hi = 1.0;
  std::uint64_t trap_hit_median = 0;
};

/// Uniform random starts; exceedance frequencies for the two recurrence
/// thresholds of the trap set and of the ground state.
RecurrenceReport recurrence_check(const ModelParams& p, TorusGeometry g, double eps,
                                  double v_star_value, double gamma_value,
                                  const HittingOptions& opt);

/// Wilson score interval for k successes out of n at z = 1.96.
std::pair<double, double> wilson_interval(int k, int n);

}  // namespace pcam
