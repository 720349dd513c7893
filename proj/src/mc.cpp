#include "pcam/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <thread>

#include "pcam/rng.hpp"

namespace pcam {

TargetSpec TargetSpec::config(const SpinConfig& c, std::string name) {
  TargetSpec t;
  t.kind_ = Kind::Config;
  t.name_ = std::move(name);
  t.members_.push_back(to_bytes(c));
  t.member_plus_.push_back(c.plus_count());
  return t;
}

TargetSpec TargetSpec::config_set(const std::vector<SpinConfig>& cs, std::string name) {
  TargetSpec t;
  t.kind_ = Kind::ConfigSet;
  t.name_ = std::move(name);
  for (const auto& c : cs) {
    t.members_.push_back(to_bytes(c));
    t.member_plus_.push_back(c.plus_count());
  }
  return t;
}

TargetSpec TargetSpec::trap(std::string name) {
  TargetSpec t;
  t.kind_ = Kind::Trap;
  t.name_ = std::move(name);
  return t;
}

TargetSpec TargetSpec::magnetization_at_least(int m, std::string name) {
  TargetSpec t;
  t.kind_ = Kind::MagnetizationAtLeast;
  t.name_ = std::move(name);
  t.mag_threshold_ = m;
  return t;
}

namespace {

// T map on byte lattices; shares the neighbor-count rule with the step kernel.
void t_map_bytes(const TorusGeometry& g, const std::uint8_t* src, std::uint8_t* dst) {
  const int rows = g.rows, cols = g.cols;
  for (int r = 0; r < rows; ++r) {
    const std::uint8_t* up = src + (r == 0 ? rows - 1 : r - 1) * cols;
    const std::uint8_t* dn = src + (r == rows - 1 ? 0 : r + 1) * cols;
    const std::uint8_t* row = src + r * cols;
    std::uint8_t* out = dst + r * cols;
    for (int c = 0; c < cols; ++c) {
      const int lf = (c == 0 ? cols - 1 : c - 1);
      const int rt = (c == cols - 1 ? 0 : c + 1);
      // S + h > 0 iff at least two up-neighbors (S = 2k - 4, h in (0,1)).
      out[c] = (up[c] + dn[c] + row[lf] + row[rt]) >= 2 ? 1 : 0;
    }
  }
}

}  // namespace

bool TargetSpec::matches(const ModelParams& p, const TorusGeometry& g,
                         const std::vector<std::uint8_t>& bytes, int plus_count) const {
  (void)p;
  switch (kind_) {
    case Kind::Config:
    case Kind::ConfigSet: {
      const std::size_t n = bytes.size();
      for (std::size_t i = 0; i < members_.size(); ++i) {
        if (member_plus_[i] != plus_count) continue;
        if (std::memcmp(members_[i].data(), bytes.data(), n) == 0) return true;
      }
      return false;
    }
    case Kind::Trap: {
      std::vector<std::uint8_t> t1(bytes.size()), t2(bytes.size());
      t_map_bytes(g, bytes.data(), t1.data());
      if (t1 == bytes) return true;
      t_map_bytes(g, t1.data(), t2.data());
      return t2 == bytes;
    }
    case Kind::MagnetizationAtLeast:
      return 2 * plus_count - static_cast<int>(bytes.size()) >= mag_threshold_;
  }
  return false;
}

namespace {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

struct TrialRunner {
  const ModelParams& params;
  const TorusGeometry geom;
  const std::vector<TargetSpec>& targets;
  const HittingOptions& opt;
  StepThresholds thresholds;
  StepFn step;
  std::vector<std::uint8_t> start_bytes;

  TrialResult run(std::uint64_t trial) const {
    const CounterRng rng = CounterRng::stream(opt.seed, trial);
    const int n = geom.sites();
    std::vector<std::uint8_t> cur = start_bytes, nxt(n);
    TrialResult res;
    res.seed = opt.seed;
    res.trial = trial;
    res.beta = params.beta;
    for (std::uint64_t t = 0; t < opt.step_cap; ++t) {
      step(thresholds, geom, cur.data(), nxt.data(),
           rng.key, (t + 1) * static_cast<std::uint64_t>(n));
      cur.swap(nxt);
      int plus = 0;
      for (int i = 0; i < n; ++i) plus += cur[i];
      for (std::size_t k = 0; k < targets.size(); ++k) {
        if (targets[k].matches(params, geom, cur, plus)) {
          res.hit_time = t + 1;
          res.target_index = static_cast<int>(k);
          return res;
        }
      }
    }
    res.capped = true;
    return res;
  }
};

}  // namespace

std::vector<TrialResult> run_hitting_trials(const ModelParams& p, const SpinConfig& start,
                                            const std::vector<TargetSpec>& targets,
                                            const HittingOptions& opt) {
  if (targets.empty()) throw std::invalid_argument("need at least one target");
  TrialRunner runner{p,
                     start.geometry(),
                     targets,
                     opt,
                     StepThresholds::make(p),
                     select_step_kernel(opt.allow_simd),
                     to_bytes(start)};
  std::vector<TrialResult> results(opt.trials);
  const int threads = std::min(resolve_threads(opt.threads), std::max(1, opt.trials));
  std::atomic<int> next{0};
  auto work = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= opt.trials) return;
      results[i] = runner.run(static_cast<std::uint64_t>(i));
    }
  };
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return results;
}

SummaryStats summarize_hit_times(const std::vector<TrialResult>& results) {
  SummaryStats s;
  double sum = 0.0, sum2 = 0.0;
  for (const auto& r : results) {
    if (r.capped) {
      ++s.capped;
      continue;
    }
    ++s.count;
    sum += static_cast<double>(r.hit_time);
    sum2 += static_cast<double>(r.hit_time) * static_cast<double>(r.hit_time);
  }
  if (s.count > 0) {
    s.mean = sum / s.count;
    if (s.count > 1) {
      const double var = (sum2 - sum * sum / s.count) / (s.count - 1);
      s.stddev = var > 0 ? std::sqrt(var) : 0.0;
      s.stderr_mean = s.stddev / std::sqrt(static_cast<double>(s.count));
    }
  }
  return s;
}

std::pair<double, double> wilson_interval(int k, int n) {
  if (n == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double z2 = z * z;
  const double ph = static_cast<double>(k) / n;
  const double denom = 1.0 + z2 / n;
  const double center = (ph + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

VisitBeforeResult visit_before(const ModelParams& p, const SpinConfig& start,
                               const TargetSpec& a, const TargetSpec& b,
                               const HittingOptions& opt) {
  const auto results = run_hitting_trials(p, start, {a, b}, opt);
  VisitBeforeResult out;
  for (const auto& r : results) {
    if (r.capped)
      ++out.capped;
    else if (r.target_index == 0)
      ++out.hits_a;
    else
      ++out.hits_b;
  }
  const int decided = out.hits_a + out.hits_b;
  if (decided > 0) out.estimate = static_cast<double>(out.hits_a) / decided;
  std::tie(out.wilson_lo, out.wilson_hi) = wilson_interval(out.hits_a, decided);
  return out;
}

ArrheniusFit arrhenius_fit(const std::vector<std::pair<double, double>>& beta_mean) {
  if (beta_mean.size() < 3)
    throw std::invalid_argument("arrhenius fit needs >= 3 beta values");
  const int n = static_cast<int>(beta_mean.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& [beta, mean] : beta_mean) {
    if (!(mean > 0)) throw std::invalid_argument("nonpositive mean hit time");
    const double y = std::log(mean);
    sx += beta;
    sy += y;
    sxx += beta * beta;
    sxy += beta * y;
    syy += y * y;
  }
  ArrheniusFit f;
  const double vxx = sxx - sx * sx / n;
  const double vxy = sxy - sx * sy / n;
  const double vyy = syy - sy * sy / n;
  f.slope = vxy / vxx;
  f.intercept = (sy - f.slope * sx) / n;
  f.r2 = vyy > 0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
  return f;
}

RecurrenceReport recurrence_check(const ModelParams& p, TorusGeometry g, double eps,
                                  double v_star_value, double gamma_value,
                                  const HittingOptions& opt) {
  if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
  RecurrenceReport rep;
  rep.trials = opt.trials;
  rep.trap_cap = static_cast<std::uint64_t>(std::ceil(std::exp(p.beta * (v_star_value + eps))));
  rep.ground_cap =
      static_cast<std::uint64_t>(std::ceil(std::exp(p.beta * (gamma_value + eps))));

  const StepThresholds th = StepThresholds::make(p);
  const StepFn step = select_step_kernel(opt.allow_simd);
  const int n = g.sites();

  std::vector<std::vector<std::uint8_t>> traps;
  for (Fill f : {Fill::Plus, Fill::ChessEven, Fill::ChessOdd, Fill::Minus})
    traps.push_back(to_bytes(named_config(g, f)));
  const std::vector<std::uint8_t> plus_bytes = traps[0];

  std::vector<std::uint64_t> trap_times(opt.trials, 0);
  std::vector<char> trap_ok(opt.trials, 0), ground_ok(opt.trials, 0);

  std::atomic<int> next{0};
  auto work = [&] {
    std::vector<std::uint8_t> cur(n), nxt(n);
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= opt.trials) return;
      const CounterRng rng = CounterRng::stream(opt.seed, static_cast<std::uint64_t>(i));
      for (int s = 0; s < n; ++s) cur[s] = rng.draw(s) & 1;  // uniform random start
      bool hit_trap = false, hit_ground = false;
      for (std::uint64_t t = 0; t < rep.ground_cap && !(hit_trap && hit_ground); ++t) {
        step(th, g, cur.data(), nxt.data(), rng.key, (t + 1) * static_cast<std::uint64_t>(n));
        cur.swap(nxt);
        if (!hit_trap) {
          for (const auto& trap : traps) {
            if (std::memcmp(trap.data(), cur.data(), n) == 0) {
              hit_trap = true;
              trap_times[i] = t + 1;
              if (t + 1 <= rep.trap_cap) trap_ok[i] = 1;
              break;
            }
          }
        }
        if (!hit_ground && std::memcmp(plus_bytes.data(), cur.data(), n) == 0) {
          hit_ground = true;
          ground_ok[i] = 1;
        }
      }
    }
  };
  const int threads = std::min(resolve_threads(opt.threads), std::max(1, opt.trials));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(work);
    for (auto& th2 : pool) th2.join();
  }

  for (int i = 0; i < opt.trials; ++i) {
    if (!trap_ok[i]) ++rep.trap_exceed;
    if (!ground_ok[i]) ++rep.ground_exceed;
  }
  rep.trap_exceed_hi = wilson_interval(rep.trap_exceed, opt.trials).second;
  rep.ground_exceed_hi = wilson_interval(rep.ground_exceed, opt.trials).second;
  std::vector<std::uint64_t> hits;
  for (int i = 0; i < opt.trials; ++i)
    if (trap_times[i] > 0) hits.push_back(trap_times[i]);
  if (!hits.empty()) {
    std::nth_element(hits.begin(), hits.begin() + hits.size() / 2, hits.end());
    rep.trap_hit_median = hits[hits.size() / 2];
  }
  return rep;
}

}  // namespace pcam
