#include "pcam/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pcam {

ExactChain::ExactChain(TorusGeometry g, const ModelParams& p, int cap)
    : geom_(g), params_(p) {
  if (g.sites() > 12)
    throw std::invalid_argument("ExactChain dense solves are limited to 12 sites");
  lp_ = build_log_prob_tables(g, p, cap);
  gibbs_ = build_gibbs(g, p, cap);
  mu_.resize(lp_.nstates);
  for (std::uint32_t x = 0; x < lp_.nstates; ++x) mu_[x] = std::exp(gibbs_.log_mu[x]);
}

const Eigen::MatrixXd& ExactChain::dense_p() {
  if (!p_) {
    const std::uint32_t n = lp_.nstates;
    p_ = std::make_unique<Eigen::MatrixXd>(n, n);
    for (std::uint32_t x = 0; x < n; ++x)
      for (std::uint32_t y = 0; y < n; ++y) (*p_)(x, y) = std::exp(lp_.logp(x, y));
  }
  return *p_;
}

void ExactChain::ensure_lu() {
  if (lu_) return;
  const std::uint32_t n = lp_.nstates;
  const Eigen::MatrixXd& p = dense_p();
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - p;
  m.noalias() += Eigen::VectorXd::Ones(n) * mu_.transpose();
  lu_ = std::make_unique<Eigen::PartialPivLU<Eigen::MatrixXd>>(m);
}

Eigen::VectorXd ExactChain::refined_solve(const Eigen::VectorXd& b) {
  ensure_lu();
  const Eigen::MatrixXd& p = dense_p();
  const std::uint32_t n = lp_.nstates;
  Eigen::VectorXd x = lu_->solve(b);
  // Iterative refinement with long-double residuals of M x = b,
  // M x = x - P x + 1 (mu.x).
  std::vector<long double> acc(n);
  for (int pass = 0; pass < 3; ++pass) {
    std::fill(acc.begin(), acc.end(), 0.0L);
    long double mudot = 0.0L;
    for (std::uint32_t j = 0; j < n; ++j)
      mudot += static_cast<long double>(mu_[j]) * x[j];
    for (std::uint32_t j = 0; j < n; ++j) {
      const long double xj = x[j];
      if (xj == 0.0L) continue;
      const double* col = &p(0, j);
      for (std::uint32_t i = 0; i < n; ++i) acc[i] += col[i] * xj;
    }
    Eigen::VectorXd r(n);
    long double rmax = 0.0L, xmax = 0.0L;
    for (std::uint32_t i = 0; i < n; ++i) {
      const long double mx = static_cast<long double>(x[i]) - acc[i] + mudot;
      const long double ri = static_cast<long double>(b[i]) - mx;
      r[i] = static_cast<double>(ri);
      rmax = std::max(rmax, ri < 0 ? -ri : ri);
      const long double xa = x[i] < 0 ? -static_cast<long double>(x[i]) : x[i];
      xmax = std::max(xmax, xa);
    }
    if (rmax <= 1e-16L * (1.0L + xmax)) break;
    x += lu_->solve(r);
  }
  return x;
}

Eigen::VectorXd ExactChain::absorbing_solve(const std::vector<std::uint32_t>& absorbing,
                                            const Eigen::VectorXd& rhs) {
  if (absorbing.empty()) throw std::invalid_argument("absorbing set must be nonempty");
  ensure_lu();
  const std::uint32_t n = lp_.nstates;
  const int k = static_cast<int>(absorbing.size());

  Eigen::VectorXd r_tilde = rhs;
  for (std::uint32_t a : absorbing) r_tilde[a] = 0.0;

  // u = M^{-1} r_tilde + sum_a lambda_a M^{-1} e_a + c 1, with u|_A = 0 and
  // mu^T M^{-1} (r_tilde + sum lambda e_a) = 0.
  Eigen::VectorXd v0 = refined_solve(r_tilde);
  Eigen::MatrixXd vs(n, k);
  for (int j = 0; j < k; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[absorbing[j]] = 1.0;
    vs.col(j) = refined_solve(e);
  }

  Eigen::MatrixXd small(k + 1, k + 1);
  Eigen::VectorXd srhs(k + 1);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) small(i, j) = vs(absorbing[i], j);
    small(i, k) = 1.0;
    srhs[i] = -v0[absorbing[i]];
  }
  for (int j = 0; j < k; ++j) small(k, j) = mu_.dot(vs.col(j));
  small(k, k) = 0.0;
  srhs[k] = -mu_.dot(v0);

  const Eigen::VectorXd sol = small.fullPivLu().solve(srhs);
  Eigen::VectorXd u = v0;
  for (int j = 0; j < k; ++j) u += sol[j] * vs.col(j);
  u.array() += sol[k];
  for (std::uint32_t a : absorbing) u[a] = 0.0;  // exact boundary values
  return u;
}

HarmonicSolve ExactChain::equilibrium_potential(const std::vector<std::uint32_t>& y_set,
                                                const std::vector<std::uint32_t>& z_set) {
  if (y_set.empty() || z_set.empty())
    throw std::invalid_argument("equilibrium potential needs nonempty Y and Z");
  for (std::uint32_t y : y_set)
    for (std::uint32_t z : z_set)
      if (y == z) throw std::invalid_argument("Y and Z must be disjoint");

  const std::uint32_t n = lp_.nstates;
  const Eigen::MatrixXd& p = dense_p();

  // h = g + u with g the boundary extension (1 on Y) and u vanishing on
  // A = Y u Z: ((I-P)u)(x) = (P g)(x) for interior x.
  std::vector<std::uint32_t> a_set = y_set;
  a_set.insert(a_set.end(), z_set.begin(), z_set.end());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (std::uint32_t x = 0; x < n; ++x) {
    double acc = 0.0;
    for (std::uint32_t y : y_set) acc += p(x, y);
    rhs[x] = acc;
  }
  Eigen::VectorXd u = absorbing_solve(a_set, rhs);
  HarmonicSolve out;
  out.y_set = y_set;
  out.z_set = z_set;
  out.values = u;
  for (std::uint32_t y : y_set) out.values[y] = 1.0;

  // Residual of harmonicity over interior states.
  std::vector<char> boundary(n, 0);
  for (std::uint32_t a : a_set) boundary[a] = 1;
  double res = 0.0;
  const Eigen::VectorXd ph = p * out.values;
  for (std::uint32_t x = 0; x < n; ++x)
    if (!boundary[x]) res = std::max(res, std::fabs(out.values[x] - ph[x]));
  out.residual = res;
  return out;
}

double ExactChain::log_dirichlet_form(const Eigen::VectorXd& f) {
  const std::uint32_t n = lp_.nstates;
  LogAccumulator acc;
  for (std::uint32_t y = 0; y < n; ++y) {
    const double lmy = gibbs_.log_mu[y];
    for (std::uint32_t z = y + 1; z < n; ++z) {
      const double d = f[y] - f[z];
      if (d == 0.0) continue;
      // mu(y)p(y,z) = mu(z)p(z,y); count unordered pairs once.
      acc.add(lmy + lp_.logp(y, z) + 2.0 * std::log(std::fabs(d)));
    }
  }
  return acc.log_total();
}

double ExactChain::log_capacity(const std::vector<std::uint32_t>& y_set,
                                const std::vector<std::uint32_t>& z_set) {
  const HarmonicSolve h = equilibrium_potential(y_set, z_set);
  return log_dirichlet_form(h.values);
}

double ExactChain::log_capacity_escape(const std::vector<std::uint32_t>& y_set,
                                       const std::vector<std::uint32_t>& z_set) {
  // cap(Y,Z) = sum_{y in Y} mu(y) P_y(tau_Z < tau_Y); the escape probability is
  // one step into h_{Z,Y}.
  const HarmonicSolve h = equilibrium_potential(z_set, y_set);
  const Eigen::MatrixXd& p = dense_p();
  LogAccumulator acc;
  for (std::uint32_t y : y_set) {
    double esc = 0.0;
    for (std::uint32_t x = 0; x < lp_.nstates; ++x) esc += p(y, x) * h.values[x];
    if (esc > 0.0) acc.add(gibbs_.log_mu[y] + std::log(esc));
  }
  return acc.log_total();
}

double ExactChain::mean_hitting(std::uint32_t x, const std::vector<std::uint32_t>& target) {
  const std::uint32_t n = lp_.nstates;
  Eigen::VectorXd rhs = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd u = absorbing_solve(target, rhs);
  for (std::uint32_t a : target) {
    if (a == x) {
      // Return time with the t > 0 convention: one step, then hit from there.
      const Eigen::MatrixXd& p = dense_p();
      double e = 1.0;
      for (std::uint32_t y = 0; y < n; ++y) e += p(x, y) * u[y];
      return e;
    }
  }
  return u[x];
}

double ExactChain::mean_hitting_set(const std::vector<std::uint32_t>& starts,
                                    const std::vector<std::uint32_t>& target) {
  double wsum = 0.0, acc = 0.0;
  double lmax = -HUGE_VAL;
  for (std::uint32_t s : starts) lmax = std::max(lmax, gibbs_.log_mu[s]);
  for (std::uint32_t s : starts) {
    const double w = std::exp(gibbs_.log_mu[s] - lmax);
    wsum += w;
    acc += w * mean_hitting(s, target);
  }
  return acc / wsum;
}

ExactChain::HittingProb ExactChain::hitting_prob(std::uint32_t x,
                                                 const std::vector<std::uint32_t>& y_set,
                                                 const std::vector<std::uint32_t>& z_set) {
  for (std::uint32_t y : y_set)
    if (y == x) throw std::invalid_argument("x must lie outside Y");
  for (std::uint32_t z : z_set)
    if (z == x) throw std::invalid_argument("x must lie outside Z");
  const HarmonicSolve h = equilibrium_potential(y_set, z_set);
  HittingProb out;
  out.prob = h.values[x];
  const std::vector<std::uint32_t> xs{x};
  out.cap_ratio_bound =
      std::exp(log_capacity(xs, y_set) - log_capacity(xs, z_set));
  return out;
}

Eigen::VectorXd ExactChain::hitting_distribution(std::uint32_t x,
                                                 const std::vector<std::uint32_t>& target) {
  const int k = static_cast<int>(target.size());
  Eigen::VectorXd out(k);
  if (k == 1) {
    out[0] = 1.0;
    return out;
  }
  for (int i = 0; i < k; ++i) {
    std::vector<std::uint32_t> rest;
    for (int j = 0; j < k; ++j)
      if (j != i) rest.push_back(target[j]);
    const HarmonicSolve h = equilibrium_potential({target[i]}, rest);
    out[i] = x == target[i] ? 1.0 : h.values[x];
  }
  return out;
}

double ExactChain::pta_metastable_ratio(const std::vector<std::uint32_t>& m_set) {
  if (m_set.size() < 2) throw std::invalid_argument("pta ratio needs |M| >= 2");
  const std::uint32_t n = lp_.nstates;
  const Eigen::MatrixXd& p = dense_p();

  // mu(x)/cap(x, M) = G_M(x,x), the diagonal of the Green function of the
  // chain killed on M.
  std::vector<char> in_m(n, 0);
  for (std::uint32_t s : m_set) in_m[s] = 1;
  std::vector<std::uint32_t> interior;
  interior.reserve(n - m_set.size());
  for (std::uint32_t s = 0; s < n; ++s)
    if (!in_m[s]) interior.push_back(s);
  const int ni = static_cast<int>(interior.size());
  Eigen::MatrixXd a(ni, ni);
  for (int i = 0; i < ni; ++i)
    for (int j = 0; j < ni; ++j)
      a(i, j) = (i == j ? 1.0 : 0.0) - p(interior[i], interior[j]);
  const Eigen::MatrixXd green = a.partialPivLu().inverse();
  double num = 0.0;
  for (int i = 0; i < ni; ++i) num = std::max(num, green(i, i));

  double den = HUGE_VAL;
  for (std::uint32_t x : m_set) {
    std::vector<std::uint32_t> rest;
    for (std::uint32_t y : m_set)
      if (y != x) rest.push_back(y);
    // mu(x)/cap(x, M\{x}) = expected visits to x before hitting M\{x}.
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs[x] = 1.0;
    const Eigen::VectorXd g = absorbing_solve(rest, rhs);
    den = std::min(den, g[x]);
  }
  return num / den;
}

double ExactChain::prefactor_extract(const std::vector<std::uint32_t>& starts,
                                     const std::vector<std::uint32_t>& target, double gamma) {
  LogAccumulator mu_acc;
  for (std::uint32_t s : starts) mu_acc.add(gibbs_.log_mu[s]);
  const double logcap = log_capacity(starts, target);
  return std::exp(mu_acc.log_total() - logcap - params_.beta * gamma);
}

double ExactChain::stationarity_residual() {
  const std::uint32_t n = lp_.nstates;
  double worst = 0.0;
  for (std::uint32_t y = 0; y < n; ++y) {
    LogAccumulator acc;
    for (std::uint32_t x = 0; x < n; ++x) acc.add(gibbs_.log_mu[x] + lp_.logp(x, y));
    const double rel = std::fabs(std::expm1(acc.log_total() - gibbs_.log_mu[y]));
    worst = std::max(worst, rel);
  }
  return worst;
}

}  // namespace pcam
