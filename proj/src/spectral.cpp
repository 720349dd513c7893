#include "pcam/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "pcam/kernel.hpp"

namespace pcam {

TransitionOperator TransitionOperator::assemble_dense(TorusGeometry g, const ModelParams& p,
                                                      int cap) {
  TransitionOperator op;
  op.mode_ = Mode::Dense;
  op.geom_ = g;
  op.params_ = p;
  op.lp_ = build_log_prob_tables(g, p, cap);
  op.gibbs_ = build_gibbs(g, p, cap);
  const std::uint32_t n = op.lp_.nstates;
  op.p_.resize(n, n);
  for (std::uint32_t x = 0; x < n; ++x)
    for (std::uint32_t y = 0; y < n; ++y) op.p_(x, y) = std::exp(op.lp_.logp(x, y));
  return op;
}

TransitionOperator TransitionOperator::assemble_factorized(TorusGeometry g,
                                                           const ModelParams& p, int cap) {
  TransitionOperator op;
  op.mode_ = Mode::Factorized;
  op.geom_ = g;
  op.params_ = p;
  op.lp_ = build_log_prob_tables(g, p, cap);
  op.gibbs_ = build_gibbs(g, p, cap);
  return op;
}

const Eigen::MatrixXd& TransitionOperator::dense() const {
  if (mode_ != Mode::Dense) throw std::logic_error("operator is factorized");
  return p_;
}

Eigen::VectorXd TransitionOperator::apply_transpose(const Eigen::VectorXd& x) const {
  const std::uint32_t n = lp_.nstates;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (std::uint32_t s = 0; s < n; ++s) {
    const double xs = x[s];
    if (xs == 0.0) continue;
    for (std::uint32_t t = 0; t < n; ++t) y[t] += xs * std::exp(lp_.logp(s, t));
  }
  return y;
}

double TransitionOperator::max_row_sum_error() const {
  const std::uint32_t n = lp_.nstates;
  double worst = 0.0;
  for (std::uint32_t x = 0; x < n; ++x) {
    double acc = 0.0, comp = 0.0;
    for (std::uint32_t y = 0; y < n; ++y) {
      // Kahan summation; rows have 2^n positive terms.
      const double v = mode_ == Mode::Dense ? p_(x, y) : std::exp(lp_.logp(x, y));
      const double t = acc + v;
      if (std::fabs(acc) >= std::fabs(v))
        comp += (acc - t) + v;
      else
        comp += (v - t) + acc;
      acc = t;
    }
    worst = std::max(worst, std::fabs(acc + comp - 1.0));
  }
  return worst;
}

namespace {

// Additive symmetrized Laplacian: off-diagonals -sqrt(p(x,y)p(y,x)) and
// diagonals sum_{y != x} p(x,y); assembled without cancellation.
Eigen::MatrixXd symmetric_laplacian(const TransitionOperator& op) {
  const auto& lp = op.log_probs();
  const std::uint32_t n = lp.nstates;
  Eigen::MatrixXd l(n, n);
  for (std::uint32_t x = 0; x < n; ++x) {
    long double diag = 0.0L;
    for (std::uint32_t y = 0; y < n; ++y) {
      if (y == x) continue;
      diag += std::exp(lp.logp(x, y));
      if (y > x) {
        const double v = -std::exp(0.5 * (lp.logp(x, y) + lp.logp(y, x)));
        l(x, y) = v;
        l(y, x) = v;
      }
    }
    l(x, x) = static_cast<double>(diag);
  }
  return l;
}

// log of the Dirichlet form of f = v / sqrt(mu), evaluated in log space:
// every term is positive, so the value keeps full relative precision however
// far below machine epsilon it sits relative to ||L||.
double log_dirichlet_of_vector(const TransitionOperator& op, const Eigen::VectorXd& v) {
  const auto& lp = op.log_probs();
  const auto& mu = op.gibbs().log_mu;
  const std::uint32_t n = lp.nstates;
  std::vector<double> logf(n);
  std::vector<int> sign(n);
  for (std::uint32_t x = 0; x < n; ++x) {
    sign[x] = v[x] > 0 ? 1 : (v[x] < 0 ? -1 : 0);
    logf[x] = v[x] == 0.0 ? -HUGE_VAL : std::log(std::fabs(v[x])) - 0.5 * mu[x];
  }
  LogAccumulator num;
  for (std::uint32_t y = 0; y < n; ++y) {
    for (std::uint32_t z = y + 1; z < n; ++z) {
      // log |f(y) - f(z)| by scaled subtraction.
      double ld;
      if (sign[y] == 0) {
        ld = logf[z];
      } else if (sign[z] == 0) {
        ld = logf[y];
      } else {
        const double m = std::max(logf[y], logf[z]);
        const double d = sign[y] * std::exp(logf[y] - m) - sign[z] * std::exp(logf[z] - m);
        ld = d == 0.0 ? -HUGE_VAL : m + std::log(std::fabs(d));
      }
      if (ld == -HUGE_VAL) continue;
      num.add(mu[y] + lp.logp(y, z) + 2.0 * ld);
    }
  }
  return num.log_total();
}

// Variance of f = v / sqrt(mu) under mu; v is unit and orthogonal to sqrt(mu),
// so Var(f) = sum mu f^2 - (sum mu f)^2 = |v|^2 - (w.v)^2 = 1 exactly.
// Rayleigh quotients over span{v1, v2} therefore reduce to the 2x2 Dirichlet
// matrix in that basis.
double quotient_over_span(const TransitionOperator& op, const Eigen::MatrixXd& basis) {
  const int k = static_cast<int>(basis.cols());
  if (k == 1) return std::exp(log_dirichlet_of_vector(op, basis.col(0)));
  // D(a,b) from four positive evaluations: the off-diagonal via the
  // polarization identity D12 = (D[u1+u2] - D[u1-u2]) / 4.
  const double l11 = log_dirichlet_of_vector(op, basis.col(0));
  const double l22 = log_dirichlet_of_vector(op, basis.col(1));
  const double lpm = log_dirichlet_of_vector(op, basis.col(0) + basis.col(1));
  const double lmm = log_dirichlet_of_vector(op, basis.col(0) - basis.col(1));
  const double scale = std::max(std::max(l11, l22), std::max(lpm, lmm));
  const double d11 = std::exp(l11 - scale);
  const double d22 = std::exp(l22 - scale);
  const double d12 = 0.25 * (std::exp(lpm - scale) - std::exp(lmm - scale));
  // Smallest eigenvalue of the scaled symmetric 2x2 matrix.
  const double tr = d11 + d22;
  const double det = d11 * d22 - d12 * d12;
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  const double lmin = tr / 2.0 - disc;
  return std::exp(scale) * std::max(lmin, 0.0);
}

}  // namespace

SpectralGap spectral_gap(const TransitionOperator& op, GapMethod method) {
  const std::uint32_t n = op.nstates();
  const auto& mu = op.gibbs().log_mu;
  Eigen::VectorXd w(n);  // sqrt(mu), the known top eigenvector
  for (std::uint32_t x = 0; x < n; ++x) w[x] = std::exp(0.5 * mu[x]);
  w.normalize();

  // Basis of the bottom cluster beyond the kernel. Two directions absorb the
  // degenerate chessboard pair.
  const Eigen::MatrixXd l = symmetric_laplacian(op);
  const int want = n >= 3 ? 2 : 1;
  Eigen::MatrixXd cluster(n, want + 1);
  if (method == GapMethod::DenseEigen) {
    // Inverse subspace iteration with the kernel shifted away: the bottom
    // nonzero eigenvectors of L dominate solves of (L + w w^T) z = q.
    // Ridge absorbs the numerical negativity of the near-null cluster; it only
    // rescales the amplification, leaving the invariant subspace untouched.
    Eigen::MatrixXd m = l;
    m.noalias() += w * w.transpose();
    m.diagonal().array() += 1e-12;
    const Eigen::LDLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) throw std::runtime_error("laplacian factorization failed");
    Eigen::MatrixXd q(n, want + 1);
    for (std::uint32_t x = 0; x < n; ++x)
      for (int j = 0; j < want + 1; ++j)
        q(x, j) = std::sin(0.61 * (j + 1) * (x + 1)) + ((x + j) % 3 == 0 ? 0.4 : -0.3);
    for (int it = 0; it < 6; ++it) {
      q = llt.solve(q);
      for (int j = 0; j < want + 1; ++j) {
        q.col(j) -= w * (w.dot(q.col(j)));
        for (int i = 0; i < j; ++i) q.col(j) -= q.col(i) * (q.col(i).dot(q.col(j)));
        const double nrm = q.col(j).norm();
        if (nrm > 0) q.col(j) /= nrm;
      }
    }
    cluster = q;
  } else {
    // Deflated subspace iteration on 2I - L with the kernel projected out.
    const int k = want + 1;
    const int max_iter = 1000000;
    const double tol = 1e-12;
    Eigen::MatrixXd q(n, k);
    for (std::uint32_t x = 0; x < n; ++x)
      for (int j = 0; j < k; ++j)
        q(x, j) = std::sin(0.37 * (j + 1) * (x + 1)) + (x % (j + 2) == 0 ? 0.5 : -0.25);
    auto orthonormalize = [&](Eigen::MatrixXd& m) {
      for (int j = 0; j < static_cast<int>(m.cols()); ++j) {
        m.col(j) -= w * (w.dot(m.col(j)));
        for (int i = 0; i < j; ++i) m.col(j) -= m.col(i) * (m.col(i).dot(m.col(j)));
        m.col(j).normalize();
      }
    };
    orthonormalize(q);
    double prev = HUGE_VAL;
    for (int it = 0; it < max_iter; ++it) {
      Eigen::MatrixXd z = 2.0 * q - l * q;
      orthonormalize(z);
      q = z;
      if (it % 8 == 7) {
        const double est = q.col(0).dot(l * q.col(0));
        if (std::fabs(est - prev) <= tol * std::max(1e-300, std::fabs(est))) break;
        prev = est;
        if (it + 1 == max_iter) throw std::runtime_error("subspace iteration stalled");
      }
    }
    cluster = q;
  }

  // Project the kernel direction out exactly and orthonormalize what is left.
  Eigen::MatrixXd basis(n, want);
  int got = 0;
  for (int j = 0; j < static_cast<int>(cluster.cols()) && got < want; ++j) {
    Eigen::VectorXd v = cluster.col(j);
    v -= w * (w.dot(v));
    for (int i = 0; i < got; ++i) v -= basis.col(i) * (basis.col(i).dot(v));
    const double nrm = v.norm();
    if (nrm < 1e-6) continue;  // this column was (numerically) the kernel
    basis.col(got++) = v / nrm;
  }
  if (got == 0) throw std::runtime_error("bottom cluster collapsed onto the kernel");
  const double rho = quotient_over_span(op, basis.leftCols(got));
  return SpectralGap{rho, 1.0 - rho};
}

double tv_distance_at(const TransitionOperator& op, std::uint64_t n) {
  const Eigen::MatrixXd& p = op.dense();
  const std::uint32_t ns = op.nstates();
  Eigen::VectorXd mu(ns);
  for (std::uint32_t x = 0; x < ns; ++x) mu[x] = std::exp(op.gibbs().log_mu[x]);

  // Binary power with row renormalization after every multiply.
  auto renorm = [&](Eigen::MatrixXd& m) {
    for (std::uint32_t r = 0; r < ns; ++r) {
      const double s = m.row(r).sum();
      m.row(r) /= s;
    }
  };
  Eigen::MatrixXd result;
  bool have = false;
  Eigen::MatrixXd sq = p;
  std::uint64_t bits = n;
  while (bits) {
    if (bits & 1) {
      if (!have) {
        result = sq;
        have = true;
      } else {
        result = result * sq;
        renorm(result);
      }
    }
    bits >>= 1;
    if (bits) {
      sq = sq * sq;
      renorm(sq);
    }
  }
  if (!have) return 1.0;  // n == 0: point mass vs mu (worst case bound)
  double worst = 0.0;
  for (std::uint32_t x = 0; x < ns; ++x) {
    double tv = 0.0;
    for (std::uint32_t y = 0; y < ns; ++y) tv += std::fabs(result(x, y) - mu[y]);
    worst = std::max(worst, 0.5 * tv);
  }
  return worst;
}

std::uint64_t tv_mixing_time(const TransitionOperator& op, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must be in (0,1)");
  if (tv_distance_at(op, 1) <= eps) return tv_distance_at(op, 0) <= eps ? 0 : 1;
  std::uint64_t hi = 2;
  const std::uint64_t cap = std::uint64_t{1} << 40;
  while (tv_distance_at(op, hi) > eps) {
    hi *= 2;
    if (hi > cap) throw std::runtime_error("mixing time exceeds 2^40 (lower bound hit)");
  }
  std::uint64_t lo = hi / 2;  // d(lo) > eps, d(hi) <= eps
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (tv_distance_at(op, mid) <= eps)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::vector<P0Row> assumption_p0_check(TorusGeometry g, double h,
                                       const std::vector<double>& betas) {
  std::vector<P0Row> rows;
  rows.reserve(betas.size());
  for (double beta : betas) {
    const double logp = g.sites() * log_sigmoid(2.0 * beta * (4.0 + h));
    rows.push_back({beta, -logp / beta});
  }
  return rows;
}

}  // namespace pcam
