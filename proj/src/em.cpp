#include "bsbm/em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bsbm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double clamp_prob(double p, int& clamped) {
  if (p < kProbClamp) {
    ++clamped;
    return kProbClamp;
  }
  if (p > 1.0 - kProbClamp) {
    ++clamped;
    return 1.0 - kProbClamp;
  }
  return p;
}

void check_dims(const SignedGraph& g, const BsbmParams& params, const LabelVector& e) {
  if (e.size() != g.num_nodes()) throw std::invalid_argument("column labels do not match graph size");
  if (e.K != params.K()) {
    throw std::invalid_argument("K mismatch: labels have K=" + std::to_string(e.K) +
                                ", params have K=" + std::to_string(params.K()));
  }
}

// Per (l, l') coefficients of the row log-mass: positive edge, negative edge, non-edge.
struct CellLogs {
  Eigen::MatrixXd pos;
  Eigen::MatrixXd neg;
  Eigen::MatrixXd zero;

  explicit CellLogs(const LogTables& t)
      : pos(t.log_q + t.log_p), neg(t.log_1mq + t.log_p), zero(t.log_1mp) {}
};

// Row i's counts of positive / negative / hidden pairs per column class.
void row_counts(const SignedGraph& g, const LabelVector& e, const PairMask* mask, int i,
                Eigen::VectorXd& pos, Eigen::VectorXd& neg, Eigen::VectorXd& hid) {
  pos.setZero();
  neg.setZero();
  hid.setZero();
  for (const auto& nb : g.neighbors(i)) {
    if (nb.sign > 0) {
      pos(e[nb.node]) += 1.0;
    } else {
      neg(e[nb.node]) += 1.0;
    }
  }
  if (mask != nullptr && !mask->empty()) {
    for (int j : mask->hidden(i)) hid(e[j]) += 1.0;
  }
}

// Log masses for every row; returns the row log-normalizers through `lse`.
template <typename RowFn>
void for_each_row_logmass(const SignedGraph& g, const BsbmParams& params, const LabelVector& e,
                          const PairMask* mask, int& clamped, RowFn&& fn) {
  check_dims(g, params, e);
  const int n = g.num_nodes();
  const int k = params.K();
  const LogTables tables(params);
  clamped = tables.clamped;
  const CellLogs cells(tables);
  Eigen::VectorXd colcount = Eigen::VectorXd::Zero(k);
  for (int j = 0; j < n; ++j) colcount(e[j]) += 1.0;

  Eigen::VectorXd pos(k), neg(k), hid(k), zero(k), lm(k);
  for (int i = 0; i < n; ++i) {
    row_counts(g, e, mask, i, pos, neg, hid);
    zero = colcount - pos - neg - hid;
    for (int l = 0; l < k; ++l) {
      double acc = tables.log_pi(l);
      if (acc == kNegInf) {
        lm(l) = kNegInf;
        continue;
      }
      for (int c = 0; c < k; ++c) {
        acc += pos(c) * cells.pos(l, c) + neg(c) * cells.neg(l, c) + zero(c) * cells.zero(l, c);
      }
      lm(l) = acc;
    }
    fn(i, lm);
  }
}

double log_sum_exp(const Eigen::VectorXd& v) {
  const double mx = v.maxCoeff();
  if (mx == kNegInf || !std::isfinite(mx)) return mx;
  double s = 0.0;
  for (Eigen::Index l = 0; l < v.size(); ++l) s += std::exp(v(l) - mx);
  return mx + std::log(s);
}

}  // namespace

void PairMask::add(int i, int j) {
  if (i == j) throw std::invalid_argument("PairMask: self pair");
  hidden_.at(static_cast<std::size_t>(i)).push_back(j);
  hidden_.at(static_cast<std::size_t>(j)).push_back(i);
  ++count_;
}

void PairMask::finalize() {
  for (auto& h : hidden_) std::sort(h.begin(), h.end());
}

bool PairMask::contains(int i, int j) const {
  const auto& h = hidden_.at(static_cast<std::size_t>(i));
  return std::binary_search(h.begin(), h.end(), j);
}

LogTables::LogTables(const BsbmParams& params) {
  const int k = params.K();
  const Eigen::MatrixXd q = params.Q();
  log_p.resize(k, k);
  log_1mp.resize(k, k);
  log_q.resize(k, k);
  log_1mq.resize(k, k);
  log_pi.resize(k);
  for (int a = 0; a < k; ++a) {
    log_pi(a) = params.pi(a) > 0.0 ? std::log(params.pi(a)) : kNegInf;
    for (int b = 0; b < k; ++b) {
      const double p = clamp_prob(params.P(a, b), clamped);
      const double qq = clamp_prob(q(a, b), clamped);
      log_p(a, b) = std::log(p);
      log_1mp(a, b) = std::log1p(-p);
      log_q(a, b) = std::log(qq);
      log_1mq(a, b) = std::log1p(-qq);
    }
  }
}

double log_pseudo_likelihood(const SignedGraph& g, const BsbmParams& params, const LabelVector& e,
                             const PairMask* mask) {
  double total = 0.0;
  int clamped = 0;
  for_each_row_logmass(g, params, e, mask, clamped,
                       [&](int, const Eigen::VectorXd& lm) { total += log_sum_exp(lm); });
  return total;
}

EStepResult e_step(const SignedGraph& g, const BsbmParams& params, const LabelVector& e,
                   const PairMask* mask) {
  const int n = g.num_nodes();
  const int k = params.K();
  EStepResult out;
  out.tau.resize(n, k);
  for_each_row_logmass(g, params, e, mask, out.clamped, [&](int i, const Eigen::VectorXd& lm) {
    const double lse = log_sum_exp(lm);
    if (!std::isfinite(lse)) {
      out.tau.row(i) = params.pi.transpose();
      ++out.fallback_rows;
      return;
    }
    out.log_pl += lse;
    double s = 0.0;
    for (int l = 0; l < k; ++l) {
      const double v = std::exp(lm(l) - lse);
      out.tau(i, l) = v;
      s += v;
    }
    out.tau.row(i) /= s;
  });
  return out;
}

SuffStats sufficient_stats(const SignedGraph& g, const Posterior& tau, const LabelVector& e,
                           const PairMask* mask) {
  const int n = g.num_nodes();
  const int k = static_cast<int>(tau.cols());
  if (tau.rows() != n || e.size() != n) throw std::invalid_argument("sufficient_stats: size mismatch");
  if (e.K != k) throw std::invalid_argument("sufficient_stats: K mismatch");
  SuffStats st{Eigen::MatrixXd::Zero(k, k), Eigen::MatrixXd::Zero(k, k), Eigen::MatrixXd::Zero(k, k)};
  Eigen::MatrixXd hidden = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd colcount = Eigen::VectorXd::Zero(k);
  for (int j = 0; j < n; ++j) colcount(e[j]) += 1.0;
  const Eigen::VectorXd rowmass = tau.colwise().sum().transpose();

  for (int i = 0; i < n; ++i) {
    for (const auto& nb : g.neighbors(i)) {
      Eigen::MatrixXd& target = nb.sign > 0 ? st.T : st.S;
      target.col(e[nb.node]) += tau.row(i).transpose();
    }
    if (mask != nullptr && !mask->empty()) {
      for (int j : mask->hidden(i)) hidden.col(e[j]) += tau.row(i).transpose();
    }
  }
  st.R = rowmass * colcount.transpose() - st.T - st.S - hidden;
  st.R = st.R.cwiseMax(0.0);
  return st;
}

PiP m_step_pi_P(const Posterior& tau, const SuffStats& stats) {
  const int k = stats.K();
  PiP out;
  out.pi = tau.colwise().sum().transpose() / static_cast<double>(tau.rows());
  const SuffStats sym = stats.symmetrized();
  out.P.resize(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      const double num = sym.T(a, b) + sym.S(a, b);
      const double den = num + sym.R(a, b);
      out.P(a, b) = den > 0.0 ? std::clamp(num / den, 0.0, 1.0) : 0.0;
    }
  }
  return out;
}

EtaQ m_step_Q(const SuffStats& stats, const std::vector<int>& nu) {
  const int k = stats.K();
  if (static_cast<int>(nu.size()) != k) throw std::invalid_argument("m_step_Q: nu length mismatch");
  const SuffStats sym = stats.symmetrized();
  EtaQ out{Eigen::MatrixXd::Zero(k, k), Eigen::MatrixXd::Zero(k, k)};
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      const double t = sym.T(a, b);
      const double s = sym.S(a, b);
      const double nn = nu[static_cast<std::size_t>(a)] * nu[static_cast<std::size_t>(b)];
      const double eta = (t + s) > 0.0 ? std::clamp((t - s) / (t + s) * nn, 0.0, 1.0) : 0.0;
      out.eta(a, b) = eta;
      out.Q(a, b) = 0.5 * (1.0 + eta * nn);
    }
  }
  return out;
}

BsbmParams m_step(const Posterior& tau, const SuffStats& stats, const MStepOptions& opts) {
  const int k = stats.K();
  PiP pp = m_step_pi_P(tau, stats);
  BsbmParams out;
  // Renormalize so pi sums to 1 to machine precision.
  out.pi = pp.pi / pp.pi.sum();
  out.P = std::move(pp.P);
  if (!opts.sign_model) {
    out.eta = Eigen::MatrixXd::Zero(k, k);
    out.nu.assign(static_cast<std::size_t>(k), 1);
    return out;
  }
  out.nu = solve_maxcut(build_quadratic(stats.symmetrized()), opts.maxcut);
  out.eta = m_step_Q(stats, out.nu).eta;
  return out;
}

BsbmParams initial_params(const SignedGraph& g, const LabelVector& e0, const MStepOptions& opts,
                          const PairMask* mask) {
  const Posterior tau = one_hot(e0);
  return m_step(tau, sufficient_stats(g, tau, e0, mask), opts);
}

LabelVector update_column_labels(const SignedGraph& g, const Posterior& tau,
                                 const BsbmParams& params, const LabelVector& e,
                                 const PairMask* mask) {
  const int n = g.num_nodes();
  const int k = params.K();
  check_dims(g, params, e);
  if (tau.rows() != n || tau.cols() != k) throw std::invalid_argument("update_column_labels: tau shape");
  const LogTables tables(params);
  const CellLogs cells(tables);
  const Eigen::VectorXd rowmass = tau.colwise().sum().transpose();

  std::vector<int> next(static_cast<std::size_t>(n));
  Eigen::VectorXd pos(k), neg(k), hid(k), zero(k);
  for (int j = 0; j < n; ++j) {
    pos.setZero();
    neg.setZero();
    hid.setZero();
    for (const auto& nb : g.neighbors(j)) {
      if (nb.sign > 0) {
        pos += tau.row(nb.node).transpose();
      } else {
        neg += tau.row(nb.node).transpose();
      }
    }
    if (mask != nullptr && !mask->empty()) {
      for (int i : mask->hidden(j)) hid += tau.row(i).transpose();
    }
    zero = rowmass - pos - neg - hid;
    // score(c) = sum_l pos(l) logPQ(l,c) + neg(l) logP(1-Q)(l,c) + zero(l) log(1-P)(l,c)
    const Eigen::VectorXd score = cells.pos.transpose() * pos + cells.neg.transpose() * neg +
                                  cells.zero.transpose() * zero;
    const int incumbent = e[j];
    int best = incumbent;
    double best_score = score(incumbent);
    for (int c = 0; c < k; ++c) {
      if (c == best) continue;
      const double tol = 1e-12 * std::max(1.0, std::abs(best_score));
      if (score(c) > best_score + tol) {
        best = c;
        best_score = score(c);
      }
    }
    next[static_cast<std::size_t>(j)] = best;
  }
  return LabelVector(k, std::move(next));
}

LabelVector hard_labels(const Posterior& tau) {
  const int n = static_cast<int>(tau.rows());
  std::vector<int> z(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Eigen::Index arg = 0;
    tau.row(i).maxCoeff(&arg);  // first maximal index
    z[static_cast<std::size_t>(i)] = static_cast<int>(arg);
  }
  return LabelVector(static_cast<int>(tau.cols()), std::move(z));
}

Posterior one_hot(const LabelVector& labels) {
  Posterior tau = Posterior::Zero(labels.size(), labels.K);
  for (int i = 0; i < labels.size(); ++i) tau(i, labels[i]) = 1.0;
  return tau;
}

}  // namespace bsbm
