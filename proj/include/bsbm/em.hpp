#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bsbm/maxcut.hpp"
#include "bsbm/signed_graph.hpp"
#include "bsbm/suff_stats.hpp"

namespace bsbm {

/// n x K matrix of row-label posteriors; every row sums to 1.
using Posterior = Eigen::MatrixXd;

/// Probabilities are clamped to [kProbClamp, 1 - kProbClamp] before logs.
inline constexpr double kProbClamp = 1e-12;

/// Node pairs excluded from fitting. Hidden pairs drop out of every sum over
/// j, whether or not they carry an edge. Used for holdout validation.
class PairMask {
 public:
  PairMask() = default;
  explicit PairMask(int n) : hidden_(static_cast<std::size_t>(n)) {}

  /// Hides the unordered pair {i, j}, i != j. Call finalize() after the last add.
  void add(int i, int j);
  void finalize();

  bool empty() const { return count_ == 0; }
  std::size_t num_pairs() const { return count_; }
  const std::vector<int>& hidden(int i) const { return hidden_[static_cast<std::size_t>(i)]; }
  bool contains(int i, int j) const;

 private:
  std::vector<std::vector<int>> hidden_;
  std::size_t count_ = 0;
};

/// Clamped log tables for P and Q.
struct LogTables {
  Eigen::MatrixXd log_p;
  Eigen::MatrixXd log_1mp;
  Eigen::MatrixXd log_q;
  Eigen::MatrixXd log_1mq;
  Eigen::VectorXd log_pi;
  int clamped = 0;  // P/Q cells that needed clamping

  explicit LogTables(const BsbmParams& params);
};

/// Log-pseudo-likelihood. The product over j includes j = i.
double log_pseudo_likelihood(const SignedGraph& g, const BsbmParams& params, const LabelVector& e,
                             const PairMask* mask = nullptr);

struct EStepResult {
  Posterior tau;
  double log_pl = 0.0;     // log-pseudo-likelihood at the input parameters
  int fallback_rows = 0;   // rows with no finite mass, reset to pi
  int clamped = 0;
};

EStepResult e_step(const SignedGraph& g, const BsbmParams& params, const LabelVector& e,
                   const PairMask* mask = nullptr);

/// T, S, R over all ordered pairs (i, j), including i = j. T and S come from
/// the edge lists; R from rowmass(l) * colcount(l') - T - S - hidden mass.
SuffStats sufficient_stats(const SignedGraph& g, const Posterior& tau, const LabelVector& e,
                           const PairMask* mask = nullptr);

struct PiP {
  Eigen::VectorXd pi;
  Eigen::MatrixXd P;
};

/// pi_l = mean of tau(:, l); P = (T+S)/(T+S+R) on pooled stats, 0 for empty cells.
PiP m_step_pi_P(const Posterior& tau, const SuffStats& stats);

struct EtaQ {
  Eigen::MatrixXd eta;
  Eigen::MatrixXd Q;
};

/// eta = max(nu_l nu_l' (T-S)/(T+S), 0) on pooled stats; eta = 0 where T+S = 0.
EtaQ m_step_Q(const SuffStats& stats, const std::vector<int>& nu);

struct MStepOptions {
  bool sign_model = true;  // false freezes Q at 1/2 (binary SBM)
  MaxcutOptions maxcut;
};

/// Full M-step: pi, P, then nu by max-cut and eta.
BsbmParams m_step(const Posterior& tau, const SuffStats& stats, const MStepOptions& opts);

/// Plug-in estimates from hard labels, projected onto the balanced family.
BsbmParams initial_params(const SignedGraph& g, const LabelVector& e0,
                          const MStepOptions& opts = {}, const PairMask* mask = nullptr);

/// Column-label update: each e_j moves to the class maximizing the expected
/// complete-data log-pseudo-likelihood. The incumbent label wins ties.
LabelVector update_column_labels(const SignedGraph& g, const Posterior& tau,
                                 const BsbmParams& params, const LabelVector& e,
                                 const PairMask* mask = nullptr);

/// Row-wise argmax, ties to the smallest label.
LabelVector hard_labels(const Posterior& tau);

/// One-hot posterior of hard labels.
Posterior one_hot(const LabelVector& labels);

}  // namespace bsbm
