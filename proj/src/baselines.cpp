#include "bsbm/baselines.hpp"

#include <stdexcept>

namespace bsbm {

Embedding mc_embedding(const SignedGraph& g, int K, int iters, std::uint64_t seed) {
  const int n = g.num_nodes();
  if (K < 1 || K > n) throw std::invalid_argument("fit_mc: need 1 <= K <= n");
  if (iters < 1) throw std::invalid_argument("fit_mc: iters must be >= 1");

  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(n, K);
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(K);
  // X = A + (L - P_obs(L)), L = U diag(lambda) U^T; observed entries are the edges.
  SymmetricOperator op = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    const Eigen::VectorXd coef = lambda.cwiseProduct(U.transpose() * x);
    y.noalias() = U * coef;
    Eigen::VectorXd scaled(K);
    for (int i = 0; i < n; ++i) {
      scaled = lambda.cwiseProduct(U.row(i).transpose());
      double acc = 0.0;
      for (const auto& nb : g.neighbors(i)) {
        acc += (nb.sign - U.row(nb.node).dot(scaled)) * x(nb.node);
      }
      y(i) += acc;
    }
  };
  LanczosOptions opts;
  opts.tolerance = 1e-7;
  for (int it = 0; it < iters; ++it) {
    EigenPairs ep = lanczos_top_k(op, n, K, seed + static_cast<std::uint64_t>(it), opts);
    U = std::move(ep.vectors);
    lambda = std::move(ep.values);
  }
  Embedding emb;
  emb.points = U * lambda.cwiseAbs().asDiagonal();
  emb.eigenvalues = lambda;
  return emb;
}

LabelVector fit_mc(const SignedGraph& g, int K, int iters, std::uint64_t seed) {
  if (K == 1) return LabelVector(1, std::vector<int>(static_cast<std::size_t>(g.num_nodes()), 0));
  const Embedding emb = mc_embedding(g, K, iters, seed);
  return kmeans(emb.points, K, seed, 10).labels;
}

FitResult fit_ppl_binary_full(const SignedGraph& g, const FitConfig& config, bool merge) {
  const SignedGraph bin = binarize(g, merge ? BinarizeMode::kMerge : BinarizeMode::kConnectivity);
  FitConfig cfg = config;
  cfg.sign_model = false;
  return fit(bin, cfg);
}

LabelVector fit_ppl_binary(const SignedGraph& g, const FitConfig& config, bool merge) {
  return fit_ppl_binary_full(g, config, merge).labels_hat;
}

}  // namespace bsbm
