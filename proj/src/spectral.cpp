#include "bsbm/spectral.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>

namespace bsbm {

Embedding regularized_spectral_embedding(const SignedGraph& g, int K, double tau_reg,
                                         std::uint64_t seed, const LanczosOptions& opts) {
  const int n = g.num_nodes();
  if (K < 1) throw std::invalid_argument("spectral embedding: K must be >= 1");
  if (K > n) throw std::invalid_argument("spectral embedding: K exceeds node count");
  if (tau_reg < 0.0) throw std::invalid_argument("spectral embedding: tau_reg must be >= 0");

  const double dbar = g.num_edges() == 0 ? 1.0 : g.average_degree();
  const double c = tau_reg * dbar / static_cast<double>(n);
  SymmetricOperator op = [&g, c, n](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    const double shift = c * x.sum();
    for (int i = 0; i < n; ++i) {
      double acc = shift;
      for (const auto& nb : g.neighbors(i)) acc += x(nb.node);
      y(i) = acc;
    }
  };
  EigenPairs ep = lanczos_top_k(op, n, K, seed, opts);
  return {std::move(ep.vectors), std::move(ep.values)};
}

namespace {

struct LloydRun {
  std::vector<int> labels;
  double objective = 0.0;
  std::vector<double> trace;
};

double sq_dist(const Eigen::MatrixXd& pts, int i, const Eigen::MatrixXd& centers, int c) {
  return (pts.row(i) - centers.row(c)).squaredNorm();
}

LloydRun lloyd_once(const Eigen::MatrixXd& pts, int K, std::mt19937_64& rng) {
  const int n = static_cast<int>(pts.rows());
  const int d = static_cast<int>(pts.cols());
  Eigen::MatrixXd centers(K, d);

  // k-means++ seeding
  std::uniform_int_distribution<int> pick(0, n - 1);
  centers.row(0) = pts.row(pick(rng));
  std::vector<double> d2(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  for (int c = 1; c < K; ++c) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      d2[static_cast<std::size_t>(i)] = std::min(d2[static_cast<std::size_t>(i)], sq_dist(pts, i, centers, c - 1));
      total += d2[static_cast<std::size_t>(i)];
    }
    int chosen = 0;
    if (total > 0.0) {
      std::discrete_distribution<int> dd(d2.begin(), d2.end());
      chosen = dd(rng);
    } else {
      chosen = pick(rng);
    }
    centers.row(c) = pts.row(chosen);
  }

  LloydRun run;
  run.labels.assign(static_cast<std::size_t>(n), -1);
  constexpr int kMaxIter = 300;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    bool changed = false;
    double obj = 0.0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double bd = sq_dist(pts, i, centers, 0);
      for (int c = 1; c < K; ++c) {
        const double dc = sq_dist(pts, i, centers, c);
        if (dc < bd) {
          bd = dc;
          best = c;
        }
      }
      if (run.labels[static_cast<std::size_t>(i)] != best) changed = true;
      run.labels[static_cast<std::size_t>(i)] = best;
      obj += bd;
    }
    run.trace.push_back(obj);
    if (!changed) break;

    centers.setZero();
    std::vector<int> size(static_cast<std::size_t>(K), 0);
    for (int i = 0; i < n; ++i) {
      centers.row(run.labels[static_cast<std::size_t>(i)]) += pts.row(i);
      ++size[static_cast<std::size_t>(run.labels[static_cast<std::size_t>(i)])];
    }
    for (int c = 0; c < K; ++c) {
      if (size[static_cast<std::size_t>(c)] > 0) centers.row(c) /= size[static_cast<std::size_t>(c)];
    }
    // Empty clusters take the farthest point of the currently largest cluster.
    for (int c = 0; c < K; ++c) {
      if (size[static_cast<std::size_t>(c)] > 0) continue;
      const int big = static_cast<int>(std::max_element(size.begin(), size.end()) - size.begin());
      if (size[static_cast<std::size_t>(big)] <= 1) break;
      int far = -1;
      double fd = -1.0;
      for (int i = 0; i < n; ++i) {
        if (run.labels[static_cast<std::size_t>(i)] != big) continue;
        const double di = sq_dist(pts, i, centers, big);
        if (di > fd) {
          fd = di;
          far = i;
        }
      }
      centers.row(c) = pts.row(far);
      run.labels[static_cast<std::size_t>(far)] = c;
      --size[static_cast<std::size_t>(big)];
      size[static_cast<std::size_t>(c)] = 1;
      centers.row(big) *= static_cast<double>(size[static_cast<std::size_t>(big)] + 1);
      centers.row(big) -= pts.row(far);
      centers.row(big) /= static_cast<double>(size[static_cast<std::size_t>(big)]);
      changed = true;
    }
  }
  run.objective = run.trace.back();
  return run;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int K, std::uint64_t seed, int restarts) {
  const int n = static_cast<int>(points.rows());
  if (K < 1 || K > n) throw std::invalid_argument("kmeans: need 1 <= K <= n");
  if (restarts < 1) throw std::invalid_argument("kmeans: restarts must be >= 1");
  LloydRun best;
  bool have = false;
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(r));
    LloydRun run = lloyd_once(points, K, rng);
    if (!have || run.objective < best.objective) {
      best = std::move(run);
      have = true;
    }
  }
  return {LabelVector(K, std::move(best.labels)), best.objective, std::move(best.trace)};
}

LabelVector scp_init(const SignedGraph& g, int K, double tau_reg, std::uint64_t seed) {
  if (K == 1) return LabelVector(1, std::vector<int>(static_cast<std::size_t>(g.num_nodes()), 0));
  const SignedGraph bin = binarize(g, BinarizeMode::kConnectivity);
  const Embedding emb = regularized_spectral_embedding(bin, K, tau_reg, seed);
  return kmeans(emb.points, K, seed, 10).labels;
}

LabelVector signed_spectral_init(const SignedGraph& g, int K, std::uint64_t seed) {
  const int n = g.num_nodes();
  if (K == 1) return LabelVector(1, std::vector<int>(static_cast<std::size_t>(n), 0));
  if (K > n) throw std::invalid_argument("signed spectral init: K exceeds node count");
  SymmetricOperator op = [&g, n](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (const auto& nb : g.neighbors(i)) acc += nb.sign * x(nb.node);
      y(i) = acc;
    }
  };
  const EigenPairs ep = lanczos_top_k(op, n, K, seed);
  return kmeans(ep.vectors, K, seed, 10).labels;
}

}  // namespace bsbm
