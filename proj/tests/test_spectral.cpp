#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bsbm/metrics.hpp"
#include "bsbm/spectral.hpp"

using namespace bsbm;

namespace {

SignedGraph two_cliques(int m) {
  std::vector<SignedEdge> e;
  for (int c = 0; c < 2; ++c) {
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) e.push_back({c * m + i, c * m + j, 1});
    }
  }
  return SignedGraph(2 * m, e);
}

LabelVector two_block_truth(int m) {
  std::vector<int> z(static_cast<std::size_t>(2 * m), 0);
  for (int i = m; i < 2 * m; ++i) z[static_cast<std::size_t>(i)] = 1;
  return LabelVector(2, z);
}

SymmetricOperator dense_op(const Eigen::MatrixXd& A) {
  return [A](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = A * x; };
}

}  // namespace

TEST_CASE("lanczos matches a dense eigensolver") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 30 + trial;
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) A(i, j) = A(j, i) = nd(rng);
    }
    const EigenPairs ep = lanczos_top_k(dense_op(A), n, 4, 17);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    std::vector<double> mags;
    for (int i = 0; i < n; ++i) mags.push_back(es.eigenvalues()(i));
    std::sort(mags.begin(), mags.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
    for (int k = 0; k < 4; ++k) {
      CHECK(ep.values(k) == doctest::Approx(mags[static_cast<std::size_t>(k)]).epsilon(1e-7));
      const Eigen::VectorXd v = ep.vectors.col(k);
      CHECK((A * v - ep.values(k) * v).norm() < 1e-6 * std::max(1.0, std::abs(ep.values(0))));
    }
    CHECK((ep.vectors.transpose() * ep.vectors - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-8);
  }
}

TEST_CASE("lanczos recovers repeated eigenvalues") {
  // Identity block: eigenvalue 1 with multiplicity 6.
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(6, 6);
  const EigenPairs ep = lanczos_top_k(dense_op(A), 6, 3, 5);
  for (int k = 0; k < 3; ++k) CHECK(ep.values(k) == doctest::Approx(1.0));
  CHECK((ep.vectors.transpose() * ep.vectors - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-8);
}

TEST_CASE("two cliques separate in the embedding") {
  const SignedGraph g = two_cliques(5);
  const Embedding emb = regularized_spectral_embedding(g, 2, 0.0, 1);
  const LabelVector z = kmeans(emb.points, 2, 1).labels;
  CHECK(nmi(z, two_block_truth(5)) == doctest::Approx(1.0));
  CHECK(nmi(scp_init(g, 2, kDefaultTauReg, 4), two_block_truth(5)) == doctest::Approx(1.0));
}

TEST_CASE("empty graph embedding is constant") {
  const SignedGraph g(7, {});
  const Embedding emb = regularized_spectral_embedding(g, 1, 0.25, 2);
  const Eigen::VectorXd v = emb.points.col(0);
  CHECK(std::abs(std::abs(v(0)) - 1.0 / std::sqrt(7.0)) < 1e-10);
  CHECK((v.array() - v(0)).abs().maxCoeff() < 1e-10);
}

TEST_CASE("K = 1 puts every node in one class") {
  const LabelVector z = scp_init(two_cliques(3), 1, 0.25, 0);
  for (int x : z.z) CHECK(x == 0);
}

TEST_CASE("kmeans on well separated points") {
  Eigen::MatrixXd pts(4, 1);
  pts << 0.0, 0.1, 10.0, 10.1;
  const KMeansResult r = kmeans(pts, 2, 0);
  CHECK(r.labels[0] == r.labels[1]);
  CHECK(r.labels[2] == r.labels[3]);
  CHECK(r.labels[0] != r.labels[2]);
  CHECK(r.objective == doctest::Approx(0.01));
}

TEST_CASE("kmeans on identical points") {
  const Eigen::MatrixXd pts = Eigen::MatrixXd::Ones(5, 2);
  const KMeansResult r = kmeans(pts, 2, 0);
  CHECK(r.objective == doctest::Approx(0.0));
  CHECK(r.labels.size() == 5);
}

TEST_CASE("kmeans trace is non-increasing") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd pts(200, 3);
  for (int i = 0; i < 200; ++i) {
    for (int d = 0; d < 3; ++d) pts(i, d) = nd(rng);
  }
  const KMeansResult r = kmeans(pts, 5, 9);
  for (std::size_t t = 1; t < r.trace.size(); ++t) CHECK(r.trace[t] <= r.trace[t - 1] + 1e-9);
  CHECK(r.objective == doctest::Approx(r.trace.back()));
  for (int c : r.labels.counts()) CHECK(c > 0);
}

TEST_CASE("kmeans restarts reach the brute-force restart optimum") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd pts(60, 2);
  const double cx[3] = {0.0, 1.0, 0.5}, cy[3] = {0.0, 0.0, 0.87};
  for (int i = 0; i < 60; ++i) {
    pts(i, 0) = cx[i % 3] + 0.25 * nd(rng);
    pts(i, 1) = cy[i % 3] + 0.25 * nd(rng);
  }
  const double got = kmeans(pts, 3, 0, 10).objective;
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < 10000; s += 100) best = std::min(best, kmeans(pts, 3, 1000 + s, 100).objective);
  CHECK(got <= best * 1.01);
}

TEST_CASE("signed spectral init separates anti-aligned groups") {
  std::vector<SignedEdge> e;
  for (int i = 0; i < 10; ++i) {
    for (int j = i + 1; j < 10; ++j) e.push_back({i, j, (i < 5) == (j < 5) ? 1 : -1});
  }
  const LabelVector z = signed_spectral_init(SignedGraph(10, e), 2, 3);
  CHECK(nmi(z, two_block_truth(5)) == doctest::Approx(1.0));
}

TEST_CASE("scp recovers planted communities on default draws") {
  const std::vector<double> pi{1.0 / 3, 1.0 / 3, 1.0 / 3};
  const BsbmParams p = planted_params(pi, 0.13, 0.07, 0.5, 0.5, alternating_nu(3));
  int good = 0;
  for (int s = 0; s < 10; ++s) {
    const auto net = sample_bsbm(p, 1000, 500 + s);
    if (nmi(scp_init(net.graph, 3, kDefaultTauReg, s), net.labels) >= 0.5) ++good;
  }
  CHECK(good >= 8);
}
