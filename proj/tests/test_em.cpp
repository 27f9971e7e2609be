#include <doctest.h>

#include <cmath>
#include <random>

#include "bsbm/em.hpp"
#include "bsbm/metrics.hpp"

using namespace bsbm;

namespace {

double clampp(double x) { return std::min(std::max(x, kProbClamp), 1.0 - kProbClamp); }

// Probability of entry a given row class l and column class l'.
double entry_prob(int a, double P, double Q) {
  P = clampp(P);
  Q = clampp(Q);
  if (a == 0) return 1.0 - P;
  return a > 0 ? P * Q : P * (1.0 - Q);
}

// Per-row mixture terms pi_l * prod_j f(A_ij), straight products.
Eigen::MatrixXd row_terms(const SignedGraph& g, const BsbmParams& p, const LabelVector& e) {
  const int n = g.num_nodes(), K = p.K();
  const Eigen::MatrixXd Q = p.Q();
  Eigen::MatrixXd out(n, K);
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < K; ++l) {
      double v = p.pi(l);
      for (int j = 0; j < n; ++j) v *= entry_prob(g.sign(i, j), p.P(l, e[j]), Q(l, e[j]));
      out(i, l) = v;
    }
  }
  return out;
}

double product_lpl(const SignedGraph& g, const BsbmParams& p, const LabelVector& e) {
  const Eigen::MatrixXd t = row_terms(g, p, e);
  double s = 0.0;
  for (int i = 0; i < t.rows(); ++i) s += std::log(t.row(i).sum());
  return s;
}

SuffStats dense_stats(const SignedGraph& g, const Posterior& tau, const LabelVector& e) {
  const int n = g.num_nodes(), K = static_cast<int>(tau.cols());
  SuffStats s{Eigen::MatrixXd::Zero(K, K), Eigen::MatrixXd::Zero(K, K), Eigen::MatrixXd::Zero(K, K)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int a = g.sign(i, j);
      for (int l = 0; l < K; ++l) {
        Eigen::MatrixXd& X = a > 0 ? s.T : (a < 0 ? s.S : s.R);
        X(l, e[j]) += tau(i, l);
      }
    }
  }
  return s;
}

BsbmParams random_params(int K, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BsbmParams p;
  p.pi = Eigen::VectorXd(K);
  for (int l = 0; l < K; ++l) p.pi(l) = 0.1 + u(rng);
  p.pi /= p.pi.sum();
  p.P = Eigen::MatrixXd(K, K);
  p.eta = Eigen::MatrixXd(K, K);
  for (int a = 0; a < K; ++a) {
    for (int b = a; b < K; ++b) {
      p.P(a, b) = p.P(b, a) = 0.05 + 0.5 * u(rng);
      p.eta(a, b) = p.eta(b, a) = u(rng);
    }
  }
  p.nu.assign(static_cast<std::size_t>(K), 1);
  for (int l = 1; l < K; ++l) p.nu[static_cast<std::size_t>(l)] = u(rng) < 0.5 ? 1 : -1;
  return p;
}

LabelVector random_labels(int n, int K, std::mt19937_64& rng) {
  std::vector<int> z(static_cast<std::size_t>(n));
  for (auto& x : z) x = static_cast<int>(rng() % static_cast<unsigned>(K));
  return LabelVector(K, z);
}

Posterior random_tau(int n, int K, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  Posterior t(n, K);
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < K; ++l) t(i, l) = u(rng);
    t.row(i) /= t.row(i).sum();
  }
  return t;
}

SignedGraph random_graph(int n, double density, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SignedEdge> e;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (u(rng) < density) e.push_back({i, j, u(rng) < 0.6 ? 1 : -1});
    }
  }
  return SignedGraph(n, e);
}

BsbmParams neutral_params(const Eigen::VectorXd& pi, double P) {
  const int K = static_cast<int>(pi.size());
  BsbmParams p;
  p.pi = pi;
  p.P = Eigen::MatrixXd::Constant(K, K, P);
  p.eta = Eigen::MatrixXd::Zero(K, K);
  p.nu.assign(static_cast<std::size_t>(K), 1);
  return p;
}

}  // namespace

TEST_CASE("pseudo-likelihood of two isolated nodes") {
  const SignedGraph g(2, {});
  const BsbmParams p = neutral_params(Eigen::VectorXd::Ones(1), 0.5);
  const LabelVector e(1, {0, 0});
  CHECK(log_pseudo_likelihood(g, p, e) == doctest::Approx(4.0 * std::log(0.5)));
  CHECK(log_pseudo_likelihood(g, p, e) == doctest::Approx(-2.7726).epsilon(1e-4));
  CHECK(log_pseudo_likelihood(g, p, e) == doctest::Approx(product_lpl(g, p, e)));
}

TEST_CASE("pseudo-likelihood matches the direct product") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 6 + trial % 10, K = 1 + trial % 4;
    const SignedGraph g = random_graph(n, 0.4, rng);
    const BsbmParams p = random_params(K, rng);
    const LabelVector e = random_labels(n, K, rng);
    CHECK(log_pseudo_likelihood(g, p, e) == doctest::Approx(product_lpl(g, p, e)).epsilon(1e-10));
  }
}

TEST_CASE("clamped probabilities keep the value finite") {
  const std::vector<SignedEdge> edges{{0, 1, 1}};
  const SignedGraph g(3, edges);
  const BsbmParams p = neutral_params(Eigen::VectorXd::Ones(1), 1.0);
  const double v = log_pseudo_likelihood(g, p, LabelVector(1, {0, 0, 0}));
  CHECK(std::isfinite(v));
}

TEST_CASE("uniform parameters make the likelihood label-blind") {
  std::mt19937_64 rng(4);
  const SignedGraph g = random_graph(15, 0.3, rng);
  const BsbmParams p = neutral_params(Eigen::VectorXd::Constant(3, 1.0 / 3), 0.3);
  const double ref = log_pseudo_likelihood(g, p, random_labels(15, 3, rng));
  for (int t = 0; t < 10; ++t) {
    CHECK(log_pseudo_likelihood(g, p, random_labels(15, 3, rng)) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("posterior matches the scalar product oracle") {
  const std::vector<SignedEdge> edges{{0, 1, 1}};
  const SignedGraph g(2, edges);
  BsbmParams p = neutral_params(Eigen::VectorXd::Constant(2, 0.5), 0.0);
  p.P << 0.9, 0.1, 0.1, 0.9;
  const LabelVector e(2, {0, 1});
  const EStepResult r = e_step(g, p, e);
  const Eigen::MatrixXd t = row_terms(g, p, e);
  for (int i = 0; i < 2; ++i) {
    for (int l = 0; l < 2; ++l) CHECK(r.tau(i, l) == doctest::Approx(t(i, l) / t.row(i).sum()).epsilon(1e-12));
  }
  CHECK(r.tau(0, 1) > r.tau(0, 0));

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 10, K = 3;
    const SignedGraph h = random_graph(n, 0.5, rng);
    const BsbmParams q = random_params(K, rng);
    const LabelVector f = random_labels(n, K, rng);
    const EStepResult s = e_step(h, q, f);
    const Eigen::MatrixXd u = row_terms(h, q, f);
    for (int i = 0; i < n; ++i) {
      for (int l = 0; l < K; ++l) CHECK(s.tau(i, l) == doctest::Approx(u(i, l) / u.row(i).sum()).epsilon(1e-10));
    }
    CHECK(s.log_pl == doctest::Approx(product_lpl(h, q, f)).epsilon(1e-10));
  }
}

TEST_CASE("neutral parameters leave the prior unchanged") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int K = 1 + trial % 5, n = 5 + trial % 20;
    Eigen::VectorXd pi(K);
    for (int l = 0; l < K; ++l) pi(l) = u(rng);
    pi /= pi.sum();
    const SignedGraph g = random_graph(n, 0.3, rng);
    const EStepResult r = e_step(g, neutral_params(pi, 0.05 + 0.9 * u(rng)), random_labels(n, K, rng));
    for (int i = 0; i < n; ++i) CHECK((r.tau.row(i).transpose() - pi).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("e_step is deterministic") {
  std::mt19937_64 rng(2);
  const SignedGraph g = random_graph(20, 0.3, rng);
  const BsbmParams p = random_params(3, rng);
  const LabelVector e = random_labels(20, 3, rng);
  CHECK(e_step(g, p, e).tau == e_step(g, p, e).tau);
}

TEST_CASE("sufficient stats for a single edge") {
  const std::vector<SignedEdge> edges{{0, 1, 1}};
  const SignedGraph g(2, edges);
  const LabelVector e(2, {0, 1});
  const SuffStats s = sufficient_stats(g, one_hot(e), e);
  CHECK(s.T(0, 1) == 1.0);
  CHECK(s.T(1, 0) == 1.0);
  CHECK(s.T(0, 0) == 0.0);
  CHECK(s.S.isZero());
  CHECK(s.R(0, 0) == 1.0);
  CHECK(s.R(1, 1) == 1.0);
  CHECK(s.R(0, 1) == 0.0);
}

TEST_CASE("sufficient stats match the dense oracle") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + trial % 28, K = 1 + trial % 4;
    const SignedGraph g = random_graph(n, 0.35, rng);
    const Posterior tau = trial % 5 == 0 ? Posterior(Posterior::Constant(n, K, 1.0 / K)) : random_tau(n, K, rng);
    const LabelVector e = random_labels(n, K, rng);
    const SuffStats got = sufficient_stats(g, tau, e);
    const SuffStats want = dense_stats(g, tau, e);
    const double scale = std::max(1.0, want.R.cwiseAbs().maxCoeff());
    CHECK((got.T - want.T).cwiseAbs().maxCoeff() <= 1e-8 * scale);
    CHECK((got.S - want.S).cwiseAbs().maxCoeff() <= 1e-8 * scale);
    CHECK((got.R - want.R).cwiseAbs().maxCoeff() <= 1e-8 * scale);
  }
}

TEST_CASE("masked sufficient stats drop hidden pairs") {
  std::mt19937_64 rng(14);
  const int n = 12, K = 2;
  const SignedGraph g = random_graph(n, 0.4, rng);
  const Posterior tau = random_tau(n, K, rng);
  const LabelVector e = random_labels(n, K, rng);
  PairMask mask(n);
  mask.add(0, 1);
  mask.add(3, 7);
  mask.add(2, 9);
  mask.finalize();
  SuffStats want{Eigen::MatrixXd::Zero(K, K), Eigen::MatrixXd::Zero(K, K), Eigen::MatrixXd::Zero(K, K)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && mask.contains(i, j)) continue;
      const int a = g.sign(i, j);
      for (int l = 0; l < K; ++l) (a > 0 ? want.T : (a < 0 ? want.S : want.R))(l, e[j]) += tau(i, l);
    }
  }
  const SuffStats got = sufficient_stats(g, tau, e, &mask);
  CHECK((got.T - want.T).norm() < 1e-10);
  CHECK((got.S - want.S).norm() < 1e-10);
  CHECK((got.R - want.R).norm() < 1e-10);
}

TEST_CASE("empty graph stats are pure non-edge mass") {
  std::mt19937_64 rng(15);
  const int n = 9, K = 3;
  const Posterior tau = random_tau(n, K, rng);
  const LabelVector e = random_labels(n, K, rng);
  const SuffStats s = sufficient_stats(SignedGraph(n, {}), tau, e);
  const auto cc = e.counts();
  CHECK(s.T.isZero());
  CHECK(s.S.isZero());
  for (int l = 0; l < K; ++l) {
    for (int m = 0; m < K; ++m) CHECK(s.R(l, m) == doctest::Approx(tau.col(l).sum() * cc[static_cast<std::size_t>(m)]));
  }
}

TEST_CASE("connectivity M-step") {
  // Two 2-cliques: diagonal m(m-1)/m^2 with the self pair counted.
  const std::vector<SignedEdge> edges{{0, 1, 1}, {2, 3, 1}};
  const SignedGraph g(4, edges);
  const LabelVector e(2, {0, 0, 1, 1});
  const PiP a = m_step_pi_P(one_hot(e), sufficient_stats(g, one_hot(e), e));
  CHECK(a.P(0, 0) == doctest::Approx(0.5));
  CHECK(a.P(1, 1) == doctest::Approx(0.5));
  CHECK(a.P(0, 1) == doctest::Approx(0.0));

  SuffStats z{Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2)};
  z.R(0, 0) = 4.0;
  const PiP b = m_step_pi_P(Posterior::Constant(4, 2, 0.5), z);
  CHECK(b.P(0, 0) == 0.0);
  CHECK(b.pi(0) == doctest::Approx(0.5));
  CHECK(b.pi(1) == doctest::Approx(0.5));
}

TEST_CASE("sign M-step") {
  SuffStats s{Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2)};
  s.T(0, 1) = s.T(1, 0) = 8;
  s.S(0, 1) = s.S(1, 0) = 2;
  s.T(0, 0) = 8;
  s.S(0, 0) = 2;
  const EtaQ r = m_step_Q(s, {1, -1});
  CHECK(r.eta(0, 1) == 0.0);
  CHECK(r.Q(0, 1) == doctest::Approx(0.5));
  CHECK(r.eta(0, 0) == doctest::Approx(0.6));
  CHECK(r.Q(0, 0) == doctest::Approx(0.8));
  CHECK(r.eta(1, 1) == 0.0);
  CHECK(r.Q(1, 1) == doctest::Approx(0.5));
}

TEST_CASE("initial parameters from two positive triangles") {
  const std::vector<SignedEdge> edges{{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}};
  const SignedGraph g(6, edges);
  const LabelVector e(2, {0, 0, 0, 1, 1, 1});
  const BsbmParams p = initial_params(g, e);
  CHECK(p.P(0, 0) == doctest::Approx(6.0 / 9.0));
  CHECK(p.P(1, 1) == doctest::Approx(6.0 / 9.0));
  CHECK(p.P(0, 1) == doctest::Approx(0.0));
  const Eigen::MatrixXd Q = p.Q();
  CHECK(Q(0, 0) == doctest::Approx(1.0));
  CHECK(Q(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("initial parameters on degenerate inputs") {
  const BsbmParams p = initial_params(SignedGraph(5, {}), LabelVector(2, {0, 0, 1, 1, 1}));
  CHECK(p.P.isZero());
  CHECK(p.Q().isApprox(Eigen::MatrixXd::Constant(2, 2, 0.5)));
  CHECK(p.pi(0) == doctest::Approx(0.4));

  const std::vector<SignedEdge> edges{{0, 1, 1}};
  const BsbmParams q = initial_params(SignedGraph(3, edges), LabelVector(2, {0, 0, 0}));
  CHECK(q.pi(0) == doctest::Approx(1.0));
  CHECK(q.pi(1) == doctest::Approx(0.0));
  CHECK(q.P(0, 1) == 0.0);
  CHECK(q.P(1, 1) == 0.0);
  CHECK(q.Q()(1, 1) == doctest::Approx(0.5));
}

TEST_CASE("column update never lowers the expected objective") {
  // The expected complete-data objective is what the column step maximizes;
  // with hard tau it equals L_PL up to the pi term, so compare via e_step.
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 25, K = 3;
    const SignedGraph g = random_graph(n, 0.3, rng);
    const BsbmParams p = random_params(K, rng);
    const LabelVector e = random_labels(n, K, rng);
    const Posterior tau = e_step(g, p, e).tau;
    const LabelVector f = update_column_labels(g, tau, p, e);
    auto expected_obj = [&](const LabelVector& c) {
      const Eigen::MatrixXd Q = p.Q();
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          for (int l = 0; l < K; ++l) s += tau(i, l) * std::log(entry_prob(g.sign(i, j), p.P(l, c[j]), Q(l, c[j])));
        }
      }
      return s;
    };
    CHECK(expected_obj(f) >= expected_obj(e) - 1e-9 * std::abs(expected_obj(e)));
    CHECK(update_column_labels(g, tau, p, f).z == f.z);
  }
}

TEST_CASE("hard labels break ties to the smaller class") {
  Posterior t(2, 3);
  t << 0.4, 0.4, 0.2, 0.1, 0.3, 0.6;
  const LabelVector z = hard_labels(t);
  CHECK(z[0] == 0);
  CHECK(z[1] == 2);
}
