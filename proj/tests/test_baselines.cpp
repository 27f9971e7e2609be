#include <doctest.h>

#include <algorithm>

#include "bsbm/baselines.hpp"
#include "bsbm/metrics.hpp"
#include "bsbm/scenario.hpp"

using namespace bsbm;

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

TEST_CASE("completion splits a complete anti-aligned graph") {
  std::vector<SignedEdge> e;
  for (int i = 0; i < 12; ++i) {
    for (int j = i + 1; j < 12; ++j) e.push_back({i, j, (i < 6) == (j < 6) ? 1 : -1});
  }
  const LabelVector truth(2, {0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1});
  CHECK(nmi(fit_mc(SignedGraph(12, e), 2), truth) == doctest::Approx(1.0));
}

TEST_CASE("completion on an empty graph still returns labels") {
  const LabelVector z = fit_mc(SignedGraph(10, {}), 2);
  CHECK(z.size() == 10);
  CHECK(z.K == 2);
}

TEST_CASE("completion uses signs when connectivity is flat") {
  SweepPoint pt;
  pt.K = 2;
  pt.p_in = pt.p_bt = 0.07;
  pt.eta_lo = 0.5;
  pt.eta_hi = 0.6;
  std::vector<double> scores;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const auto net = sample_bsbm(draw_point_params(pt, s), pt.n, s);
    scores.push_back(nmi(fit_mc(net.graph, 2, 30, s), net.labels));
  }
  CHECK(median(scores) >= 0.5);
}

TEST_CASE("binary fit ignores edge signs") {
  SweepPoint pt;
  pt.n = 300;
  const auto net = sample_bsbm(draw_point_params(pt, 2), pt.n, 2);
  std::vector<SignedEdge> flipped = net.graph.edges();
  for (std::size_t k = 0; k < flipped.size(); k += 3) flipped[k].sign = -flipped[k].sign;
  FitConfig cfg;
  cfg.K = 3;
  cfg.seed = 4;
  CHECK(fit_ppl_binary(net.graph, cfg, false).z == fit_ppl_binary(SignedGraph(300, flipped), cfg, false).z);
  const FitResult r = fit_ppl_binary_full(net.graph, cfg, false);
  CHECK(r.params.eta.isZero());
}

TEST_CASE("binary fit recovers the default setting") {
  SweepPoint pt;
  std::vector<double> scores;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const auto net = sample_bsbm(draw_point_params(pt, s), pt.n, s);
    FitConfig cfg;
    cfg.K = 3;
    cfg.seed = s;
    scores.push_back(nmi(fit_ppl_binary(net.graph, cfg, false), net.labels));
  }
  CHECK(median(scores) >= 0.8);
}
