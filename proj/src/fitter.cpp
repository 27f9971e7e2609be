#include "bsbm/fitter.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bsbm {

void FitConfig::validate() const {
  if (K < 1) throw std::invalid_argument("FitConfig: K must be >= 1");
  if (restarts < 1) throw std::invalid_argument("FitConfig: restarts must be >= 1");
  if (!(inner_tol > 0.0) || !(outer_tol > 0.0)) throw std::invalid_argument("FitConfig: tolerances must be > 0");
  if (inner_max < 1 || outer_max < 1) throw std::invalid_argument("FitConfig: iteration caps must be >= 1");
  if (tau_reg < 0.0) throw std::invalid_argument("FitConfig: tau_reg must be >= 0");
  if (maxcut_rounds < 1) throw std::invalid_argument("FitConfig: maxcut_rounds must be >= 1");
}

namespace {

bool small_change(double prev, double cur, double tol) {
  return std::abs(cur - prev) <= tol * std::max(std::abs(prev), 1e-300);
}

FitResult run_from(const SignedGraph& g, const LabelVector& e0, const FitConfig& cfg,
                   const PairMask* mask) {
  MStepOptions mo;
  mo.sign_model = cfg.sign_model;
  mo.maxcut.mode = cfg.maxcut_mode;
  mo.maxcut.rounds = cfg.maxcut_rounds;
  mo.maxcut.seed = cfg.seed;

  FitResult res;
  LabelVector e = e0;
  res.params = initial_params(g, e, mo, mask);
  EStepResult est = e_step(g, res.params, e, mask);
  auto note = [&res](const EStepResult& r) {
    res.warnings.clamped_cells += r.clamped;
    res.warnings.fallback_rows += r.fallback_rows;
  };
  note(est);
  res.lpl_trace.push_back(est.log_pl);

  bool inner_ok = true;
  for (int s = 0; s < cfg.outer_max; ++s) {
    double lpl = est.log_pl;
    int inner = 0;
    bool inner_conv = false;
    while (inner < cfg.inner_max) {
      const SuffStats stats = sufficient_stats(g, est.tau, e, mask);
      res.params = m_step(est.tau, stats, mo);
      est = e_step(g, res.params, e, mask);
      note(est);
      ++inner;
      const bool done = small_change(lpl, est.log_pl, cfg.inner_tol);
      lpl = est.log_pl;
      if (done) {
        inner_conv = true;
        break;
      }
    }
    inner_ok = inner_ok && inner_conv;
    res.inner_iters.push_back(inner);

    LabelVector next = update_column_labels(g, est.tau, res.params, e, mask);
    const bool changed = next.z != e.z;
    e = std::move(next);
    est = e_step(g, res.params, e, mask);
    note(est);
    const double prev = res.lpl_trace.back();
    res.lpl_trace.push_back(est.log_pl);
    if (!changed || small_change(prev, est.log_pl, cfg.outer_tol)) {
      res.converged = inner_ok;
      break;
    }
  }

  res.tau = std::move(est.tau);
  res.labels_hat = hard_labels(res.tau);
  res.column_labels = std::move(e);
  const auto counts = res.labels_hat.counts();
  for (int l = 0; l < cfg.K; ++l) {
    if (counts[static_cast<std::size_t>(l)] == 0) res.warnings.empty_classes.push_back(l);
  }
  return res;
}

}  // namespace

FitResult fit_from_labels(const SignedGraph& g, const LabelVector& e0, const FitConfig& config,
                          const PairMask* mask) {
  config.validate();
  if (g.num_nodes() < 1) throw std::invalid_argument("fit: graph has no nodes");
  if (e0.K != config.K || e0.size() != g.num_nodes()) {
    throw std::invalid_argument("fit: initial labels do not match K or graph size");
  }
  return run_from(g, e0, config, mask);
}

FitResult fit(const SignedGraph& g, const FitConfig& config, const PairMask* mask) {
  config.validate();
  if (g.num_nodes() < 1) throw std::invalid_argument("fit: graph has no nodes");
  if (config.K > g.num_nodes()) throw std::invalid_argument("fit: K exceeds node count");
  FitResult best;
  bool have = false;
  for (int r = 0; r < config.restarts; ++r) {
    FitConfig cfg = config;
    cfg.seed = config.seed + static_cast<std::uint64_t>(r);
    std::vector<LabelVector> starts{scp_init(g, cfg.K, cfg.tau_reg, cfg.seed)};
    if (cfg.sign_model && cfg.K > 1) starts.push_back(signed_spectral_init(g, cfg.K, cfg.seed));
    for (const auto& e0 : starts) {
      FitResult res = run_from(g, e0, cfg, mask);
      res.restart = r;
      if (!have || res.lpl_trace.back() > best.lpl_trace.back()) {
        best = std::move(res);
        have = true;
      }
    }
  }
  return best;
}

namespace {

// x^2 / y with the convention 0/0 = 0 and x/0 = +inf.
double gap_ratio(double diff, double total) {
  const double num = diff * diff;
  if (total > 0.0) return num / total;
  return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

}  // namespace

ConsistencyDiagnostics consistency_diagnostics(double a, double b, double c, double d, int n) {
  if (a < 0.0 || b < 0.0) throw std::invalid_argument("diagnostics: a and b must be >= 0");
  if (c < 0.0 || c > 1.0 || d < 0.0 || d > 1.0) throw std::invalid_argument("diagnostics: c and d must lie in [0,1]");
  if (n < 2) throw std::invalid_argument("diagnostics: n must be >= 2");
  ConsistencyDiagnostics out;
  out.a = a;
  out.b = b;
  out.c = c;
  out.d = d;
  out.n = n;
  out.logn = std::log(static_cast<double>(n));
  out.S1 = gap_ratio(a * (1 + c) - b * (1 - d), a * (1 + c) + b * (1 - d));
  out.S2 = gap_ratio(a * (1 - c) - b * (1 + d), a * (1 - c) + b * (1 + d));
  out.S3 = gap_ratio(a * (1 + c) - b * (1 + d), a * (1 + c) + b * (1 + d));
  out.S4 = gap_ratio(a * (1 - c) - b * (1 - d), a * (1 - c) + b * (1 - d));
  out.S5 = a * c - b * d;
  out.S5_two = a * c + b * d;
  const double s[4] = {out.S1, out.S2, out.S3, out.S4};
  for (int v = 0; v < 4; ++v) out.ratio[v] = s[v] / out.logn;
  out.ratio5 = out.S5 / out.logn;
  out.ratio5_two = out.S5_two / out.logn;
  return out;
}

}  // namespace bsbm
