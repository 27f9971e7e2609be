#include "bsbm/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include "bsbm/baselines.hpp"
#include "bsbm/metrics.hpp"
#include "bsbm/spectral.hpp"

namespace bsbm {

namespace {

constexpr std::uint64_t kEtaStream = 0x9E3779B97F4A7C15ULL;

std::vector<double> uniform_pi(int K) { return std::vector<double>(static_cast<std::size_t>(K), 1.0 / K); }

// Main-text defaults: K = 3, n = 1000, uniform pi, P_in = 0.13, P_bt = 0.07, eta ~ U[0,1].
SweepPoint base_point() { return SweepPoint{}; }

std::vector<SweepPoint> sweep_p_in() {
  std::vector<SweepPoint> pts;
  for (double p : {0.05, 0.07, 0.09, 0.11, 0.13}) {
    SweepPoint s = base_point();
    s.value = p;
    s.p_in = p;
    pts.push_back(s);
  }
  return pts;
}

// K = 8; value r means the first r communities sit in the negative meta-group.
std::vector<SweepPoint> sweep_meta_groups() {
  std::vector<SweepPoint> pts;
  for (int r = 1; r <= 4; ++r) {
    SweepPoint s = base_point();
    s.value = r;
    s.K = 8;
    s.p_in = 0.15;
    s.p_bt = 0.06;
    s.nu.assign(8, 1);
    for (int l = 0; l < r; ++l) s.nu[static_cast<std::size_t>(l)] = -1;
    pts.push_back(s);
  }
  return pts;
}

// eta bands U[0.1,0.2] .. U[0.5,0.6]; value is the band's lower end.
std::vector<SweepPoint> sweep_eta(int K, std::vector<double> pi) {
  std::vector<SweepPoint> pts;
  for (int band = 1; band <= 5; ++band) {
    SweepPoint s = base_point();
    s.value = band / 10.0;
    s.K = K;
    s.pi = pi;
    s.p_in = 0.10;
    s.eta_lo = band / 10.0;
    s.eta_hi = (band + 1) / 10.0;
    pts.push_back(s);
  }
  return pts;
}

std::vector<SweepPoint> sweep_n(std::vector<double> pi) {
  std::vector<SweepPoint> pts;
  for (int n : {100, 500, 1000, 1500, 2000}) {
    SweepPoint s = base_point();
    s.value = n;
    s.n = n;
    s.pi = pi;
    pts.push_back(s);
  }
  return pts;
}

std::vector<SweepPoint> sweep_k(bool unbalanced) {
  const std::vector<std::vector<double>> pis = {
      {0.3, 0.7},
      {0.1, 0.2, 0.3, 0.4},
      {0.05, 0.15, 0.15, 0.2, 0.2, 0.25},
      {0.05, 0.05, 0.1, 0.1, 0.1, 0.15, 0.2, 0.25}};
  std::vector<SweepPoint> pts;
  for (int idx = 0; idx < 4; ++idx) {
    const int K = 2 * (idx + 1);
    SweepPoint s = base_point();
    s.value = K;
    s.K = K;
    if (unbalanced) s.pi = pis[static_cast<std::size_t>(idx)];
    pts.push_back(s);
  }
  return pts;
}

std::string csv_safe(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (points.empty()) throw std::invalid_argument("scenario: no sweep points");
  if (replications < 1) throw std::invalid_argument("scenario: replications must be >= 1");
  for (const auto& p : points) {
    if (p.n < 2 || p.K < 1) throw std::invalid_argument("scenario: need n >= 2 and K >= 1");
    auto prob = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!prob(p.p_in) || !prob(p.p_bt) || !prob(p.eta_lo) || !prob(p.eta_hi) || p.eta_lo > p.eta_hi) {
      throw std::invalid_argument("scenario: probabilities must lie in [0,1]");
    }
  }
  static const std::vector<std::string> known = {"bsbm", "mc", "scp", "ppl", "ppl-merge"};
  for (const auto& m : methods) {
    if (std::find(known.begin(), known.end(), m) == known.end()) {
      throw std::invalid_argument("scenario: unknown method '" + m + "'");
    }
  }
}

std::vector<std::string> scenario_ids() {
  return {"a", "b", "c", "d", "e", "f", "app-c2", "app-c3", "app-e", "app-f"};
}

ScenarioConfig preset_scenario(const std::string& id) {
  ScenarioConfig cfg;
  cfg.id = id;
  if (id == "a") {
    cfg.points = sweep_p_in();
  } else if (id == "b") {
    cfg.points = sweep_meta_groups();
  } else if (id == "c") {
    cfg.points = sweep_eta(2, {});
  } else if (id == "d") {
    cfg.points = sweep_eta(3, {});
  } else if (id == "e") {
    cfg.points = sweep_n({});
  } else if (id == "f") {
    cfg.points = sweep_k(false);
  } else if (id == "app-c2") {
    cfg.points = sweep_eta(2, {0.3, 0.7});
  } else if (id == "app-c3") {
    cfg.points = sweep_eta(3, {0.2, 0.3, 0.5});
  } else if (id == "app-e") {
    cfg.points = sweep_n({0.2, 0.3, 0.5});
  } else if (id == "app-f") {
    cfg.points = sweep_k(true);
  } else {
    throw std::invalid_argument("unknown scenario '" + id + "'");
  }
  return cfg;
}

void apply_overrides(ScenarioConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("scenario config must be a JSON object");
  if (j.contains("replications")) cfg.replications = j.at("replications").get<int>();
  if (j.contains("base_seed")) cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("methods")) cfg.methods = j.at("methods").get<std::vector<std::string>>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  if (j.contains("record_runtime")) cfg.record_runtime = j.at("record_runtime").get<bool>();
  if (j.contains("n")) {
    const int n = j.at("n").get<int>();
    for (auto& p : cfg.points) p.n = n;
  }
  if (j.contains("sweep")) {
    const auto keep = j.at("sweep").get<std::vector<double>>();
    std::vector<SweepPoint> kept;
    for (const auto& p : cfg.points) {
      for (double v : keep) {
        if (std::abs(v - p.value) <= 1e-9 * std::max(1.0, std::abs(v))) {
          kept.push_back(p);
          break;
        }
      }
    }
    cfg.points = std::move(kept);
  }
  cfg.validate();
}

BsbmParams draw_point_params(const SweepPoint& point, std::uint64_t seed) {
  const std::vector<double> pi = point.pi.empty() ? uniform_pi(point.K) : point.pi;
  if (static_cast<int>(pi.size()) != point.K) throw std::invalid_argument("scenario: pi length must equal K");
  std::vector<int> nu = point.nu.empty() ? alternating_nu(point.K) : point.nu;
  BsbmParams params = planted_params(pi, point.p_in, point.p_bt, 0.0, 0.0, std::move(nu));
  std::mt19937_64 rng(seed ^ kEtaStream);
  std::uniform_real_distribution<double> u(point.eta_lo, point.eta_hi);
  for (int a = 0; a < point.K; ++a) {
    for (int b = a; b < point.K; ++b) {
      const double v = point.eta_lo == point.eta_hi ? point.eta_lo : u(rng);
      params.eta(a, b) = params.eta(b, a) = v;
    }
  }
  // Renormalize pi so rounding in the preset vectors cannot fail validation.
  params.pi /= params.pi.sum();
  return params;
}

LabelVector run_method(const std::string& method, const SignedGraph& g, int K, std::uint64_t seed) {
  FitConfig cfg;
  cfg.K = K;
  cfg.seed = seed;
  if (method == "bsbm") return fit(g, cfg).labels_hat;
  if (method == "scp") return scp_init(g, K, kDefaultTauReg, seed);
  if (method == "ppl") return fit_ppl_binary(g, cfg, false);
  if (method == "ppl-merge") return fit_ppl_binary(g, cfg, true);
  if (method == "mc") return fit_mc(g, K, 30, seed);
  throw std::invalid_argument("unknown method '" + method + "'");
}

std::vector<ResultRow> run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  struct Task {
    std::size_t point;
    int rep;
  };
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < cfg.points.size(); ++p) {
    for (int r = 0; r < cfg.replications; ++r) tasks.push_back({p, r});
  }
  std::vector<std::vector<ResultRow>> slots(tasks.size());

  auto run_task = [&](std::size_t t) {
    const SweepPoint& pt = cfg.points[tasks[t].point];
    const int rep = tasks[t].rep;
    const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(rep);
    std::vector<ResultRow>& rows = slots[t];
    auto make_row = [&](const std::string& method) {
      ResultRow row;
      row.scenario = cfg.id;
      row.sweep = pt.value;
      row.rep = rep;
      row.method = method;
      row.seed = seed;
      return row;
    };
    SampledNetwork net;
    try {
      net = sample_bsbm(draw_point_params(pt, seed), pt.n, seed);
    } catch (const std::exception& ex) {
      for (const auto& m : cfg.methods) {
        ResultRow row = make_row(m);
        row.error = csv_safe(std::string("sampling: ") + ex.what());
        rows.push_back(std::move(row));
      }
      return;
    }
    for (const auto& m : cfg.methods) {
      ResultRow row = make_row(m);
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const LabelVector est = run_method(m, net.graph, pt.K, seed);
        row.nmi = nmi(est, net.labels);
      } catch (const std::exception& ex) {
        row.error = csv_safe(ex.what());
      }
      const auto t1 = std::chrono::steady_clock::now();
      if (cfg.record_runtime) {
        row.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      }
      rows.push_back(std::move(row));
    }
  };

  unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(tasks.size())));
  if (workers == 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < tasks.size(); t = next++) run_task(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  std::vector<ResultRow> out;
  for (auto& s : slots) {
    for (auto& r : s) out.push_back(std::move(r));
  }
  return out;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kCsvHeader << '\n';
  char buf[64];
  for (const auto& r : rows) {
    out << r.scenario << ',';
    std::snprintf(buf, sizeof buf, "%g", r.sweep);
    out << buf << ',' << r.rep << ',' << r.method << ',';
    std::snprintf(buf, sizeof buf, "%.6f", r.nmi);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.3f", r.runtime_ms);
    out << buf << ',' << r.seed << ',' << r.error << '\n';
  }
}

}  // namespace bsbm
