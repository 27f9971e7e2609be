// Command-line front end: generate, fit, baseline, nmi, simulate, select-k, diagnose.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 fit did not converge
// (outputs are still written).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bsbm/baselines.hpp"
#include "bsbm/fitter.hpp"
#include "bsbm/metrics.hpp"
#include "bsbm/model_selection.hpp"
#include "bsbm/params_io.hpp"
#include "bsbm/scenario.hpp"
#include "bsbm/signed_graph.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNoConvergence = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<int> parse_grid(const std::string& text) {
  std::vector<int> ks;
  const auto colon = text.find(':');
  try {
    if (colon != std::string::npos) {
      const int lo = std::stoi(text.substr(0, colon));
      const int hi = std::stoi(text.substr(colon + 1));
      if (lo < 1 || hi < lo) throw UsageError("bad K grid '" + text + "'");
      for (int k = lo; k <= hi; ++k) ks.push_back(k);
    } else {
      std::stringstream ss(text);
      std::string tok;
      while (std::getline(ss, tok, ',')) ks.push_back(std::stoi(tok));
    }
  } catch (const std::logic_error&) {
    throw UsageError("bad K grid '" + text + "'");
  }
  if (ks.empty()) throw UsageError("empty K grid");
  return ks;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw bsbm::DataError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw bsbm::DataError(path + ": " + e.what());
  }
}

void apply_fit_config(bsbm::FitConfig& cfg, const nlohmann::json& j) {
  try {
    if (j.contains("restarts")) cfg.restarts = j.at("restarts").get<int>();
    if (j.contains("inner_tol")) cfg.inner_tol = j.at("inner_tol").get<double>();
    if (j.contains("inner_max")) cfg.inner_max = j.at("inner_max").get<int>();
    if (j.contains("outer_tol")) cfg.outer_tol = j.at("outer_tol").get<double>();
    if (j.contains("outer_max")) cfg.outer_max = j.at("outer_max").get<int>();
    if (j.contains("tau_reg")) cfg.tau_reg = j.at("tau_reg").get<double>();
    if (j.contains("maxcut_rounds")) cfg.maxcut_rounds = j.at("maxcut_rounds").get<int>();
    if (j.contains("maxcut")) {
      const auto m = j.at("maxcut").get<std::string>();
      if (m == "auto") {
        cfg.maxcut_mode = bsbm::MaxcutMode::kAuto;
      } else if (m == "exact") {
        cfg.maxcut_mode = bsbm::MaxcutMode::kExact;
      } else if (m == "relaxed") {
        cfg.maxcut_mode = bsbm::MaxcutMode::kRelaxed;
      } else {
        throw bsbm::DataError("config: maxcut must be auto, exact or relaxed");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw bsbm::DataError(std::string("config: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Balanced stochastic block model for signed networks"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Sample a signed network from BSBM parameters");
  std::string gen_params, gen_graph, gen_labels;
  int gen_n = 0;
  std::uint64_t gen_seed = 0;
  gen->add_option("--params", gen_params, "Parameter JSON file")->required();
  gen->add_option("--n", gen_n, "Number of nodes")->required();
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--out-graph", gen_graph, "Edge list output")->required();
  gen->add_option("--out-labels", gen_labels, "Label output")->required();

  // fit
  auto* fitc = app.add_subcommand("fit", "Fit BSBM by profile-pseudo-likelihood");
  std::string fit_graph, fit_config, fit_labels, fit_params, fit_trace;
  int fit_k = 0;
  std::uint64_t fit_seed = 0;
  int fit_restarts = -1;
  fitc->add_option("--graph", fit_graph)->required();
  fitc->add_option("--k", fit_k)->required();
  fitc->add_option("--seed", fit_seed);
  fitc->add_option("--restarts", fit_restarts);
  fitc->add_option("--config", fit_config, "JSON with FitConfig overrides");
  fitc->add_option("--out-labels", fit_labels);
  fitc->add_option("--out-params", fit_params);
  fitc->add_option("--out-trace", fit_trace);

  // baseline
  auto* base = app.add_subcommand("baseline", "Run a comparison method");
  std::string base_method, base_graph, base_labels;
  int base_k = 0;
  std::uint64_t base_seed = 0;
  base->add_option("--method", base_method)->required()->check(CLI::IsMember({"mc", "scp", "ppl", "ppl-merge"}));
  base->add_option("--graph", base_graph)->required();
  base->add_option("--k", base_k)->required();
  base->add_option("--seed", base_seed);
  base->add_option("--out-labels", base_labels)->required();

  // nmi
  auto* nmic = app.add_subcommand("nmi", "Normalized mutual information of two label files");
  std::string nmi_a, nmi_b;
  nmic->add_option("--a", nmi_a)->required();
  nmic->add_option("--b", nmi_b)->required();

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run a simulation scenario and write CSV");
  std::string sim_id, sim_config, sim_out;
  sim->add_option("--scenario", sim_id)->required()->check(CLI::IsMember(bsbm::scenario_ids()));
  sim->add_option("--config", sim_config, "JSON overrides");
  sim->add_option("--out", sim_out)->required();

  // select-k
  auto* sel = app.add_subcommand("select-k", "Choose K by pair holdout");
  std::string sel_graph, sel_grid = "2:8";
  int sel_folds = 5;
  std::uint64_t sel_seed = 0;
  sel->add_option("--graph", sel_graph)->required();
  sel->add_option("--grid", sel_grid, "lo:hi or comma list");
  sel->add_option("--folds", sel_folds);
  sel->add_option("--seed", sel_seed);

  // diagnose
  auto* diag = app.add_subcommand("diagnose", "Signal statistics S1..S5 for planted parameters");
  double da = 0, db = 0, dc = 0, dd = 0;
  int dn = 0;
  diag->add_option("--a", da)->required();
  diag->add_option("--b", db)->required();
  diag->add_option("--c", dc)->required();
  diag->add_option("--d", dd)->required();
  diag->add_option("--n", dn)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      const auto params = bsbm::load_params_file(gen_params);
      if (gen_n < 2) throw UsageError("--n must be >= 2");
      const auto net = bsbm::sample_bsbm(params, gen_n, gen_seed);
      bsbm::save_edge_list_file(gen_graph, net.graph);
      bsbm::save_labels_file(gen_labels, net.labels);
      return kExitOk;
    }
    if (fitc->parsed()) {
      bsbm::FitConfig cfg;
      cfg.K = fit_k;
      cfg.seed = fit_seed;
      if (!fit_config.empty()) apply_fit_config(cfg, read_json(fit_config));
      if (fit_restarts >= 0) cfg.restarts = fit_restarts;
      try {
        cfg.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const auto g = bsbm::load_edge_list_file(fit_graph);
      if (fit_k > g.num_nodes()) throw UsageError("--k exceeds the node count");
      const auto res = bsbm::fit(g, cfg);
      if (!fit_labels.empty()) bsbm::save_labels_file(fit_labels, res.labels_hat);
      if (!fit_params.empty()) bsbm::save_params_file(fit_params, res.params);
      if (!fit_trace.empty()) {
        std::ofstream out(fit_trace);
        if (!out) throw bsbm::DataError("cannot write " + fit_trace);
        out << "outer,lpl,inner_iters\n";
        for (std::size_t s = 0; s < res.lpl_trace.size(); ++s) {
          char buf[64];
          std::snprintf(buf, sizeof buf, "%.12g", res.lpl_trace[s]);
          out << s << ',' << buf << ',' << (s == 0 ? 0 : res.inner_iters[s - 1]) << '\n';
        }
      }
      std::cout << "lpl " << res.lpl_trace.back() << " outer " << res.inner_iters.size()
                << " restart " << res.restart << (res.converged ? " converged" : " not-converged")
                << '\n';
      if (!res.warnings.empty_classes.empty()) {
        std::cerr << "warning: " << res.warnings.empty_classes.size() << " empty estimated communities\n";
      }
      return res.converged ? kExitOk : kExitNoConvergence;
    }
    if (base->parsed()) {
      const auto g = bsbm::load_edge_list_file(base_graph);
      if (base_k < 1 || base_k > g.num_nodes()) throw UsageError("--k must lie in [1, n]");
      bsbm::save_labels_file(base_labels, bsbm::run_method(base_method, g, base_k, base_seed));
      return kExitOk;
    }
    if (nmic->parsed()) {
      const auto a = bsbm::load_labels_file(nmi_a);
      const auto b = bsbm::load_labels_file(nmi_b);
      if (a.size() != b.size()) throw bsbm::DataError("label files differ in length");
      std::printf("%.12g\n", bsbm::nmi(a, b));
      return kExitOk;
    }
    if (sim->parsed()) {
      auto cfg = bsbm::preset_scenario(sim_id);
      try {
        if (!sim_config.empty()) bsbm::apply_overrides(cfg, read_json(sim_config));
      } catch (const nlohmann::json::exception& e) {
        throw bsbm::DataError(std::string("config: ") + e.what());
      }
      const auto rows = bsbm::run_scenario(cfg);
      std::ofstream out(sim_out, std::ios::binary);
      if (!out) throw bsbm::DataError("cannot write " + sim_out);
      bsbm::write_csv(out, rows);
      return kExitOk;
    }
    if (sel->parsed()) {
      const auto ks = parse_grid(sel_grid);
      if (sel_folds < 2) throw UsageError("--folds must be >= 2");
      const auto g = bsbm::load_edge_list_file(sel_graph);
      const auto res = bsbm::select_k(g, ks, sel_folds, sel_seed);
      for (std::size_t v = 0; v < res.ks.size(); ++v) {
        std::printf("K=%d score=%.10g\n", res.ks[v], res.scores[v]);
      }
      std::printf("chosen %d\n", res.chosen);
      return kExitOk;
    }
    if (diag->parsed()) {
      const auto d = bsbm::consistency_diagnostics(da, db, dc, dd, dn);
      const double s[4] = {d.S1, d.S2, d.S3, d.S4};
      for (int v = 0; v < 4; ++v) std::printf("S%d %.10g ratio %.10g\n", v + 1, s[v], d.ratio[v]);
      std::printf("S5 %.10g ratio %.10g\n", d.S5, d.ratio5);
      std::printf("S5_two %.10g ratio %.10g\n", d.S5_two, d.ratio5_two);
      std::printf("logn %.10g\n", d.logn);
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const bsbm::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
