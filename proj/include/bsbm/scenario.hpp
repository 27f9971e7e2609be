#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "bsbm/fitter.hpp"
#include "bsbm/signed_graph.hpp"

namespace bsbm {

/// One generating setting of a sweep.
struct SweepPoint {
  double value = 0.0;          // the swept quantity, as written to the CSV
  int n = 1000;
  int K = 3;
  std::vector<double> pi;      // empty: uniform
  double p_in = 0.13;
  double p_bt = 0.07;
  double eta_lo = 0.0;         // eta_{ll'} ~ U[eta_lo, eta_hi], drawn per replication
  double eta_hi = 1.0;
  std::vector<int> nu;         // empty: alternating (+1, -1, +1, ...)
};

struct ScenarioConfig {
  std::string id;
  std::vector<SweepPoint> points;
  int replications = 100;
  std::uint64_t base_seed = 1;
  std::vector<std::string> methods = {"bsbm", "mc", "scp", "ppl", "ppl-merge"};
  int threads = 0;             // 0: hardware concurrency
  bool record_runtime = true;  // false writes runtime_ms = 0, for byte-stable output

  void validate() const;
};

struct ResultRow {
  std::string scenario;
  double sweep = 0.0;
  int rep = 0;
  std::string method;
  double nmi = 0.0;
  double runtime_ms = 0.0;
  std::uint64_t seed = 0;
  std::string error;  // empty on success
};

/// Known scenario ids: a b c d e f app-c2 app-c3 app-e app-f.
std::vector<std::string> scenario_ids();
ScenarioConfig preset_scenario(const std::string& id);

/// Applies overrides from a JSON object: replications, base_seed, methods,
/// threads, record_runtime, sweep (subset of values to keep), n.
void apply_overrides(ScenarioConfig& cfg, const nlohmann::json& overrides);

/// Generating parameters of one replication (eta drawn from `seed`).
BsbmParams draw_point_params(const SweepPoint& point, std::uint64_t seed);

/// Runs one method on a graph with known K. Method names: bsbm, mc, scp,
/// ppl, ppl-merge.
LabelVector run_method(const std::string& method, const SignedGraph& g, int K, std::uint64_t seed);

/// Every (sweep point, replication, method). Replication r uses seed
/// base_seed + r. Rows come back ordered by (sweep, rep, method) regardless
/// of how the work was scheduled.
std::vector<ResultRow> run_scenario(const ScenarioConfig& cfg);

inline constexpr const char* kCsvHeader = "scenario,sweep,rep,method,nmi,runtime_ms,seed,error";
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);

}  // namespace bsbm
