#include "bsbm/params_io.hpp"

#include <fstream>

namespace bsbm {

using nlohmann::json;

json params_to_json(const BsbmParams& params) {
  const int k = params.K();
  json j;
  j["K"] = k;
  j["pi"] = json::array();
  for (int a = 0; a < k; ++a) j["pi"].push_back(params.pi(a));
  auto matrix = [k](const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (int a = 0; a < k; ++a) {
      json row = json::array();
      for (int b = 0; b < k; ++b) row.push_back(m(a, b));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  j["P"] = matrix(params.P);
  j["eta"] = matrix(params.eta);
  j["nu"] = params.nu;
  return j;
}

BsbmParams params_from_json(const json& j) {
  try {
    const int k = j.at("K").get<int>();
    if (k < 1) throw DataError("params: K must be >= 1");
    BsbmParams p;
    const auto pi = j.at("pi").get<std::vector<double>>();
    if (static_cast<int>(pi.size()) != k) throw DataError("params: pi must have K entries");
    p.pi = Eigen::Map<const Eigen::VectorXd>(pi.data(), k);
    auto matrix = [k](const json& m, const char* name) {
      const auto rows = m.get<std::vector<std::vector<double>>>();
      if (static_cast<int>(rows.size()) != k) throw DataError(std::string("params: ") + name + " must be KxK");
      Eigen::MatrixXd out(k, k);
      for (int a = 0; a < k; ++a) {
        if (static_cast<int>(rows[static_cast<std::size_t>(a)].size()) != k) {
          throw DataError(std::string("params: ") + name + " must be KxK");
        }
        for (int b = 0; b < k; ++b) out(a, b) = rows[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      }
      return out;
    };
    p.P = matrix(j.at("P"), "P");
    p.eta = matrix(j.at("eta"), "eta");
    p.nu = j.at("nu").get<std::vector<int>>();
    p.validate();
    return p;
  } catch (const json::exception& e) {
    throw DataError(std::string("params: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
}

void save_params_file(const std::string& path, const BsbmParams& params) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << params_to_json(params).dump(2) << '\n';
}

BsbmParams load_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return params_from_json(j);
}

}  // namespace bsbm
