#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "bsbm/signed_graph.hpp"

namespace bsbm {

/// {"K": k, "pi": [...], "P": [[...]], "eta": [[...]], "nu": [...]}.
/// Q is never written; it is derived on load.
nlohmann::json params_to_json(const BsbmParams& params);

/// Parses and validates; throws DataError on schema or invariant violations.
BsbmParams params_from_json(const nlohmann::json& j);

void save_params_file(const std::string& path, const BsbmParams& params);
BsbmParams load_params_file(const std::string& path);

}  // namespace bsbm
