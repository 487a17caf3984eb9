#pragma once

#include <string>

#include <json.hpp>

#include "gifkit/consistency.hpp"
#include "gifkit/gdf.hpp"
#include "gifkit/gif.hpp"
#include "gifkit/protocol.hpp"

namespace gifkit {

inline constexpr int kJsonSchemaVersion = 1;

// Graphviz renderings. Roles are drawn as clusters of their own states;
// GIF edges read "input,decision / output"; GDF edges carry the decision.
std::string export_dot(const Protocol& p);
std::string export_dot(const Gif& g);
std::string export_dot(const Gif& g, const Gdf& gdf);

// Field names follow the domain types (ConsistencyReport, Gdf, ...); every
// document carries "schema" and "version". Object keys are sorted, so dumps
// are byte-stable.
nlohmann::json to_json(const Protocol& p, const ConsistencyReport& report);
nlohmann::json to_json(const Gif& g);
nlohmann::json to_json(const Gif& g, const Gdf& gdf);
nlohmann::json to_json(const Gif& g, const GifRun& run);

}  // namespace gifkit
