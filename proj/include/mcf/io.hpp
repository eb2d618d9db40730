#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "mcf/graph.hpp"
#include "mcf/system.hpp"

namespace mcf {

// {"alphabet": [...], "vertices": [...], "edges": [{"from","to","label"}, ...]}
RawSystem raw_from_json(const nlohmann::json& j);
nlohmann::json system_to_json(const SimplicialSystem& system);
RawSystem read_graph_file(const std::string& path);

void write_dot(std::ostream& os, const SimplicialSystem& system, const std::string& name = "G");

std::string label_set_string(const SimplicialSystem& system, LabelMask mask);
nlohmann::json criterion_to_json(const SimplicialSystem& system, const CriterionReport& rep);

}  // namespace mcf
