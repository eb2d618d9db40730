#include "mcf/io.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

namespace mcf {

using nlohmann::json;

namespace {

std::string as_name(const json& j, const char* what) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw std::invalid_argument(std::string("graph file: ") + what + " must be a string or an integer");
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

RawSystem raw_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("graph file: top level must be an object");
  for (const char* key : {"alphabet", "vertices", "edges"})
    if (!j.contains(key) || !j.at(key).is_array())
      throw std::invalid_argument(std::string("graph file: missing array '") + key + "'");
  RawSystem raw;
  for (const auto& a : j.at("alphabet")) raw.alphabet.push_back(as_name(a, "label"));
  for (const auto& v : j.at("vertices")) raw.vertices.push_back(as_name(v, "vertex"));
  for (const auto& e : j.at("edges")) {
    if (!e.is_object() || !e.contains("from") || !e.contains("to") || !e.contains("label"))
      throw std::invalid_argument("graph file: each edge needs 'from', 'to' and 'label'");
    raw.edges.push_back({as_name(e.at("from"), "from"), as_name(e.at("to"), "to"), as_name(e.at("label"), "label")});
  }
  return raw;
}

json system_to_json(const SimplicialSystem& system) {
  json edges = json::array();
  for (const Edge& e : system.edges())
    edges.push_back({{"from", system.vertex_name(e.from)}, {"to", system.vertex_name(e.to)}, {"label", system.label_name(e.label)}});
  return json{{"alphabet", system.alphabet()}, {"vertices", system.vertex_names()}, {"edges", edges}};
}

RawSystem read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open graph file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("graph file '" + path + "' is not valid JSON: " + e.what());
  }
  return raw_from_json(j);
}

void write_dot(std::ostream& os, const SimplicialSystem& system, const std::string& name) {
  os << "digraph \"" << dot_escape(name) << "\" {\n";
  for (Vertex v = 0; v < system.num_vertices(); ++v) {
    os << "  v" << v << " [label=\"" << dot_escape(system.vertex_name(v)) << "\"";
    if (system.is_hole(v)) os << ", shape=box";
    os << "];\n";
  }
  for (const Edge& e : system.edges())
    os << "  v" << e.from << " -> v" << e.to << " [label=\"" << dot_escape(system.label_name(e.label)) << "\"];\n";
  os << "}\n";
}

std::string label_set_string(const SimplicialSystem& system, LabelMask mask) {
  std::string s = "{";
  bool first = true;
  for (Label a = 0; a < system.num_labels(); ++a) {
    if (!has_label(mask, a)) continue;
    if (!first) s += ",";
    s += system.label_name(a);
    first = false;
  }
  return s + "}";
}

json criterion_to_json(const SimplicialSystem& system, const CriterionReport& rep) {
  auto names = [&](const std::vector<Vertex>& vs) {
    json a = json::array();
    for (Vertex v : vs) a.push_back(system.vertex_name(v));
    return a;
  };
  json failures = json::array();
  for (const auto& f : rep.scc_failures) {
    json lam = json::array();
    for (Label a = 0; a < system.num_labels(); ++a)
      if (has_label(f.lambda, a)) lam.push_back(system.label_name(a));
    failures.push_back({{"lambda", lam},
                        {"component", names(f.component)},
                        {"multi_label_vertex", system.vertex_name(f.multi_label_vertex)},
                        {"trapped_vertex", system.vertex_name(f.trapped_vertex)}});
  }
  json witness = nullptr;
  if (!rep.scc_failures.empty()) witness = failures[0]["lambda"];
  return json{{"passes", rep.passes},
              {"witness", witness},
              {"strongly_connected", rep.strongly_connected},
              {"holes", names(rep.holes)},
              {"reachability_failures", names(rep.reachability_failures)},
              {"scc_failures", failures}};
}

}  // namespace mcf
