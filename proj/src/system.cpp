#include "mcf/system.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "mcf/graph.hpp"

namespace mcf {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::ostringstream os;
  os << "invalid simplicial system";
  for (const auto& s : issues) os << "; " << s;
  return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

SimplicialSystem::SimplicialSystem(std::vector<std::string> alphabet,
                                   std::vector<std::string> vertices,
                                   std::vector<Edge> edges)
    : alphabet_(std::move(alphabet)), vertices_(std::move(vertices)), edges_(std::move(edges)) {
  std::vector<std::string> issues;
  if (alphabet_.size() < 2) issues.push_back("alphabet must contain at least two labels");
  if (alphabet_.size() > static_cast<size_t>(kMaxLabels))
    issues.push_back("alphabet larger than " + std::to_string(kMaxLabels) + " labels");
  if (std::set<std::string>(alphabet_.begin(), alphabet_.end()).size() != alphabet_.size())
    issues.push_back("duplicate label name in alphabet");
  if (std::set<std::string>(vertices_.begin(), vertices_.end()).size() != vertices_.size())
    issues.push_back("duplicate vertex name");
  if (!issues.empty()) throw ValidationError(issues);

  const int nv = num_vertices();
  out_.assign(static_cast<size_t>(nv), {});
  out_mask_.assign(static_cast<size_t>(nv), 0);
  for (size_t i = 0; i < edges_.size(); ++i) {
    Edge& e = edges_[i];
    e.id = static_cast<EdgeId>(i);
    if (e.from < 0 || e.from >= nv || e.to < 0 || e.to >= nv) {
      issues.push_back("edge " + std::to_string(i) + " has an undeclared endpoint");
      continue;
    }
    if (e.label < 0 || e.label >= num_labels()) {
      issues.push_back("edge " + std::to_string(i) + " has an undeclared label");
      continue;
    }
    if (has_label(out_mask_[static_cast<size_t>(e.from)], e.label)) {
      issues.push_back("duplicate out-label '" + alphabet_[static_cast<size_t>(e.label)] +
                       "' at vertex '" + vertices_[static_cast<size_t>(e.from)] + "'");
      continue;
    }
    out_mask_[static_cast<size_t>(e.from)] |= (1u << e.label);
    out_[static_cast<size_t>(e.from)].push_back(e.id);
  }
  if (!issues.empty()) throw ValidationError(issues);
  for (auto& list : out_) {
    std::sort(list.begin(), list.end(),
              [&](EdgeId a, EdgeId b) { return edges_[static_cast<size_t>(a)].label < edges_[static_cast<size_t>(b)].label; });
  }
}

EdgeId SimplicialSystem::edge_with_label(Vertex v, Label a) const {
  for (EdgeId e : out_edges(v))
    if (edges_[static_cast<size_t>(e)].label == a) return e;
  return -1;
}

std::vector<Vertex> SimplicialSystem::holes() const {
  std::vector<Vertex> h;
  for (Vertex v = 0; v < num_vertices(); ++v)
    if (is_hole(v)) h.push_back(v);
  return h;
}

LabelMask SimplicialSystem::full_mask() const {
  return num_labels() >= 32 ? ~LabelMask{0} : ((LabelMask{1} << num_labels()) - 1);
}

Label SimplicialSystem::label_index(std::string_view name) const {
  for (size_t i = 0; i < alphabet_.size(); ++i)
    if (alphabet_[i] == name) return static_cast<Label>(i);
  return -1;
}

Vertex SimplicialSystem::vertex_index(std::string_view name) const {
  for (size_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i] == name) return static_cast<Vertex>(i);
  return -1;
}

SimplicialSystem SimplicialSystem::restrict_edges(const std::vector<bool>& keep,
                                                  std::vector<EdgeId>* kept_ids) const {
  if (keep.size() != edges_.size()) throw std::invalid_argument("edge mask size mismatch");
  std::vector<Edge> kept;
  if (kept_ids) kept_ids->clear();
  for (const Edge& e : edges_) {
    if (!keep[static_cast<size_t>(e.id)]) continue;
    kept.push_back(e);
    if (kept_ids) kept_ids->push_back(e.id);
  }
  return SimplicialSystem(alphabet_, vertices_, std::move(kept));
}

void SimplicialSystem::check_path(const std::vector<EdgeId>& path) const {
  for (size_t i = 0; i < path.size(); ++i) {
    if (path[i] < 0 || path[i] >= num_edges())
      throw std::invalid_argument("path references an unknown edge");
    if (i > 0 && edge(path[i - 1]).to != edge(path[i]).from)
      throw std::invalid_argument("non-contiguous path at position " + std::to_string(i));
  }
}

std::vector<EdgeId> SimplicialSystem::path_from_labels(Vertex start,
                                                       const std::vector<Label>& labels) const {
  std::vector<EdgeId> path;
  Vertex v = start;
  for (Label a : labels) {
    EdgeId e = edge_with_label(v, a);
    if (e < 0)
      throw std::invalid_argument("no edge labeled '" + label_name(a) + "' at vertex '" +
                                  vertex_name(v) + "'");
    path.push_back(e);
    v = edge(e).to;
  }
  return path;
}

ValidationReport validate_system(const RawSystem& raw) {
  std::vector<std::string> issues;
  if (raw.alphabet.empty()) issues.push_back("empty alphabet");
  std::map<std::string, int> label_of, vertex_of;
  for (size_t i = 0; i < raw.alphabet.size(); ++i) label_of.emplace(raw.alphabet[i], static_cast<int>(i));
  for (size_t i = 0; i < raw.vertices.size(); ++i) vertex_of.emplace(raw.vertices[i], static_cast<int>(i));
  std::vector<Edge> edges;
  for (size_t i = 0; i < raw.edges.size(); ++i) {
    const auto& r = raw.edges[i];
    Edge e;
    auto f = vertex_of.find(r.from), t = vertex_of.find(r.to);
    auto l = label_of.find(r.label);
    if (f == vertex_of.end()) issues.push_back("edge " + std::to_string(i) + ": undeclared vertex '" + r.from + "'");
    if (t == vertex_of.end()) issues.push_back("edge " + std::to_string(i) + ": undeclared vertex '" + r.to + "'");
    if (l == label_of.end()) issues.push_back("edge " + std::to_string(i) + ": undeclared label '" + r.label + "'");
    if (f == vertex_of.end() || t == vertex_of.end() || l == label_of.end()) continue;
    e.from = f->second;
    e.to = t->second;
    e.label = l->second;
    edges.push_back(e);
  }
  if (!issues.empty()) throw ValidationError(issues);
  SimplicialSystem sys(raw.alphabet, raw.vertices, std::move(edges));
  ValidationReport rep{sys, sys.holes(), is_strongly_connected(sys)};
  return rep;
}

RawSystem to_raw(const SimplicialSystem& system) {
  RawSystem raw;
  raw.alphabet = system.alphabet();
  raw.vertices = system.vertex_names();
  for (const Edge& e : system.edges())
    raw.edges.push_back({system.vertex_name(e.from), system.vertex_name(e.to), system.label_name(e.label)});
  return raw;
}

}  // namespace mcf
