#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mcf {

using Label = int;
using Vertex = int;
using EdgeId = int;
using LabelMask = std::uint32_t;

inline constexpr int kMaxLabels = 32;

struct Edge {
  EdgeId id = -1;
  Vertex from = -1;
  Vertex to = -1;
  Label label = -1;
};

// Unchecked description, keyed by names; what a file or a builder produces.
struct RawSystem {
  struct RawEdge {
    std::string from;
    std::string to;
    std::string label;
  };
  std::vector<std::string> alphabet;
  std::vector<std::string> vertices;
  std::vector<RawEdge> edges;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

// Labeled directed multigraph whose out-labels are distinct at every vertex.
// Immutable once built; edge ids are positions in edges().
class SimplicialSystem {
 public:
  SimplicialSystem(std::vector<std::string> alphabet,
                   std::vector<std::string> vertices,
                   std::vector<Edge> edges);

  int num_labels() const { return static_cast<int>(alphabet_.size()); }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::vector<std::string>& vertex_names() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_.at(static_cast<size_t>(e)); }

  // Out-edges of v ordered by label index.
  const std::vector<EdgeId>& out_edges(Vertex v) const { return out_.at(static_cast<size_t>(v)); }
  EdgeId edge_with_label(Vertex v, Label a) const;
  LabelMask out_labels(Vertex v) const { return out_mask_.at(static_cast<size_t>(v)); }
  int out_degree(Vertex v) const { return static_cast<int>(out_edges(v).size()); }
  bool is_hole(Vertex v) const { return out_edges(v).empty(); }
  std::vector<Vertex> holes() const;
  LabelMask full_mask() const;

  Label label_index(std::string_view name) const;
  Vertex vertex_index(std::string_view name) const;
  const std::string& label_name(Label a) const { return alphabet_.at(static_cast<size_t>(a)); }
  const std::string& vertex_name(Vertex v) const { return vertices_.at(static_cast<size_t>(v)); }

  // Same vertices and alphabet, only the edges with keep[e] set. Ids are renumbered;
  // kept_ids (if given) receives the original id of each new edge.
  SimplicialSystem restrict_edges(const std::vector<bool>& keep,
                                  std::vector<EdgeId>* kept_ids = nullptr) const;

  // Throws std::invalid_argument unless edges chain head to tail.
  void check_path(const std::vector<EdgeId>& path) const;
  // Resolve a label sequence from a start vertex into edge ids.
  std::vector<EdgeId> path_from_labels(Vertex start, const std::vector<Label>& labels) const;

 private:
  std::vector<std::string> alphabet_;
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<LabelMask> out_mask_;
};

struct ValidationReport {
  SimplicialSystem system;
  std::vector<Vertex> holes;
  bool strongly_connected = false;
};

// Checks names, label membership and out-label injectivity.
ValidationReport validate_system(const RawSystem& raw);

RawSystem to_raw(const SimplicialSystem& system);

inline int popcount(LabelMask m) { return __builtin_popcount(m); }
inline bool has_label(LabelMask m, Label a) { return (m >> a) & 1u; }

}  // namespace mcf
