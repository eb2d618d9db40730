#pragma once

#include <optional>
#include <vector>

#include "mcf/matrix.hpp"
#include "mcf/system.hpp"

namespace mcf {

// At each vertex keep the Lambda-labeled out-edges if there are any, otherwise all of them.
SimplicialSystem degenerate_subgraph(const SimplicialSystem& system, LabelMask lambda,
                                     std::vector<EdgeId>* kept_ids = nullptr);

struct SccDecomposition {
  std::vector<std::vector<Vertex>> components;  // vertices sorted ascending
  std::vector<int> component_of;                 // vertex -> component index
  std::vector<bool> edge_bearing;                // holds an edge with both ends inside
  // Longest chain in the condensation from this component down to a sink component.
  std::vector<int> height;
};

// Tarjan's algorithm. Components are numbered in order of their smallest vertex.
SccDecomposition strongly_connected_components(const SimplicialSystem& system);

bool is_strongly_connected(const SimplicialSystem& system);

struct SccFailure {
  LabelMask lambda = 0;
  std::vector<Vertex> component;
  Vertex multi_label_vertex = -1;  // a vertex with two or more Lambda out-labels in G
  Vertex trapped_vertex = -1;      // a vertex with no Lambda-labeled path out of the component
};

struct CriterionReport {
  bool passes = false;
  std::vector<Vertex> holes;
  std::vector<Vertex> reachability_failures;
  std::vector<SccFailure> scc_failures;
  bool strongly_connected = false;
};

inline constexpr int kCriterionMaxLabels = 16;

// Graph form of the non-degeneracy criterion. Throws std::invalid_argument beyond 16 labels.
CriterionReport check_non_degenerating(const SimplicialSystem& system);

// Vertices from which some finite path traverses every label.
std::vector<bool> covers_all_labels(const SimplicialSystem& system);

// Re-evaluate one scc failure against the definitions.
bool replay_scc_failure(const SimplicialSystem& system, const SccFailure& failure);

// Shortest loop at base whose matrix is entrywise positive. Search is restricted to
// edges with allowed[e] set (all when empty); matrices use the out-label sets of system.
std::optional<std::vector<EdgeId>> find_positive_path(const SimplicialSystem& system, Vertex base,
                                                      int max_length,
                                                      const std::vector<bool>& allowed = {});

// True when no proper prefix of the word is also a suffix.
bool is_unbordered(const std::vector<EdgeId>& word);

// Shortest positive, unbordered loop at base (the first-return coding needs it).
std::optional<std::vector<EdgeId>> find_unbordered_positive_loop(
    const SimplicialSystem& system, Vertex base, int max_length, const std::vector<bool>& allowed = {});

}  // namespace mcf
