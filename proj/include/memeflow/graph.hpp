#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace memeflow {

/// Undirected simple graph over string-identified vertices. Vertex indices
/// are assigned by lexicographic id order, so every derived quantity is
/// reproducible regardless of input edge order. Immutable after construction.
class Graph {
 public:
  Graph() = default;

  // Self-loops are dropped and duplicate edges collapsed; both are counted.
  // extra_vertices admits isolated vertices that no edge mentions.
  static Graph from_edges(std::vector<std::pair<std::string, std::string>> edges,
                          const std::vector<std::string>& extra_vertices = {});

  std::size_t vertex_count() const { return ids_.size(); }
  std::size_t edge_count() const { return m_; }

  const std::string& id_of(int v) const { return ids_[v]; }
  // Returns -1 when the id is unknown.
  int index_of(const std::string& id) const;

  std::span<const int> neighbors(int v) const {
    return {adj_.data() + offsets_[v],
            static_cast<std::size_t>(offsets_[v + 1] - offsets_[v])};
  }
  int degree(int v) const { return offsets_[v + 1] - offsets_[v]; }

  std::size_t dropped_self_loops() const { return dropped_self_loops_; }
  std::size_t dropped_duplicates() const { return dropped_duplicates_; }

  // Connected components, each a sorted vertex-index list, ordered by
  // smallest member.
  std::vector<std::vector<int>> connected_components() const;

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> index_;
  std::vector<int> offsets_;  // CSR, size vertex_count()+1
  std::vector<int> adj_;      // neighbor lists, each sorted ascending
  std::size_t m_ = 0;
  std::size_t dropped_self_loops_ = 0;
  std::size_t dropped_duplicates_ = 0;
};

struct EdgeListError {
  std::string message;
};

/// Reads a TAB-separated edge list: one "u<TAB>v" per line, '#' comments and
/// blank lines ignored. Throws std::runtime_error naming the offending line.
Graph load_graph(const std::string& path);

void save_graph(const Graph& g, const std::string& path);

}  // namespace memeflow
