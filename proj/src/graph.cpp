#include "memeflow/graph.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace memeflow {

Graph Graph::from_edges(std::vector<std::pair<std::string, std::string>> edges,
                        const std::vector<std::string>& extra_vertices) {
  Graph g;

  std::vector<std::string> names(extra_vertices);
  names.reserve(extra_vertices.size() + edges.size() * 2);
  for (auto& [u, v] : edges) {
    names.push_back(u);
    names.push_back(v);
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());

  g.ids_ = std::move(names);
  g.index_.reserve(g.ids_.size());
  for (std::size_t i = 0; i < g.ids_.size(); ++i)
    g.index_.emplace(g.ids_[i], static_cast<int>(i));

  const int n = static_cast<int>(g.ids_.size());
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(edges.size());
  for (auto& [us, vs] : edges) {
    int u = g.index_.at(us);
    int v = g.index_.at(vs);
    if (u == v) {
      ++g.dropped_self_loops_;
      continue;
    }
    if (u > v) std::swap(u, v);
    pairs.emplace_back(u, v);
  }
  std::sort(pairs.begin(), pairs.end());
  auto last = std::unique(pairs.begin(), pairs.end());
  g.dropped_duplicates_ = static_cast<std::size_t>(pairs.end() - last);
  pairs.erase(last, pairs.end());
  g.m_ = pairs.size();

  std::vector<int> deg(n, 0);
  for (auto [u, v] : pairs) {
    ++deg[u];
    ++deg[v];
  }
  g.offsets_.assign(n + 1, 0);
  for (int v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
  g.adj_.resize(2 * g.m_);
  std::vector<int> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (auto [u, v] : pairs) {
    g.adj_[cursor[u]++] = v;
    g.adj_[cursor[v]++] = u;
  }
  // Pairs were emitted in sorted order, so each neighbor list is already
  // ascending for u-sides; the v-sides need a sort.
  for (int v = 0; v < n; ++v)
    std::sort(g.adj_.begin() + g.offsets_[v], g.adj_.begin() + g.offsets_[v + 1]);
  return g;
}

int Graph::index_of(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

std::vector<std::vector<int>> Graph::connected_components() const {
  const int n = static_cast<int>(vertex_count());
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> out;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (comp[s] != -1) continue;
    int c = static_cast<int>(out.size());
    out.emplace_back();
    stack.push_back(s);
    comp[s] = c;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      out[c].push_back(v);
      for (int w : neighbors(v)) {
        if (comp[w] == -1) {
          comp[w] = c;
          stack.push_back(w);
        }
      }
    }
    std::sort(out[c].begin(), out[c].end());
  }
  return out;
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);
  std::vector<std::pair<std::string, std::string>> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string::npos)
      throw std::runtime_error(path + ": malformed edge at line " +
                               std::to_string(lineno));
    edges.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return Graph::from_edges(std::move(edges));
}

void save_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write edge list: " + path);
  out << "# memeflow edge list v1\n";
  const int n = static_cast<int>(g.vertex_count());
  for (int u = 0; u < n; ++u)
    for (int v : g.neighbors(u))
      if (u < v) out << g.id_of(u) << '\t' << g.id_of(v) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace memeflow
