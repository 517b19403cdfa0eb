#include "memeflow/kshell.hpp"

#include <algorithm>

namespace memeflow {

// Batagelj-Zaversnik bucket peeling, O(n + m).
KShellIndex k_shell_decompose(const Graph& g) {
  const int n = static_cast<int>(g.vertex_count());
  KShellIndex out;
  out.shell.assign(n, 0);
  if (n == 0) return out;

  std::vector<int> deg(n);
  int max_deg = 0;
  for (int v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    max_deg = std::max(max_deg, deg[v]);
  }

  // vertices sorted by degree via counting sort; pos[v] tracks location
  std::vector<int> bin(max_deg + 2, 0);
  for (int v = 0; v < n; ++v) ++bin[deg[v]];
  int start = 0;
  for (int d = 0; d <= max_deg; ++d) {
    int cnt = bin[d];
    bin[d] = start;
    start += cnt;
  }
  std::vector<int> order(n), pos(n);
  for (int v = 0; v < n; ++v) {
    pos[v] = bin[deg[v]];
    order[pos[v]] = v;
    ++bin[deg[v]];
  }
  for (int d = max_deg; d > 0; --d) bin[d] = bin[d - 1];
  bin[0] = 0;

  for (int i = 0; i < n; ++i) {
    int v = order[i];
    out.shell[v] = deg[v];
    for (int u : g.neighbors(v)) {
      if (deg[u] > deg[v]) {
        int du = deg[u];
        int pu = pos[u];
        int pw = bin[du];
        int w = order[pw];
        if (u != w) {
          std::swap(order[pu], order[pw]);
          pos[u] = pw;
          pos[w] = pu;
        }
        ++bin[du];
        --deg[u];
      }
    }
  }
  out.k_max = *std::max_element(out.shell.begin(), out.shell.end());
  return out;
}

}  // namespace memeflow
