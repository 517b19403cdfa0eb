#pragma once

#include <vector>

#include "memeflow/graph.hpp"

namespace memeflow {

struct KShellIndex {
  std::vector<int> shell;  // indexed by graph vertex index
  int k_max = 0;
};

/// Recursive degree-k removal: at stage k, all vertices of current degree
/// <= k are stripped (repeatedly) and assigned shell k. Equivalent to the
/// classic core-number peeling; removal order within a stage does not
/// affect the result.
KShellIndex k_shell_decompose(const Graph& g);

}  // namespace memeflow
