#pragma once

#include <vector>

#include "memeflow/graph.hpp"

namespace memeflow {

struct CommunityPartition {
  std::vector<int> community;  // vertex index -> community id, 0-based contiguous
  int n_communities = 0;
  double modularity_q = 0.0;
  // Q tracked as (component-partition Q) + accumulated split gains; must
  // agree with modularity_q recomputed from scratch.
  double incremental_q = 0.0;
  bool edgeless_warning = false;
};

/// Newman modularity of a partition, generalized to any number of groups:
/// Q = (1/2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j).
/// Throws on an edgeless graph.
double modularity(const Graph& g, const std::vector<int>& community);

struct CommunityOptions {
  double min_gain = 1e-6;         // stop splitting when best split gains <= this
  double power_tol = 1e-8;        // power-iteration Rayleigh-quotient tolerance
  int power_max_iters = 1000;
  int refine_cap = 20000;         // best-first refinement up to this group size,
                                  // single greedy sweep above it
};

/// Recursive spectral bisection on the (generalized) modularity matrix with a
/// Kernighan-Lin style refinement pass after each split. Connected components
/// are partitioned independently. Deterministic; ties resolved by vertex
/// index order (lexicographic id order).
CommunityPartition detect_communities(const Graph& g,
                                      const CommunityOptions& opts = {});

}  // namespace memeflow
