#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "memeflow/community.hpp"
#include "memeflow/graph.hpp"
#include "memeflow/kshell.hpp"
#include "memeflow/simulate.hpp"

using namespace memeflow;

namespace {

Graph make(std::vector<std::pair<std::string, std::string>> edges,
           std::vector<std::string> extra = {}) {
  return Graph::from_edges(std::move(edges), extra);
}

std::string write_temp(const std::string& content) {
  static int counter = 0;
  auto path = std::filesystem::temp_directory_path() /
              ("memeflow_graph_test_" + std::to_string(counter++) + ".tsv");
  std::ofstream out(path);
  out << content;
  return path.string();
}

// Erdos-Renyi graph over numbered vertices.
Graph random_graph(int n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::string> names;
  for (int v = 0; v < n; ++v) names.push_back("v" + std::to_string(100 + v));
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (unit(rng) < p) edges.emplace_back(names[u], names[v]);
  return Graph::from_edges(std::move(edges), names);
}

// Independent k-core oracle: for each k, iterated deletion of vertices with
// degree < k; shell(v) = largest k whose core contains v.
std::vector<int> brute_force_shells(const Graph& g) {
  const int n = static_cast<int>(g.vertex_count());
  std::vector<int> shell(n, 0);
  for (int k = 1;; ++k) {
    std::vector<char> alive(n, 1);
    bool changed = true;
    while (changed) {
      changed = false;
      for (int v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        int d = 0;
        for (int w : g.neighbors(v))
          if (alive[w]) ++d;
        if (d < k) {
          alive[v] = 0;
          changed = true;
        }
      }
    }
    bool any = false;
    for (int v = 0; v < n; ++v)
      if (alive[v]) {
        shell[v] = k;
        any = true;
      }
    if (!any) break;
  }
  return shell;
}

// Direct summation of (1/2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j).
double modularity_direct(const Graph& g, const std::vector<int>& comm) {
  const int n = static_cast<int>(g.vertex_count());
  const double two_m = 2.0 * static_cast<double>(g.edge_count());
  double q = 0.0;
  for (int i = 0; i < n; ++i) {
    std::set<int> nbrs(g.neighbors(i).begin(), g.neighbors(i).end());
    for (int j = 0; j < n; ++j) {
      if (comm[i] != comm[j]) continue;
      double a = nbrs.count(j) ? 1.0 : 0.0;
      q += a - g.degree(i) * static_cast<double>(g.degree(j)) / two_m;
    }
  }
  return q / two_m;
}

Graph two_triangles_bridge() {
  return make({{"a", "b"}, {"b", "c"}, {"a", "c"},
               {"d", "e"}, {"e", "f"}, {"d", "f"},
               {"c", "d"}});
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  int ka = 0, kb = 0;
  for (int x : a) ka = std::max(ka, x + 1);
  for (int x : b) kb = std::max(kb, x + 1);
  std::vector<std::vector<long long>> table(ka, std::vector<long long>(kb, 0));
  for (std::size_t i = 0; i < a.size(); ++i) ++table[a[i]][b[i]];
  auto choose2 = [](long long x) { return x * (x - 1) / 2; };
  long long sum_ij = 0, sum_a = 0, sum_b = 0;
  std::vector<long long> ra(ka, 0), rb(kb, 0);
  for (int i = 0; i < ka; ++i)
    for (int j = 0; j < kb; ++j) {
      sum_ij += choose2(table[i][j]);
      ra[i] += table[i][j];
      rb[j] += table[i][j];
    }
  for (int i = 0; i < ka; ++i) sum_a += choose2(ra[i]);
  for (int j = 0; j < kb; ++j) sum_b += choose2(rb[j]);
  double total = choose2(static_cast<long long>(a.size()));
  double expected = sum_a * sum_b / total;
  double max_index = 0.5 * (sum_a + sum_b);
  return (sum_ij - expected) / (max_index - expected);
}

}  // namespace

TEST_CASE("edge list loading") {
  SUBCASE("basic parse") {
    Graph g = load_graph(write_temp("a\tb\nb\tc\n"));
    CHECK(g.vertex_count() == 3);
    CHECK(g.edge_count() == 2);
  }
  SUBCASE("self-loop dropped with count") {
    Graph g = load_graph(write_temp("a\ta\n"));
    CHECK(g.vertex_count() == 1);
    CHECK(g.edge_count() == 0);
    CHECK(g.dropped_self_loops() == 1);
  }
  SUBCASE("undirected dedup") {
    Graph g = load_graph(write_temp("a\tb\nb\ta\n"));
    CHECK(g.vertex_count() == 2);
    CHECK(g.edge_count() == 1);
  }
  SUBCASE("comments and blank lines ignored") {
    Graph g = load_graph(write_temp("# header\n\na\tb\n"));
    CHECK(g.edge_count() == 1);
  }
  SUBCASE("malformed line reports its number") {
    auto path = write_temp("a\tb\nbroken line\n");
    CHECK_THROWS_WITH_AS(load_graph(path), doctest::Contains("line 2"),
                         std::runtime_error);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_graph("/nonexistent/x.tsv"), std::runtime_error);
  }
  SUBCASE("degree sum is twice edge count") {
    Graph g = random_graph(25, 0.2, 7);
    std::size_t total = 0;
    for (int v = 0; v < 25; ++v) total += g.degree(v);
    CHECK(total == 2 * g.edge_count());
  }
}

TEST_CASE("k-shell decomposition") {
  SUBCASE("triangle") {
    auto ks = k_shell_decompose(make({{"a", "b"}, {"b", "c"}, {"a", "c"}}));
    CHECK(ks.k_max == 2);
    for (int s : ks.shell) CHECK(s == 2);
  }
  SUBCASE("path strips to shell 1") {
    auto ks = k_shell_decompose(make({{"a", "b"}, {"b", "c"}, {"c", "d"}}));
    CHECK(ks.k_max == 1);
    for (int s : ks.shell) CHECK(s == 1);
  }
  SUBCASE("K4 plus pendant") {
    Graph g = make({{"a", "b"}, {"a", "c"}, {"a", "d"}, {"b", "c"},
                    {"b", "d"}, {"c", "d"}, {"d", "p"}});
    auto ks = k_shell_decompose(g);
    CHECK(ks.k_max == 3);
    CHECK(ks.shell[g.index_of("p")] == 1);
    for (const char* v : {"a", "b", "c", "d"})
      CHECK(ks.shell[g.index_of(v)] == 3);
  }
  SUBCASE("empty graph") {
    auto ks = k_shell_decompose(Graph{});
    CHECK(ks.k_max == 0);
    CHECK(ks.shell.empty());
  }
  SUBCASE("isolated vertex gets shell 0") {
    Graph g = make({{"a", "b"}}, {"z"});
    auto ks = k_shell_decompose(g);
    CHECK(ks.shell[g.index_of("z")] == 0);
    CHECK(ks.k_max == 1);
  }
  SUBCASE("seeded ER graph matches brute-force oracle") {
    Graph g = random_graph(30, 0.2, 42);
    auto ks = k_shell_decompose(g);
    CHECK(ks.shell == brute_force_shells(g));
  }
  SUBCASE("200 random graphs match the oracle exactly") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
      int n = 5 + static_cast<int>(rng() % 36);
      double p = 0.05 + 0.4 * (rng() % 100) / 100.0;
      Graph g = random_graph(n, p, rng());
      auto ks = k_shell_decompose(g);
      REQUIRE(ks.shell == brute_force_shells(g));
      for (int v = 0; v < n; ++v) REQUIRE(ks.shell[v] <= g.degree(v));
    }
  }
  SUBCASE("induced subgraph at shell >= k has min degree >= k") {
    Graph g = random_graph(40, 0.15, 9);
    auto ks = k_shell_decompose(g);
    for (int k = 1; k <= ks.k_max; ++k) {
      for (int v = 0; v < 40; ++v) {
        if (ks.shell[v] < k) continue;
        int d = 0;
        for (int w : g.neighbors(v))
          if (ks.shell[w] >= k) ++d;
        REQUIRE(d >= k);
      }
    }
  }
  SUBCASE("invariant under relabeling") {
    Graph g1 = make({{"a", "b"}, {"b", "c"}, {"a", "c"}, {"c", "d"}});
    Graph g2 = make({{"x1", "x2"}, {"x2", "x3"}, {"x1", "x3"}, {"x3", "x4"}});
    auto k1 = k_shell_decompose(g1);
    auto k2 = k_shell_decompose(g2);
    CHECK(k1.shell[g1.index_of("a")] == k2.shell[g2.index_of("x1")]);
    CHECK(k1.shell[g1.index_of("d")] == k2.shell[g2.index_of("x4")]);
    CHECK(k1.k_max == k2.k_max);
  }
}

TEST_CASE("modularity") {
  SUBCASE("single community scores exactly zero") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Graph g = random_graph(20, 0.3, seed);
      std::vector<int> one(g.vertex_count(), 0);
      CHECK(std::abs(modularity(g, one)) < 1e-12);
    }
  }
  SUBCASE("two triangles partition matches direct summation") {
    Graph g = two_triangles_bridge();
    std::vector<int> comm(6);
    for (const char* v : {"a", "b", "c"}) comm[g.index_of(v)] = 0;
    for (const char* v : {"d", "e", "f"}) comm[g.index_of(v)] = 1;
    CHECK(modularity(g, comm) ==
          doctest::Approx(modularity_direct(g, comm)).epsilon(1e-12));
  }
  SUBCASE("K4 2+2 split is negative and matches direct summation") {
    Graph g = make({{"a", "b"}, {"a", "c"}, {"a", "d"}, {"b", "c"},
                    {"b", "d"}, {"c", "d"}});
    std::vector<int> comm = {0, 0, 1, 1};
    double q = modularity(g, comm);
    CHECK(q < 0.0);
    CHECK(q == doctest::Approx(modularity_direct(g, comm)).epsilon(1e-12));
  }
  SUBCASE("invariant under community relabeling") {
    Graph g = random_graph(18, 0.25, 3);
    std::vector<int> comm(18), swapped(18);
    for (int v = 0; v < 18; ++v) {
      comm[v] = v % 3;
      swapped[v] = (comm[v] + 1) % 3;
    }
    CHECK(modularity(g, comm) == doctest::Approx(modularity(g, swapped)));
  }
  SUBCASE("edgeless graph is an error") {
    Graph g = make({}, {"a", "b"});
    std::vector<int> comm = {0, 0};
    CHECK_THROWS_WITH_AS(modularity(g, comm), doctest::Contains("edgeless"),
                         std::runtime_error);
  }
}

TEST_CASE("community detection") {
  SUBCASE("two triangles split at the bridge, matching exhaustive search") {
    Graph g = two_triangles_bridge();
    auto part = detect_communities(g);
    CHECK(part.n_communities == 2);
    CHECK(part.community[g.index_of("a")] == part.community[g.index_of("b")]);
    CHECK(part.community[g.index_of("a")] == part.community[g.index_of("c")]);
    CHECK(part.community[g.index_of("d")] == part.community[g.index_of("e")]);
    CHECK(part.community[g.index_of("d")] == part.community[g.index_of("f")]);
    CHECK(part.community[g.index_of("a")] != part.community[g.index_of("d")]);

    // exhaustive check over all 2^6 sign vectors
    double best_q = -1.0;
    std::vector<int> best;
    for (int mask = 0; mask < 64; ++mask) {
      std::vector<int> comm(6);
      for (int v = 0; v < 6; ++v) comm[v] = (mask >> v) & 1;
      double q = modularity(g, comm);
      if (q > best_q) {
        best_q = q;
        best = comm;
      }
    }
    CHECK(part.modularity_q == doctest::Approx(best_q).epsilon(1e-9));
    CHECK(adjusted_rand_index(part.community, best) == doctest::Approx(1.0));
  }
  SUBCASE("triangle stays whole") {
    auto part = detect_communities(make({{"a", "b"}, {"b", "c"}, {"a", "c"}}));
    CHECK(part.n_communities == 1);
    CHECK(part.modularity_q == doctest::Approx(0.0));
  }
  SUBCASE("edgeless graph: one community per vertex with warning") {
    auto part = detect_communities(make({}, {"a", "b", "c"}));
    CHECK(part.n_communities == 3);
    CHECK(part.edgeless_warning);
    CHECK(part.modularity_q == 0.0);
  }
  SUBCASE("planted partition recovered") {
    NetworkSpec spec;
    spec.n_communities = 4;
    spec.community_size = 25;
    spec.p_intra = 0.3;
    spec.p_inter = 0.01;
    spec.core_size = 0;
    spec.p_tri = 0.0;
    spec.seed = 11;
    GeneratedNetwork net = generate_network(spec);
    auto part = detect_communities(net.graph);
    std::vector<int> truth(net.graph.vertex_count());
    for (int b = 0; b < 4; ++b)
      for (const auto& id : net.blocks[b]) truth[net.graph.index_of(id)] = b;
    CHECK(adjusted_rand_index(part.community, truth) >= 0.9);
  }
  SUBCASE("disconnected components partitioned independently") {
    Graph g = make({{"a", "b"}, {"b", "c"}, {"a", "c"},
                    {"x", "y"}, {"y", "z"}, {"x", "z"}});
    auto part = detect_communities(g);
    CHECK(part.n_communities == 2);
  }
  SUBCASE("Q never below the no-split baseline") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      Graph g = random_graph(15 + static_cast<int>(rng() % 20), 0.15, rng());
      if (g.edge_count() == 0) continue;
      auto part = detect_communities(g);
      CHECK(part.modularity_q >= -1e-12);
    }
  }
  SUBCASE("incremental Q equals recomputed Q") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 10; ++trial) {
      Graph g = random_graph(30, 0.12, rng());
      if (g.edge_count() == 0) continue;
      auto part = detect_communities(g);
      CHECK(std::abs(part.incremental_q - part.modularity_q) < 1e-9);
    }
  }
  SUBCASE("ids are contiguous and deterministic") {
    Graph g = two_triangles_bridge();
    auto p1 = detect_communities(g);
    auto p2 = detect_communities(g);
    CHECK(p1.community == p2.community);
    std::set<int> ids(p1.community.begin(), p1.community.end());
    CHECK(static_cast<int>(ids.size()) == p1.n_communities);
    CHECK(*ids.begin() == 0);
    CHECK(*ids.rbegin() == p1.n_communities - 1);
  }
}
