#include "memeflow/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_set>

#include "memeflow/rng.hpp"

namespace memeflow {

namespace {

std::string vertex_name(int block, int member) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "c%04d_v%06d", block, member);
  return buf;
}

// Geometric skip sampling over `total` Bernoulli(p) trials; calls visit(k)
// for each success index k in [0, total).
template <typename Visit>
void skip_sample(std::uint64_t total, double p, std::mt19937_64& rng,
                 Visit&& visit) {
  if (p <= 0.0 || total == 0) return;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (p >= 1.0) {
    for (std::uint64_t k = 0; k < total; ++k) visit(k);
    return;
  }
  const double log1mp = std::log1p(-p);
  double k = -1.0;
  while (true) {
    double u = 1.0 - unit(rng);  // in (0, 1]
    k += 1.0 + std::floor(std::log(u) / log1mp);
    if (k >= static_cast<double>(total)) break;
    visit(static_cast<std::uint64_t>(k));
  }
}

// Decode linear index over unordered pairs (a < b) enumerated by b.
std::pair<int, int> decode_pair(std::uint64_t k) {
  auto b = static_cast<std::uint64_t>(
      (1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(k))) / 2.0);
  while (b * (b - 1) / 2 > k) --b;
  while ((b + 1) * b / 2 <= k) ++b;
  return {static_cast<int>(k - b * (b - 1) / 2), static_cast<int>(b)};
}

void validate(const NetworkSpec& s) {
  if (s.n_communities < 1 || s.community_size < 2)
    throw std::invalid_argument("need n_communities >= 1, community_size >= 2");
  if (!(s.p_inter >= 0.0 && s.p_inter < s.p_intra && s.p_intra <= 1.0))
    throw std::invalid_argument("need 0 <= p_inter < p_intra <= 1");
  long long n = static_cast<long long>(s.n_communities) * s.community_size;
  if (s.core_size < 0 || s.core_size > n)
    throw std::invalid_argument("core_size exceeds vertex count");
  if (s.p_core < 0.0 || s.p_core > 1.0 || s.p_tri < 0.0 || s.p_tri > 1.0)
    throw std::invalid_argument("probabilities must be in [0, 1]");
}

}  // namespace

GeneratedNetwork generate_network(const NetworkSpec& spec) {
  validate(spec);
  const int n = spec.n_communities * spec.community_size;
  const int s = spec.community_size;

  GeneratedNetwork net;
  std::vector<std::string> names(n);
  net.blocks.resize(spec.n_communities);
  for (int b = 0; b < spec.n_communities; ++b) {
    for (int i = 0; i < s; ++i) {
      int v = b * s + i;
      names[v] = vertex_name(b, i);
      net.blocks[b].push_back(names[v]);
    }
  }

  std::vector<std::pair<int, int>> edges;

  auto intra_rng = make_rng(spec.seed, "intra");
  for (int b = 0; b < spec.n_communities; ++b) {
    std::uint64_t pairs = static_cast<std::uint64_t>(s) * (s - 1) / 2;
    skip_sample(pairs, spec.p_intra, intra_rng, [&](std::uint64_t k) {
      auto [i, j] = decode_pair(k);
      edges.emplace_back(b * s + i, b * s + j);
    });
  }

  auto inter_rng = make_rng(spec.seed, "inter");
  for (int b1 = 0; b1 < spec.n_communities; ++b1) {
    for (int b2 = b1 + 1; b2 < spec.n_communities; ++b2) {
      std::uint64_t pairs = static_cast<std::uint64_t>(s) * s;
      skip_sample(pairs, spec.p_inter, inter_rng, [&](std::uint64_t k) {
        int i = static_cast<int>(k / s);
        int j = static_cast<int>(k % s);
        edges.emplace_back(b1 * s + i, b2 * s + j);
      });
    }
  }

  std::vector<int> core_idx;
  if (spec.core_size > 0) {
    auto core_rng = make_rng(spec.seed, "core");
    std::unordered_set<int> chosen;
    std::uniform_int_distribution<int> pick(0, n - 1);
    while (static_cast<int>(chosen.size()) < spec.core_size)
      chosen.insert(pick(core_rng));
    core_idx.assign(chosen.begin(), chosen.end());
    std::sort(core_idx.begin(), core_idx.end());
    for (int v : core_idx) net.core.push_back(names[v]);

    // dense core: clique among core vertices
    for (std::size_t i = 0; i < core_idx.size(); ++i)
      for (std::size_t j = i + 1; j < core_idx.size(); ++j)
        edges.emplace_back(core_idx[i], core_idx[j]);

    std::vector<char> is_core(n, 0);
    for (int v : core_idx) is_core[v] = 1;
    for (int c : core_idx) {
      skip_sample(static_cast<std::uint64_t>(n), spec.p_core, core_rng,
                  [&](std::uint64_t k) {
                    int v = static_cast<int>(k);
                    if (!is_core[v]) edges.emplace_back(c, v);
                  });
    }
  }

  auto build = [&](const std::vector<std::pair<int, int>>& es) {
    std::vector<std::pair<std::string, std::string>> named;
    named.reserve(es.size());
    for (auto [u, v] : es) named.emplace_back(names[u], names[v]);
    return Graph::from_edges(std::move(named), names);
  };

  if (spec.p_tri > 0.0) {
    // Triangle-closing pass: per vertex, deg(v) random neighbor pairs, each
    // closed with probability p_tri. Fixed-width names sort in generation
    // order, so graph indices coincide with generation indices.
    Graph g0 = build(edges);
    auto tri_rng = make_rng(spec.seed, "triangles");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int v = 0; v < static_cast<int>(g0.vertex_count()); ++v) {
      auto nbrs = g0.neighbors(v);
      int d = static_cast<int>(nbrs.size());
      if (d < 2) continue;
      std::uniform_int_distribution<int> pick(0, d - 1);
      for (int t = 0; t < d; ++t) {
        int a = nbrs[pick(tri_rng)];
        int b = nbrs[pick(tri_rng)];
        if (a != b && unit(tri_rng) < spec.p_tri) edges.emplace_back(a, b);
      }
    }
  }

  net.graph = build(edges);
  if (net.graph.edge_count() == 0)
    throw std::runtime_error("network spec yields an edgeless graph");
  return net;
}

SeedStrategy seed_strategy_from_string(const std::string& s) {
  if (s == "dispersed_communities") return SeedStrategy::dispersed_communities;
  if (s == "concentrated_community") return SeedStrategy::concentrated_community;
  if (s == "core") return SeedStrategy::core;
  if (s == "periphery") return SeedStrategy::periphery;
  if (s == "uniform") return SeedStrategy::uniform;
  throw std::invalid_argument("unknown seed strategy: " + s);
}

const char* to_string(SeedStrategy s) {
  switch (s) {
    case SeedStrategy::dispersed_communities: return "dispersed_communities";
    case SeedStrategy::concentrated_community: return "concentrated_community";
    case SeedStrategy::core: return "core";
    case SeedStrategy::periphery: return "periphery";
    default: return "uniform";
  }
}

namespace {

std::vector<int> pick_distinct(const std::vector<int>& pool, int count,
                               std::mt19937_64& rng) {
  if (count > static_cast<int>(pool.size()))
    throw std::invalid_argument("not enough vertices for requested seeds");
  std::vector<int> shuffled = pool;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  shuffled.resize(count);
  std::sort(shuffled.begin(), shuffled.end());
  return shuffled;
}

std::vector<int> choose_seeds(const GeneratedNetwork& net,
                              const CascadeSpec& spec, std::mt19937_64& rng) {
  const Graph& g = net.graph;
  const int n = static_cast<int>(g.vertex_count());
  if (spec.n_seeds < 1 || spec.n_seeds > n)
    throw std::invalid_argument("n_seeds must be in [1, vertex count]");

  auto indices_of = [&](const std::vector<std::string>& ids) {
    std::vector<int> out;
    out.reserve(ids.size());
    for (const auto& id : ids) {
      int v = g.index_of(id);
      if (v >= 0) out.push_back(v);
    }
    return out;
  };

  switch (spec.seed_strategy) {
    case SeedStrategy::uniform: {
      std::vector<int> all(n);
      for (int v = 0; v < n; ++v) all[v] = v;
      return pick_distinct(all, spec.n_seeds, rng);
    }
    case SeedStrategy::core: {
      if (net.core.empty()) throw std::invalid_argument("network has no core");
      return pick_distinct(indices_of(net.core), spec.n_seeds, rng);
    }
    case SeedStrategy::periphery: {
      std::unordered_set<std::string> core(net.core.begin(), net.core.end());
      std::vector<int> pool;
      for (int v = 0; v < n; ++v)
        if (!core.count(g.id_of(v))) pool.push_back(v);
      return pick_distinct(pool, spec.n_seeds, rng);
    }
    case SeedStrategy::concentrated_community: {
      std::uniform_int_distribution<int> pick(
          0, static_cast<int>(net.blocks.size()) - 1);
      int b = pick(rng);
      return pick_distinct(indices_of(net.blocks[b]), spec.n_seeds, rng);
    }
    case SeedStrategy::dispersed_communities: {
      // one seed per community, cycling through a shuffled block order
      std::vector<int> order(net.blocks.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
      std::shuffle(order.begin(), order.end(), rng);
      std::vector<char> used(n, 0);
      std::vector<int> seeds;
      int round = 0;
      while (static_cast<int>(seeds.size()) < spec.n_seeds) {
        int b = order[seeds.size() % order.size()];
        const auto pool = indices_of(net.blocks[b]);
        std::uniform_int_distribution<int> pick(0, static_cast<int>(pool.size()) - 1);
        int v = pool[pick(rng)];
        if (!used[v]) {
          used[v] = 1;
          seeds.push_back(v);
        } else if (++round > 100 * spec.n_seeds) {
          throw std::runtime_error("could not place dispersed seeds");
        }
      }
      std::sort(seeds.begin(), seeds.end());
      return seeds;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

MemeTrajectory simulate_cascade(const GeneratedNetwork& net,
                                const CascadeSpec& spec,
                                const std::string& meme_id) {
  if (spec.transmit_prob < 0.0 || spec.transmit_prob > 1.0)
    throw std::invalid_argument("transmit_prob must be in [0, 1]");
  if (spec.dt_hours <= 0.0)
    throw std::invalid_argument("dt_hours must be positive");
  const Graph& g = net.graph;

  auto rng = make_rng(spec.rng_seed, "cascade");
  std::vector<int> frontier = choose_seeds(net, spec, rng);
  std::vector<char> active(g.vertex_count(), 0);
  for (int v : frontier) active[v] = 1;

  MemeTrajectory traj;
  traj.meme_id = meme_id;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  int round = 0;
  while (!frontier.empty()) {
    // stamp this round's activations with strictly increasing offsets
    double base = round * spec.dt_hours;
    double step = spec.dt_hours / (static_cast<double>(frontier.size()) + 1.0);
    for (std::size_t i = 0; i < frontier.size(); ++i)
      traj.events.emplace_back(base + static_cast<double>(i) * step,
                               g.id_of(frontier[i]));

    std::vector<int> next;
    for (int u : frontier) {
      for (int v : g.neighbors(u)) {
        if (active[v]) continue;
        if (unit(rng) < spec.transmit_prob) {
          active[v] = 1;
          next.push_back(v);
        }
      }
    }
    frontier = std::move(next);
    ++round;
  }
  return traj;
}

std::vector<CorpusEntry> generate_corpus(int n_memes,
                                         const GeneratedNetwork& net,
                                         const CorpusSpec& spec) {
  if (n_memes < 1) throw std::invalid_argument("n_memes must be >= 1");
  if (spec.transmit_prob_min <= 0.0 ||
      spec.transmit_prob_max < spec.transmit_prob_min)
    throw std::invalid_argument("bad transmit_prob range");

  std::vector<SeedStrategy> strategies = {
      SeedStrategy::dispersed_communities, SeedStrategy::concentrated_community,
      SeedStrategy::core, SeedStrategy::periphery, SeedStrategy::uniform};

  std::vector<CorpusEntry> corpus;
  corpus.reserve(n_memes);
  for (int i = 0; i < n_memes; ++i) {
    auto rng = make_rng(spec.rng_seed, "corpus-params", i);
    CascadeSpec cs;
    std::uniform_real_distribution<double> logp(std::log(spec.transmit_prob_min),
                                                std::log(spec.transmit_prob_max));
    cs.transmit_prob = std::exp(logp(rng));
    std::uniform_int_distribution<int> nseeds(spec.n_seeds_min, spec.n_seeds_max);
    cs.n_seeds = nseeds(rng);
    cs.seed_strategy = strategies[i % strategies.size()];
    if (net.core.empty() && (cs.seed_strategy == SeedStrategy::core ||
                             cs.seed_strategy == SeedStrategy::periphery))
      cs.seed_strategy = SeedStrategy::uniform;
    if (cs.seed_strategy == SeedStrategy::core)
      cs.n_seeds = std::min(cs.n_seeds, static_cast<int>(net.core.size()));
    cs.dt_hours = spec.dt_hours;
    cs.rng_seed = derive_seed(spec.rng_seed, "corpus-cascade", i);

    char id[32];
    std::snprintf(id, sizeof(id), "meme%05d", i);
    corpus.push_back({simulate_cascade(net, cs, id), cs});
  }
  return corpus;
}

}  // namespace memeflow
