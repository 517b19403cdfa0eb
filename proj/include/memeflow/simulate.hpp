#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "memeflow/graph.hpp"
#include "memeflow/trajectory.hpp"

namespace memeflow {

struct NetworkSpec {
  int n_communities = 10;
  int community_size = 50;
  double p_intra = 0.15;
  double p_inter = 0.005;
  int core_size = 10;
  double p_core = 0.2;   // per core-to-noncore pair attachment probability
  double p_tri = 0.1;    // triangle-closing pass probability
  std::uint64_t seed = 1;
};

/// Planted-partition graph with an optional densely interlinked core overlay
/// and a triangle-closing pass. Retains the planted blocks and core member
/// list as ground truth for seeding and recovery oracles.
struct GeneratedNetwork {
  Graph graph;
  std::vector<std::vector<std::string>> blocks;  // planted community members
  std::vector<std::string> core;                 // core vertex ids, sorted
};

GeneratedNetwork generate_network(const NetworkSpec& spec);

enum class SeedStrategy {
  dispersed_communities,
  concentrated_community,
  core,
  periphery,
  uniform,
};

SeedStrategy seed_strategy_from_string(const std::string& s);
const char* to_string(SeedStrategy s);

struct CascadeSpec {
  double transmit_prob = 0.1;
  int n_seeds = 3;
  SeedStrategy seed_strategy = SeedStrategy::uniform;
  double dt_hours = 3.0;  // spacing between activation rounds
  std::uint64_t rng_seed = 1;
};

/// Discrete-round independent cascade: seeds activate at t=0; each newly
/// active vertex gets one chance per inactive neighbor. The i-th activation
/// of round r is stamped r*dt + i*dt/(count+1), so events are strictly
/// ordered and the first is exactly t=0.
MemeTrajectory simulate_cascade(const GeneratedNetwork& net,
                                const CascadeSpec& spec,
                                const std::string& meme_id = "meme");

struct CorpusSpec {
  double transmit_prob_min = 0.02;  // per-meme probability, log-uniform draw
  double transmit_prob_max = 0.40;
  int n_seeds_min = 1;
  int n_seeds_max = 5;
  double dt_hours = 3.0;
  std::uint64_t rng_seed = 1;
};

struct CorpusEntry {
  MemeTrajectory trajectory;
  CascadeSpec params;  // generation parameters, kept for oracle use
};

/// Mixed corpus over all seed strategies with log-uniform transmit
/// probabilities, yielding a right-skewed final-size distribution.
std::vector<CorpusEntry> generate_corpus(int n_memes,
                                         const GeneratedNetwork& net,
                                         const CorpusSpec& spec);

}  // namespace memeflow
