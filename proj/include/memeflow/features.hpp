#pragma once

#include <array>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "memeflow/community.hpp"
#include "memeflow/graph.hpp"
#include "memeflow/kshell.hpp"
#include "memeflow/trajectory.hpp"

namespace memeflow {

// Decompositions keyed by source id so feature extraction does not need the
// graph itself; sources missing from the maps fall into a single synthetic
// "unknown" community and are never in the k_max-shell.
struct VertexCommunities {
  std::unordered_map<std::string, int> community;
  int n_communities = 0;
};
struct VertexShells {
  std::unordered_map<std::string, int> shell;
  int k_max = 0;
};
using SensorSet = std::unordered_set<std::string>;

VertexCommunities to_vertex_communities(const Graph& g,
                                        const CommunityPartition& p);
VertexShells to_vertex_shells(const Graph& g, const KShellIndex& idx);

struct FeatureVector {
  std::string meme_id;
  double tau_hours = 0.0;
  double happiness = 0.0, arousal = 0.0, dominance = 0.0, polarity = 0.0;
  int n_posts = 0;
  double post_rate = 0.0;  // posts per hour
  int community_dispersion = 0;
  int k_core_blogs = 0;
  int es_blogs = 0;
  MemeLabel label = MemeLabel::Excluded;

  std::array<double, 9> values() const {
    return {happiness, arousal, dominance, polarity,
            static_cast<double>(n_posts), post_rate,
            static_cast<double>(community_dispersion),
            static_cast<double>(k_core_blogs),
            static_cast<double>(es_blogs)};
  }
};

// Fixed feature column order used everywhere (CSV, datasets, models).
const std::vector<std::string>& feature_names();

int n_posts(const MemeTrajectory& traj, double tau);

/// post rate(tau) = (#posts(tau) - #posts(tau/2)) / (tau/2). Throws at tau=0.
double post_rate(const MemeTrajectory& traj, double tau);

int community_dispersion(const MemeTrajectory& traj, double tau,
                         const VertexCommunities& partition);

int k_core_blogs(const MemeTrajectory& traj, double tau,
                 const VertexShells& shells);

int es_blogs(const MemeTrajectory& traj, double tau, const SensorSet& sensors);

FeatureVector extract(const MemeTrajectory& traj, double tau,
                      const VertexCommunities& partition,
                      const VertexShells& shells, const SensorSet& sensors,
                      const std::array<double, 4>& language,
                      const LabelThresholds& thresholds = {});

/// Per-class mean/median hours to reach the n-th post, over memes that got
/// there; layout mirrors a per-class timing table.
struct TimingRow {
  std::string label;
  int n;           // post-count mark (0 means "total", using the last event)
  int memes;       // memes that reached the mark
  double mean_hours = 0.0;
  double median_hours = 0.0;
};
std::vector<TimingRow> timing_table(const std::vector<MemeTrajectory>& corpus,
                                    const std::vector<int>& marks = {5, 10},
                                    const LabelThresholds& thresholds = {});

}  // namespace memeflow
