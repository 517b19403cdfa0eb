#include "memeflow/features.hpp"

#include <algorithm>
#include <stdexcept>

namespace memeflow {

VertexCommunities to_vertex_communities(const Graph& g,
                                        const CommunityPartition& p) {
  VertexCommunities out;
  out.n_communities = p.n_communities;
  out.community.reserve(g.vertex_count());
  for (int v = 0; v < static_cast<int>(g.vertex_count()); ++v)
    out.community.emplace(g.id_of(v), p.community[v]);
  return out;
}

VertexShells to_vertex_shells(const Graph& g, const KShellIndex& idx) {
  VertexShells out;
  out.k_max = idx.k_max;
  out.shell.reserve(g.vertex_count());
  for (int v = 0; v < static_cast<int>(g.vertex_count()); ++v)
    out.shell.emplace(g.id_of(v), idx.shell[v]);
  return out;
}

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = {
      "happiness",  "arousal",   "dominance",            "polarity",
      "n_posts",    "post_rate", "community_dispersion", "k_core_blogs",
      "es_blogs"};
  return names;
}

int n_posts(const MemeTrajectory& traj, double tau) {
  if (tau < 0.0) throw std::invalid_argument("tau must be >= 0");
  int count = 0;
  for (const auto& [t, src] : traj.events) {
    if (t > tau) break;
    ++count;
  }
  return count;
}

double post_rate(const MemeTrajectory& traj, double tau) {
  if (tau <= 0.0) throw std::invalid_argument("rate undefined at tau=0");
  double half = tau / 2.0;
  return (n_posts(traj, tau) - n_posts(traj, half)) / half;
}

int community_dispersion(const MemeTrajectory& traj, double tau,
                         const VertexCommunities& partition) {
  std::unordered_set<int> comms;
  bool unknown = false;
  for (const auto& [t, src] : traj.events) {
    if (t > tau) break;
    auto it = partition.community.find(src);
    if (it == partition.community.end())
      unknown = true;  // one synthetic community, however many such sources
    else
      comms.insert(it->second);
  }
  return static_cast<int>(comms.size()) + (unknown ? 1 : 0);
}

int k_core_blogs(const MemeTrajectory& traj, double tau,
                 const VertexShells& shells) {
  std::unordered_set<std::string> core_sources;
  for (const auto& [t, src] : traj.events) {
    if (t > tau) break;
    auto it = shells.shell.find(src);
    if (it != shells.shell.end() && it->second == shells.k_max)
      core_sources.insert(src);
  }
  return static_cast<int>(core_sources.size());
}

int es_blogs(const MemeTrajectory& traj, double tau, const SensorSet& sensors) {
  std::unordered_set<std::string> hits;
  for (const auto& [t, src] : traj.events) {
    if (t > tau) break;
    if (sensors.count(src)) hits.insert(src);
  }
  return static_cast<int>(hits.size());
}

FeatureVector extract(const MemeTrajectory& traj, double tau,
                      const VertexCommunities& partition,
                      const VertexShells& shells, const SensorSet& sensors,
                      const std::array<double, 4>& language,
                      const LabelThresholds& thresholds) {
  FeatureVector fv;
  fv.meme_id = traj.meme_id;
  fv.tau_hours = tau;
  fv.happiness = language[0];
  fv.arousal = language[1];
  fv.dominance = language[2];
  fv.polarity = language[3];
  fv.n_posts = n_posts(traj, tau);
  fv.post_rate = tau > 0.0 ? post_rate(traj, tau) : 0.0;
  fv.community_dispersion = community_dispersion(traj, tau, partition);
  fv.k_core_blogs = k_core_blogs(traj, tau, shells);
  fv.es_blogs = es_blogs(traj, tau, sensors);
  fv.label = label(traj, thresholds);
  return fv;
}

static double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<TimingRow> timing_table(const std::vector<MemeTrajectory>& corpus,
                                    const std::vector<int>& marks,
                                    const LabelThresholds& thresholds) {
  std::vector<TimingRow> rows;
  for (MemeLabel cls : {MemeLabel::Successful, MemeLabel::Unsuccessful}) {
    std::vector<int> all_marks = marks;
    all_marks.push_back(0);  // 0 sentinel = time of final post
    for (int mark : all_marks) {
      std::vector<double> times;
      for (const auto& traj : corpus) {
        if (traj.events.empty() || label(traj, thresholds) != cls) continue;
        auto t = mark == 0 ? std::optional<double>(traj.events.back().first)
                           : time_to_n(traj, mark);
        if (t) times.push_back(*t);
      }
      TimingRow row;
      row.label = to_string(cls);
      row.n = mark;
      row.memes = static_cast<int>(times.size());
      if (!times.empty()) {
        double sum = 0.0;
        for (double t : times) sum += t;
        row.mean_hours = sum / times.size();
        row.median_hours = median(times);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace memeflow
