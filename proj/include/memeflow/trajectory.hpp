#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace memeflow {

/// Time-ordered post events for one meme: (hours since first post, source id).
struct MemeTrajectory {
  std::string meme_id;
  std::vector<std::pair<double, std::string>> events;  // sorted non-decreasing in t

  int total_posts() const { return static_cast<int>(events.size()); }
};

enum class MemeLabel { Successful, Unsuccessful, Excluded };

struct LabelThresholds {
  int success_min = 1000;  // Successful: total posts >= this
  int failure_max = 100;   // Unsuccessful: total posts <= this
};

MemeLabel label(const MemeTrajectory& traj, const LabelThresholds& t = {});

const char* to_string(MemeLabel l);

/// Hour mark of the n-th post (1-based); absent when the meme never got there.
std::optional<double> time_to_n(const MemeTrajectory& traj, int n);

// JSONL: one meme per line, {"meme_id": ..., "events": [[t_hours, source_id], ...]}.
std::vector<MemeTrajectory> load_trajectories(const std::string& path);
void save_trajectories(const std::vector<MemeTrajectory>& corpus,
                       const std::string& path);

}  // namespace memeflow
