#include "memeflow/trajectory.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace memeflow {

MemeLabel label(const MemeTrajectory& traj, const LabelThresholds& t) {
  int n = traj.total_posts();
  if (n >= t.success_min) return MemeLabel::Successful;
  if (n <= t.failure_max) return MemeLabel::Unsuccessful;
  return MemeLabel::Excluded;
}

const char* to_string(MemeLabel l) {
  switch (l) {
    case MemeLabel::Successful: return "successful";
    case MemeLabel::Unsuccessful: return "unsuccessful";
    default: return "excluded";
  }
}

std::optional<double> time_to_n(const MemeTrajectory& traj, int n) {
  if (n < 1) throw std::invalid_argument("time_to_n requires n >= 1");
  if (traj.total_posts() < n) return std::nullopt;
  return traj.events[static_cast<std::size_t>(n) - 1].first;
}

static void validate(const MemeTrajectory& t, std::size_t lineno) {
  if (t.events.empty())
    throw std::runtime_error("trajectory with no events at line " +
                             std::to_string(lineno));
  if (t.events.front().first != 0.0)
    throw std::runtime_error("trajectory '" + t.meme_id +
                             "' does not start at t=0 (line " +
                             std::to_string(lineno) + ")");
  if (!std::is_sorted(t.events.begin(), t.events.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; }))
    throw std::runtime_error("trajectory '" + t.meme_id +
                             "' events not time-sorted (line " +
                             std::to_string(lineno) + ")");
}

std::vector<MemeTrajectory> load_trajectories(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trajectory file: " + path);
  std::vector<MemeTrajectory> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " +
                               e.what());
    }
    MemeTrajectory t;
    t.meme_id = j.at("meme_id").get<std::string>();
    for (const auto& ev : j.at("events")) {
      t.events.emplace_back(ev.at(0).get<double>(),
                            ev.at(1).get<std::string>());
    }
    validate(t, lineno);
    out.push_back(std::move(t));
  }
  return out;
}

void save_trajectories(const std::vector<MemeTrajectory>& corpus,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trajectory file: " + path);
  for (const auto& t : corpus) {
    nlohmann::json j;
    j["meme_id"] = t.meme_id;
    auto& events = j["events"] = nlohmann::json::array();
    for (const auto& [tt, src] : t.events)
      events.push_back(nlohmann::json::array({tt, src}));
    out << j.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace memeflow
