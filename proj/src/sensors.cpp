#include "memeflow/sensors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace memeflow {

double binomial_upper_tail(int n, int x, double p) {
  if (x <= 0) return 1.0;
  if (x > n) return 0.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  double tail = 0.0;
  double lp = std::log(p), lq = std::log1p(-p);
  for (int i = x; i <= n; ++i) {
    double logterm = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) -
                     std::lgamma(n - i + 1.0) + i * lp + (n - i) * lq;
    tail += std::exp(logterm);
  }
  return std::min(tail, 1.0);
}

double binomial_lower_tail(int n, int x, double p) {
  if (x < 0) return 0.0;
  if (x >= n) return 1.0;
  return 1.0 - binomial_upper_tail(n, x + 1, p);
}

double poisson_binomial_upper_tail(const std::vector<double>& q, int x) {
  const int n = static_cast<int>(q.size());
  if (x <= 0) return 1.0;
  if (x > n) return 0.0;
  // DP over exact count distribution
  std::vector<double> pmf(n + 1, 0.0);
  pmf[0] = 1.0;
  for (int t = 0; t < n; ++t) {
    for (int c = t + 1; c >= 1; --c)
      pmf[c] = pmf[c] * (1.0 - q[t]) + pmf[c - 1] * q[t];
    pmf[0] *= 1.0 - q[t];
  }
  double tail = 0.0;
  for (int c = x; c <= n; ++c) tail += pmf[c];
  return std::min(tail, 1.0);
}

std::map<std::string, std::set<std::string>> early_posters(
    const std::vector<MemeTrajectory>& successful, double early_frac) {
  if (!(early_frac > 0.0 && early_frac <= 1.0))
    throw std::invalid_argument("early_frac must be in (0, 1]");
  std::map<std::string, std::set<std::string>> out;
  for (const auto& traj : successful) {
    if (traj.total_posts() < 2) continue;  // lifespan zero, skipped
    double lifespan = traj.events.back().first - traj.events.front().first;
    double cutoff = traj.events.front().first + early_frac * lifespan;
    std::set<std::string>& early = out[traj.meme_id];
    for (const auto& [t, src] : traj.events) {
      if (t > cutoff) break;
      early.insert(src);
    }
  }
  return out;
}

SensorReport sensor_test(const std::vector<MemeTrajectory>& successful,
                         const SensorTestOptions& opts) {
  if (successful.size() < 2)
    throw std::invalid_argument("sensor_test needs at least 2 successful memes");
  if (!(opts.alpha > 0.0 && opts.alpha < 1.0))
    throw std::invalid_argument("alpha must be in (0, 1)");

  auto early = early_posters(successful, opts.early_frac);

  // per meme: early-poster fraction q_M; per blog: trials and successes
  struct BlogStat {
    int trials = 0;
    int n_early = 0;
    std::vector<double> q;  // per-meme null probabilities (ordered by meme_id)
  };
  std::map<std::string, BlogStat> blogs;

  // iterate memes in id order so output is invariant to corpus ordering
  std::map<std::string, const MemeTrajectory*> by_id;
  for (const auto& t : successful) by_id[t.meme_id] = &t;

  bool any_early_possible = false, any_nonearly = false;
  for (const auto& [meme_id, traj] : by_id) {
    auto it = early.find(meme_id);
    if (it == early.end()) continue;  // single-event meme
    std::set<std::string> posters;
    for (const auto& [t, src] : traj->events) posters.insert(src);
    double q = static_cast<double>(it->second.size()) / posters.size();
    if (q > 0.0) any_early_possible = true;
    if (q < 1.0) any_nonearly = true;
    for (const auto& src : posters) {
      BlogStat& b = blogs[src];
      ++b.trials;
      if (it->second.count(src)) ++b.n_early;
      b.q.push_back(q);
    }
  }

  SensorReport report;
  report.alpha = opts.alpha;
  report.early_frac = opts.early_frac;
  report.degenerate_warning = !(any_early_possible && any_nonearly);
  report.n_successful_memes = static_cast<int>(early.size());

  const int n_tests = static_cast<int>(blogs.size());
  for (const auto& [src, stat] : blogs) {
    SensorRow row;
    row.source_id = src;
    row.n_memes_posted = stat.trials;
    row.n_early = stat.n_early;
    if (opts.exact_below > 0 && stat.trials <= opts.exact_below) {
      row.p_value = poisson_binomial_upper_tail(stat.q, stat.n_early);
    } else {
      double mean_q = 0.0;
      for (double q : stat.q) mean_q += q;
      mean_q /= stat.trials;
      row.p_value = binomial_upper_tail(stat.trials, stat.n_early, mean_q);
    }
    double threshold = opts.bonferroni && n_tests > 0 ? opts.alpha / n_tests
                                                      : opts.alpha;
    row.is_sensor = row.p_value < threshold;
    report.rows.push_back(std::move(row));
  }
  return report;
}

void avoidance_test(SensorReport& report,
                    const std::vector<MemeTrajectory>& corpus_all,
                    int threshold_posts, double alpha) {
  if (threshold_posts < 1)
    throw std::invalid_argument("threshold_posts must be >= 1");
  (void)alpha;  // flagging left to the caller; rows carry the p-value

  int sub = 0;
  for (const auto& t : corpus_all)
    if (t.total_posts() < threshold_posts) ++sub;
  double p_sub = corpus_all.empty()
                     ? 0.0
                     : static_cast<double>(sub) / corpus_all.size();

  for (auto& row : report.rows) {
    int mentions = 0, sub_mentions = 0;
    for (const auto& traj : corpus_all) {
      bool posted = false;
      for (const auto& [t, src] : traj.events) {
        if (src == row.source_id) {
          posted = true;
          break;
        }
      }
      if (posted) {
        ++mentions;
        if (traj.total_posts() < threshold_posts) ++sub_mentions;
      }
    }
    if (mentions == 0) {
      row.avoidance_p = std::nullopt;
      continue;
    }
    row.avoidance_p = binomial_lower_tail(mentions, sub_mentions, p_sub);
  }
}

SensorSummary characterize(SensorReport& report, const Graph& g,
                           const KShellIndex& shells, double core_fraction,
                           double strong_frac) {
  const int n = static_cast<int>(g.vertex_count());
  SensorSummary summary;

  // top core_fraction by shell index, ties by id order
  int n_top = std::max(1, static_cast<int>(
                              std::ceil(core_fraction * static_cast<double>(n))));
  std::vector<int> by_shell(n), by_degree(n);
  for (int v = 0; v < n; ++v) by_shell[v] = by_degree[v] = v;
  std::stable_sort(by_shell.begin(), by_shell.end(), [&](int a, int b) {
    return shells.shell[a] > shells.shell[b];
  });
  std::stable_sort(by_degree.begin(), by_degree.end(), [&](int a, int b) {
    return g.degree(a) > g.degree(b);
  });
  std::unordered_set<std::string> top_core, top_degree;
  for (int i = 0; i < std::min(n_top, n); ++i) {
    top_core.insert(g.id_of(by_shell[i]));
    top_degree.insert(g.id_of(by_degree[i]));
  }

  const int n_successful_memes = report.n_successful_memes;

  int sensors_in_core = 0, strong_in_kmax = 0, strong_in_top_degree = 0;
  for (auto& row : report.rows) {
    int v = g.index_of(row.source_id);
    row.in_core_top_fraction = row.is_sensor && top_core.count(row.source_id) > 0;
    row.in_kmax_shell = v >= 0 && shells.shell[v] == shells.k_max;
    if (!row.is_sensor) continue;
    ++summary.n_sensors;
    if (row.in_core_top_fraction) ++sensors_in_core;
    bool strong = n_successful_memes > 0 &&
                  row.n_early >= strong_frac * n_successful_memes;
    if (strong) {
      ++summary.n_strong;
      if (row.in_kmax_shell) ++strong_in_kmax;
      if (top_degree.count(row.source_id)) ++strong_in_top_degree;
    }
  }
  if (summary.n_sensors > 0)
    summary.frac_sensors_in_top_core =
        static_cast<double>(sensors_in_core) / summary.n_sensors;
  if (summary.n_strong > 0) {
    summary.frac_strong_in_kmax =
        static_cast<double>(strong_in_kmax) / summary.n_strong;
    summary.frac_strong_in_top_degree =
        static_cast<double>(strong_in_top_degree) / summary.n_strong;
  }
  return summary;
}

}  // namespace memeflow
