#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "memeflow/features.hpp"
#include "memeflow/trajectory.hpp"

namespace memeflow {

/// Distinct sources posting within the first early_frac of each meme's
/// lifespan. Single-event memes are skipped (lifespan zero).
std::map<std::string, std::set<std::string>> early_posters(
    const std::vector<MemeTrajectory>& successful, double early_frac);

struct SensorRow {
  std::string source_id;
  int n_memes_posted = 0;  // successful memes the blog posted on
  int n_early = 0;         // of those, posted within the early window
  double p_value = 1.0;
  bool is_sensor = false;
  std::optional<double> avoidance_p;
  bool in_core_top_fraction = false;
  bool in_kmax_shell = false;
};

struct SensorReport {
  std::vector<SensorRow> rows;  // sorted by source_id
  double alpha = 0.05;
  double early_frac = 0.03;
  int n_successful_memes = 0;       // memes entering the test
  bool degenerate_warning = false;  // all or no posts early
};

struct SensorTestOptions {
  double early_frac = 0.03;
  double alpha = 0.05;
  // Exact Poisson-binomial tail instead of the mean-p binomial
  // approximation, for blogs with at most this many trials (0 = never).
  int exact_below = 0;
  bool bonferroni = false;
};

/// Null: a blog's post on meme M is early with probability q_M = e_M / n_M,
/// independently across memes; p_value is the upper tail of the blog's early
/// count under Binomial(k, mean q_M) (or the exact Poisson-binomial).
SensorReport sensor_test(const std::vector<MemeTrajectory>& successful,
                         const SensorTestOptions& opts = {});

/// Lower-tail binomial test of each sensor's mentions of sub-threshold memes
/// against the corpus-wide sub-threshold fraction. Fills avoidance_p in
/// place; blogs with no mentions in corpus_all stay absent.
void avoidance_test(SensorReport& report,
                    const std::vector<MemeTrajectory>& corpus_all,
                    int threshold_posts = 25, double alpha = 0.05);

struct SensorSummary {
  int n_sensors = 0;
  int n_strong = 0;  // early on >= strong_frac of the successful memes
  double frac_sensors_in_top_core = 0.0;   // top core_fraction by shell rank
  double frac_strong_in_kmax = 0.0;
  double frac_strong_in_top_degree = 0.0;  // same-size top set by degree
};

/// Flags each sensor's membership in the top-core and k_max-shell sets and
/// summarizes, with a degree-ranked baseline of the same size.
SensorSummary characterize(SensorReport& report, const Graph& g,
                           const KShellIndex& shells,
                           double core_fraction = 0.001,
                           double strong_frac = 0.25);

// Upper tail P(X >= x), X ~ Binomial(n, p); exposed for oracle tests.
double binomial_upper_tail(int n, int x, double p);
// Lower tail P(X <= x).
double binomial_lower_tail(int n, int x, double p);
// Upper tail of a Poisson-binomial with per-trial probabilities q.
double poisson_binomial_upper_tail(const std::vector<double>& q, int x);

}  // namespace memeflow
