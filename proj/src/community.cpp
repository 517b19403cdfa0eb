#include "memeflow/community.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace memeflow {

double modularity(const Graph& g, const std::vector<int>& community) {
  const int n = static_cast<int>(g.vertex_count());
  if (static_cast<int>(community.size()) != n)
    throw std::invalid_argument("partition does not cover all vertices");
  const double m = static_cast<double>(g.edge_count());
  if (g.edge_count() == 0)
    throw std::runtime_error("modularity undefined on edgeless graph");

  int n_comm = 0;
  for (int c : community) n_comm = std::max(n_comm, c + 1);
  std::vector<double> intra(n_comm, 0.0);   // edges inside each community
  std::vector<double> deg_tot(n_comm, 0.0); // total degree per community
  for (int v = 0; v < n; ++v) {
    deg_tot[community[v]] += g.degree(v);
    for (int w : g.neighbors(v))
      if (v < w && community[v] == community[w]) intra[community[v]] += 1.0;
  }
  double q = 0.0;
  for (int c = 0; c < n_comm; ++c) {
    double d = deg_tot[c] / (2.0 * m);
    q += intra[c] / m - d * d;
  }
  return q;
}

namespace {

// One candidate bisection of a vertex group, working against the generalized
// modularity matrix B(g)_ij = B_ij - delta_ij * rowsum_i with global degrees
// and edge count. All products are matrix-free.
struct GroupSplitter {
  const Graph& g;
  const std::vector<double>& k;  // global degrees
  double two_m;
  const std::vector<int>& verts;   // sorted global vertex indices
  std::vector<int>& local_of;      // global -> local scratch (-1 outside)

  int ng;
  std::vector<double> deg_in;   // within-group degree
  std::vector<double> rowsum;   // sum_j-in-g B_ij
  double ktot = 0.0;

  explicit GroupSplitter(const Graph& graph, const std::vector<double>& kk,
                         double twom, const std::vector<int>& vs,
                         std::vector<int>& scratch)
      : g(graph), k(kk), two_m(twom), verts(vs), local_of(scratch),
        ng(static_cast<int>(vs.size())) {
    for (int i = 0; i < ng; ++i) local_of[verts[i]] = i;
    deg_in.assign(ng, 0.0);
    for (int i = 0; i < ng; ++i) {
      ktot += k[verts[i]];
      for (int w : g.neighbors(verts[i]))
        if (local_of[w] >= 0) deg_in[i] += 1.0;
    }
    rowsum.resize(ng);
    for (int i = 0; i < ng; ++i)
      rowsum[i] = deg_in[i] - k[verts[i]] * ktot / two_m;
  }
  ~GroupSplitter() {
    for (int v : verts) local_of[v] = -1;
  }

  // y = B(g) x
  void multiply(const std::vector<double>& x, std::vector<double>& y) const {
    double kx = 0.0;
    for (int i = 0; i < ng; ++i) kx += k[verts[i]] * x[i];
    for (int i = 0; i < ng; ++i) {
      double ax = 0.0;
      for (int w : g.neighbors(verts[i])) {
        int j = local_of[w];
        if (j >= 0) ax += x[j];
      }
      y[i] = ax - k[verts[i]] * kx / two_m - rowsum[i] * x[i];
    }
  }

  // s^T B(g) s for a sign vector, via f = sum_i s_i (A_g s)_i - kx^2/2m - R.
  double quadratic_form(const std::vector<int8_t>& s) const {
    double kx = 0.0, r = 0.0, sas = 0.0;
    for (int i = 0; i < ng; ++i) {
      kx += k[verts[i]] * s[i];
      r += rowsum[i];
    }
    for (int i = 0; i < ng; ++i) {
      double ax = 0.0;
      for (int w : g.neighbors(verts[i])) {
        int j = local_of[w];
        if (j >= 0) ax += s[j];
      }
      sas += s[i] * ax;
    }
    return sas - kx * kx / two_m - r;
  }

  // Leading eigenvector of B(g) by shifted power iteration; deterministic
  // alternating start. Returns the sign split (true = nontrivial).
  bool spectral_split(std::vector<int8_t>& s, double tol, int max_iters) const {
    if (ng < 2) return false;
    double shift = 0.0;
    for (int i = 0; i < ng; ++i)
      shift = std::max(shift, deg_in[i] + k[verts[i]] * ktot / two_m +
                                  std::abs(rowsum[i]));
    std::vector<double> x(ng), y(ng);
    for (int i = 0; i < ng; ++i) x[i] = (i % 2 == 0) ? 1.0 : -1.0;
    double norm = std::sqrt(static_cast<double>(ng));
    for (double& xi : x) xi /= norm;

    // Only the sign pattern matters downstream, so besides the Rayleigh
    // quotient settling we also stop once signs have been stable for a few
    // iterations; the shifted spectrum can make full eigenvector convergence
    // arbitrarily slow while the split itself is long decided.
    s.assign(ng, 0);
    int stable = 0;
    double lambda_prev = 0.0;
    for (int it = 0; it < max_iters; ++it) {
      multiply(x, y);
      double lambda = 0.0;
      for (int i = 0; i < ng; ++i) lambda += x[i] * y[i];
      double ynorm = 0.0;
      for (int i = 0; i < ng; ++i) {
        y[i] += shift * x[i];
        ynorm += y[i] * y[i];
      }
      ynorm = std::sqrt(ynorm);
      if (ynorm == 0.0) break;  // x in the null space of the shifted matrix
      int flips = 0;
      for (int i = 0; i < ng; ++i) {
        x[i] = y[i] / ynorm;
        int8_t sg = x[i] < 0.0 ? int8_t{-1} : int8_t{1};
        if (sg != s[i]) {
          s[i] = sg;
          ++flips;
        }
      }
      stable = flips == 0 ? stable + 1 : 0;
      if (it > 0 &&
          (stable >= 8 ||
           std::abs(lambda - lambda_prev) <= tol * std::max(1.0, std::abs(lambda))))
        break;
      lambda_prev = lambda;
    }
    bool pos = false, neg = false;
    for (int i = 0; i < ng; ++i) {
      if (s[i] == 0) s[i] = 1;
      (s[i] > 0 ? pos : neg) = true;
    }
    return pos && neg;
  }

  double flip_gain(const std::vector<int8_t>& s, const std::vector<double>& ax,
                   double kx, int i) const {
    double kv = k[verts[i]];
    double bs = ax[i] - kv * kx / two_m - rowsum[i] * s[i];
    double bvv = -kv * kv / two_m - rowsum[i];
    return -4.0 * s[i] * bs + 4.0 * bvv;
  }

  void apply_flip(std::vector<int8_t>& s, std::vector<double>& ax,
                  double& kx, int i) const {
    double delta = -2.0 * s[i];
    for (int w : g.neighbors(verts[i])) {
      int j = local_of[w];
      if (j >= 0) ax[j] += delta;
    }
    kx += delta * k[verts[i]];
    s[i] = -s[i];
  }

  // Kernighan-Lin style vertex-moving refinement. Best-first pass (each
  // vertex moved at most once, best intermediate state kept) up to the size
  // cap; a single in-order greedy sweep beyond it.
  void refine(std::vector<int8_t>& s, int cap) const {
    std::vector<double> ax(ng, 0.0);
    double kx = 0.0;
    for (int i = 0; i < ng; ++i) {
      kx += k[verts[i]] * s[i];
      for (int w : g.neighbors(verts[i])) {
        int j = local_of[w];
        if (j >= 0) ax[i] += s[j];
      }
    }
    if (ng > cap) {
      for (int i = 0; i < ng; ++i)
        if (flip_gain(s, ax, kx, i) > 0.0) apply_flip(s, ax, kx, i);
      return;
    }
    std::vector<char> moved(ng, 0);
    std::vector<int> flips;
    flips.reserve(ng);
    double f = 0.0, best_f = 0.0;
    int best_step = -1;
    for (int step = 0; step < ng; ++step) {
      int pick = -1;
      double pick_gain = 0.0;
      for (int i = 0; i < ng; ++i) {
        if (moved[i]) continue;
        double gain = flip_gain(s, ax, kx, i);
        if (pick < 0 || gain > pick_gain) {
          pick = i;
          pick_gain = gain;
        }
      }
      if (pick < 0) break;
      apply_flip(s, ax, kx, pick);
      moved[pick] = 1;
      flips.push_back(pick);
      f += pick_gain;
      if (f > best_f) {
        best_f = f;
        best_step = step;
      }
    }
    // roll back past the best prefix (everything, if no prefix improved)
    for (int step = static_cast<int>(flips.size()) - 1; step > best_step; --step)
      s[flips[step]] = -s[flips[step]];
  }
};

}  // namespace

CommunityPartition detect_communities(const Graph& g,
                                      const CommunityOptions& opts) {
  const int n = static_cast<int>(g.vertex_count());
  CommunityPartition out;
  out.community.assign(n, 0);
  if (n == 0) return out;

  if (g.edge_count() == 0) {
    // each vertex its own community; Q is undefined, reported as 0
    for (int v = 0; v < n; ++v) out.community[v] = v;
    out.n_communities = n;
    out.modularity_q = 0.0;
    out.edgeless_warning = true;
    return out;
  }

  std::vector<double> k(n);
  for (int v = 0; v < n; ++v) k[v] = g.degree(v);
  const double two_m = 2.0 * static_cast<double>(g.edge_count());

  std::vector<int> scratch(n, -1);
  std::vector<std::vector<int>> final_groups;
  std::vector<std::vector<int>> work = g.connected_components();

  {
    std::vector<int> comp_label(n, 0);
    for (std::size_t c = 0; c < work.size(); ++c)
      for (int v : work[c]) comp_label[v] = static_cast<int>(c);
    out.incremental_q = modularity(g, comp_label);
  }

  while (!work.empty()) {
    std::vector<int> group = std::move(work.back());
    work.pop_back();
    if (group.size() < 2) {
      final_groups.push_back(std::move(group));
      continue;
    }
    std::vector<int8_t> s;
    double gain = 0.0;
    bool pos = false, neg = false;
    {
      // scope: the splitter references `group` and resets its scratch slots
      // on destruction, so it must die before `group` is moved anywhere
      GroupSplitter split(g, k, two_m, group, scratch);
      if (split.spectral_split(s, opts.power_tol, opts.power_max_iters)) {
        split.refine(s, opts.refine_cap);
        gain = split.quadratic_form(s) / (2.0 * two_m);
        for (int8_t si : s) (si > 0 ? pos : neg) = true;
      }
    }
    if (gain <= opts.min_gain || !pos || !neg) {
      final_groups.push_back(std::move(group));
      continue;
    }
    out.incremental_q += gain;
    std::vector<int> a, b;
    for (std::size_t i = 0; i < group.size(); ++i)
      (s[i] > 0 ? a : b).push_back(group[i]);
    work.push_back(std::move(a));
    work.push_back(std::move(b));
  }

  // community ids in order of each group's smallest vertex
  std::sort(final_groups.begin(), final_groups.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  out.n_communities = static_cast<int>(final_groups.size());
  for (int c = 0; c < out.n_communities; ++c)
    for (int v : final_groups[c]) out.community[v] = c;
  out.modularity_q = modularity(g, out.community);
  return out;
}

}  // namespace memeflow
