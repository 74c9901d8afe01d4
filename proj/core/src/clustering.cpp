#include "trajscore/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace trajscore {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Symmetric distance cache; matrix-backed up to 5000 items, pass-through
// above (pairwise metrics like the Frechet distance are expensive enough
// that regions stay well below this).
class DistCache {
 public:
  DistCache(size_t n, const DistanceFn& fn) : n_(n), fn_(fn) {
    if (n_ > 1 && n_ <= 5000) {
      matrix_.resize(n_ * (n_ - 1) / 2);
      for (size_t i = 1; i < n_; ++i)
        for (size_t j = 0; j < i; ++j) matrix_[index(i, j)] = fn_(i, j);
      cached_ = true;
    }
  }

  double operator()(size_t i, size_t j) const {
    if (i == j) return 0.0;
    if (cached_) return matrix_[index(i, j)];
    return fn_(i, j);
  }

 private:
  size_t index(size_t i, size_t j) const {
    if (i < j) std::swap(i, j);
    return i * (i - 1) / 2 + j;
  }
  size_t n_;
  const DistanceFn& fn_;
  std::vector<double> matrix_;
  bool cached_ = false;
};

void fill_outlier_distances(ClusterResult& result, size_t n,
                            const DistanceFn& distance) {
  result.outlier_distance.assign(n, 0.0);
  std::vector<size_t> members;
  for (size_t i = 0; i < n; ++i)
    if (result.labels[i] != kNoise) members.push_back(i);
  for (size_t i = 0; i < n; ++i) {
    if (result.labels[i] != kNoise) continue;
    double best = kInf;
    for (size_t j : members) best = std::min(best, distance(i, j));
    result.outlier_distance[i] = best;
  }
}

}  // namespace

ClusterResult dbscan(size_t n, const DistanceFn& distance, double eps,
                     size_t min_samples, const CandidateFn& candidates) {
  constexpr int kUnvisited = -2;
  ClusterResult result;
  result.labels.assign(n, kUnvisited);
  if (n == 0) return result;

  DistCache dist(candidates ? 1 : n, distance);
  const auto query = [&](size_t i, std::vector<size_t>& out) {
    out.clear();
    if (candidates) {
      static thread_local std::vector<size_t> scratch;
      scratch.clear();
      candidates(i, scratch);
      for (size_t j : scratch)
        if (j == i || distance(i, j) <= eps) out.push_back(j);
      std::sort(out.begin(), out.end());
    } else {
      for (size_t j = 0; j < n; ++j)
        if (j == i || dist(i, j) <= eps) out.push_back(j);
    }
  };

  std::vector<size_t> neighbors, expansion;
  int next_cluster = 0;
  for (size_t i = 0; i < n; ++i) {
    if (result.labels[i] != kUnvisited) continue;
    query(i, neighbors);
    if (neighbors.size() < min_samples) {
      result.labels[i] = kNoise;
      continue;
    }
    const int cid = next_cluster++;
    result.labels[i] = cid;
    std::deque<size_t> seeds(neighbors.begin(), neighbors.end());
    while (!seeds.empty()) {
      const size_t q = seeds.front();
      seeds.pop_front();
      if (result.labels[q] == kNoise) result.labels[q] = cid;  // border
      if (result.labels[q] != kUnvisited) continue;
      result.labels[q] = cid;
      query(q, expansion);
      if (expansion.size() >= min_samples)
        seeds.insert(seeds.end(), expansion.begin(), expansion.end());
    }
  }

  result.cluster_sizes.assign(static_cast<size_t>(next_cluster), 0);
  for (int l : result.labels)
    if (l != kNoise) ++result.cluster_sizes[static_cast<size_t>(l)];
  fill_outlier_distances(result, n, distance);
  return result;
}

namespace {

struct DendroNode {
  int left = -1, right = -1;  // < n: leaf index, >= n: internal node
  double weight = 0.0;
  size_t size = 1;
};

struct CondensedCluster {
  int parent = -1;
  double birth_lambda = 0.0;
  double death_lambda = 0.0;
  std::vector<int> children;                       // condensed cluster ids
  std::vector<std::pair<size_t, double>> fallout;  // (point, lambda_out)
  size_t subtree_points = 0;
};

double to_lambda(double d) { return 1.0 / std::max(d, 1e-12); }

void gather_leaves(const std::vector<DendroNode>& tree, size_t n, int node,
                   std::vector<size_t>& out) {
  std::vector<int> stack{node};
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    if (cur < static_cast<int>(n)) {
      out.push_back(static_cast<size_t>(cur));
    } else {
      const DendroNode& dn = tree[static_cast<size_t>(cur)];
      stack.push_back(dn.left);
      stack.push_back(dn.right);
    }
  }
}

}  // namespace

ClusterResult hdbscan_cluster(size_t n, const DistanceFn& distance,
                              size_t min_cluster_size) {
  const size_t m = std::max<size_t>(2, min_cluster_size);
  ClusterResult result;
  result.labels.assign(n, kNoise);
  if (n < m) {
    fill_outlier_distances(result, n, distance);
    return result;
  }

  DistCache dist(n, distance);

  // Core distance: m-th nearest neighbour, the item itself counting first.
  std::vector<double> core(n);
  {
    std::vector<double> row(n - 1);
    for (size_t i = 0; i < n; ++i) {
      size_t k = 0;
      for (size_t j = 0; j < n; ++j)
        if (j != i) row[k++] = dist(i, j);
      std::nth_element(row.begin(), row.begin() + (m - 2), row.end());
      core[i] = row[m - 2];
    }
  }
  const auto mreach = [&](size_t i, size_t j) {
    return std::max({core[i], core[j], dist(i, j)});
  };

  // Prim MST over the complete mutual-reachability graph.
  struct Edge {
    double w;
    size_t a, b;
  };
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  {
    std::vector<double> best(n, kInf);
    std::vector<size_t> best_from(n, 0);
    std::vector<bool> in_tree(n, false);
    in_tree[0] = true;
    for (size_t j = 1; j < n; ++j) {
      best[j] = mreach(0, j);
      best_from[j] = 0;
    }
    for (size_t it = 1; it < n; ++it) {
      size_t pick = n;
      for (size_t j = 0; j < n; ++j)
        if (!in_tree[j] && (pick == n || best[j] < best[pick])) pick = j;
      in_tree[pick] = true;
      edges.push_back({best[pick], best_from[pick], pick});
      for (size_t j = 0; j < n; ++j) {
        if (in_tree[j]) continue;
        const double w = mreach(pick, j);
        if (w < best[j]) {
          best[j] = w;
          best_from[j] = pick;
        }
      }
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.w, x.a, x.b) < std::tie(y.w, y.a, y.b);
  });

  // Single-linkage dendrogram via union-find over sorted edges.
  std::vector<DendroNode> tree(2 * n - 1);
  {
    std::vector<int> root_of(2 * n - 1);
    std::iota(root_of.begin(), root_of.end(), 0);
    std::vector<int> comp(n);
    std::iota(comp.begin(), comp.end(), 0);
    const std::function<int(int)> find = [&](int x) {
      while (root_of[static_cast<size_t>(x)] != x)
        x = root_of[static_cast<size_t>(x)] =
            root_of[static_cast<size_t>(root_of[static_cast<size_t>(x)])];
      return x;
    };
    size_t next = n;
    for (const Edge& e : edges) {
      const int ra = find(static_cast<int>(e.a));
      const int rb = find(static_cast<int>(e.b));
      DendroNode& dn = tree[next];
      dn.left = ra;
      dn.right = rb;
      dn.weight = e.w;
      dn.size = (ra < static_cast<int>(n) ? 1 : tree[static_cast<size_t>(ra)].size) +
                (rb < static_cast<int>(n) ? 1 : tree[static_cast<size_t>(rb)].size);
      root_of[static_cast<size_t>(ra)] = static_cast<int>(next);
      root_of[static_cast<size_t>(rb)] = static_cast<int>(next);
      ++next;
    }
  }

  // Condense the hierarchy: splits where both sides hold at least m points
  // are true splits, smaller splinters fall out of the current cluster.
  std::vector<CondensedCluster> clusters(1);
  clusters[0].birth_lambda = 0.0;
  {
    const auto node_size = [&](int node) {
      return node < static_cast<int>(n) ? size_t{1}
                                        : tree[static_cast<size_t>(node)].size;
    };
    std::vector<size_t> leaves;
    std::vector<std::pair<int, int>> stack{{static_cast<int>(2 * n - 2), 0}};
    while (!stack.empty()) {
      const auto [node, cid] = stack.back();
      stack.pop_back();
      const DendroNode& dn = tree[static_cast<size_t>(node)];
      const double lambda = to_lambda(dn.weight);
      const size_t ls = node_size(dn.left), rs = node_size(dn.right);
      if (ls >= m && rs >= m) {
        clusters[static_cast<size_t>(cid)].death_lambda = lambda;
        for (int child_node : {dn.left, dn.right}) {
          const int child_id = static_cast<int>(clusters.size());
          clusters.push_back({});
          clusters.back().parent = cid;
          clusters.back().birth_lambda = lambda;
          clusters[static_cast<size_t>(cid)].children.push_back(child_id);
          stack.push_back({child_node, child_id});
        }
      } else {
        for (int child_node : {dn.left, dn.right}) {
          if (node_size(child_node) >= m) {
            stack.push_back({child_node, cid});
          } else {
            leaves.clear();
            gather_leaves(tree, n, child_node, leaves);
            for (size_t p : leaves)
              clusters[static_cast<size_t>(cid)].fallout.push_back({p, lambda});
          }
        }
      }
    }
  }

  // Stability and excess-of-mass selection. The root only stands for
  // itself when the hierarchy never truly splits.
  const size_t nc = clusters.size();
  std::vector<double> stability(nc, 0.0), subtree(nc, 0.0);
  std::vector<bool> selected(nc, false);
  // subtree_points bottom-up (clusters are created parent-before-child).
  for (size_t c = nc; c-- > 0;) {
    clusters[c].subtree_points = clusters[c].fallout.size();
    for (int ch : clusters[c].children)
      clusters[c].subtree_points +=
          clusters[static_cast<size_t>(ch)].subtree_points;
  }
  for (size_t c = 0; c < nc; ++c) {
    CondensedCluster& cc = clusters[c];
    if (cc.children.empty() && !cc.fallout.empty()) {
      cc.death_lambda = 0.0;
      for (const auto& [p, l] : cc.fallout)
        cc.death_lambda = std::max(cc.death_lambda, l);
    }
    double s = 0.0;
    for (const auto& [p, l] : cc.fallout) s += l - cc.birth_lambda;
    if (!cc.children.empty()) {
      size_t split_points = 0;
      for (int ch : cc.children)
        split_points += clusters[static_cast<size_t>(ch)].subtree_points;
      s += static_cast<double>(split_points) *
           (cc.death_lambda - cc.birth_lambda);
    }
    stability[c] = s;
  }

  const std::function<void(size_t)> deselect_descendants = [&](size_t c) {
    for (int ch : clusters[c].children) {
      selected[static_cast<size_t>(ch)] = false;
      deselect_descendants(static_cast<size_t>(ch));
    }
  };
  for (size_t c = nc; c-- > 0;) {
    if (c == 0) break;  // root handled separately
    if (clusters[c].children.empty()) {
      selected[c] = true;
      subtree[c] = stability[c];
    } else {
      double child_sum = 0.0;
      for (int ch : clusters[c].children)
        child_sum += subtree[static_cast<size_t>(ch)];
      if (stability[c] >= child_sum) {
        selected[c] = true;
        deselect_descendants(c);
        subtree[c] = stability[c];
      } else {
        subtree[c] = child_sum;
      }
    }
  }

  std::vector<size_t> root_members;
  if (clusters[0].children.empty()) {
    // Root-only hierarchy: the points persisting to the maximum density
    // level form a single cluster, but only when they are clearly denser
    // than the remaining fallout (or there is no other fallout at all).
    // Uniformly sparse data, where every density is similar, stays noise.
    double lambda_max = 0.0;
    for (const auto& [p, l] : clusters[0].fallout)
      lambda_max = std::max(lambda_max, l);
    const double tol = 1e-9 * std::max(1.0, lambda_max);
    bool separated = true;
    for (const auto& [p, l] : clusters[0].fallout) {
      if (l >= lambda_max - tol) {
        root_members.push_back(p);
      } else if (l > 0.5 * lambda_max) {
        separated = false;
      }
    }
    if (root_members.size() >= m && separated) selected[0] = true;
  }

  // Label points by their nearest selected ancestor cluster.
  std::vector<int> raw_label(n, kNoise);
  if (selected[0]) {
    for (size_t p : root_members) raw_label[p] = 0;
  }
  for (size_t c = 1; c < nc; ++c) {
    int anc = static_cast<int>(c);
    while (anc > 0 && !selected[static_cast<size_t>(anc)])
      anc = clusters[static_cast<size_t>(anc)].parent;
    if (anc <= 0) continue;
    for (const auto& [p, l] : clusters[c].fallout)
      raw_label[p] = anc;
  }

  // Dense ids in order of first occurrence by item index.
  std::vector<int> remap(nc, -1);
  int next_id = 0;
  for (size_t p = 0; p < n; ++p) {
    if (raw_label[p] == kNoise) continue;
    int& r = remap[static_cast<size_t>(raw_label[p])];
    if (r < 0) r = next_id++;
    result.labels[p] = r;
  }
  result.cluster_sizes.assign(static_cast<size_t>(next_id), 0);
  for (int l : result.labels)
    if (l != kNoise) ++result.cluster_sizes[static_cast<size_t>(l)];

  const DistanceFn cached = [&dist](size_t i, size_t j) { return dist(i, j); };
  fill_outlier_distances(result, n, cached);
  return result;
}

}  // namespace trajscore
