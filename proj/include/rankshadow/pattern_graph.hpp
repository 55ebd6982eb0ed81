#pragma once
// Entry patterns as undirected graphs with self-loops, plus the combinatorial
// searches the closure rules depend on: connected components, mixed loop/loopless
// detection, complete-bipartite recognition, triangle and noncyclic-3-path
// search, independent sets, disjoint clique packings, and the rank threshold.
//
// Vertices are 1-indexed. A pair {i,i} encodes a loop (specified diagonal).

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace rankshadow {

inline constexpr int kDefaultExactLimit = 20;

class PatternGraph {
 public:
  // Pairs may arrive in either orientation; they are normalized to i <= j.
  // Throws std::invalid_argument on out-of-range indices or duplicates.
  PatternGraph(int n, std::vector<std::pair<int, int>> edge_list)
      : n_(n), edges_(std::move(edge_list)) {
    if (n_ < 1) throw std::invalid_argument("PatternGraph: n must be >= 1");
    for (auto& e : edges_) {
      if (e.first > e.second) std::swap(e.first, e.second);
      if (e.first < 1 || e.second > n_)
        throw std::invalid_argument("PatternGraph: edge index out of range");
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
      throw std::invalid_argument("PatternGraph: duplicate edge");
    loop_.assign(n_ + 1, 0);
    adj_.assign(n_ + 1, {});
    for (const auto& [i, j] : edges_) {
      if (i == j) {
        loop_[i] = 1;
      } else {
        adj_[i].push_back(j);
        adj_[j].push_back(i);
      }
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
    if (n_ <= 64) {
      adj_mask_.assign(n_ + 1, 0);
      for (const auto& [i, j] : edges_)
        if (i != j) {
          adj_mask_[i] |= bit(j);
          adj_mask_[j] |= bit(i);
        }
    }
  }

  int order() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  // Number of specified entries, loops included.
  int edge_count() const { return static_cast<int>(edges_.size()); }

  bool has_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(i, j));
  }
  bool has_loop(int v) const { return loop_[v] != 0; }
  bool loopless() const {
    return std::none_of(loop_.begin(), loop_.end(), [](char c) { return c != 0; });
  }
  bool fully_looped() const {
    for (int v = 1; v <= n_; ++v)
      if (!loop_[v]) return false;
    return true;
  }
  std::vector<int> loop_vertices() const {
    std::vector<int> out;
    for (int v = 1; v <= n_; ++v)
      if (loop_[v]) out.push_back(v);
    return out;
  }
  // Non-loop adjacency, ascending.
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }

  // Non-loop adjacency as a bitmask (bit v set for neighbor v); order <= 64 only.
  uint64_t neighbor_mask(int v) const { return adj_mask_[v]; }
  bool has_masks() const { return !adj_mask_.empty(); }

  static uint64_t bit(int v) { return uint64_t{1} << (v - 1); }

 private:
  int n_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<char> loop_;
  std::vector<uint64_t> adj_mask_;
};

struct ComponentDecomposition {
  // Blocks are ascending vertex lists, ordered by their smallest vertex.
  std::vector<std::vector<int>> blocks;
  // Induced subgraph per block; vertex k+1 of blocks[c] relabels to k+1... i.e.
  // original blocks[c][t] becomes vertex t+1 of induced[c]. Loops carry over.
  std::vector<PatternGraph> induced;
  // 1-based lookup: component index (0-based into blocks) per vertex.
  std::vector<int> component_of;

  int count() const { return static_cast<int>(blocks.size()); }
};

inline ComponentDecomposition connected_components(const PatternGraph& g) {
  const int n = g.order();
  ComponentDecomposition dec;
  dec.component_of.assign(n + 1, -1);
  for (int root = 1; root <= n; ++root) {
    if (dec.component_of[root] >= 0) continue;
    const int id = dec.count();
    std::vector<int> block;
    std::queue<int> q;
    q.push(root);
    dec.component_of[root] = id;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      block.push_back(v);
      for (int u : g.neighbors(v))
        if (dec.component_of[u] < 0) {
          dec.component_of[u] = id;
          q.push(u);
        }
    }
    std::sort(block.begin(), block.end());
    dec.blocks.push_back(std::move(block));
  }
  for (const auto& block : dec.blocks) {
    std::vector<int> local(n + 1, 0);
    for (size_t t = 0; t < block.size(); ++t) local[block[t]] = static_cast<int>(t) + 1;
    std::vector<std::pair<int, int>> edges;
    for (const auto& [i, j] : g.edges())
      if (local[i] && local[j]) edges.emplace_back(local[i], local[j]);
    dec.induced.emplace_back(static_cast<int>(block.size()), std::move(edges));
  }
  return dec;
}

struct MixedLoopEdge {
  int component = -1;              // index into ComponentDecomposition.blocks
  std::pair<int, int> edge{0, 0};  // (loop vertex, non-loop vertex)
};

// A component mixing loop and non-loop vertices always contains an adjacent
// pair straddling the split (first transition edge of any connecting path).
inline std::optional<MixedLoopEdge> mixed_loop_edge(const PatternGraph& g) {
  auto dec = connected_components(g);
  for (const auto& [i, j] : g.edges()) {
    if (i == j) continue;
    if (g.has_loop(i) != g.has_loop(j)) {
      MixedLoopEdge out;
      out.component = dec.component_of[i];
      out.edge = g.has_loop(i) ? std::make_pair(i, j) : std::make_pair(j, i);
      return out;
    }
  }
  return std::nullopt;
}

using Bipartition = std::pair<std::vector<int>, std::vector<int>>;

// Two-coloring plus completeness check. The side containing vertex 1 comes
// first. A single vertex yields ({1}, {}).
inline std::optional<Bipartition> complete_bipartite_partition(const PatternGraph& g) {
  if (!g.loopless())
    throw std::invalid_argument("complete_bipartite_partition: input has loops");
  const int n = g.order();
  std::vector<int> color(n + 1, -1);
  std::queue<int> q;
  color[1] = 0;
  q.push(1);
  int seen = 1;
  bool proper = true;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int u : g.neighbors(v)) {
      if (color[u] < 0) {
        color[u] = 1 - color[v];
        ++seen;
        q.push(u);
      } else if (color[u] == color[v]) {
        proper = false;
      }
    }
  }
  if (seen != n)
    throw std::invalid_argument("complete_bipartite_partition: input disconnected");
  if (!proper) return std::nullopt;
  Bipartition part;
  for (int v = 1; v <= n; ++v)
    (color[v] == 0 ? part.first : part.second).push_back(v);
  // Proper coloring rules out same-side edges; completeness needs every cross pair.
  const size_t cross = part.first.size() * part.second.size();
  if (g.edges().size() != cross) return std::nullopt;
  return part;
}

// Lexicographically smallest triangle (i < j < k). Loops are ignored.
inline std::optional<std::array<int, 3>> find_triangle(const PatternGraph& g) {
  const int n = g.order();
  if (g.has_masks()) {
    for (int i = 1; i <= n; ++i) {
      const uint64_t above_i = ~(PatternGraph::bit(i) * 2 - 1);  // bits > i
      uint64_t js = g.neighbor_mask(i) & above_i;
      while (js) {
        int j = std::countr_zero(js) + 1;
        js &= js - 1;
        uint64_t ks = g.neighbor_mask(i) & g.neighbor_mask(j) & ~(PatternGraph::bit(j) * 2 - 1);
        if (ks) return std::array<int, 3>{i, j, std::countr_zero(ks) + 1};
      }
    }
    return std::nullopt;
  }
  for (int i = 1; i <= n; ++i)
    for (int j : g.neighbors(i)) {
      if (j <= i) continue;
      for (int k : g.neighbors(j))
        if (k > j && g.has_edge(i, k)) return std::array<int, 3>{i, j, k};
    }
  return std::nullopt;
}

// First (v1,v2,v3,v4) in lexicographic order with edges v1v2, v2v3, v3v4 and
// no edge v1v4. Requires a loopless graph.
inline std::optional<std::array<int, 4>> find_noncyclic_path3(const PatternGraph& g) {
  if (!g.loopless())
    throw std::invalid_argument("find_noncyclic_path3: input has loops");
  const int n = g.order();
  for (int v1 = 1; v1 <= n; ++v1)
    for (int v2 : g.neighbors(v1))
      for (int v3 : g.neighbors(v2)) {
        if (v3 == v1) continue;
        for (int v4 : g.neighbors(v3)) {
          if (v4 == v1 || v4 == v2) continue;
          if (!g.has_edge(v1, v4)) return std::array<int, 4>{v1, v2, v3, v4};
        }
      }
  return std::nullopt;
}

namespace detail {

inline int popcount64(uint64_t x) { return std::popcount(x); }

// Maximal cliques (within `scope`) containing all of `r`, Bron-Kerbosch with pivot.
inline void bron_kerbosch(uint64_t r, uint64_t p, uint64_t x,
                          const std::vector<uint64_t>& adj,
                          std::vector<uint64_t>& out) {
  if (!p && !x) {
    out.push_back(r);
    return;
  }
  uint64_t px = p | x;
  int pivot = 0, best = -1;
  uint64_t it = px;
  while (it) {
    int u = std::countr_zero(it) + 1;
    it &= it - 1;
    int score = popcount64(p & adj[u]);
    if (score > best) {
      best = score;
      pivot = u;
    }
  }
  uint64_t cand = p & ~adj[pivot];
  while (cand) {
    int v = std::countr_zero(cand) + 1;
    uint64_t vb = cand & (~cand + 1);
    cand &= cand - 1;
    bron_kerbosch(r | vb, p & adj[v], x & adj[v], adj, out);
    p &= ~vb;
    x |= vb;
  }
}

inline std::vector<uint64_t> adjacency_masks(const PatternGraph& g) {
  std::vector<uint64_t> adj(g.order() + 1, 0);
  for (int v = 1; v <= g.order(); ++v) adj[v] = g.neighbor_mask(v);
  return adj;
}

inline std::vector<int> mask_to_vertices(uint64_t m) {
  std::vector<int> out;
  while (m) {
    out.push_back(std::countr_zero(m) + 1);
    m &= m - 1;
  }
  return out;
}

// Branch and bound for a maximum independent set over `avail`.
struct MisSearch {
  const std::vector<uint64_t>& adj;
  int best = -1;
  uint64_t best_set = 0;

  void run(uint64_t avail, uint64_t chosen, int count) {
    if (count + popcount64(avail) <= best) return;
    if (!avail) {
      best = count;
      best_set = chosen;
      return;
    }
    // Branch on the highest-degree available vertex (ties: smallest label).
    int v = 0, deg = -1;
    uint64_t it = avail;
    while (it) {
      int u = std::countr_zero(it) + 1;
      it &= it - 1;
      int d = popcount64(adj[u] & avail);
      if (d > deg) {
        deg = d;
        v = u;
      }
    }
    const uint64_t vb = PatternGraph::bit(v);
    run(avail & ~(adj[v] | vb), chosen | vb, count + 1);
    run(avail & ~vb, chosen, count);
  }
};

// Exact maximum of sum(|C_i| - 2) over vertex-disjoint cliques of size >= 3,
// memoized on the available-vertex mask; per state we either bench the lowest
// triangle-capable vertex or commit it to one of its maximal cliques.
struct PackSearch {
  const std::vector<uint64_t>& adj;
  std::unordered_map<uint64_t, std::pair<int, uint64_t>> memo;  // avail -> (value, clique or 0)

  bool in_triangle(int v, uint64_t avail) const {
    uint64_t nb = adj[v] & avail;
    uint64_t it = nb;
    while (it) {
      int u = std::countr_zero(it) + 1;
      it &= it - 1;
      if (adj[u] & nb) return true;
    }
    return false;
  }

  uint64_t strip(uint64_t avail) const {
    while (avail) {
      int v = std::countr_zero(avail) + 1;
      if (in_triangle(v, avail)) break;
      avail &= avail - 1;
    }
    return avail;
  }

  int solve(uint64_t avail) {
    avail = strip(avail);
    if (!avail) return 0;
    auto it = memo.find(avail);
    if (it != memo.end()) return it->second.first;
    const int v = std::countr_zero(avail) + 1;
    const uint64_t vb = PatternGraph::bit(v);
    int best = solve(avail & ~vb);
    uint64_t choice = 0;
    std::vector<uint64_t> cliques;
    bron_kerbosch(vb, adj[v] & avail, 0, adj, cliques);
    for (uint64_t c : cliques) {
      const int k = popcount64(c);
      if (k < 3) continue;
      const int val = k - 2 + solve(avail & ~c);
      if (val > best) {
        best = val;
        choice = c;
      }
    }
    memo.emplace(avail, std::make_pair(best, choice));
    return best;
  }

  std::vector<uint64_t> reconstruct(uint64_t avail) {
    std::vector<uint64_t> out;
    while (true) {
      avail = strip(avail);
      if (!avail) break;
      auto it = memo.find(avail);
      if (it == memo.end()) break;
      const uint64_t choice = it->second.second;
      if (choice == 0) {
        avail &= avail - 1;  // bench the branching vertex
      } else {
        out.push_back(choice);
        avail &= ~choice;
      }
    }
    return out;
  }
};

// Greedy maximal clique within avail seeded at v (masks).
inline uint64_t grow_clique(int v, uint64_t avail, const std::vector<uint64_t>& adj) {
  uint64_t c = PatternGraph::bit(v);
  uint64_t cand = adj[v] & avail;
  while (cand) {
    int pick = 0, deg = -1;
    uint64_t it = cand;
    while (it) {
      int u = std::countr_zero(it) + 1;
      it &= it - 1;
      int d = popcount64(adj[u] & cand);
      if (d > deg) {
        deg = d;
        pick = u;
      }
    }
    c |= PatternGraph::bit(pick);
    cand &= adj[pick];
  }
  return c;
}

}  // namespace detail

inline bool is_clique(const PatternGraph& g, const std::vector<int>& vs) {
  for (size_t a = 0; a < vs.size(); ++a)
    for (size_t b = a + 1; b < vs.size(); ++b)
      if (!g.has_edge(vs[a], vs[b])) return false;
  return true;
}

inline bool is_independent_set(const PatternGraph& g, const std::vector<int>& vs) {
  for (size_t a = 0; a < vs.size(); ++a)
    for (size_t b = a + 1; b < vs.size(); ++b)
      if (g.has_edge(vs[a], vs[b])) return false;
  return true;
}

inline bool verify_bipartition(const PatternGraph& g, const std::vector<int>& s,
                               const std::vector<int>& t) {
  std::vector<char> side(g.order() + 1, 0);
  for (int v : s) side[v] = 1;
  for (int v : t) {
    if (side[v]) return false;
    side[v] = 2;
  }
  for (int v = 1; v <= g.order(); ++v)
    if (!side[v]) return false;
  for (int a : s)
    for (int b : t)
      if (!g.has_edge(a, b)) return false;
  for (size_t a = 0; a < s.size(); ++a)
    for (size_t b = a + 1; b < s.size(); ++b)
      if (g.has_edge(s[a], s[b])) return false;
  for (size_t a = 0; a < t.size(); ++a)
    for (size_t b = a + 1; b < t.size(); ++b)
      if (g.has_edge(t[a], t[b])) return false;
  return true;
}

struct VertexSetResult {
  std::vector<int> vertices;
  bool exact = true;
};

// Largest independent set (exact branch and bound when n <= exact_limit and
// n <= 64, greedy otherwise). The returned size is a lower bound either way.
inline VertexSetResult max_independent_set(const PatternGraph& g,
                                           int exact_limit = kDefaultExactLimit) {
  if (!g.loopless())
    throw std::invalid_argument("max_independent_set: input has loops");
  const int n = g.order();
  VertexSetResult out;
  if (n <= exact_limit && g.has_masks()) {
    auto adj = detail::adjacency_masks(g);
    detail::MisSearch search{adj};
    const uint64_t all = (n == 64) ? ~uint64_t{0} : (PatternGraph::bit(n + 1) - 1);
    search.run(all, 0, 0);
    out.vertices = detail::mask_to_vertices(search.best_set);
    out.exact = true;
  } else {
    // Greedy: repeatedly take a minimum-degree vertex of the residual graph.
    std::vector<char> alive(n + 1, 1);
    std::vector<int> deg(n + 1, 0);
    for (int v = 1; v <= n; ++v) deg[v] = g.degree(v);
    int remaining = n;
    while (remaining > 0) {
      int v = 0, best = n + 1;
      for (int u = 1; u <= n; ++u)
        if (alive[u] && deg[u] < best) {
          best = deg[u];
          v = u;
        }
      out.vertices.push_back(v);
      alive[v] = 0;
      --remaining;
      for (int u : g.neighbors(v))
        if (alive[u]) {
          alive[u] = 0;
          --remaining;
          for (int w : g.neighbors(u))
            if (alive[w]) --deg[w];
        }
    }
    std::sort(out.vertices.begin(), out.vertices.end());
    out.exact = false;
  }
  if (!is_independent_set(g, out.vertices))
    throw std::logic_error("max_independent_set: verification failed");
  return out;
}

struct CliquePacking {
  std::vector<std::vector<int>> cliques;  // each ascending, size >= 3, disjoint
  bool exact = true;

  int budget() const {
    int s = 0;
    for (const auto& c : cliques) s += static_cast<int>(c.size()) - 2;
    return s;
  }
};

// Vertex-disjoint cliques of size >= 3 maximizing sum(|C|-2) when exact;
// greedy (still verified, still sound) beyond exact_limit or 64 vertices.
inline CliquePacking disjoint_clique_packing(const PatternGraph& g,
                                             int exact_limit = kDefaultExactLimit) {
  if (!g.loopless())
    throw std::invalid_argument("disjoint_clique_packing: input has loops");
  const int n = g.order();
  CliquePacking out;
  if (n <= exact_limit && g.has_masks()) {
    auto adj = detail::adjacency_masks(g);
    detail::PackSearch search{adj, {}};
    const uint64_t all = (n == 64) ? ~uint64_t{0} : (PatternGraph::bit(n + 1) - 1);
    search.solve(all);
    for (uint64_t c : search.reconstruct(all))
      out.cliques.push_back(detail::mask_to_vertices(c));
    out.exact = true;
  } else if (g.has_masks()) {
    auto adj = detail::adjacency_masks(g);
    uint64_t avail = (n == 64) ? ~uint64_t{0} : (PatternGraph::bit(n + 1) - 1);
    while (true) {
      int v = 0, deg = -1;
      uint64_t it = avail;
      while (it) {
        int u = std::countr_zero(it) + 1;
        it &= it - 1;
        detail::PackSearch probe{adj, {}};
        if (!probe.in_triangle(u, avail)) continue;
        int d = detail::popcount64(adj[u] & avail);
        if (d > deg) {
          deg = d;
          v = u;
        }
      }
      if (!v) break;
      uint64_t c = detail::grow_clique(v, avail, adj);
      if (detail::popcount64(c) >= 3) {
        out.cliques.push_back(detail::mask_to_vertices(c));
        avail &= ~c;
      } else {
        avail &= ~PatternGraph::bit(v);
      }
    }
    out.exact = false;
  } else {
    // n > 64: greedy over adjacency lists.
    std::vector<char> alive(n + 1, 1);
    while (true) {
      int v = 0, deg = -1;
      for (int u = 1; u <= n; ++u) {
        if (!alive[u]) continue;
        int d = 0;
        for (int w : g.neighbors(u))
          if (alive[w]) ++d;
        if (d > deg) {
          deg = d;
          v = u;
        }
      }
      if (!v || deg < 2) break;
      std::vector<int> clique{v};
      std::vector<int> cand;
      for (int w : g.neighbors(v))
        if (alive[w]) cand.push_back(w);
      while (!cand.empty()) {
        int pick = cand.front();
        clique.push_back(pick);
        std::vector<int> next;
        for (int w : cand)
          if (w != pick && g.has_edge(pick, w)) next.push_back(w);
        cand = std::move(next);
      }
      if (clique.size() >= 3) {
        std::sort(clique.begin(), clique.end());
        for (int w : clique) alive[w] = 0;
        out.cliques.push_back(std::move(clique));
      } else {
        alive[v] = 0;
      }
    }
    out.exact = false;
  }
  std::vector<char> used(n + 1, 0);
  for (const auto& c : out.cliques) {
    if (c.size() < 3 || !is_clique(g, c))
      throw std::logic_error("disjoint_clique_packing: verification failed");
    for (int v : c) {
      if (used[v]) throw std::logic_error("disjoint_clique_packing: overlap");
      used[v] = 1;
    }
  }
  return out;
}

// Largest clique; exact within the same limits as the other searches.
inline VertexSetResult largest_clique(const PatternGraph& g,
                                      int exact_limit = kDefaultExactLimit) {
  const int n = g.order();
  VertexSetResult out;
  if (n <= exact_limit && g.has_masks()) {
    auto adj = detail::adjacency_masks(g);
    uint64_t best = 0;
    int best_size = 0;
    const uint64_t all = (n == 64) ? ~uint64_t{0} : (PatternGraph::bit(n + 1) - 1);
    // Depth-first with the trivial |R| + |P| bound; fine at desk scale.
    struct Frame {
      uint64_t r, p;
    };
    std::vector<Frame> stack{{0, all}};
    while (!stack.empty()) {
      auto [r, p] = stack.back();
      stack.pop_back();
      if (detail::popcount64(r) > best_size) {
        best_size = detail::popcount64(r);
        best = r;
      }
      if (detail::popcount64(r) + detail::popcount64(p) <= best_size) continue;
      uint64_t it = p;
      while (it) {
        int v = std::countr_zero(it) + 1;
        uint64_t vb = it & (~it + 1);
        it &= it - 1;
        stack.push_back({r | vb, p & adj[v] & ~(vb * 2 - 1)});
      }
    }
    out.vertices = detail::mask_to_vertices(best);
    out.exact = true;
  } else if (g.has_masks()) {
    auto adj = detail::adjacency_masks(g);
    const uint64_t all = (n == 64) ? ~uint64_t{0} : (PatternGraph::bit(n + 1) - 1);
    uint64_t best = 0;
    for (int v = 1; v <= n; ++v) {
      uint64_t c = detail::grow_clique(v, all, adj);
      if (detail::popcount64(c) > detail::popcount64(best)) best = c;
    }
    out.vertices = detail::mask_to_vertices(best);
    out.exact = false;
  } else {
    out.vertices = {1};
    out.exact = false;
  }
  if (!is_clique(g, out.vertices))
    throw std::logic_error("largest_clique: verification failed");
  return out;
}

// Least nonnegative t with edge_count <= (t+2)(t+1)/2 - 1, equivalently
// ceil(-3/2 + sqrt(9 + 8 e)/2). Computed by formula, then pinned exactly.
inline long long barvinok_threshold(long long edge_count) {
  if (edge_count < 0)
    throw std::invalid_argument("barvinok_threshold: negative edge count");
  const long double root =
      (-3.0L + std::sqrt(9.0L + 8.0L * static_cast<long double>(edge_count))) / 2.0L;
  long long t = static_cast<long long>(std::ceil(root));
  if (t < 0) t = 0;
  const auto cap = [](long long u) { return (u + 2) * (u + 1) / 2 - 1; };
  while (t > 0 && cap(t - 1) >= edge_count) --t;
  while (cap(t) < edge_count) ++t;
  return t;
}

}  // namespace rankshadow
