#pragma once
// Decides whether the set of rank-constrained PSD projections onto a pattern
// is closed, not closed, or out of reach of the rule list. Rules are tried in
// a fixed order and the first hit wins; every answer carries a certificate
// naming the evidence so it can be re-checked independently.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rankshadow/pattern_graph.hpp"

namespace rankshadow {

enum class Closure { Closed, NotClosed, Unknown };

enum class CertKind {
  RankZero,
  MixedLoopComponent,
  LoopComponent,
  TrivialFullRank,
  RankAtLeastThreshold,
  CompleteBipartite,
  NotBipartiteRankOne,
  IndependentSet,
  CliquePackingExclusion,
  CompleteGraphExclusion,
  PerComponent,
  Unknown,
};

inline const char* to_string(Closure s) {
  switch (s) {
    case Closure::Closed: return "Closed";
    case Closure::NotClosed: return "NotClosed";
    default: return "Unknown";
  }
}

inline const char* to_string(CertKind k) {
  switch (k) {
    case CertKind::RankZero: return "RankZero";
    case CertKind::MixedLoopComponent: return "MixedLoopComponent";
    case CertKind::LoopComponent: return "LoopComponent";
    case CertKind::TrivialFullRank: return "TrivialFullRank";
    case CertKind::RankAtLeastThreshold: return "RankAtLeastThreshold";
    case CertKind::CompleteBipartite: return "CompleteBipartite";
    case CertKind::NotBipartiteRankOne: return "NotBipartiteRankOne";
    case CertKind::IndependentSet: return "IndependentSet";
    case CertKind::CliquePackingExclusion: return "CliquePackingExclusion";
    case CertKind::CompleteGraphExclusion: return "CompleteGraphExclusion";
    case CertKind::PerComponent: return "PerComponent";
    default: return "Unknown";
  }
}

// One structure covers every certificate kind; unused fields stay empty.
// Vertex labels are always in terms of the original graph.
struct Certificate {
  CertKind kind = CertKind::Unknown;
  int component = -1;                     // index into ClosureVerdict::components
  std::pair<int, int> edge{0, 0};         // MixedLoopComponent: (loop, non-loop)
  long long threshold = -1;               // RankAtLeastThreshold: effective bound
  long long edge_count = -1;              //   specified entries backing it
  std::vector<int> side_a, side_b;        // CompleteBipartite
  std::vector<int> triangle;              // NotBipartiteRankOne, 3 vertices
  std::vector<int> path;                  //   or 4 vertices, end pair unspecified
  std::vector<int> independent_set;       // IndependentSet
  std::vector<std::vector<int>> cliques;  // packing certificates
  std::vector<int> chosen_sizes;          //   j_i per listed clique, sum(j_i-2)=r
  std::vector<std::string> notes;         // Unknown: why each rule sat out
};

struct ComponentVerdict {
  Closure status = Closure::Unknown;
  Certificate certificate;
  std::vector<int> vertices;  // original labels, ascending
  int rank_used = 0;          // min(requested rank, component order)
};

struct ClosureVerdict {
  Closure status = Closure::Unknown;
  Certificate certificate;  // deciding evidence (or PerComponent wrapper)
  std::vector<ComponentVerdict> components;
  int rank = 0;
};

namespace detail {

inline std::vector<int> to_original(const std::vector<int>& local,
                                    const std::vector<int>& block) {
  std::vector<int> out;
  out.reserve(local.size());
  for (int v : local) out.push_back(block[v - 1]);
  return out;
}

// Rules 4..11 on one connected component (local labels in `sub`).
inline ComponentVerdict classify_component(const PatternGraph& sub,
                                           const std::vector<int>& block, int r,
                                           int exact_limit) {
  ComponentVerdict out;
  out.vertices = block;
  const int nc = sub.order();
  const int rc = std::min(r, nc);
  out.rank_used = rc;
  std::vector<std::string> notes;

  if (sub.fully_looped()) {
    out.status = Closure::Closed;
    out.certificate.kind = CertKind::LoopComponent;
    return out;
  }
  notes.push_back("loop_component: not every diagonal is specified");
  // Mixed components are rejected before per-component rules run, so from
  // here the component is loopless.

  if (rc >= nc) {
    out.status = Closure::Closed;
    out.certificate.kind = CertKind::TrivialFullRank;
    return out;
  }
  notes.push_back("trivial_full_rank: needs rank >= " + std::to_string(nc));

  const long long ec = sub.edge_count();
  const long long t = barvinok_threshold(ec);
  const long long bound = std::min<long long>(nc - 1, t);
  if (rc >= bound) {
    out.status = Closure::Closed;
    out.certificate.kind = CertKind::RankAtLeastThreshold;
    out.certificate.threshold = bound;
    out.certificate.edge_count = ec;
    return out;
  }
  notes.push_back("rank_at_least_threshold: needs rank >= " + std::to_string(bound));

  if (auto part = complete_bipartite_partition(sub)) {
    out.status = Closure::Closed;
    out.certificate.kind = CertKind::CompleteBipartite;
    out.certificate.side_a = to_original(part->first, block);
    out.certificate.side_b = to_original(part->second, block);
    return out;
  }
  notes.push_back("complete_bipartite: sides do not fully interconnect");

  if (rc == 1) {
    if (auto tri = find_triangle(sub)) {
      out.status = Closure::NotClosed;
      out.certificate.kind = CertKind::NotBipartiteRankOne;
      out.certificate.triangle =
          to_original({(*tri)[0], (*tri)[1], (*tri)[2]}, block);
      return out;
    }
    if (auto path = find_noncyclic_path3(sub)) {
      out.status = Closure::NotClosed;
      out.certificate.kind = CertKind::NotBipartiteRankOne;
      out.certificate.path =
          to_original({(*path)[0], (*path)[1], (*path)[2], (*path)[3]}, block);
      return out;
    }
    // Connected, loopless, not complete bipartite: one of the two witnesses
    // exists. Reaching this line means a search bug, not a math gap.
    notes.push_back("not_bipartite_rank_one: witness search came up empty");
  } else {
    notes.push_back("not_bipartite_rank_one: only applies at rank 1");
  }

  auto mis = max_independent_set(sub, exact_limit);
  const int k = static_cast<int>(mis.vertices.size());
  if (rc >= nc - k) {
    out.status = Closure::Closed;
    out.certificate.kind = CertKind::IndependentSet;
    out.certificate.independent_set = to_original(mis.vertices, block);
    return out;
  }
  notes.push_back("independent_set: needs rank >= " + std::to_string(nc - k) +
                  (mis.exact ? "" : " (set found greedily)"));

  auto packing = disjoint_clique_packing(sub, exact_limit);
  const int budget = packing.budget();
  if (rc >= 1 && rc <= budget) {
    out.status = Closure::NotClosed;
    const bool complete_graph =
        ec == static_cast<long long>(nc) * (nc - 1) / 2 && rc == nc - 2;
    out.certificate.kind = complete_graph ? CertKind::CompleteGraphExclusion
                                          : CertKind::CliquePackingExclusion;
    // Spend the rank across cliques greedily: each listed clique contributes
    // j_i - 2, j_i in [3, |C_i|], and the contributions sum to exactly rc.
    int remaining = rc;
    for (const auto& clique : packing.cliques) {
      if (remaining == 0) break;
      const int cap = static_cast<int>(clique.size());
      const int j = std::min(cap, remaining + 2);
      out.certificate.cliques.push_back(to_original(clique, block));
      out.certificate.chosen_sizes.push_back(j);
      remaining -= j - 2;
    }
    return out;
  }
  notes.push_back("clique_packing_exclusion: packing budget " + std::to_string(budget) +
                  " does not cover rank " + std::to_string(rc) +
                  (packing.exact ? "" : " (packing found greedily)"));

  out.status = Closure::Unknown;
  out.certificate.kind = CertKind::Unknown;
  out.certificate.notes = std::move(notes);
  return out;
}

}  // namespace detail

// First-match rule cascade. Throws std::out_of_range when r is not in [0, n].
inline ClosureVerdict classify(const PatternGraph& g, int r,
                               int exact_limit = kDefaultExactLimit) {
  if (r < 0 || r > g.order())
    throw std::out_of_range("classify: rank bound must lie in [0, n]");
  ClosureVerdict verdict;
  verdict.rank = r;

  if (r == 0) {
    verdict.status = Closure::Closed;
    verdict.certificate.kind = CertKind::RankZero;
    return verdict;
  }

  auto dec = connected_components(g);
  if (auto mixed = mixed_loop_edge(g)) {
    verdict.status = Closure::NotClosed;
    verdict.certificate.kind = CertKind::MixedLoopComponent;
    verdict.certificate.component = mixed->component;
    verdict.certificate.edge = mixed->edge;
    return verdict;
  }

  for (int c = 0; c < dec.count(); ++c) {
    auto cv = detail::classify_component(dec.induced[c], dec.blocks[c], r, exact_limit);
    cv.certificate.component = c;
    verdict.components.push_back(std::move(cv));
  }

  // Worst component wins: NotClosed beats Unknown beats Closed.
  int deciding = 0;
  auto rank_of = [](Closure s) {
    return s == Closure::NotClosed ? 2 : (s == Closure::Unknown ? 1 : 0);
  };
  for (size_t c = 1; c < verdict.components.size(); ++c)
    if (rank_of(verdict.components[c].status) >
        rank_of(verdict.components[deciding].status))
      deciding = static_cast<int>(c);
  verdict.status = verdict.components[deciding].status;
  if (verdict.components.size() == 1 || verdict.status != Closure::Closed) {
    verdict.certificate = verdict.components[deciding].certificate;
  } else {
    verdict.certificate.kind = CertKind::PerComponent;
    verdict.certificate.component = -1;
  }
  return verdict;
}

// Diagnostic sweep: evaluates every per-component rule instead of stopping at
// the first hit. Meant for tests and debugging, not for callers.
struct RuleReport {
  int rule = 0;  // 4..10 in cascade order
  bool fires = false;
  Closure implies = Closure::Unknown;
};

inline std::vector<std::vector<RuleReport>> classify_diagnostics(
    const PatternGraph& g, int r, int exact_limit = kDefaultExactLimit) {
  if (r < 0 || r > g.order())
    throw std::out_of_range("classify: rank bound must lie in [0, n]");
  std::vector<std::vector<RuleReport>> out;
  if (r == 0 || mixed_loop_edge(g)) return out;
  auto dec = connected_components(g);
  for (int c = 0; c < dec.count(); ++c) {
    const auto& sub = dec.induced[c];
    const int nc = sub.order();
    const int rc = std::min(r, nc);
    std::vector<RuleReport> reports;
    reports.push_back({4, sub.fully_looped(), Closure::Closed});
    const bool loopless = sub.loopless();
    reports.push_back({5, loopless && rc >= nc, Closure::Closed});
    long long bound = -1;
    if (loopless)
      bound = std::min<long long>(nc - 1, barvinok_threshold(sub.edge_count()));
    reports.push_back({6, loopless && rc >= bound && bound >= 0, Closure::Closed});
    bool cb = false;
    if (loopless) cb = complete_bipartite_partition(sub).has_value();
    reports.push_back({7, cb, Closure::Closed});
    bool rank_one_bad = false;
    if (loopless && rc == 1 && !cb)
      rank_one_bad = find_triangle(sub).has_value() ||
                     find_noncyclic_path3(sub).has_value();
    reports.push_back({8, rank_one_bad, Closure::NotClosed});
    bool indep = false;
    if (loopless) {
      auto mis = max_independent_set(sub, exact_limit);
      indep = rc >= nc - static_cast<int>(mis.vertices.size());
    }
    reports.push_back({9, indep, Closure::Closed});
    bool packed = false;
    if (loopless) {
      auto packing = disjoint_clique_packing(sub, exact_limit);
      packed = rc >= 1 && rc <= packing.budget();
    }
    reports.push_back({10, packed, Closure::NotClosed});
    out.push_back(std::move(reports));
  }
  return out;
}

}  // namespace rankshadow
