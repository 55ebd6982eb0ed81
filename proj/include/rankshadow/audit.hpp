#pragma once
// Independent re-verification of classifier verdicts. The audit retraces the
// combinatorial evidence in a certificate with fresh eyes, confirms escaping
// sequences numerically for NotClosed claims, and exercises the constructive
// recipes on random in-range instances for Closed claims. It trusts nothing
// the classifier computed beyond the certificate itself.

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rankshadow/classifier.hpp"
#include "rankshadow/completion.hpp"
#include "rankshadow/oracle.hpp"
#include "rankshadow/pattern_graph.hpp"
#include "rankshadow/witness.hpp"

namespace rankshadow {

struct AuditOptions {
  double tol = kDefaultTol;
  uint64_t seed = 0;
};

struct AuditReport {
  bool ok = true;
  std::vector<std::string> checks;    // evidence that held
  std::vector<std::string> failures;  // claims that broke, with detail

  void pass(std::string line) { checks.push_back(std::move(line)); }
  void fail(std::string line) {
    ok = false;
    failures.push_back(std::move(line));
  }
  void require(bool cond, const std::string& line) {
    if (cond)
      pass(line);
    else
      fail(line + " [violated]");
  }
};

namespace detail {

inline PartialMatrix random_projected_instance(const PatternGraph& g, int r,
                                               std::mt19937_64& rng) {
  const int n = g.order();
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix w = Matrix::Zero(n, std::max(1, r));
  if (r > 0)
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = gauss(rng);
  Matrix x = w * w.transpose();
  return project(x, g);
}

inline void audit_witness(const WitnessSequence& ws, AuditReport& rep,
                          double tol) {
  for (double j : {1.0, 10.0, 100.0}) {
    Matrix xj = ws.element(j);
    std::ostringstream tag;
    tag << to_string(ws.family()) << " witness, j=" << j;
    rep.require(is_psd(xj, tol), tag.str() + ": element is PSD");
    rep.require(rank_eps(xj, tol) == ws.sequence_rank(),
                tag.str() + ": element rank equals the family rank");
    rep.require(ws.limit_distance(j) <= 2.0 / j + 1e-12,
                tag.str() + ": projection within 2/j of the limit");
  }
}

// Run the constructive recipe for one Closed component on a random instance
// that genuinely lies in the projected set, then verify the output.
inline void audit_closed_component(const PatternGraph& sub,
                                   const ComponentVerdict& cv, AuditReport& rep,
                                   const AuditOptions& opt,
                                   std::mt19937_64& rng) {
  const auto kind = cv.certificate.kind;
  const bool constructive =
      kind == CertKind::TrivialFullRank || kind == CertKind::CompleteBipartite ||
      kind == CertKind::IndependentSet ||
      (kind == CertKind::RankAtLeastThreshold && cv.rank_used >= sub.order() - 1) ||
      (kind == CertKind::LoopComponent &&
       sub.edge_count() == sub.order() * (sub.order() + 1) / 2);
  if (!constructive) {
    rep.pass(std::string(to_string(kind)) +
             ": existence-only window, completion recipe not exercised");
    return;
  }
  auto a = random_projected_instance(sub, cv.rank_used, rng);
  try {
    auto res = detail::complete_component(a, cv, opt.tol);
    const double scale = 1.0 + a.max_abs();
    rep.require(data_mismatch(res.x, a) <= 1e-6 * scale,
                std::string(to_string(kind)) + ": recipe reproduces the data");
    rep.require(is_psd(res.x, opt.tol),
                std::string(to_string(kind)) + ": recipe output is PSD");
    rep.require(res.rank <= cv.rank_used,
                std::string(to_string(kind)) + ": recipe respects the rank bound");
  } catch (const CompletionError& e) {
    rep.fail(std::string(to_string(kind)) + ": recipe failed on an in-range instance (" +
             e.what() + ")");
  }
}

}  // namespace detail

// Re-verifies every claim a verdict makes about `g`. A returned report with
// ok=false lists each broken claim; it never throws on bad certificates.
inline AuditReport audit_certificate(const PatternGraph& g,
                                     const ClosureVerdict& verdict,
                                     const AuditOptions& opt = {}) {
  AuditReport rep;
  const int n = g.order();
  if (verdict.rank < 0 || verdict.rank > n) {
    rep.fail("rank bound outside [0, n]");
    return rep;
  }
  std::mt19937_64 rng(opt.seed ^ 0xA24BAED4963EE407ULL);

  if (verdict.certificate.kind == CertKind::RankZero) {
    rep.require(verdict.rank == 0, "rank zero certificate matches rank 0");
    rep.require(verdict.status == Closure::Closed, "rank zero implies closed");
    return rep;
  }

  if (verdict.certificate.kind == CertKind::MixedLoopComponent) {
    const auto [u, v] = verdict.certificate.edge;
    const bool shape = u >= 1 && v >= 1 && u <= n && v <= n && g.has_edge(u, v) &&
                       g.has_loop(u) && !g.has_loop(v);
    rep.require(shape, "mixed pair is an edge from a looped to a loopless vertex");
    rep.require(verdict.status == Closure::NotClosed,
                "mixed component implies not closed");
    if (!shape) return rep;
    auto ws = make_mixed_loop_witness(g, u, v);
    detail::audit_witness(ws, rep, opt.tol);
    auto obstruction = psd_completable(ws.limit());
    rep.require(obstruction.answer == Answer::No,
                "limit of the mixed sequence has no PSD completion (got " +
                    std::string(to_string(obstruction.answer)) + ")");
    return rep;
  }

  auto dec = connected_components(g);
  if (static_cast<int>(verdict.components.size()) != dec.count()) {
    rep.fail("verdict component count disagrees with the graph");
    return rep;
  }

  for (size_t c = 0; c < verdict.components.size(); ++c) {
    const auto& cv = verdict.components[c];
    const auto& cert = cv.certificate;
    const auto& sub = dec.induced[c];
    const int nc = sub.order();
    std::ostringstream who;
    who << "component " << c << " (" << to_string(cert.kind) << ")";
    if (cv.vertices != dec.blocks[c]) {
      rep.fail(who.str() + ": vertex block mismatch");
      continue;
    }
    if (cv.rank_used != std::min(verdict.rank, nc)) {
      rep.fail(who.str() + ": stored rank is not min(r, n_c)");
      continue;
    }
    std::vector<int> local(n + 1, 0);
    for (size_t t = 0; t < cv.vertices.size(); ++t)
      local[cv.vertices[t]] = static_cast<int>(t) + 1;
    auto in_block = [&](const std::vector<int>& vs) {
      for (int v : vs)
        if (v < 1 || v > n || !local[v]) return false;
      return true;
    };

    switch (cert.kind) {
      case CertKind::LoopComponent:
        rep.require(sub.fully_looped() && cv.status == Closure::Closed,
                    who.str() + ": every vertex carries a loop");
        detail::audit_closed_component(sub, cv, rep, opt, rng);
        break;
      case CertKind::TrivialFullRank:
        rep.require(cv.rank_used >= nc && cv.status == Closure::Closed,
                    who.str() + ": rank covers the component order");
        detail::audit_closed_component(sub, cv, rep, opt, rng);
        break;
      case CertKind::RankAtLeastThreshold: {
        const long long bound =
            std::min<long long>(nc - 1, barvinok_threshold(sub.edge_count()));
        rep.require(sub.loopless(), who.str() + ": component is loopless");
        rep.require(cert.edge_count == sub.edge_count(),
                    who.str() + ": certificate edge count matches");
        rep.require(cert.threshold == bound && cv.rank_used >= bound &&
                        cv.status == Closure::Closed,
                    who.str() + ": rank reaches the recomputed threshold");
        detail::audit_closed_component(sub, cv, rep, opt, rng);
        break;
      }
      case CertKind::CompleteBipartite: {
        bool ok = in_block(cert.side_a) && in_block(cert.side_b);
        if (ok) {
          std::vector<int> sa, sb;
          for (int v : cert.side_a) sa.push_back(local[v]);
          for (int v : cert.side_b) sb.push_back(local[v]);
          ok = verify_bipartition(sub, sa, sb);
        }
        rep.require(ok && cv.status == Closure::Closed,
                    who.str() + ": sides form a complete bipartition");
        if (ok) detail::audit_closed_component(sub, cv, rep, opt, rng);
        break;
      }
      case CertKind::IndependentSet: {
        const bool ok = in_block(cert.independent_set) &&
                        is_independent_set(g, cert.independent_set) &&
                        cv.rank_used >=
                            nc - static_cast<int>(cert.independent_set.size());
        rep.require(ok && cv.status == Closure::Closed,
                    who.str() + ": independent set large enough for the rank");
        if (ok) detail::audit_closed_component(sub, cv, rep, opt, rng);
        break;
      }
      case CertKind::NotBipartiteRankOne: {
        rep.require(cv.rank_used == 1 && cv.status == Closure::NotClosed,
                    who.str() + ": applies exactly at rank 1");
        if (cert.triangle.size() == 3) {
          const auto& t = cert.triangle;
          const bool shape = in_block(t) && g.has_edge(t[0], t[1]) &&
                             g.has_edge(t[0], t[2]) && g.has_edge(t[1], t[2]);
          rep.require(shape, who.str() + ": triangle edges all present");
          if (!shape) break;
          auto ws = make_triangle_witness(g, t[0], t[1], t[2]);
          detail::audit_witness(ws, rep, opt.tol);
          auto lim = rank1_completable(ws.limit(), /*allow_loops=*/true);
          rep.require(lim.answer == Answer::No,
                      who.str() + ": triangle limit rejects rank one");
        } else if (cert.path.size() == 4) {
          const auto& p = cert.path;
          const bool shape = in_block(p) && g.has_edge(p[0], p[1]) &&
                             g.has_edge(p[1], p[2]) && g.has_edge(p[2], p[3]) &&
                             !g.has_edge(p[0], p[3]);
          rep.require(shape, who.str() + ": path edges present, end pair absent");
          if (!shape) break;
          auto ws = make_noncyclic_path_witness(g, p[0], p[1], p[2], p[3]);
          detail::audit_witness(ws, rep, opt.tol);
          auto lim = rank1_completable(ws.limit(), /*allow_loops=*/true);
          rep.require(lim.answer == Answer::No,
                      who.str() + ": path limit rejects rank one");
        } else {
          rep.fail(who.str() + ": certificate names neither triangle nor path");
        }
        break;
      }
      case CertKind::CliquePackingExclusion:
      case CertKind::CompleteGraphExclusion: {
        rep.require(cv.status == Closure::NotClosed,
                    who.str() + ": packing implies not closed");
        if (cert.cliques.size() != cert.chosen_sizes.size()) {
          rep.fail(who.str() + ": clique list and size list disagree");
          break;
        }
        std::vector<char> used(n + 1, 0);
        bool shape = !cert.cliques.empty();
        int spent = 0;
        for (size_t i = 0; i < cert.cliques.size() && shape; ++i) {
          const auto& cl = cert.cliques[i];
          const int j = cert.chosen_sizes[i];
          shape = in_block(cl) && is_clique(g, cl) && j >= 3 &&
                  j <= static_cast<int>(cl.size());
          for (int v : cl) {
            if (used[v]) shape = false;
            used[v] = 1;
          }
          spent += j - 2;
        }
        rep.require(shape, who.str() + ": cliques are disjoint and sizes in range");
        if (!shape) break;
        rep.require(spent == cv.rank_used,
                    who.str() + ": chosen sizes spend the rank exactly");
        if (cert.kind == CertKind::CompleteGraphExclusion) {
          const bool complete =
              sub.edge_count() == static_cast<long long>(nc) * (nc - 1) / 2 &&
              sub.loopless();
          rep.require(complete && cv.rank_used == nc - 2,
                      who.str() + ": whole component is a clique at corank 2");
        }
        // Each listed clique escapes on its own at rank j-2: the limit of its
        // witness needs rank j-1, which the star bound certifies exactly.
        for (size_t i = 0; i < cert.cliques.size(); ++i) {
          const int j = cert.chosen_sizes[i];
          std::vector<int> sub_clique(cert.cliques[i].begin(),
                                      cert.cliques[i].begin() + j);
          auto ws = make_clique_witness(g, sub_clique);
          detail::audit_witness(ws, rep, opt.tol);
          auto floor = min_rank_lower_bound(ws.limit());
          rep.require(floor.bound >= j - 1,
                      who.str() + ": clique limit needs rank " + std::to_string(j - 1) +
                          " (bound found: " + std::to_string(floor.bound) + ")");
        }
        break;
      }
      case CertKind::Unknown:
        rep.require(cv.status == Closure::Unknown,
                    who.str() + ": unknown certificate carries unknown status");
        break;
      default:
        rep.fail(who.str() + ": certificate kind cannot appear on a component");
    }
  }

  // The roll-up must equal the worst component outcome.
  auto rank_of = [](Closure s) {
    return s == Closure::NotClosed ? 2 : (s == Closure::Unknown ? 1 : 0);
  };
  int worst = 0;
  for (const auto& cv : verdict.components)
    worst = std::max(worst, rank_of(cv.status));
  rep.require(rank_of(verdict.status) == worst,
              "overall status equals the worst component status");
  return rep;
}

}  // namespace rankshadow
