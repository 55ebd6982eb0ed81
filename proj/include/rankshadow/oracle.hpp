#pragma once
// Numerical and exact feasibility probes for partial matrices: an exact
// rank-one decision procedure, sound infeasibility checks for PSD
// completability, combinatorial rank lower bounds, and a seeded alternating
// projection heuristic for "does a rank <= r completion exist".
//
// The exact routes never guess: a No always carries checkable evidence, and
// the heuristic only ever answers Yes (with a verified completion) or
// Inconclusive.

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rankshadow/completion.hpp"
#include "rankshadow/linalg.hpp"
#include "rankshadow/pattern_graph.hpp"

namespace rankshadow {

enum class Answer { Yes, No, Inconclusive };

inline const char* to_string(Answer a) {
  switch (a) {
    case Answer::Yes: return "Yes";
    case Answer::No: return "No";
    default: return "Inconclusive";
  }
}

struct OracleAnswer {
  Answer answer = Answer::Inconclusive;
  std::string reason;                // route or refutation label
  std::vector<int> evidence;         // vertices backing a No
  std::optional<Matrix> completion;  // witnessing completion on Yes
  std::optional<Vector> factor;      // rank-one Yes: x with X = x x^T
  double residual = 0.0;             // projection runs: best data mismatch
  int iterations = 0;                // projection runs: iterations used
  int rank = -1;                     // rank of the completion when present
};

inline double zero_threshold(const PartialMatrix& a) {
  return 1e-12 * (1.0 + a.max_abs());
}

// ---------------------------------------------------------------------------
// Exact rank-one feasibility. X = x x^T matches the data iff the nonzero
// entries propagate consistently along cycles and every zero entry can be
// explained by a zero coordinate. Diagonal entries are rejected unless
// allow_loops is set (they pin |x_v| and the component scale).
inline OracleAnswer rank1_completable(const PartialMatrix& a,
                                      bool allow_loops = false,
                                      double tol = 1e-9) {
  const int n = a.order();
  const double ztol = zero_threshold(a);
  OracleAnswer out;
  auto no = [&](const char* reason, std::vector<int> ev) {
    out.answer = Answer::No;
    out.reason = reason;
    out.evidence = std::move(ev);
    return out;
  };

  std::vector<double> diag(n + 1, std::numeric_limits<double>::quiet_NaN());
  struct E {
    int i, j;
    double v;
  };
  std::vector<E> strong, zero;
  for (const auto& [key, v] : a.values()) {
    if (key.first == key.second) {
      if (!allow_loops)
        throw std::invalid_argument(
            "rank1_completable: diagonal entries need the loops extension");
      diag[key.first] = v;
    } else if (std::abs(v) > ztol) {
      strong.push_back({key.first, key.second, v});
    } else {
      zero.push_back({key.first, key.second, v});
    }
  }

  for (int v = 1; v <= n; ++v)
    if (std::isfinite(diag[v]) && diag[v] < -ztol) return no("negative_diagonal", {v});

  std::vector<char> in_core(n + 1, 0);
  std::vector<std::vector<std::pair<int, double>>> nadj(n + 1);
  for (const auto& e : strong) {
    in_core[e.i] = in_core[e.j] = 1;
    nadj[e.i].push_back({e.j, e.v});
    nadj[e.j].push_back({e.i, e.v});
  }

  // A zero diagonal forces the coordinate itself to zero.
  std::vector<char> zeroed(n + 1, 0);
  for (int v = 1; v <= n; ++v)
    if (std::isfinite(diag[v]) && std::abs(diag[v]) <= ztol) {
      if (in_core[v]) return no("zero_propagation", {v});
      zeroed[v] = 1;
    }

  // A zero entry needs a zero endpoint; endpoints touching nonzero entries or
  // carrying a positive diagonal cannot provide one.
  auto zeroable = [&](int v) {
    if (in_core[v]) return false;
    if (std::isfinite(diag[v]) && diag[v] > ztol) return false;
    return true;
  };
  for (const auto& e : zero) {
    const bool zi = zeroable(e.i), zj = zeroable(e.j);
    if (!zi && !zj) return no("zero_propagation", {e.i, e.j});
    if (zi) zeroed[e.i] = 1;
    if (zj) zeroed[e.j] = 1;
  }

  Vector x = Vector::Zero(n);
  for (int v = 1; v <= n; ++v)
    if (!in_core[v] && !zeroed[v] && std::isfinite(diag[v]) && diag[v] > ztol)
      x(v - 1) = std::sqrt(diag[v]);

  // Propagate along a spanning tree of each nonzero component: every
  // coordinate is c_v * t^{e_v} with e_v = +-1 in the free scale t.
  std::vector<int> comp(n + 1, -1);
  std::vector<double> coef(n + 1, 0.0);
  std::vector<int> expo(n + 1, 0);
  std::set<std::pair<int, int>> tree;
  int comp_count = 0;
  for (int root = 1; root <= n; ++root) {
    if (!in_core[root] || comp[root] >= 0) continue;
    const int id = comp_count++;
    std::vector<int> members;
    std::vector<int> stack{root};
    comp[root] = id;
    coef[root] = 1.0;
    expo[root] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      members.push_back(u);
      for (const auto& [w, v] : nadj[u])
        if (comp[w] < 0) {
          comp[w] = id;
          coef[w] = v / coef[u];
          expo[w] = -expo[u];
          tree.insert({std::min(u, w), std::max(u, w)});
          stack.push_back(w);
        }
    }

    // Every off-tree entry and every diagonal in the component pins either a
    // plain value equation or the squared scale.
    std::vector<double> scale_pins;
    for (const auto& e : strong) {
      if (comp[e.i] != id) continue;
      if (tree.count({std::min(e.i, e.j), std::max(e.i, e.j)})) continue;
      const double prod = coef[e.i] * coef[e.j];
      if (expo[e.i] + expo[e.j] == 0) {
        if (std::abs(prod - e.v) > tol * (1.0 + std::abs(e.v)))
          return no("value_inconsistency", {e.i, e.j});
      } else {
        const double q = expo[e.i] + expo[e.j] > 0 ? e.v / prod : prod / e.v;
        if (q <= 0.0) return no("sign_inconsistency", {e.i, e.j});
        scale_pins.push_back(q);
      }
    }
    for (int v : members)
      if (std::isfinite(diag[v])) {
        // Negative and zero diagonals were rejected above, so diag[v] > 0.
        const double c2 = coef[v] * coef[v];
        scale_pins.push_back(expo[v] > 0 ? diag[v] / c2 : c2 / diag[v]);
      }

    double t2 = 1.0;
    if (!scale_pins.empty()) {
      t2 = scale_pins.front();
      for (double q : scale_pins)
        if (std::abs(q - t2) > tol * (1.0 + std::abs(t2)))
          return no("scale_inconsistency", members);
    }
    const double t = std::sqrt(t2);
    for (int v : members) x(v - 1) = expo[v] > 0 ? coef[v] * t : coef[v] / t;
  }

  // Defensive re-check of every specified entry against x x^T.
  const double vtol = std::max(tol, 1e-9) * (1.0 + a.max_abs());
  for (const auto& [key, v] : a.values())
    if (std::abs(x(key.first - 1) * x(key.second - 1) - v) > vtol) {
      out.answer = Answer::Inconclusive;
      out.reason = "numerical_verification_failed";
      return out;
    }

  out.answer = Answer::Yes;
  out.reason = "propagation";
  out.factor = x;
  out.completion = x * x.transpose();
  out.rank = x.cwiseAbs().maxCoeff() > 0.0 ? 1 : 0;
  return out;
}

// ---------------------------------------------------------------------------
// Alternating projection between the rank <= r PSD cone and the affine set of
// matrices matching the data, multi-start from deterministic random seeds.
// Starts that exhaust their budget get a Newton refinement of their best
// factor before the next restart. Answers Yes only with a verified
// completion; a miss is Inconclusive, never No.
struct AltProjConfig {
  int seeds = 16;
  int max_iters = 5000;
  double tol = 1e-9;
  uint64_t seed = 0;
};

namespace detail {

// Weighted data residual: off-diagonal entries count twice (both copies).
inline double weighted_residual(const Matrix& x, const PartialMatrix& a) {
  double s = 0.0;
  for (const auto& [key, v] : a.values()) {
    const double d = x(key.first - 1, key.second - 1) - v;
    s += (key.first == key.second ? 1.0 : 2.0) * d * d;
  }
  return std::sqrt(s);
}

inline double weighted_norm(const PartialMatrix& a) {
  double s = 0.0;
  for (const auto& [key, v] : a.values())
    s += (key.first == key.second ? 1.0 : 2.0) * v * v;
  return std::sqrt(s);
}

inline void overwrite_specified(Matrix& x, const PartialMatrix& a) {
  for (const auto& [key, v] : a.values()) {
    x(key.first - 1, key.second - 1) = v;
    x(key.second - 1, key.first - 1) = v;
  }
}

// Damped Newton descent on the squared data residual of a Gram factor
// X = V V^T. The exact Hessian keeps the curvature of the product terms, so
// the search can track the curved zero-residual valleys where plain
// projection rounds stall. Returns the weighted residual of V V^T; stops
// early once no damping level makes progress (nothing nearby to find).
inline double refine_factor(Matrix& v, const PartialMatrix& a, int max_iters) {
  const int r = static_cast<int>(v.cols());
  const auto& vals = a.values();
  if (vals.empty() || r == 0) return weighted_residual(v * v.transpose(), a);
  const int np = static_cast<int>(v.rows()) * r;
  auto eval = [&](const Matrix& w) {
    double ssq = 0.0;
    for (const auto& [key, val] : vals) {
      const double wgt = key.first == key.second ? 1.0 : 2.0;
      const double d = w.row(key.first - 1).dot(w.row(key.second - 1)) - val;
      ssq += wgt * d * d;
    }
    return std::sqrt(ssq);
  };
  double res = eval(v);
  double lambda = 1e-4;
  for (int it = 0; it < max_iters && res > 0.0; ++it) {
    Vector grad = Vector::Zero(np);
    Matrix hess = Matrix::Zero(np, np);
    for (const auto& [key, val] : vals) {
      const int i0 = key.first - 1, j0 = key.second - 1;
      const double wgt = key.first == key.second ? 1.0 : 2.0;
      const double d = v.row(i0).dot(v.row(j0)) - val;
      for (int c = 0; c < r; ++c) {
        grad(i0 * r + c) += wgt * d * v(j0, c);
        grad(j0 * r + c) += wgt * d * v(i0, c);
        hess(i0 * r + c, j0 * r + c) += wgt * d;
        hess(j0 * r + c, i0 * r + c) += wgt * d;
        for (int c2 = 0; c2 < r; ++c2) {
          hess(i0 * r + c, j0 * r + c2) += wgt * v(j0, c) * v(i0, c2);
          hess(j0 * r + c, i0 * r + c2) += wgt * v(i0, c) * v(j0, c2);
          hess(i0 * r + c, i0 * r + c2) += wgt * v(j0, c) * v(j0, c2);
          hess(j0 * r + c, j0 * r + c2) += wgt * v(i0, c) * v(i0, c2);
        }
      }
    }
    bool accepted = false;
    for (int tries = 0; tries < 12; ++tries) {
      Matrix damped = hess;
      damped.diagonal().array() += lambda;
      Eigen::LDLT<Matrix> ldlt(damped);
      if (ldlt.info() != Eigen::Success) {
        lambda *= 10.0;
        continue;
      }
      Vector delta = ldlt.solve(-grad);
      Matrix vt = v;
      for (int p = 0; p < np; ++p) vt(p / r, p % r) += delta(p);
      const double rt = eval(vt);
      if (rt < res) {
        v = vt;
        res = rt;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) break;
  }
  return res;
}

}  // namespace detail

inline OracleAnswer alt_proj_complete(const PartialMatrix& a, int r,
                                      const AltProjConfig& cfg = {}) {
  const int n = a.order();
  if (r < 0 || r > n)
    throw std::out_of_range("alt_proj_complete: rank bound must lie in [0, n]");
  OracleAnswer out;
  const double target = cfg.tol * (1.0 + detail::weighted_norm(a));
  double best = std::numeric_limits<double>::infinity();
  const double amp = std::sqrt(1.0 + a.max_abs());

  for (int s = 0; s < std::max(1, cfg.seeds); ++s) {
    std::mt19937_64 rng(cfg.seed ^ (0x9E3779B97F4A7C15ULL * (s + 1)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix w = Matrix::Zero(n, std::max(1, r));
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = amp * gauss(rng);
    Matrix x = r == 0 ? Matrix::Zero(n, n) : Matrix((w * w.transpose()).eval());
    Matrix stalled_at = x;
    double stalled_res = std::numeric_limits<double>::infinity();

    for (int it = 1; it <= cfg.max_iters; ++it) {
      detail::overwrite_specified(x, a);
      x = psd_truncate(x, r);
      const double res = detail::weighted_residual(x, a);
      if (res < stalled_res) {
        stalled_res = res;
        stalled_at = x;
      }
      if (res < best) best = res;
      if (res <= target) {
        out.answer = Answer::Yes;
        out.reason = "alternating_projection";
        out.completion = x;
        out.rank = rank_eps(x);
        out.residual = res;
        out.iterations = it;
        return out;
      }
      if (r == 0) break;  // nothing to iterate, the zero matrix is the cone
    }

    // This start ran out of budget. Refine its best iterate's Gram factor,
    // then the raw start, with the Newton polish; give up only if both stall.
    if (r > 0) {
      auto eig = eig_sym(stalled_at);
      Matrix v = Matrix::Zero(n, r);
      for (int c = 0; c < r; ++c) {
        const Eigen::Index idx = eig.values.size() - 1 - c;
        if (idx >= 0 && eig.values(idx) > 0.0)
          v.col(c) = eig.vectors.col(idx) * std::sqrt(eig.values(idx));
      }
      for (const Matrix& start : {v, w}) {
        Matrix refined = start;
        const double res = detail::refine_factor(refined, a, 600);
        if (res < best) best = res;
        if (res <= target) {
          out.answer = Answer::Yes;
          out.reason = "alternating_projection";
          out.completion = refined * refined.transpose();
          out.rank = rank_eps(*out.completion);
          out.residual = res;
          out.iterations = cfg.max_iters;
          return out;
        }
      }
    }
  }
  out.answer = Answer::Inconclusive;
  out.reason = "projection_stalled";
  out.residual = best;
  out.iterations = cfg.max_iters;
  return out;
}

// ---------------------------------------------------------------------------
// Combinatorial lower bounds on the rank of every PSD completion.
struct RankLowerBound {
  int bound = 0;
  std::string kind;          // "OrthogonalStar" or "SpecifiedBlockRank"
  int center = 0;            // star: hub vertex
  std::vector<int> leaves;   // star: pairwise-orthogonal neighbors
  std::vector<int> rows, cols;  // block: submatrix evidence
};

inline RankLowerBound min_rank_lower_bound(const PartialMatrix& a,
                                           double tol = kDefaultTol) {
  const int n = a.order();
  const double ztol = zero_threshold(a);
  RankLowerBound best;

  // Star route: leaves adjacent to a common center through nonzero entries,
  // pairwise specified as zero, are pairwise orthogonal nonzero Gram vectors.
  for (int c = 1; c <= n; ++c) {
    std::vector<int> leaves;
    for (int s = 1; s <= n; ++s) {
      if (s == c) continue;
      auto v = a.at(std::min(s, c), std::max(s, c));
      if (v && std::abs(*v) > ztol) leaves.push_back(s);
    }
    if (static_cast<int>(leaves.size()) <= best.bound) continue;
    std::vector<std::pair<int, int>> zero_edges;
    for (size_t p = 0; p < leaves.size(); ++p)
      for (size_t q = p + 1; q < leaves.size(); ++q) {
        auto v = a.at(leaves[p], leaves[q]);
        if (v && std::abs(*v) <= ztol)
          zero_edges.emplace_back(static_cast<int>(p) + 1, static_cast<int>(q) + 1);
      }
    PatternGraph zg(static_cast<int>(leaves.size()), std::move(zero_edges));
    auto clique = largest_clique(zg);
    if (static_cast<int>(clique.vertices.size()) > best.bound) {
      best.bound = static_cast<int>(clique.vertices.size());
      best.kind = "OrthogonalStar";
      best.center = c;
      best.leaves.clear();
      for (int lv : clique.vertices) best.leaves.push_back(leaves[lv - 1]);
      best.rows.clear();
      best.cols.clear();
    }
  }

  // Block route: a fully specified off-diagonal submatrix embeds in every
  // completion, so its numeric rank is a floor. Row sets up to size 3.
  std::vector<int> rows;
  auto consider = [&](const std::vector<int>& rset) {
    std::vector<int> cols;
    for (int c = 1; c <= n; ++c) {
      bool ok = true;
      for (int r : rset) {
        if (r == c || !a.at(std::min(r, c), std::max(r, c))) {
          ok = false;
          break;
        }
      }
      if (ok) cols.push_back(c);
    }
    if (cols.empty()) return;
    Matrix block(rset.size(), cols.size());
    for (size_t i = 0; i < rset.size(); ++i)
      for (size_t j = 0; j < cols.size(); ++j)
        block(i, j) = *a.at(std::min(rset[i], cols[j]), std::max(rset[i], cols[j]));
    const int rk = rank_eps(block, tol);
    if (rk > best.bound) {
      best.bound = rk;
      best.kind = "SpecifiedBlockRank";
      best.center = 0;
      best.leaves.clear();
      best.rows = rset;
      best.cols = cols;
    }
  };
  for (int i = 1; i <= n; ++i) {
    consider({i});
    for (int j = i + 1; j <= n; ++j) {
      consider({i, j});
      for (int k = j + 1; k <= n; ++k) consider({i, j, k});
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// PSD completability. Exact refutations first (each one is a certificate),
// then constructive attempts, then the convex projection; a search that finds
// nothing stays Inconclusive.
struct PsdOptions {
  double tol = kDefaultTol;
  AltProjConfig alt;
};

inline OracleAnswer psd_completable(const PartialMatrix& a,
                                    const PsdOptions& opt = {}) {
  const int n = a.order();
  const double ztol = zero_threshold(a);
  OracleAnswer out;
  auto no = [&](const char* reason, std::vector<int> ev) {
    out.answer = Answer::No;
    out.reason = reason;
    out.evidence = std::move(ev);
    return out;
  };

  std::vector<double> diag(n + 1, std::numeric_limits<double>::quiet_NaN());
  for (const auto& [key, v] : a.values())
    if (key.first == key.second) diag[key.first] = v;

  for (int v = 1; v <= n; ++v)
    if (std::isfinite(diag[v]) && diag[v] < -ztol)
      return no("SpecifiedBlockRank", {v});

  // X_vv = 0 zeroes the whole row of any PSD completion.
  for (int v = 1; v <= n; ++v) {
    if (!std::isfinite(diag[v]) || std::abs(diag[v]) > ztol) continue;
    for (const auto& [key, val] : a.values()) {
      if (key.first == key.second || std::abs(val) <= ztol) continue;
      if (key.first == v || key.second == v)
        return no("ZeroPropagation", {v, key.first == v ? key.second : key.first});
    }
  }

  // Fully specified principal blocks must be PSD on their own. Blocks live on
  // cliques of the specified graph restricted to specified diagonals.
  std::vector<int> looped;
  for (int v = 1; v <= n; ++v)
    if (std::isfinite(diag[v])) looped.push_back(v);
  if (!looped.empty() && looped.size() <= 64) {
    const int m = static_cast<int>(looped.size());
    std::vector<uint64_t> adj(m + 1, 0);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (a.at(std::min(looped[i], looped[j]), std::max(looped[i], looped[j]))) {
          adj[i + 1] |= PatternGraph::bit(j + 1);
          adj[j + 1] |= PatternGraph::bit(i + 1);
        }
    std::vector<uint64_t> cliques;
    const uint64_t all = (m == 64) ? ~uint64_t{0} : (PatternGraph::bit(m + 1) - 1);
    detail::bron_kerbosch(0, all, 0, adj, cliques);
    for (uint64_t cm : cliques) {
      auto local = detail::mask_to_vertices(cm);
      Matrix block(local.size(), local.size());
      for (size_t i = 0; i < local.size(); ++i)
        for (size_t j = 0; j < local.size(); ++j) {
          const int u = looped[local[i] - 1], w = looped[local[j] - 1];
          block(i, j) = *a.at(std::min(u, w), std::max(u, w));
        }
      if (!is_psd(block, opt.tol)) {
        std::vector<int> ev;
        for (int lv : local) ev.push_back(looped[lv - 1]);
        return no("SpecifiedBlockRank", ev);
      }
    }
  }

  // Constructive attempts. A loopless pattern always completes (free
  // diagonals can dominate); with specified diagonals we still try the same
  // fill and keep it only if it verifies.
  Matrix x = a.zero_fill();
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(diag[i + 1])) continue;
    double off = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) off += std::abs(x(i, j));
    x(i, i) = 1.0 + off;
  }
  if (is_psd(x, opt.tol)) {
    out.answer = Answer::Yes;
    out.reason = "dominant_diagonal";
    out.completion = x;
    out.rank = rank_eps(x, opt.tol);
    return out;
  }

  auto proj = alt_proj_complete(a, n, opt.alt);
  if (proj.answer == Answer::Yes) return proj;

  out.answer = Answer::Inconclusive;
  out.reason = "no_route_applied";
  out.residual = proj.residual;
  return out;
}

// ---------------------------------------------------------------------------
// Bracketing the minimum completion rank: exact floors from the combinatorial
// bounds and the rank-one decision, ceiling from projection sweeps.
struct MinRankEstimate {
  int lower = 0;
  int upper = -1;  // -1: no completion found up to rank n
  std::optional<Matrix> completion;
  RankLowerBound floor_certificate;
};

inline MinRankEstimate min_rank_estimate(const PartialMatrix& a,
                                         const AltProjConfig& cfg = {},
                                         double tol = kDefaultTol) {
  MinRankEstimate out;
  const double ztol = zero_threshold(a);
  bool all_zero = true;
  for (const auto& [key, v] : a.values()) {
    (void)key;
    if (std::abs(v) > ztol) {
      all_zero = false;
      break;
    }
  }
  const int n = a.order();
  if (all_zero) {
    out.lower = 0;
    out.upper = 0;
    out.completion = Matrix::Zero(n, n);
    return out;
  }

  out.floor_certificate = min_rank_lower_bound(a, tol);
  out.lower = std::max(1, out.floor_certificate.bound);

  auto r1 = rank1_completable(a, /*allow_loops=*/true);
  if (r1.answer == Answer::Yes && out.lower <= 1) {
    out.lower = 1;
    out.upper = 1;
    out.completion = r1.completion;
    return out;
  }
  if (r1.answer == Answer::No) out.lower = std::max(out.lower, 2);

  for (int r = std::max(1, out.lower); r <= n; ++r) {
    auto res = alt_proj_complete(a, r, cfg);
    if (res.answer == Answer::Yes) {
      out.upper = r;
      out.completion = res.completion;
      break;
    }
  }
  return out;
}

}  // namespace rankshadow
