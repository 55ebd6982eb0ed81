#pragma once
// Escaping-sequence factories: parametric families X_j of PSD matrices whose
// projections converge to data that no completion of the allowed rank can
// reach. Each factory validates its anchors against the host pattern, knows
// the limit in closed form, and produces dense sequence elements on demand.
//
// Anchors whose coordinate grows with j must not carry loops (the projected
// diagonal would diverge); everything else about the host is unconstrained.

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rankshadow/classifier.hpp"
#include "rankshadow/completion.hpp"
#include "rankshadow/linalg.hpp"
#include "rankshadow/pattern_graph.hpp"

namespace rankshadow {

struct WitnessError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotATriangleError : WitnessError {
  using WitnessError::WitnessError;
};
struct PathClosesCycleError : WitnessError {
  using WitnessError::WitnessError;
};
struct NotACliqueError : WitnessError {
  using WitnessError::WitnessError;
};
struct PairInvalidError : WitnessError {
  using WitnessError::WitnessError;
};
struct UnsupportedPatternError : WitnessError {
  using WitnessError::WitnessError;
};

enum class WitnessFamily {
  Triangle,
  NoncyclicPath,
  Clique,
  MixedLoop,
  OddCycleOrthogonal,
};

inline const char* to_string(WitnessFamily f) {
  switch (f) {
    case WitnessFamily::Triangle: return "triangle";
    case WitnessFamily::NoncyclicPath: return "noncyclic_path";
    case WitnessFamily::Clique: return "clique";
    case WitnessFamily::MixedLoop: return "mixed_loop";
    default: return "odd_cycle_orthogonal";
  }
}

// One escaping sequence. element(j) is PSD with rank exactly sequence_rank
// for every j >= 1, and project(element(j)) approaches `limit` at rate O(1/j).
class WitnessSequence {
 public:
  WitnessSequence(WitnessFamily family, PatternGraph host, std::vector<int> anchors,
                  int rank, PartialMatrix limit)
      : family_(family),
        host_(std::move(host)),
        anchors_(std::move(anchors)),
        rank_(rank),
        limit_(std::move(limit)) {}

  WitnessFamily family() const { return family_; }
  const PatternGraph& host() const { return host_; }
  const std::vector<int>& anchors() const { return anchors_; }
  int sequence_rank() const { return rank_; }
  const PartialMatrix& limit() const { return limit_; }

  Matrix element(double j) const {
    if (!(j >= 1.0))
      throw std::invalid_argument("witness element: index must be >= 1");
    const int n = host_.order();
    Vector v = Vector::Zero(n);
    switch (family_) {
      case WitnessFamily::Triangle: {
        v(anchors_[0] - 1) = 1.0 / std::sqrt(j);
        v(anchors_[1] - 1) = 1.0 / std::sqrt(j);
        v(anchors_[2] - 1) = std::sqrt(j);
        return v * v.transpose();
      }
      case WitnessFamily::NoncyclicPath: {
        v(anchors_[0] - 1) = std::sqrt(j);
        v(anchors_[1] - 1) = 1.0 / std::sqrt(j);
        v(anchors_[2] - 1) = 1.0 / std::sqrt(j);
        v(anchors_[3] - 1) = std::sqrt(j);
        return v * v.transpose();
      }
      case WitnessFamily::Clique: {
        const size_t k = anchors_.size();
        for (size_t t = 0; t + 1 < k; ++t) v(anchors_[t] - 1) = 1.0 / j;
        v(anchors_[k - 1] - 1) = j;
        return v * v.transpose();
      }
      case WitnessFamily::MixedLoop: {
        v(anchors_[0] - 1) = 1.0 / std::sqrt(j);
        v(anchors_[1] - 1) = std::sqrt(j);
        return v * v.transpose();
      }
      case WitnessFamily::OddCycleOrthogonal: {
        static constexpr std::array<double, 6> kSign{1, -1, 1, -1, 1, -1};
        Vector u = Vector::Zero(n), w = Vector::Zero(n);
        for (int t = 0; t < 6; ++t) {
          const double mag = t < 4 ? 1.0 / std::sqrt(j) : std::sqrt(j);
          u(anchors_[t] - 1) = mag;
          w(anchors_[t] - 1) = mag * kSign[t];
        }
        return u * u.transpose() + w * w.transpose();
      }
    }
    throw std::logic_error("witness element: unreachable");
  }

  // Entry-exact projection of a sequence element onto the host pattern.
  PartialMatrix projected(double j) const { return project(element(j), host_); }

  // Largest entry gap between projected(j) and the limit.
  double limit_distance(double j) const {
    auto aj = projected(j);
    double worst = 0.0;
    for (const auto& [key, v] : limit_.values()) {
      auto got = aj.at(key.first, key.second);
      worst = std::max(worst, std::abs(*got - v));
    }
    return worst;
  }

 private:
  WitnessFamily family_;
  PatternGraph host_;
  std::vector<int> anchors_;
  int rank_;
  PartialMatrix limit_;
};

namespace detail {

inline void require_distinct(const std::vector<int>& vs, const PatternGraph& g,
                             const char* who) {
  for (int v : vs)
    if (v < 1 || v > g.order())
      throw UnsupportedPatternError(std::string(who) + ": anchor out of range");
  for (size_t a = 0; a < vs.size(); ++a)
    for (size_t b = a + 1; b < vs.size(); ++b)
      if (vs[a] == vs[b])
        throw UnsupportedPatternError(std::string(who) + ": repeated anchor");
}

// Limit data: zero everywhere except the listed entries.
inline PartialMatrix sparse_limit(const PatternGraph& g,
                                  const std::map<std::pair<int, int>, double>& hot) {
  std::map<PartialMatrix::Key, double> values;
  for (const auto& [i, j] : g.edges()) {
    auto it = hot.find({i, j});
    values[{i, j}] = it == hot.end() ? 0.0 : it->second;
  }
  return PartialMatrix(g.order(), std::move(values));
}

inline std::pair<int, int> ordered(int a, int b) {
  return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace detail

// v_j = (1/sqrt(j), 1/sqrt(j), sqrt(j)) on a triangle (p, q, s): the leg
// entries hold at 1 while the (p, q) entry drains to 0, which no rank-one
// completion can follow.
inline WitnessSequence make_triangle_witness(const PatternGraph& g, int p, int q,
                                             int s) {
  detail::require_distinct({p, q, s}, g, "triangle witness");
  if (!g.has_edge(p, q) || !g.has_edge(p, s) || !g.has_edge(q, s))
    throw NotATriangleError("triangle witness: anchors do not form a triangle");
  if (g.has_loop(s))
    throw UnsupportedPatternError("triangle witness: growing anchor carries a loop");
  auto limit = detail::sparse_limit(
      g, {{detail::ordered(p, s), 1.0}, {detail::ordered(q, s), 1.0}});
  return WitnessSequence(WitnessFamily::Triangle, g, {p, q, s}, 1, std::move(limit));
}

// v_j = (sqrt(j), 1/sqrt(j), 1/sqrt(j), sqrt(j)) on a 3-edge path whose end
// pair is unspecified. The middle entry drains to 0 between two persistent 1s.
inline WitnessSequence make_noncyclic_path_witness(const PatternGraph& g, int v1,
                                                   int v2, int v3, int v4) {
  detail::require_distinct({v1, v2, v3, v4}, g, "path witness");
  if (!g.has_edge(v1, v2) || !g.has_edge(v2, v3) || !g.has_edge(v3, v4))
    throw UnsupportedPatternError("path witness: anchors do not form a 3-edge path");
  if (g.has_edge(v1, v4))
    throw PathClosesCycleError("path witness: end pair is specified");
  if (g.has_loop(v1) || g.has_loop(v4))
    throw UnsupportedPatternError("path witness: growing anchor carries a loop");
  std::map<std::pair<int, int>, double> hot{{detail::ordered(v1, v2), 1.0},
                                            {detail::ordered(v3, v4), 1.0}};
  if (g.has_edge(v1, v3)) hot[detail::ordered(v1, v3)] = 1.0;
  if (g.has_edge(v2, v4)) hot[detail::ordered(v2, v4)] = 1.0;
  auto limit = detail::sparse_limit(g, hot);
  return WitnessSequence(WitnessFamily::NoncyclicPath, g, {v1, v2, v3, v4}, 1,
                         std::move(limit));
}

// x_j = 1/j on the first k-1 clique vertices and j on the last. In the limit
// the hub stays glued to every spoke while the spokes turn pairwise
// orthogonal, forcing rank k-1.
inline WitnessSequence make_clique_witness(const PatternGraph& g,
                                           std::vector<int> clique) {
  if (clique.size() < 3)
    throw NotACliqueError("clique witness: need at least 3 vertices");
  detail::require_distinct(clique, g, "clique witness");
  if (!is_clique(g, clique))
    throw NotACliqueError("clique witness: anchors are not pairwise adjacent");
  if (g.has_loop(clique.back()))
    throw UnsupportedPatternError("clique witness: growing anchor carries a loop");
  std::map<std::pair<int, int>, double> hot;
  for (size_t t = 0; t + 1 < clique.size(); ++t)
    hot[detail::ordered(clique[t], clique.back())] = 1.0;
  auto limit = detail::sparse_limit(g, hot);
  return WitnessSequence(WitnessFamily::Clique, g, std::move(clique), 1,
                         std::move(limit));
}

// Rank-one sequence pinned to a loop/no-loop edge: the specified diagonal
// drains to 0 while the off-diagonal entry stays 1, so the limit violates
// zero propagation for PSD completions of any rank.
inline WitnessSequence make_mixed_loop_witness(const PatternGraph& g, int loop_v,
                                               int plain_v) {
  detail::require_distinct({loop_v, plain_v}, g, "mixed loop witness");
  if (!g.has_edge(loop_v, plain_v))
    throw PairInvalidError("mixed loop witness: anchors are not adjacent");
  if (!g.has_loop(loop_v))
    throw PairInvalidError("mixed loop witness: first anchor has no loop");
  if (g.has_loop(plain_v))
    throw PairInvalidError("mixed loop witness: second anchor has a loop");
  std::map<std::pair<int, int>, double> hot{
      {detail::ordered(loop_v, plain_v), 1.0}};
  auto limit = detail::sparse_limit(g, hot);
  return WitnessSequence(WitnessFamily::MixedLoop, g, {loop_v, plain_v}, 1,
                         std::move(limit));
}

// Experimental rank-two probe on six anchors with alternating signs: entries
// between same-sign anchors touching the two growing coordinates persist at 2,
// opposite-sign entries are exactly 0 for every j. Whether the limit escapes
// rank 2 is left to the oracles; the factory only guarantees the sequence.
inline WitnessSequence make_odd_cycle_orthogonal_witness(
    const PatternGraph& g, const std::array<int, 6>& anchors) {
  std::vector<int> vs(anchors.begin(), anchors.end());
  detail::require_distinct(vs, g, "odd cycle witness");
  if (g.has_loop(anchors[4]) || g.has_loop(anchors[5]))
    throw UnsupportedPatternError("odd cycle witness: growing anchor carries a loop");
  static constexpr std::array<int, 6> kSign{1, -1, 1, -1, 1, -1};
  std::map<std::pair<int, int>, double> hot;
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b) {
      if (kSign[a] * kSign[b] != 1) continue;
      if (a < 4 && b < 4) continue;  // both coordinates shrink
      if (g.has_edge(anchors[a], anchors[b]))
        hot[detail::ordered(anchors[a], anchors[b])] = 2.0;
    }
  auto limit = detail::sparse_limit(g, hot);
  return WitnessSequence(WitnessFamily::OddCycleOrthogonal, g, std::move(vs), 2,
                         std::move(limit));
}

// Escaping sequences matching a NotClosed certificate, in the order the
// certificate lists its evidence. Closed and Unknown certificates yield none.
inline std::vector<WitnessSequence> witnesses_for_certificate(
    const PatternGraph& g, const Certificate& cert) {
  std::vector<WitnessSequence> out;
  switch (cert.kind) {
    case CertKind::MixedLoopComponent:
      out.push_back(make_mixed_loop_witness(g, cert.edge.first, cert.edge.second));
      break;
    case CertKind::NotBipartiteRankOne:
      if (cert.triangle.size() == 3)
        out.push_back(make_triangle_witness(g, cert.triangle[0], cert.triangle[1],
                                            cert.triangle[2]));
      else if (cert.path.size() == 4)
        out.push_back(make_noncyclic_path_witness(g, cert.path[0], cert.path[1],
                                                  cert.path[2], cert.path[3]));
      break;
    case CertKind::CliquePackingExclusion:
    case CertKind::CompleteGraphExclusion:
      for (size_t i = 0; i < cert.cliques.size(); ++i) {
        const int j = cert.chosen_sizes[i];
        std::vector<int> sub(cert.cliques[i].begin(), cert.cliques[i].begin() + j);
        out.push_back(make_clique_witness(g, std::move(sub)));
      }
      break;
    default:
      break;
  }
  return out;
}

}  // namespace rankshadow
