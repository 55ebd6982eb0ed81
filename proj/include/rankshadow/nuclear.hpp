#pragma once
// Convex surrogate playground: nuclear norm minimization over rectangular
// observations by Douglas-Rachford splitting, the PSD lift that certifies the
// objective, and a sweep harness measuring where the surrogate recovers the
// planted matrix and where it provably does not.

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rankshadow/completion.hpp"
#include "rankshadow/linalg.hpp"
#include "rankshadow/pattern_graph.hpp"

namespace rankshadow {

// Observations of an m x p matrix: entry (i, j) of omega holds values[t].
struct ObservationInstance {
  int m = 0, p = 0;
  std::vector<std::pair<int, int>> omega;  // 1-indexed (row, col)
  std::vector<double> values;
  std::optional<Matrix> truth;

  void validate() const {
    if (m < 1 || p < 1)
      throw std::invalid_argument("ObservationInstance: empty shape");
    if (omega.size() != values.size())
      throw std::invalid_argument("ObservationInstance: omega/value length mismatch");
    std::vector<char> seen(static_cast<size_t>(m) * p, 0);
    for (const auto& [i, j] : omega) {
      if (i < 1 || i > m || j < 1 || j > p)
        throw std::invalid_argument("ObservationInstance: index out of range");
      auto& flag = seen[static_cast<size_t>(i - 1) * p + (j - 1)];
      if (flag) throw std::invalid_argument("ObservationInstance: duplicate index");
      flag = 1;
    }
    if (truth && (truth->rows() != m || truth->cols() != p))
      throw std::invalid_argument("ObservationInstance: truth shape mismatch");
  }
};

// Bipartite lift of the observation set: rows become vertices 1..m, columns
// m+1..m+p, and each observed entry is one cross edge. Always loopless.
inline PatternGraph omega_to_pattern(const ObservationInstance& inst) {
  inst.validate();
  std::vector<std::pair<int, int>> edges;
  edges.reserve(inst.omega.size());
  for (const auto& [i, j] : inst.omega) edges.emplace_back(i, inst.m + j);
  return PatternGraph(inst.m + inst.p, std::move(edges));
}

// Same lift carrying the observed values, for feeding the PSD oracles.
inline PartialMatrix instance_to_partial(const ObservationInstance& inst) {
  inst.validate();
  std::map<PartialMatrix::Key, double> values;
  for (size_t t = 0; t < inst.omega.size(); ++t)
    values[{inst.omega[t].first, inst.m + inst.omega[t].second}] = inst.values[t];
  return PartialMatrix(inst.m + inst.p, std::move(values));
}

inline double nuclear_norm(const Matrix& z) {
  if (z.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(z).singularValues().sum();
}

// Symmetric PSD certificate of the nuclear norm: for Z = U S V^T the matrix
// [[U S U^T, Z], [Z^T, V S V^T]] is PSD and half its trace equals ||Z||_*.
inline Matrix lift_to_sdp(const Matrix& z) {
  Eigen::JacobiSVD<Matrix> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Matrix u = svd.matrixU();
  const Matrix v = svd.matrixV();
  const Vector s = svd.singularValues();
  const Eigen::Index m = z.rows(), p = z.cols();
  Matrix y = Matrix::Zero(m + p, m + p);
  y.topLeftCorner(m, m) = u * s.asDiagonal() * u.transpose();
  y.topRightCorner(m, p) = z;
  y.bottomLeftCorner(p, m) = z.transpose();
  y.bottomRightCorner(p, p) = v * s.asDiagonal() * v.transpose();
  return y;
}

struct NuclearConfig {
  int max_iters = 20000;
  double tol = 1e-8;
  double gamma = 1.0;  // proximal step of the splitting
};

struct RecoveryReport {
  Matrix z_hat;
  double nuclear = 0.0;
  int rank = 0;
  double residual = 0.0;  // Frobenius mismatch on observed entries
  std::optional<double> truth_error;  // relative Frobenius distance to truth
  double lift_trace = 0.0;            // half trace of lift_to_sdp(z_hat)
  int iterations = 0;
  bool converged = false;
  std::vector<double> avg_residual_trace;  // residual of the running average
};

struct NonConvergenceError : std::runtime_error {
  RecoveryReport report;
  NonConvergenceError(const std::string& msg, RecoveryReport rep)
      : std::runtime_error(msg), report(std::move(rep)) {}
};

namespace detail {

inline Matrix singular_value_shrink(const Matrix& y, double gamma) {
  Eigen::JacobiSVD<Matrix> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vector s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = std::max(0.0, s(i) - gamma);
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

inline double observed_residual(const Matrix& x, const ObservationInstance& inst) {
  double s = 0.0;
  for (size_t t = 0; t < inst.omega.size(); ++t) {
    const double d =
        x(inst.omega[t].first - 1, inst.omega[t].second - 1) - inst.values[t];
    s += d * d;
  }
  return std::sqrt(s);
}

inline void overwrite_observed(Matrix& x, const ObservationInstance& inst) {
  for (size_t t = 0; t < inst.omega.size(); ++t)
    x(inst.omega[t].first - 1, inst.omega[t].second - 1) = inst.values[t];
}

inline RecoveryReport snapshot(const Matrix& x, const ObservationInstance& inst,
                               double tol) {
  RecoveryReport rep;
  rep.z_hat = x;
  rep.nuclear = nuclear_norm(x);
  rep.rank = rank_eps(x, tol);
  rep.residual = observed_residual(x, inst);
  rep.lift_trace = 0.5 * lift_to_sdp(x).trace();
  if (inst.truth) {
    const double denom = std::max(1e-30, inst.truth->norm());
    rep.truth_error = (x - *inst.truth).norm() / denom;
  }
  return rep;
}

}  // namespace detail

// min ||Z||_* subject to Z agreeing with the observations, by
// Douglas-Rachford splitting: X = shrink(Y); P = overwrite(2X - Y);
// Y += P - X. Converged when the observed-entry residual of X drops under
// tol * (1 + ||data||); otherwise throws with the best-effort report inside.
inline RecoveryReport nuclear_min_complete(const ObservationInstance& inst,
                                           const NuclearConfig& cfg = {}) {
  inst.validate();
  double base = 0.0;
  for (double v : inst.values) base += v * v;
  base = std::sqrt(base);
  const double target = cfg.tol * (1.0 + base);

  Matrix y = Matrix::Zero(inst.m, inst.p);
  detail::overwrite_observed(y, inst);
  Matrix x = y, avg = Matrix::Zero(inst.m, inst.p);
  std::vector<double> trace;
  trace.reserve(cfg.max_iters);

  for (int it = 1; it <= cfg.max_iters; ++it) {
    x = detail::singular_value_shrink(y, cfg.gamma);
    Matrix p = 2.0 * x - y;
    detail::overwrite_observed(p, inst);
    y += p - x;
    avg = ((it - 1.0) * avg + x) / it;
    trace.push_back(detail::observed_residual(avg, inst));
    if (detail::observed_residual(x, inst) <= target) {
      auto rep = detail::snapshot(x, inst, kDefaultTol);
      rep.iterations = it;
      rep.converged = true;
      rep.avg_residual_trace = std::move(trace);
      return rep;
    }
  }
  auto rep = detail::snapshot(x, inst, kDefaultTol);
  rep.iterations = cfg.max_iters;
  rep.converged = false;
  rep.avg_residual_trace = std::move(trace);
  throw NonConvergenceError("nuclear_min_complete: no convergence within budget",
                            std::move(rep));
}

// ---------------------------------------------------------------------------
// Recovery sweep across observation families.
struct SweepRow {
  std::string family;
  uint64_t seed = 0;
  bool recovered = false;
  int rank = 0;
  double error = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

// "bernoulli:0.5" -> ("bernoulli", 0.5); families without a parameter keep 0.
inline std::pair<std::string, double> parse_family(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) return {spec, 0.0};
  return {spec.substr(0, colon), std::stod(spec.substr(colon + 1))};
}

inline ObservationInstance sweep_instance(const std::string& spec, int m, int p,
                                          std::mt19937_64& rng) {
  auto [name, param] = parse_family(spec);
  ObservationInstance inst;
  if (name == "adversarial") {
    const double eps = param > 0 ? param : 0.05;
    inst.m = inst.p = 2;
    inst.omega = {{1, 1}, {1, 2}, {2, 1}};
    inst.values = {eps, 1.0, 1.0};
    Matrix t(2, 2);
    t << eps, 1.0, 1.0, 1.0 / eps;
    inst.truth = t;
    return inst;
  }
  inst.m = m;
  inst.p = p;
  std::uniform_real_distribution<double> mag(0.5, 1.5);
  std::bernoulli_distribution flip(0.5);
  Vector u(m), v(p);
  for (int i = 0; i < m; ++i) u(i) = (flip(rng) ? 1.0 : -1.0) * mag(rng);
  for (int j = 0; j < p; ++j) v(j) = (flip(rng) ? 1.0 : -1.0) * mag(rng);
  Matrix t = u * v.transpose();
  inst.truth = t;
  if (name == "full") {
    for (int i = 1; i <= m; ++i)
      for (int j = 1; j <= p; ++j) inst.omega.emplace_back(i, j);
  } else if (name == "missing_one") {
    std::uniform_int_distribution<int> ri(1, m), rj(1, p);
    const int skip_i = ri(rng), skip_j = rj(rng);
    for (int i = 1; i <= m; ++i)
      for (int j = 1; j <= p; ++j)
        if (i != skip_i || j != skip_j) inst.omega.emplace_back(i, j);
  } else if (name == "bernoulli") {
    std::bernoulli_distribution keep(param > 0 ? param : 0.5);
    for (int i = 1; i <= m; ++i)
      for (int j = 1; j <= p; ++j)
        if (keep(rng)) inst.omega.emplace_back(i, j);
  } else if (name == "diagonal") {
    for (int i = 1; i <= std::min(m, p); ++i) inst.omega.emplace_back(i, i);
  } else {
    throw std::invalid_argument("failure_sweep: unknown family " + spec);
  }
  inst.values.reserve(inst.omega.size());
  for (const auto& [i, j] : inst.omega) inst.values.push_back(t(i - 1, j - 1));
  return inst;
}

}  // namespace detail

// Runs `trials` planted instances per family and records whether the convex
// program returned the plant (relative error at most 1e-6).
inline std::vector<SweepRow> failure_sweep(const std::vector<std::string>& families,
                                           int trials, uint64_t seed,
                                           const NuclearConfig& cfg = {}, int m = 5,
                                           int p = 5) {
  std::vector<SweepRow> rows;
  for (const auto& family : families) {
    for (int t = 0; t < trials; ++t) {
      SweepRow row;
      row.family = family;
      row.seed = seed ^ (0x9E3779B97F4A7C15ULL * (rows.size() + 1));
      std::mt19937_64 rng(row.seed);
      auto inst = detail::sweep_instance(family, m, p, rng);
      RecoveryReport rep;
      try {
        rep = nuclear_min_complete(inst, cfg);
      } catch (const NonConvergenceError& e) {
        rep = e.report;
      }
      row.rank = rep.rank;
      if (rep.truth_error) {
        row.error = *rep.truth_error;
        row.recovered = rep.converged && *rep.truth_error <= 1e-6;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace rankshadow
