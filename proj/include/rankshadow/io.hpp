#pragma once
// JSON wire formats for graphs, partial matrices, verdicts, oracle answers,
// witness tables, and observation instances, plus CSV for sweeps and an
// atomic file writer. Inputs are validated strictly: edges must be ordered
// i <= j, duplicate keys reject, and value keys must match the pattern.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rankshadow/audit.hpp"
#include "rankshadow/classifier.hpp"
#include "rankshadow/completion.hpp"
#include "rankshadow/linalg.hpp"
#include "rankshadow/nuclear.hpp"
#include "rankshadow/oracle.hpp"
#include "rankshadow/pattern_graph.hpp"
#include "rankshadow/version.hpp"
#include "rankshadow/witness.hpp"

namespace rankshadow {

using njson = nlohmann::json;

struct RunConfig {
  uint64_t seed = 0;
  double tol = kDefaultTol;
  int exact_limit = kDefaultExactLimit;
  std::string format = "json";
};

inline njson config_to_json(const RunConfig& cfg) {
  return njson{{"version", kVersionString},
               {"seed", cfg.seed},
               {"tol", cfg.tol},
               {"exact_limit", cfg.exact_limit}};
}

// --------------------------------------------------------------------------
// Entry keys are "i,j" with 1 <= i <= j.
inline std::string entry_key(int i, int j) {
  return std::to_string(i) + "," + std::to_string(j);
}

inline std::pair<int, int> parse_entry_key(const std::string& key) {
  const auto comma = key.find(',');
  if (comma == std::string::npos || comma == 0 || comma + 1 >= key.size())
    throw std::invalid_argument("bad entry key '" + key + "', expected \"i,j\"");
  int i = 0, j = 0;
  try {
    size_t used = 0;
    i = std::stoi(key.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument(key);
    j = std::stoi(key.substr(comma + 1), &used);
    if (used != key.size() - comma - 1) throw std::invalid_argument(key);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad entry key '" + key + "', expected \"i,j\"");
  }
  if (i < 1 || j < i)
    throw std::invalid_argument("entry key '" + key + "' must satisfy 1 <= i <= j");
  return {i, j};
}

// --------------------------------------------------------------------------
// Graphs: {"n": 4, "edges": [[1,2],[2,2],...]}, strictly i <= j.
inline PatternGraph graph_from_json(const njson& doc) {
  if (!doc.is_object() || !doc.contains("n") || !doc["n"].is_number_integer())
    throw std::invalid_argument("graph: need integer field \"n\"");
  const int n = doc["n"].get<int>();
  std::vector<std::pair<int, int>> edges;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array())
      throw std::invalid_argument("graph: \"edges\" must be an array");
    for (const auto& e : doc["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
          !e[1].is_number_integer())
        throw std::invalid_argument("graph: each edge must be [i, j]");
      const int i = e[0].get<int>(), j = e[1].get<int>();
      if (i > j)
        throw std::invalid_argument("graph: edge endpoints must satisfy i <= j");
      edges.emplace_back(i, j);
    }
  }
  return PatternGraph(n, std::move(edges));
}

inline njson graph_to_json(const PatternGraph& g) {
  njson edges = njson::array();
  for (const auto& [i, j] : g.edges()) edges.push_back(njson::array({i, j}));
  return njson{{"n", g.order()}, {"edges", std::move(edges)}};
}

// --------------------------------------------------------------------------
// Partial matrices: a graph plus {"values": {"i,j": number}}. When "edges"
// is present it must list exactly the value keys.
inline PartialMatrix partial_from_json(const njson& doc) {
  if (!doc.is_object() || !doc.contains("n") || !doc["n"].is_number_integer())
    throw std::invalid_argument("partial: need integer field \"n\"");
  if (!doc.contains("values") || !doc["values"].is_object())
    throw std::invalid_argument("partial: need object field \"values\"");
  const int n = doc["n"].get<int>();
  std::map<PartialMatrix::Key, double> values;
  for (const auto& [key, v] : doc["values"].items()) {
    if (!v.is_number())
      throw std::invalid_argument("partial: value at '" + key + "' is not a number");
    auto parsed = parse_entry_key(key);
    if (!values.emplace(parsed, v.get<double>()).second)
      throw std::invalid_argument("partial: duplicate value key '" + key + "'");
  }
  if (doc.contains("edges")) {
    auto g = graph_from_json(njson{{"n", n}, {"edges", doc["edges"]}});
    if (g.edges().size() != values.size())
      throw std::invalid_argument("partial: edges and values disagree");
    for (const auto& e : g.edges())
      if (!values.count(e))
        throw std::invalid_argument("partial: edge [" + std::to_string(e.first) +
                                    "," + std::to_string(e.second) + "] has no value");
  }
  return PartialMatrix(n, std::move(values));
}

inline njson partial_to_json(const PartialMatrix& a) {
  njson values = njson::object();
  njson edges = njson::array();
  for (const auto& [key, v] : a.values()) {
    values[entry_key(key.first, key.second)] = v;
    edges.push_back(njson::array({key.first, key.second}));
  }
  return njson{{"n", a.order()}, {"edges", std::move(edges)}, {"values", std::move(values)}};
}

// --------------------------------------------------------------------------
// Dense matrices travel row-major.
inline njson matrix_to_json(const Matrix& x) {
  njson data = njson::array();
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) data.push_back(x(i, j));
  return njson{{"rows", x.rows()}, {"cols", x.cols()}, {"data", std::move(data)}};
}

inline Matrix matrix_from_json(const njson& doc) {
  if (!doc.is_object() || !doc.contains("rows") || !doc.contains("cols") ||
      !doc.contains("data") || !doc["data"].is_array())
    throw std::invalid_argument("matrix: need rows, cols, data");
  const Eigen::Index rows = doc["rows"].get<Eigen::Index>();
  const Eigen::Index cols = doc["cols"].get<Eigen::Index>();
  if (rows < 0 || cols < 0 ||
      doc["data"].size() != static_cast<size_t>(rows * cols))
    throw std::invalid_argument("matrix: data length disagrees with shape");
  Matrix x(rows, cols);
  size_t t = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) x(i, j) = doc["data"][t++].get<double>();
  return x;
}

// --------------------------------------------------------------------------
inline njson certificate_to_json(const Certificate& c) {
  njson out{{"kind", to_string(c.kind)}};
  if (c.component >= 0) out["component"] = c.component;
  switch (c.kind) {
    case CertKind::MixedLoopComponent:
      out["edge"] = njson::array({c.edge.first, c.edge.second});
      break;
    case CertKind::RankAtLeastThreshold:
      out["threshold"] = c.threshold;
      out["edge_count"] = c.edge_count;
      break;
    case CertKind::CompleteBipartite:
      out["side_a"] = c.side_a;
      out["side_b"] = c.side_b;
      break;
    case CertKind::NotBipartiteRankOne:
      if (!c.triangle.empty()) out["triangle"] = c.triangle;
      if (!c.path.empty()) out["path"] = c.path;
      break;
    case CertKind::IndependentSet:
      out["independent_set"] = c.independent_set;
      break;
    case CertKind::CliquePackingExclusion:
    case CertKind::CompleteGraphExclusion:
      out["cliques"] = c.cliques;
      out["chosen_sizes"] = c.chosen_sizes;
      break;
    case CertKind::Unknown:
      out["notes"] = c.notes;
      break;
    default:
      break;
  }
  return out;
}

inline njson verdict_to_json(const ClosureVerdict& v, const RunConfig& cfg) {
  njson components = njson::array();
  for (const auto& cv : v.components)
    components.push_back(njson{{"status", to_string(cv.status)},
                               {"vertices", cv.vertices},
                               {"rank_used", cv.rank_used},
                               {"certificate", certificate_to_json(cv.certificate)}});
  return njson{{"status", to_string(v.status)},
               {"rank", v.rank},
               {"certificate", certificate_to_json(v.certificate)},
               {"components", std::move(components)},
               {"config", config_to_json(cfg)}};
}

inline njson completion_to_json(const CompletionResult& r, const PartialMatrix& a,
                                const RunConfig& cfg) {
  return njson{{"x", matrix_to_json(r.x)},
               {"rank", r.rank},
               {"recipe", r.recipe},
               {"data_mismatch", data_mismatch(r.x, a)},
               {"config", config_to_json(cfg)}};
}

inline njson oracle_to_json(const OracleAnswer& ans, const RunConfig& cfg) {
  njson out{{"answer", to_string(ans.answer)},
            {"reason", ans.reason},
            {"config", config_to_json(cfg)}};
  if (!ans.evidence.empty()) out["evidence"] = ans.evidence;
  if (ans.completion) out["completion"] = matrix_to_json(*ans.completion);
  if (ans.factor) {
    njson f = njson::array();
    for (Eigen::Index i = 0; i < ans.factor->size(); ++i)
      f.push_back((*ans.factor)(i));
    out["factor"] = std::move(f);
  }
  if (ans.rank >= 0) out["rank"] = ans.rank;
  if (ans.iterations > 0) {
    out["residual"] = ans.residual;
    out["iterations"] = ans.iterations;
  }
  return out;
}

inline njson lower_bound_to_json(const RankLowerBound& b) {
  njson out{{"bound", b.bound}};
  if (!b.kind.empty()) out["kind"] = b.kind;
  if (b.center > 0) {
    out["center"] = b.center;
    out["leaves"] = b.leaves;
  }
  if (!b.rows.empty()) {
    out["rows"] = b.rows;
    out["cols"] = b.cols;
  }
  return out;
}

inline njson estimate_to_json(const MinRankEstimate& e, const RunConfig& cfg) {
  njson out{{"lower", e.lower}, {"upper", e.upper}, {"config", config_to_json(cfg)}};
  out["floor_certificate"] = lower_bound_to_json(e.floor_certificate);
  if (e.completion) out["completion"] = matrix_to_json(*e.completion);
  return out;
}

inline njson audit_to_json(const AuditReport& rep) {
  return njson{{"ok", rep.ok}, {"checks", rep.checks}, {"failures", rep.failures}};
}

// One witness table row per sequence index, plus a closing limit row.
inline njson witness_row_json(const WitnessSequence& ws, double j) {
  njson values = njson::object();
  auto aj = ws.projected(j);
  for (const auto& [key, v] : aj.values())
    values[entry_key(key.first, key.second)] = v;
  return njson{{"family", to_string(ws.family())},
               {"anchors", ws.anchors()},
               {"j", j},
               {"rank", ws.sequence_rank()},
               {"values", std::move(values)},
               {"limit_distance", ws.limit_distance(j)}};
}

inline njson witness_limit_json(const WitnessSequence& ws) {
  njson values = njson::object();
  for (const auto& [key, v] : ws.limit().values())
    values[entry_key(key.first, key.second)] = v;
  return njson{{"family", to_string(ws.family())},
               {"anchors", ws.anchors()},
               {"limit", true},
               {"rank", ws.sequence_rank()},
               {"values", std::move(values)}};
}

// --------------------------------------------------------------------------
// Observation instances: {"m","p","omega":[[i,j],...],"values":[...],"truth"?}.
inline ObservationInstance instance_from_json(const njson& doc) {
  ObservationInstance inst;
  if (!doc.is_object() || !doc.contains("m") || !doc.contains("p") ||
      !doc.contains("omega") || !doc.contains("values"))
    throw std::invalid_argument("instance: need m, p, omega, values");
  inst.m = doc["m"].get<int>();
  inst.p = doc["p"].get<int>();
  if (!doc["omega"].is_array() || !doc["values"].is_array())
    throw std::invalid_argument("instance: omega and values must be arrays");
  for (const auto& e : doc["omega"]) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("instance: each omega entry must be [i, j]");
    inst.omega.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  for (const auto& v : doc["values"]) inst.values.push_back(v.get<double>());
  if (doc.contains("truth")) inst.truth = matrix_from_json(doc["truth"]);
  inst.validate();
  return inst;
}

inline njson instance_to_json(const ObservationInstance& inst) {
  njson omega = njson::array();
  for (const auto& [i, j] : inst.omega) omega.push_back(njson::array({i, j}));
  njson out{{"m", inst.m}, {"p", inst.p}, {"omega", std::move(omega)},
            {"values", inst.values}};
  if (inst.truth) out["truth"] = matrix_to_json(*inst.truth);
  return out;
}

inline njson report_to_json(const RecoveryReport& rep, const RunConfig& cfg) {
  njson out{{"z_hat", matrix_to_json(rep.z_hat)},
            {"nuclear", rep.nuclear},
            {"rank", rep.rank},
            {"residual", rep.residual},
            {"lift_trace", rep.lift_trace},
            {"iterations", rep.iterations},
            {"converged", rep.converged},
            {"config", config_to_json(cfg)}};
  if (rep.truth_error) out["truth_error"] = *rep.truth_error;
  if (!rep.avg_residual_trace.empty()) {
    out["avg_residual_final"] = rep.avg_residual_trace.back();
    out["trace_length"] = rep.avg_residual_trace.size();
  }
  return out;
}

inline std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "family,seed,recovered,rank,error\n";
  for (const auto& r : rows) {
    os << r.family << ',' << r.seed << ',' << (r.recovered ? 1 : 0) << ','
       << r.rank << ',';
    if (std::isnan(r.error))
      os << "nan";
    else
      os << std::setprecision(12) << r.error;
    os << '\n';
  }
  return os.str();
}

// --------------------------------------------------------------------------
// Write-then-rename so readers never observe a half-written file.
inline void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
  }
}

}  // namespace rankshadow
