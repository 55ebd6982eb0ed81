// Command line front end: classify closure of a pattern at a rank, run the
// completion recipes, emit witness tables, query the feasibility oracles, and
// drive the nuclear norm lab.
//
// Exit bands: 0 Closed/Yes/success, 10 NotClosed/No, 20 Unknown/Inconclusive,
// 30 no recipe / data rejected / no convergence, 40 witness family
// inapplicable, 2 parse or validation errors.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rankshadow/io.hpp"

namespace rs = rankshadow;

namespace {

constexpr int kExitClosed = 0;
constexpr int kExitNotClosed = 10;
constexpr int kExitUnknown = 20;
constexpr int kExitNoRecipe = 30;
constexpr int kExitFamilyInapplicable = 40;
constexpr int kExitUsage = 2;

rs::njson load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  rs::njson doc;
  try {
    in >> doc;
  } catch (const rs::njson::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return doc;
}

void emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
  } else {
    rs::write_atomic(out_path, text.empty() || text.back() == '\n' ? text
                                                                   : text + "\n");
    std::cerr << "wrote " << out_path << "\n";
  }
}

void emit_json(const rs::njson& doc, const std::string& out_path) {
  emit_text(doc.dump(2), out_path);
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoi(item));
  return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

std::vector<std::string> parse_string_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int status_exit(rs::Closure s) {
  switch (s) {
    case rs::Closure::Closed: return kExitClosed;
    case rs::Closure::NotClosed: return kExitNotClosed;
    default: return kExitUnknown;
  }
}

int answer_exit(rs::Answer a) {
  switch (a) {
    case rs::Answer::Yes: return kExitClosed;
    case rs::Answer::No: return kExitNotClosed;
    default: return kExitUnknown;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"closure analysis and completion tools for rank-bounded PSD "
               "projections onto entry patterns"};
  app.set_version_flag("--version", rs::kVersionString);
  app.require_subcommand(1);
  app.fallthrough();

  rs::RunConfig cfg;
  std::string out_path;
  app.add_option("--seed", cfg.seed, "seed for all randomized routines")
      ->envname("RANKSHADOW_SEED");
  app.add_option("--tol", cfg.tol, "numeric tolerance")->capture_default_str();
  app.add_option("--exact-limit", cfg.exact_limit,
                 "largest order solved exactly in combinatorial searches")
      ->capture_default_str();
  app.add_option("--out", out_path, "write output atomically to this file");
  app.add_option("--format", cfg.format, "output format for tabular results")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  // classify ----------------------------------------------------------------
  auto* classify_cmd =
      app.add_subcommand("classify", "decide closure of a pattern at a rank");
  std::string classify_graph;
  int classify_rank = 0;
  bool classify_audit = false, probe_tripartite = false;
  classify_cmd->add_option("--graph", classify_graph, "pattern graph JSON file")
      ->required();
  classify_cmd->add_option("--rank", classify_rank, "rank bound r")->required();
  classify_cmd->add_flag("--audit", classify_audit,
                         "re-verify the certificate independently");
  classify_cmd->add_flag("--probe-tripartite", probe_tripartite,
                         "experimental six-anchor escape probe (informational)");

  // complete ----------------------------------------------------------------
  auto* complete_cmd =
      app.add_subcommand("complete", "run the completion recipe for a Closed verdict");
  std::string complete_file;
  int complete_rank = 0;
  complete_cmd->add_option("--data", complete_file, "partial matrix JSON file")
      ->required();
  complete_cmd->add_option("--rank", complete_rank, "rank bound r")->required();

  // witness -----------------------------------------------------------------
  auto* witness_cmd =
      app.add_subcommand("witness", "emit an escaping-sequence table");
  std::string witness_graph, witness_family, witness_anchors;
  std::string witness_j = "1,10,100";
  witness_cmd->add_option("--graph", witness_graph, "pattern graph JSON file")
      ->required();
  witness_cmd
      ->add_option("--family", witness_family,
                   "triangle | noncyclic_path | clique | mixed_loop | "
                   "odd_cycle_orthogonal")
      ->required();
  witness_cmd->add_option("--anchors", witness_anchors, "comma separated vertices")
      ->required();
  witness_cmd->add_option("--j", witness_j, "comma separated sequence indices")
      ->capture_default_str();

  // oracle --------------------------------------------------------------
  auto* oracle_cmd =
      app.add_subcommand("oracle", "feasibility and rank probes for partial data");
  std::string oracle_file, oracle_op;
  int oracle_rank = -1;
  bool oracle_loops = false;
  int oracle_seeds = 16, oracle_iters = 5000;
  oracle_cmd->add_option("--data", oracle_file, "partial matrix JSON file")
      ->required();
  oracle_cmd
      ->add_option("--op", oracle_op,
                   "rank1 | psd | lower-bound | alt-proj | min-rank")
      ->required()
      ->check(CLI::IsMember({"rank1", "psd", "lower-bound", "alt-proj", "min-rank"}));
  oracle_cmd->add_option("--rank", oracle_rank, "rank bound for alt-proj");
  oracle_cmd->add_flag("--allow-loops", oracle_loops,
                       "rank1: accept specified diagonal entries");
  oracle_cmd->add_option("--seeds", oracle_seeds, "projection restarts")
      ->capture_default_str();
  oracle_cmd->add_option("--max-iters", oracle_iters, "projection iterations")
      ->capture_default_str();

  // nuclear -------------------------------------------------------------
  auto* nuclear_cmd =
      app.add_subcommand("nuclear", "nuclear norm minimization experiments");
  std::string nuclear_instance, nuclear_sweep;
  int nuclear_trials = 5, nuclear_iters = 20000;
  int nuclear_m = 5, nuclear_p = 5;
  double nuclear_gamma = 1.0, nuclear_tol = 1e-8;
  nuclear_cmd->add_option("--instance", nuclear_instance,
                          "observation instance JSON file");
  nuclear_cmd->add_option("--sweep", nuclear_sweep,
                          "comma separated families, e.g. "
                          "full,missing_one,bernoulli:0.5,diagonal,adversarial:0.05");
  nuclear_cmd->add_option("--trials", nuclear_trials, "trials per sweep family")
      ->capture_default_str();
  nuclear_cmd->add_option("--max-iters", nuclear_iters, "iteration budget")
      ->capture_default_str();
  nuclear_cmd->add_option("--gamma", nuclear_gamma, "proximal step")
      ->capture_default_str();
  nuclear_cmd->add_option("--nuclear-tol", nuclear_tol, "convergence tolerance")
      ->capture_default_str();
  nuclear_cmd->add_option("--rows", nuclear_m, "sweep matrix rows")
      ->capture_default_str();
  nuclear_cmd->add_option("--cols", nuclear_p, "sweep matrix cols")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (classify_cmd->parsed()) {
      auto g = rs::graph_from_json(load_json(classify_graph));
      auto verdict = rs::classify(g, classify_rank, cfg.exact_limit);
      auto doc = rs::verdict_to_json(verdict, cfg);
      bool audit_ok = true;
      if (classify_audit) {
        auto rep = rs::audit_certificate(g, verdict, {cfg.tol, cfg.seed});
        doc["audit"] = rs::audit_to_json(rep);
        audit_ok = rep.ok;
      }
      if (probe_tripartite) {
        rs::njson probe{{"applied", false}};
        if (g.loopless() && g.order() >= 6) {
          std::array<int, 6> anchors{1, 2, 3, 4, 5, 6};
          auto ws = rs::make_odd_cycle_orthogonal_witness(g, anchors);
          auto floor = rs::min_rank_lower_bound(ws.limit());
          rs::AltProjConfig pcfg;
          pcfg.seed = cfg.seed;
          auto proj = rs::alt_proj_complete(ws.limit(), 2, pcfg);
          probe = rs::njson{{"applied", true},
                            {"anchors", std::vector<int>(anchors.begin(), anchors.end())},
                            {"limit_floor", floor.bound},
                            {"rank_two_projection", rs::to_string(proj.answer)},
                            {"residual", proj.residual}};
        }
        doc["tripartite_probe"] = std::move(probe);
      }
      emit_json(doc, out_path);
      std::cerr << rs::to_string(verdict.status) << " ("
                << rs::to_string(verdict.certificate.kind) << ") at rank "
                << classify_rank << "\n";
      if (!audit_ok) {
        std::cerr << "audit failed\n";
        return kExitUsage;
      }
      return status_exit(verdict.status);
    }

    if (complete_cmd->parsed()) {
      auto a = rs::partial_from_json(load_json(complete_file));
      auto g = a.pattern();
      auto verdict = rs::classify(g, complete_rank, cfg.exact_limit);
      if (verdict.status != rs::Closure::Closed) {
        auto doc = rs::verdict_to_json(verdict, cfg);
        doc["error"] = "pattern is not certified closed at this rank";
        emit_json(doc, out_path);
        std::cerr << "no recipe: verdict is " << rs::to_string(verdict.status)
                  << "\n";
        return kExitNoRecipe;
      }
      try {
        auto res = rs::complete_for_verdict(a, verdict, cfg.tol);
        auto doc = rs::completion_to_json(res, a, cfg);
        doc["verdict"] = rs::verdict_to_json(verdict, cfg);
        emit_json(doc, out_path);
        std::cerr << "completed with recipe " << res.recipe << ", rank "
                  << res.rank << "\n";
        return kExitClosed;
      } catch (const rs::CompletionError& e) {
        auto doc = rs::verdict_to_json(verdict, cfg);
        doc["error"] = e.what();
        emit_json(doc, out_path);
        std::cerr << "completion failed: " << e.what() << "\n";
        return kExitNoRecipe;
      }
    }

    if (witness_cmd->parsed()) {
      auto g = rs::graph_from_json(load_json(witness_graph));
      auto anchors = parse_int_list(witness_anchors);
      auto js = parse_double_list(witness_j);
      try {
        std::unique_ptr<rs::WitnessSequence> ws;
        if (witness_family == "triangle") {
          if (anchors.size() != 3)
            throw std::invalid_argument("triangle needs exactly 3 anchors");
          ws = std::make_unique<rs::WitnessSequence>(
              rs::make_triangle_witness(g, anchors[0], anchors[1], anchors[2]));
        } else if (witness_family == "noncyclic_path") {
          if (anchors.size() != 4)
            throw std::invalid_argument("noncyclic_path needs exactly 4 anchors");
          ws = std::make_unique<rs::WitnessSequence>(rs::make_noncyclic_path_witness(
              g, anchors[0], anchors[1], anchors[2], anchors[3]));
        } else if (witness_family == "clique") {
          ws = std::make_unique<rs::WitnessSequence>(
              rs::make_clique_witness(g, anchors));
        } else if (witness_family == "mixed_loop") {
          if (anchors.size() != 2)
            throw std::invalid_argument("mixed_loop needs exactly 2 anchors");
          ws = std::make_unique<rs::WitnessSequence>(
              rs::make_mixed_loop_witness(g, anchors[0], anchors[1]));
        } else if (witness_family == "odd_cycle_orthogonal") {
          if (anchors.size() != 6)
            throw std::invalid_argument("odd_cycle_orthogonal needs exactly 6 anchors");
          std::array<int, 6> arr;
          std::copy(anchors.begin(), anchors.end(), arr.begin());
          ws = std::make_unique<rs::WitnessSequence>(
              rs::make_odd_cycle_orthogonal_witness(g, arr));
        } else {
          throw std::invalid_argument("unknown family " + witness_family);
        }
        std::ostringstream table;
        for (double j : js) table << rs::witness_row_json(*ws, j).dump() << '\n';
        table << rs::witness_limit_json(*ws).dump() << '\n';
        emit_text(table.str(), out_path);
        std::cerr << "emitted " << js.size() << " rows plus limit for family "
                  << witness_family << "\n";
        return kExitClosed;
      } catch (const rs::WitnessError& e) {
        std::cerr << "family inapplicable: " << e.what() << "\n";
        return kExitFamilyInapplicable;
      }
    }

    if (oracle_cmd->parsed()) {
      auto a = rs::partial_from_json(load_json(oracle_file));
      rs::AltProjConfig pcfg;
      pcfg.seeds = oracle_seeds;
      pcfg.max_iters = oracle_iters;
      pcfg.seed = cfg.seed;
      if (oracle_op == "rank1") {
        auto ans = rs::rank1_completable(a, oracle_loops);
        emit_json(rs::oracle_to_json(ans, cfg), out_path);
        std::cerr << "rank1: " << rs::to_string(ans.answer) << " (" << ans.reason
                  << ")\n";
        return answer_exit(ans.answer);
      }
      if (oracle_op == "psd") {
        rs::PsdOptions popt;
        popt.tol = cfg.tol;
        popt.alt = pcfg;
        auto ans = rs::psd_completable(a, popt);
        emit_json(rs::oracle_to_json(ans, cfg), out_path);
        std::cerr << "psd: " << rs::to_string(ans.answer) << " (" << ans.reason
                  << ")\n";
        return answer_exit(ans.answer);
      }
      if (oracle_op == "lower-bound") {
        auto bound = rs::min_rank_lower_bound(a, cfg.tol);
        auto doc = rs::lower_bound_to_json(bound);
        doc["config"] = rs::config_to_json(cfg);
        emit_json(doc, out_path);
        std::cerr << "lower bound " << bound.bound << " via "
                  << (bound.kind.empty() ? "nothing" : bound.kind) << "\n";
        return kExitClosed;
      }
      if (oracle_op == "alt-proj") {
        if (oracle_rank < 0)
          throw std::invalid_argument("alt-proj needs --rank");
        auto ans = rs::alt_proj_complete(a, oracle_rank, pcfg);
        emit_json(rs::oracle_to_json(ans, cfg), out_path);
        std::cerr << "alt-proj at rank " << oracle_rank << ": "
                  << rs::to_string(ans.answer) << "\n";
        return answer_exit(ans.answer);
      }
      // min-rank
      auto est = rs::min_rank_estimate(a, pcfg, cfg.tol);
      emit_json(rs::estimate_to_json(est, cfg), out_path);
      std::cerr << "min rank in [" << est.lower << ", "
                << (est.upper < 0 ? std::string("?") : std::to_string(est.upper))
                << "]\n";
      return kExitClosed;
    }

    if (nuclear_cmd->parsed()) {
      rs::NuclearConfig ncfg;
      ncfg.max_iters = nuclear_iters;
      ncfg.gamma = nuclear_gamma;
      ncfg.tol = nuclear_tol;
      if (!nuclear_sweep.empty()) {
        auto rows = rs::failure_sweep(parse_string_list(nuclear_sweep),
                                      nuclear_trials, cfg.seed, ncfg, nuclear_m,
                                      nuclear_p);
        if (cfg.format == "csv") {
          emit_text(rs::sweep_to_csv(rows), out_path);
        } else {
          rs::njson doc = rs::njson::array();
          for (const auto& r : rows)
            doc.push_back(rs::njson{{"family", r.family},
                                    {"seed", r.seed},
                                    {"recovered", r.recovered},
                                    {"rank", r.rank},
                                    {"error", std::isnan(r.error) ? rs::njson()
                                                                  : rs::njson(r.error)}});
          emit_json(doc, out_path);
        }
        int hits = 0;
        for (const auto& r : rows) hits += r.recovered ? 1 : 0;
        std::cerr << "sweep: " << hits << "/" << rows.size() << " recovered\n";
        return kExitClosed;
      }
      if (nuclear_instance.empty())
        throw std::invalid_argument("nuclear needs --instance or --sweep");
      auto inst = rs::instance_from_json(load_json(nuclear_instance));
      try {
        auto rep = rs::nuclear_min_complete(inst, ncfg);
        emit_json(rs::report_to_json(rep, cfg), out_path);
        std::cerr << "converged in " << rep.iterations << " iterations, nuclear "
                  << rep.nuclear << ", rank " << rep.rank << "\n";
        return kExitClosed;
      } catch (const rs::NonConvergenceError& e) {
        auto doc = rs::report_to_json(e.report, cfg);
        doc["error"] = e.what();
        emit_json(doc, out_path);
        std::cerr << "no convergence within budget\n";
        return kExitNoRecipe;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
