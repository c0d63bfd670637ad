// Batch harness: load or generate an instance, run a pipeline under an MPC
// budget, optionally diff against the sequential oracles, and write results.
//
// Exit codes: 0 success, 1 internal error, 2 bad input (parse error, invalid
// configuration, non-spanning flags where a tree is required, or a tree that
// is not an MST for sensitivity), 3 accounting fault, 4 oracle mismatch.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mpcmst/oracle.hpp"
#include "mpcmst/pipeline.hpp"

using namespace mpcmst;
using Json = nlohmann::ordered_json;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string generate;
  GeneratorParams gen{1000, 4000, 20, 1, 1, Word{1} << 20};
  GeneratorParams bench_gen{1 << 16, 1 << 17, 0, 1, 1, Word{1} << 20};
  RunConfig rc;
  bool oracle = false;
  bool json = false;
  std::string out;
  std::string stats;
  std::string dump_hierarchy;
  std::string dump_lca;
  // bench
  std::vector<Word> diameters{8, 64, 512};
  std::string pipeline = "verify";
};

void add_generator_flags(CLI::App* app, GeneratorParams& p) {
  app->add_option("--n", p.n, "vertex count")->check(CLI::PositiveNumber);
  app->add_option("--m", p.m, "total edge count, tree edges included");
  app->add_option("--diameter", p.diameter, "target tree diameter");
  app->add_option("--perturb", p.perturb, "flagged edges made non-minimal (perturbed_mst)");
  app->add_option("--cycles", p.cycles, "1 or 2 (lower_bound)");
  app->add_option("--max-weight", p.max_weight, "largest edge weight");
}

void add_run_flags(CLI::App* app, Options& o) {
  app->add_option("--delta", o.rc.delta, "local memory exponent in (0,1)");
  app->add_option("--kappa", o.rc.kappa, "local memory constant: cap = ceil(kappa * n^delta)");
  app->add_option("--c-g", o.rc.c_g, "global budget constant: c_g * (m + n) words");
  app->add_option("--sort-round-cost", o.rc.sort_round_cost, "rounds charged per sort or prefix scan");
  app->add_option("--exponent", o.rc.exponent, "contract until n / D_hat^exponent clusters remain");
  app->add_flag("--forest", o.rc.allow_forest, "accept a spanning forest and run per component");
}

void add_io_flags(CLI::App* app, Options& o) {
  auto* in = app->add_option("--input,-i", o.input, "edge-list file, '-' for stdin");
  auto* gen = app->add_option("--generate", o.generate, "generator kind instead of an input file");
  in->excludes(gen);
  gen->excludes(in);
  add_generator_flags(app, o.gen);
  add_run_flags(app, o);
  app->add_flag("--oracle", o.oracle, "diff the result against the sequential oracle");
  app->add_flag("--json", o.json, "emit the main result as JSON");
  app->add_option("--out,-o", o.out, "main result file (default stdout)");
  app->add_option("--stats", o.stats, "write round/memory statistics as JSON");
  app->add_option("--dump-hierarchy", o.dump_hierarchy, "write the LCA-stage hierarchy as JSON");
  app->add_option("--dump-lca", o.dump_lca, "write 'index u v lca' for every non-tree edge");
}

std::string read_all(std::istream& in) {
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

WeightedGraph load(const Options& o) {
  if (o.input.empty() == o.generate.empty()) throw InputError("give exactly one of --input and --generate");
  if (!o.generate.empty()) return generate_instance(parse_instance_kind(o.generate), o.gen, o.rc.seed);
  if (o.input == "-") return parse_edge_list(read_all(std::cin));
  std::ifstream f(o.input);
  if (!f) throw InputError("cannot open '" + o.input + "'");
  return parse_edge_list(read_all(f));
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
}

std::string sens_text(Word s) { return s == kPosInf ? "inf" : std::to_string(s); }

Json edge_json(const WeightedGraph& g, std::size_t i) {
  const Edge& e = g.edges[i];
  return Json{{"index", i}, {"u", e.u}, {"v", e.v}, {"w", e.w}};
}

Json parse_stats(const RunInfo& info) { return Json::parse(stats_json(info)); }

void write_side_outputs(const WeightedGraph& g, const Options& o, const RunInfo& info) {
  if (!o.stats.empty()) write_text(o.stats, stats_json(info) + "\n");
  if (o.dump_hierarchy.empty() && o.dump_lca.empty()) return;
  LcaReport l = run_lca(g, o.rc, !o.dump_hierarchy.empty());
  if (!o.dump_hierarchy.empty()) {
    std::string text;
    if (l.hierarchy_json.size() == 1) {
      text = l.hierarchy_json.front();
    } else {
      Json arr = Json::array();
      for (const auto& h : l.hierarchy_json) arr.push_back(Json::parse(h));
      text = arr.dump(2);
    }
    write_text(o.dump_hierarchy, text + "\n");
  }
  if (!o.dump_lca.empty()) {
    std::ostringstream os;
    for (std::size_t i = 0; i < g.edges.size(); ++i)
      if (!g.edges[i].is_tree) os << i << ' ' << g.edges[i].u << ' ' << g.edges[i].v << ' ' << l.lca[i] << '\n';
    write_text(o.dump_lca, os.str());
  }
}

int cmd_verify(const Options& o) {
  WeightedGraph g = load(o);
  VerifyReport r = run_verify(g, o.rc);
  if (o.oracle) {
    auto want = oracle::verify(g, o.rc.allow_forest);
    if (want.yes != r.yes) throw OracleMismatch("verdict differs from the oracle");
    if (r.witness_non_tree != want.witness_non_tree) throw OracleMismatch("non-tree witness differs from the oracle");
    if (r.witness_tree && want.witness_tree && g.edges[*r.witness_tree].w != g.edges[*want.witness_tree].w)
      throw OracleMismatch("covered tree edge weight differs from the oracle");
  }
  std::string text;
  if (o.json) {
    Json j;
    j["verdict"] = r.yes ? "YES" : "NO";
    if (r.witness_non_tree) {
      j["witness"] = {{"non_tree_edge", edge_json(g, *r.witness_non_tree)},
                      {"tree_edge", edge_json(g, *r.witness_tree)}};
    } else {
      j["witness"] = nullptr;
    }
    if (!r.reason.empty()) j["reason"] = r.reason;
    j["stats"] = parse_stats(r.info);
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << (r.yes ? "YES" : "NO") << '\n';
    if (!r.reason.empty()) os << "reason " << r.reason << '\n';
    for (auto [label, idx] : {std::pair{"non_tree", r.witness_non_tree}, std::pair{"tree", r.witness_tree}}) {
      if (!idx) continue;
      const Edge& e = g.edges[*idx];
      os << "witness " << label << ' ' << *idx << ' ' << e.u << ' ' << e.v << ' ' << e.w << '\n';
    }
    text = os.str();
  }
  write_text(o.out, text);
  if (r.reason.empty()) write_side_outputs(g, o, r.info);
  return 0;
}

int cmd_sensitivity(const Options& o) {
  WeightedGraph g = load(o);
  if (o.oracle && !oracle::verify(g, o.rc.allow_forest).yes) throw InputError("input tree is not an MST");
  SensitivityReport r = run_sensitivity(g, o.rc);
  if (!r.is_mst) throw InputError("input tree is not an MST");
  if (o.oracle && r.sens != oracle::sensitivity(g, o.rc.allow_forest))
    throw OracleMismatch("sensitivity values differ from the oracle");
  std::string text;
  if (o.json) {
    Json edges = Json::array();
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      Json e = edge_json(g, i);
      e["kind"] = g.edges[i].is_tree ? "tree" : "nontree";
      if (r.sens[i] == kPosInf) {
        e["sens"] = "inf";
      } else {
        e["sens"] = r.sens[i];
      }
      edges.push_back(e);
    }
    Json j;
    j["edges"] = edges;
    j["max_notes"] = r.note_peak;
    j["stats"] = parse_stats(r.info);
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream os;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      const Edge& e = g.edges[i];
      os << e.u << '\t' << e.v << '\t' << e.w << '\t' << (e.is_tree ? "tree" : "nontree") << '\t'
         << sens_text(r.sens[i]) << '\n';
    }
    text = os.str();
  }
  write_text(o.out, text);
  write_side_outputs(g, o, r.info);
  return 0;
}

int cmd_lca(const Options& o) {
  WeightedGraph g = load(o);
  LcaReport r = run_lca(g, o.rc, !o.dump_hierarchy.empty());
  if (o.oracle) {
    oracle::Forest f(g, o.rc.allow_forest);
    for (std::size_t i = 0; i < g.edges.size(); ++i)
      if (!g.edges[i].is_tree && r.lca[i] != f.lca(g.edges[i].u, g.edges[i].v))
        throw OracleMismatch("LCA of edge " + std::to_string(i) + " differs from the oracle");
  }
  std::string text;
  if (o.json) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      if (g.edges[i].is_tree) continue;
      Json e = edge_json(g, i);
      e["lca"] = r.lca[i];
      rows.push_back(e);
    }
    text = Json{{"lca", rows}, {"stats", parse_stats(r.info)}}.dump(2) + "\n";
  } else {
    std::ostringstream os;
    for (std::size_t i = 0; i < g.edges.size(); ++i)
      if (!g.edges[i].is_tree) os << i << ' ' << g.edges[i].u << ' ' << g.edges[i].v << ' ' << r.lca[i] << '\n';
    text = os.str();
  }
  write_text(o.out, text);
  if (!o.stats.empty()) write_text(o.stats, stats_json(r.info) + "\n");
  if (!o.dump_hierarchy.empty()) {
    std::string h = r.hierarchy_json.size() == 1 ? r.hierarchy_json.front() : [&] {
      Json arr = Json::array();
      for (const auto& x : r.hierarchy_json) arr.push_back(Json::parse(x));
      return arr.dump(2);
    }();
    write_text(o.dump_hierarchy, h + "\n");
  }
  return 0;
}

int cmd_generate(const Options& o) {
  if (o.generate.empty()) throw InputError("generate needs --generate KIND");
  write_text(o.out, format_edge_list(generate_instance(parse_instance_kind(o.generate), o.gen, o.rc.seed)));
  return 0;
}

// Rounds per phase across a diameter sweep at fixed n.
int cmd_bench(const Options& o) {
  Json rows = Json::array();
  std::vector<std::string> phases;
  for (Word d : o.diameters) {
    GeneratorParams p = o.bench_gen;
    p.diameter = d;
    WeightedGraph g = generate_instance(InstanceKind::planted_mst, p, o.rc.seed);
    RunInfo info;
    if (o.pipeline == "verify") {
      info = run_verify(g, o.rc).info;
    } else if (o.pipeline == "sensitivity") {
      info = run_sensitivity(g, o.rc).info;
    } else if (o.pipeline == "lca") {
      info = run_lca(g, o.rc).info;
    } else {
      throw InputError("unknown pipeline '" + o.pipeline + "'");
    }
    for (const auto& [name, r] : info.stats.rounds_by_phase)
      if (std::find(phases.begin(), phases.end(), name) == phases.end()) phases.push_back(name);
    rows.push_back({{"n", g.n},
                    {"m", g.edges.size()},
                    {"D", d},
                    {"log2_D", std::log2(static_cast<double>(d))},
                    {"d_hat", info.d_hat.front()},
                    {"rounds_total", info.stats.rounds_total},
                    {"rounds_by_phase", info.stats.rounds_by_phase},
                    {"peak_local_words", info.stats.peak_local_words},
                    {"total_global_words", info.stats.total_global_words}});
  }
  std::string text;
  if (o.json) {
    text = Json{{"pipeline", o.pipeline}, {"rows", rows}}.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "n\tm\tD\tlog2_D\td_hat";
    for (const auto& p : phases) os << '\t' << p;
    os << "\trounds_total\n";
    for (const Json& r : rows) {
      os << r["n"].get<Word>() << '\t' << r["m"].get<std::size_t>() << '\t' << r["D"].get<Word>() << '\t'
         << r["log2_D"].get<double>() << '\t' << r["d_hat"].get<Word>();
      for (const auto& p : phases) os << '\t' << r["rounds_by_phase"].value(p, Word{0});
      os << '\t' << r["rounds_total"].get<Word>() << '\n';
    }
    text = os.str();
  }
  write_text(o.out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MPC minimum spanning tree verification and sensitivity"};
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;
  auto seeded = [&](CLI::App* sub) { sub->add_option("--seed", seed, "random seed")->required(); };

  auto* verify = app.add_subcommand("verify", "decide whether the flagged tree is an MST");
  auto* sens = app.add_subcommand("sensitivity", "sensitivity of every edge");
  auto* lca = app.add_subcommand("lca", "LCA of every non-tree edge");
  for (auto* sub : {verify, sens, lca}) {
    add_io_flags(sub, o);
    seeded(sub);
  }
  auto* generate = app.add_subcommand("generate", "write a generated instance as an edge list");
  generate->add_option("kind", o.generate, "random_tree | planted_mst | perturbed_mst | lower_bound")->required();
  add_generator_flags(generate, o.gen);
  generate->add_option("--out,-o", o.out, "output file (default stdout)");
  seeded(generate);
  auto* bench = app.add_subcommand("bench", "rounds per phase over a diameter sweep on planted instances");
  add_generator_flags(bench, o.bench_gen);
  add_run_flags(bench, o);
  bench->add_option("--diameters", o.diameters, "diameters to sweep")->delimiter(',');
  bench->add_option("--pipeline", o.pipeline, "verify | sensitivity | lca");
  bench->add_flag("--json", o.json, "emit JSON");
  bench->add_option("--out,-o", o.out, "output file (default stdout)");
  seeded(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  o.rc.seed = seed;

  try {
    if (verify->parsed()) return cmd_verify(o);
    if (sens->parsed()) return cmd_sensitivity(o);
    if (lca->parsed()) return cmd_lca(o);
    if (generate->parsed()) return cmd_generate(o);
    if (bench->parsed()) return cmd_bench(o);
  } catch (const AccountingFault& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const OracleMismatch& e) {
    std::cerr << "oracle mismatch: " << e.what() << '\n';
    return 4;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NotSpanning& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
