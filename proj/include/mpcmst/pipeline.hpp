#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mpcmst/sensitivity.hpp"

// End-to-end runs: sequential pre-checks, one simulator per forest component,
// and stats merged as if the components ran side by side.
namespace mpcmst {

struct RunConfig {
  double delta = 0.5;
  double kappa = 4.0;
  Word c_g = 8;
  Word sort_round_cost = 1;
  std::uint64_t seed = 0;
  double exponent = 3.0;  // contraction target n / D_hat^exponent
  bool allow_forest = false;
  int max_attempts = 8;  // restarts after a hierarchy runs past its step cap
};

// MpcConfig for an instance of the given size.
MpcConfig make_config(const RunConfig& rc, Word n, Word m);

struct RunInfo {
  MpcConfig config;  // of the whole instance
  RoundStats stats;  // merged over components, final attempts only
  int attempts = 1;  // most attempts any component needed
  Word components = 0;
  std::vector<Word> d_hat;  // per component
  // Clusters over all levels of the hierarchy each run contracts, summed over
  // components.
  Word cluster_total = 0;
};

struct VerifyReport {
  bool yes = true;
  std::string reason;  // set when the tree flags do not span
  std::optional<std::size_t> witness_non_tree;
  std::optional<std::size_t> witness_tree;
  std::vector<Word> path_max;
  RunInfo info;
};

struct SensitivityReport {
  bool is_mst = true;
  std::vector<Word> sens;
  std::vector<Word> mc;
  Word note_peak = 0;
  RunInfo info;
};

struct LcaReport {
  std::vector<Word> lca;  // per input edge, in input vertex ids; kNone for tree edges
  std::vector<std::string> hierarchy_json;  // per component, when requested
  RunInfo info;
};

// A non-spanning input is a NO verdict, not an error.
VerifyReport run_verify(const WeightedGraph& g, const RunConfig& rc);

// Throws NotSpanning for non-spanning flags.
SensitivityReport run_sensitivity(const WeightedGraph& g, const RunConfig& rc);

LcaReport run_lca(const WeightedGraph& g, const RunConfig& rc, bool dump_hierarchy = false);

std::string stats_json(const RunInfo& info);

}  // namespace mpcmst
