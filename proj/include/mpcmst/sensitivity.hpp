#pragma once

#include <vector>

#include "mpcmst/verification.hpp"

namespace mpcmst {

// Minimum covering weight of the tree edge {v, p(v)}; kPosInf when uncovered.
struct McRow {
  Word v;
  Word mc;
};

// The mc table lives on machines attached to the fleet at construction, before
// any stream is placed. Updates are min-combined per vertex and delivered to the
// owning machine in one exchange.
class McTracker {
 public:
  McTracker(Simulator& sim, Word n);

  void apply(Stream<McRow> updates);
  std::vector<Word> values() const;
  Word updates_applied() const { return applied_; }
  Word reserved_machines() const { return static_cast<Word>(range_.end - range_.begin); }
  // Harness hook: every delivered update is appended to *log.
  void audit_into(std::vector<McRow>* log) { audit_ = log; }

 private:
  Simulator& sim_;
  Simulator::Range range_;
  std::size_t chunk_;
  Stream<McRow> table_;
  Word applied_ = 0;
  std::vector<McRow>* audit_ = nullptr;
};

// A truncated non-tree edge: desc is the leader of its cluster and anc a
// leaf of its own, so the edge covers nothing inside either cluster.
struct CoverEdge {
  Word desc;
  Word anc;
  Word w;
  Word desc_low;  // DFS number of the original lower endpoint
  Word cd;
  Word ca;
};

// Root-to-leaf note: some edge of weight w covers the path from root down to
// leaf inside the cluster led by root that formed at step `step`.
struct NoteRow {
  Word root;
  Word leaf;
  Word leaf_low;
  Word step;
  Word w;
};

// Halves deduplicated by (desc, anc), keeping the lightest.
Stream<CoverEdge> cover_edges(Simulator& sim, const Stream<AdEdgeRow>& halves);

// Drops notes whose root equals their leaf and keeps the lightest note per
// (root, leaf, step).
Stream<NoteRow> dedupe_notes(Simulator& sim, Stream<NoteRow> notes);

// One contraction step: settles edges that became a contracted tree edge,
// truncates edges entering a new cluster and records notes for the cut-off
// parts.
void contract_cover_edges(Simulator& sim, Stream<CoverEdge>& edges, Stream<NoteRow>& notes, McTracker& mc,
                          const Stream<StepRow>& steps);

// Top-level pass: topmost arcs, depth arrays, subtree minima, and one note per
// non-root cluster for its parent's root-to-leaf path. Notes carry index tau.
Stream<NoteRow> cluster_sensitivity(Simulator& sim, Stream<CoverEdge> edges, const Stream<ClusterRow>& top,
                                    const Stream<LevelRow>& levels, const Stream<PathRow>& paths, Word tau,
                                    McTracker& mc);

// Unwinds levels tau..1, pushing every note into the sub-clusters it crosses.
// note_peak is raised to the largest note count seen.
void undo_contractions(Simulator& sim, Stream<NoteRow> notes, const Stream<SubClusterRow>& subs, Word tau,
                       McTracker& mc, Word& note_peak);

struct SensitivityParams {
  Word d_hat = 0;
  double exponent = 3.0;
  std::uint64_t seed = 0;
  std::vector<McRow>* audit = nullptr;  // receives every mc update when set
};

struct SensitivityResult {
  std::vector<Word> sens;  // per input edge; kPosInf for uncovered tree edges
  std::vector<Word> mc;    // per input edge: min cover for tree edges, kPosInf otherwise
  bool is_mst = true;      // no non-tree edge is lighter than its path maximum
  Word tau = 0;
  std::vector<Word> sizes;
  Word note_peak = 0;
};

// Full sensitivity pipeline on one connected instance. Throws
// HierarchyExhausted.
SensitivityResult sensitivity_tree(Simulator& sim, const WeightedGraph& g, const RootedTree& t,
                                   const SensitivityParams& params);

}  // namespace mpcmst
