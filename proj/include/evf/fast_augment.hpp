#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "evf/digraph.hpp"
#include "evf/even_factor.hpp"

namespace evf {

/// Out-forest over the auxiliary digraph, rooted at all sources, extended in
/// arc pairs so first-copy nodes sit at even depth and second-copy nodes at
/// odd depth. Stored as node-level parent links; arc ids are resolved against
/// the current graph on demand, which keeps the forest valid across
/// contractions that merge parallel arcs.
class AlternatingForest {
public:
    AlternatingForest() = default;
    AlternatingForest(const Digraph& g, const PathCycleMatching& m);

    bool reach1(NodeId u) const { return u < cap() && reach1_[u]; }
    bool reach2(NodeId v) const { return v < cap() && reach2_[v]; }
    bool is_root(NodeId u) const { return u < cap() && root_[u]; }

    /// parent of v's second copy (the node u with non-member arc (u,v)), or kNoNode
    NodeId parent_of_second(NodeId v) const { return par2_[v]; }
    /// parent of w's first copy (the node v with member arc (w,v)), or kNoNode
    NodeId parent_of_first(NodeId w) const { return par1_[w]; }

    const std::vector<NodeId>& roots() const { return roots_; }
    const std::vector<NodeId>& children(NodeId u) const { return kids_[u]; }

    /// Extends by the pair (u1,v2),(v2,w1).
    void add_pair(NodeId u, NodeId v, NodeId w);

    /// Aux path root -> u's first copy as graph arc ids (non-member arcs
    /// resolved through g's pair lookup, member arcs through m).
    std::vector<ArcId> path_to_first(const Digraph& g, const PathCycleMatching& m,
                                     NodeId u) const;

    int cap() const { return static_cast<int>(reach1_.size()); }

private:
    std::vector<NodeId> par1_, par2_;
    std::vector<char> reach1_, reach2_, root_;
    std::vector<NodeId> roots_;
    std::vector<std::vector<NodeId>> kids_;
};

/// Per-node lists of unscanned outgoing arcs. Lists survive contractions by
/// concatenation onto the complex node's list; dead or merged arcs left
/// behind are skipped lazily at fetch time.
class ScanState {
public:
    void init(const Digraph& g);
    /// Next unscanned arc leaving u, or kNoArc. Does not mark.
    ArcId fetch(const Digraph& g, NodeId u);
    void mark_scanned(ArcId a) { scanned_[a] = 1; }
    bool is_scanned(ArcId a) const { return scanned_[a]; }
    /// Returns a scanned arc to its tail's list. No-op when already unscanned.
    void unscan(const Digraph& g, ArcId a);
    /// Moves the members' remaining lists onto the fresh complex node.
    void on_contract(const std::vector<NodeId>& members, NodeId z);

    long long scan_count() const { return scans_; }

private:
    std::vector<std::vector<ArcId>> lists_;
    std::vector<std::size_t> cursor_;
    std::vector<char> scanned_;
    long long scans_ = 0;
};

/// Unscan rule applied after a forest recovery: member arcs of the pre-episode
/// factor still alive in the contracted graph, and every arc entering one of
/// the fresh complex nodes.
void unscan_after_recovery(ScanState& scan, const Digraph& gbar,
                           const PathCycleMatching& m_before,
                           const std::vector<NodeId>& complex_nodes);

using TraceFn = std::function<void(const std::string&)>;

struct FastOptions {
    bool strict_checks = true;
    TraceFn trace; // one line per event when set
};

struct FastStats {
    long long arc_scans = 0;
    long long contractions = 0;
    long long recoveries = 0;
    long long probes = 0;
    long long iterations = 0;        // top-level augmenting iterations
    long long bound_violations = 0;  // calls whose scans exceeded 10*(m + n^2)
    long long max_call_scans = 0;
};

/// Result of one fast_augment call: the graph after its contractions, the
/// factor in it, and (only when no breakthrough happened) a complete
/// alternating forest certifying maximality.
struct FastResult {
    Digraph graph;
    PathCycleMatching factor;
    std::optional<AlternatingForest> forest;
    bool breakthrough() const { return !forest.has_value(); }
};

/// The sparse recovery digraph: member arcs plus forest arcs plus the reverse
/// arcs the host graph offers for them, then the cycle's node set contracted.
/// Shares node and arc id spaces with g.
Digraph build_sparse(const Digraph& g, const PathCycleMatching& m, const AlternatingForest& f,
                     const std::vector<NodeId>& cycle_nodes);

/// One deficiency-improvement attempt. Either the returned factor has
/// deficiency one lower than the input (breakthrough, no forest) or equal
/// deficiency with a complete forest (the input factor was maximum). With
/// sparsify set, contractions trigger forest recovery through the sparse
/// digraph instead of a restart. Contractions are appended to `ledger`.
FastResult fast_augment(Digraph g, PathCycleMatching m, bool sparsify, ContractionLedger& ledger,
                        const FastOptions& opts = {}, FastStats* stats = nullptr);

/// Maximum even factor via repeated fast_augment(.,.,true) calls with lifting.
EvenFactor solve_fast(const Digraph& g, const FastOptions& opts = {}, FastStats* stats = nullptr);

} // namespace evf
