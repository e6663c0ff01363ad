#pragma once

#include <optional>
#include <vector>

#include "evf/digraph.hpp"
#include "evf/even_factor.hpp"

namespace evf {

/// Alternating path in the auxiliary digraph. Arc i of the path corresponds
/// to graph arc arcs[i]; even positions are non-member arcs (first copy to
/// second copy), odd positions member arcs (second copy back to first).
struct AuxPath {
    std::vector<ArcId> arcs;
    bool augmenting = false; // ends in a sink (odd number of arcs)
    int pair_count() const { return static_cast<int>(arcs.size()) / 2; }
};

struct PapOptions {
    bool strict_checks = true;
};

struct PapStats {
    long long iterations = 0;
    long long phases = 0;
    long long contractions = 0;
    long long arc_scans = 0; // aux arcs examined during path searches
};

/// Shortest source-to-sink path in the auxiliary view, by BFS from all
/// sources simultaneously (lowest node id first), or nullopt.
std::optional<AuxPath> find_augmenting_path(const Digraph& g, const PathCycleMatching& m,
                                            PapStats* stats = nullptr);

/// The matching obtained by toggling the first 2i arcs of p into m.
PathCycleMatching apply_prefix(const Digraph& g, const PathCycleMatching& m, const AuxPath& p,
                               int i);
/// Toggles the whole path.
PathCycleMatching apply_path(const Digraph& g, const PathCycleMatching& m, const AuxPath& p);

/// Binary search for an index i with prefix i feasible and prefix i+1 not
/// (prefix k+1 meaning the full path). Requires m to be an even factor and p
/// infeasible; throws PreconditionError when p is feasible.
int find_infeasible_prefix(const Digraph& g, const PathCycleMatching& m, const AuxPath& p);

/// The single odd cycle of a matching, as (nodes in cycle order, arcs).
/// Throws CheckFailure unless exactly one odd cycle exists.
std::pair<std::vector<NodeId>, std::vector<ArcId>>
unique_odd_cycle(const Digraph& g, const PathCycleMatching& m);

struct AugmentOutcome {
    bool augmented = false;
    PathCycleMatching factor;   ///< lifted into the caller's graph when augmented
    Digraph contracted;         ///< the working graph after this iteration's contractions
    ContractionLedger ledger;
};

/// One augmenting iteration: search, feasibility, contract-and-retry loop,
/// and lifting of the final factor back to `g`. The input graph is never
/// mutated. augmented == false means m is maximum.
AugmentOutcome simple_augment(const Digraph& g, const PathCycleMatching& m,
                              const PapOptions& opts = {}, PapStats* stats = nullptr);

/// Maximum even factor by repeated augmentation from the empty factor.
EvenFactor solve_pap(const Digraph& g, const PapOptions& opts = {}, PapStats* stats = nullptr);

} // namespace evf
