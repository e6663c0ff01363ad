#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "evf/errors.hpp"

namespace evf {

using NodeId = std::int32_t;
using ArcId = std::int32_t;

inline constexpr NodeId kNoNode = -1;
inline constexpr ArcId kNoArc = -1;

class ContractionLedger;

/// One cycle contraction. Enough is recorded to replay the contraction on a
/// copy of the pre-contraction graph and to lift an even factor back across it.
struct ContractionRecord {
    std::vector<NodeId> cycle_nodes; ///< cycle order; arc i runs nodes[i] -> nodes[(i+1)%L]
    std::vector<ArcId> cycle_arcs;   ///< arc ids along the cycle (empty for plain set contractions)
    std::vector<ArcId> reverse_arcs; ///< reverse arc of cycle_arcs[i] just before contraction, kNoArc if absent
    NodeId complex_node = kNoNode;
    /// Arcs redirected to enter the complex node, with the head they had inside
    /// the contracted set. Includes arcs later merged away.
    std::vector<std::pair<ArcId, NodeId>> entered;
    /// Arcs redirected to leave the complex node, with their old tail.
    std::vector<std::pair<ArcId, NodeId>> left;
    /// Parallel-arc merges caused by this contraction: (surviving, merged-away).
    std::vector<std::pair<ArcId, ArcId>> merges;
};

/// Ordered contraction history plus a union-find from every node id to the
/// complex node currently containing it.
class ContractionLedger {
public:
    const std::vector<ContractionRecord>& records() const { return records_; }
    bool empty() const { return records_.empty(); }
    std::size_t size() const { return records_.size(); }

    /// Current alive node containing `v` (identity if never contracted).
    NodeId current_node_of(NodeId v) const;

    /// Maximal contracted sets: complex node -> the original-node ids it absorbed,
    /// restricted to ids < original_node_cap.
    std::vector<std::pair<NodeId, std::vector<NodeId>>>
    maximal_sets(NodeId original_node_cap) const;

    void append(ContractionRecord rec);

private:
    NodeId find(NodeId v) const;

    std::vector<ContractionRecord> records_;
    mutable std::vector<NodeId> parent_;
};

struct ValidationResult {
    bool valid = true;
    ArcId witness = kNoArc; ///< a non-symmetric arc lying on an odd closed walk
};

/// Simple directed graph (no loops, no parallel arcs) with loop-free cycle
/// contraction. Arc ids name original arcs and survive contraction; endpoints
/// are redirected in place. Parallel arcs produced by a contraction are merged,
/// the lowest id surviving.
class Digraph {
public:
    Digraph() = default;

    NodeId add_node();
    /// Adds arc tail->head. A duplicate request returns the existing id.
    /// Throws PreconditionError on a loop request or dead endpoint.
    ArcId add_arc(NodeId tail, NodeId head);

    int node_cap() const { return static_cast<int>(node_alive_.size()); }
    int arc_cap() const { return static_cast<int>(arc_alive_.size()); }
    int num_nodes() const { return alive_nodes_; }
    int num_arcs() const { return alive_arcs_; }

    bool node_alive(NodeId v) const { return v >= 0 && v < node_cap() && node_alive_[v]; }
    bool arc_alive(ArcId a) const { return a >= 0 && a < arc_cap() && arc_alive_[a]; }

    NodeId tail(ArcId a) const { return ends_[a].first; }
    NodeId head(ArcId a) const { return ends_[a].second; }
    std::pair<NodeId, NodeId> ends(ArcId a) const { return ends_[a]; }
    std::pair<NodeId, NodeId> original_ends(ArcId a) const { return orig_ends_[a]; }

    /// Alive arc with the given endpoints, or kNoArc.
    ArcId find_arc(NodeId tail, NodeId head) const;

    /// The alive reverse arc of `a` if present. Throws PreconditionError if `a` is dead.
    std::optional<ArcId> symmetric_of(ArcId a) const;

    /// Raw adjacency; may contain dead ids, callers skip with arc_alive().
    const std::vector<ArcId>& out_arcs(NodeId u) const { return out_[u]; }
    const std::vector<ArcId>& in_arcs(NodeId v) const { return in_[v]; }

    /// Follows merge records to the arc currently representing `a`'s pre-image,
    /// or kNoArc if that pre-image died inside a contracted set.
    ArcId resolve_merged(ArcId a) const;

    /// Contracts a simple cycle given in order: cycle_arcs[i] must run
    /// cycle_nodes[i] -> cycle_nodes[(i+1)%L]. Returns the fresh complex node.
    NodeId contract(const std::vector<NodeId>& cycle_nodes,
                    const std::vector<ArcId>& cycle_arcs,
                    ContractionLedger* ledger);

    /// Contracts an arbitrary alive node set (no cycle bookkeeping; a record
    /// appended through this path cannot be lifted across).
    NodeId contract_set(const std::vector<NodeId>& nodes, ContractionLedger* ledger);

    /// Copy that keeps the full node/arc id space but leaves alive only the
    /// given arcs (each must be alive here). Adjacency is rebuilt in ascending
    /// arc-id order; merge history is not inherited.
    Digraph arc_induced_copy(const std::vector<ArcId>& arcs) const;

    std::vector<NodeId> nodes() const; ///< alive nodes, ascending
    std::vector<ArcId> arcs() const;   ///< alive arcs, ascending

private:
    NodeId contract_impl(const std::vector<NodeId>& nodes,
                         const std::vector<ArcId>& cycle_arcs,
                         ContractionLedger* ledger);
    void kill_arc(ArcId a);
    static std::uint64_t pair_key(NodeId t, NodeId h) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(t)) << 32) |
               static_cast<std::uint32_t>(h);
    }

    std::vector<char> node_alive_;
    std::vector<std::vector<ArcId>> out_, in_;
    std::vector<std::pair<NodeId, NodeId>> ends_;      // current; frozen at death
    std::vector<std::pair<NodeId, NodeId>> orig_ends_; // as added
    std::vector<char> arc_alive_;
    std::vector<ArcId> merged_into_;
    std::unordered_map<std::uint64_t, ArcId> by_pair_;
    int alive_nodes_ = 0;
    int alive_arcs_ = 0;
};

/// Sufficient check for odd-cycle symmetry: Valid when no non-symmetric arc
/// lies on any odd closed walk. The true condition quantifies over simple odd
/// cycles only, so rare valid inputs may be reported as possibly invalid;
/// every Valid graph genuinely is odd-cycle symmetric.
ValidationResult validate_odd_cycle_symmetric(const Digraph& g);

/// Instance text: line `n m`, then m lines `u v` (0-based). Lines starting
/// with '#' and blank lines are skipped. Duplicate arcs collapse; loops are a
/// ParseError.
Digraph read_instance(std::istream& is);
Digraph read_instance_file(const std::string& path);
void write_instance(std::ostream& os, const Digraph& g);
std::string to_dot(const Digraph& g);

} // namespace evf
