#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evf/digraph.hpp"

namespace evf {

/// Arc subset with at most one outgoing and one incoming member arc per node.
/// This is the working representation for both even factors and the transient
/// matchings that may still contain an odd cycle.
class PathCycleMatching {
public:
    PathCycleMatching() = default;

    bool contains(ArcId a) const {
        return a >= 0 && a < static_cast<ArcId>(member_.size()) && member_[a];
    }
    ArcId out_arc(NodeId u) const {
        return u >= 0 && u < static_cast<NodeId>(out_.size()) ? out_[u] : kNoArc;
    }
    ArcId in_arc(NodeId v) const {
        return v >= 0 && v < static_cast<NodeId>(in_.size()) ? in_[v] : kNoArc;
    }
    int size() const { return size_; }

    /// Throws PreconditionError on dead arcs, duplicates, or degree conflicts.
    void add(const Digraph& g, ArcId a);
    void remove(const Digraph& g, ArcId a);
    void toggle(const Digraph& g, ArcId a);

    std::vector<ArcId> arcs() const; ///< ascending

private:
    void grow(NodeId node_cap, ArcId arc_cap);

    std::vector<ArcId> out_, in_;
    std::vector<char> member_;
    int size_ = 0;
};

inline int deficiency(const Digraph& g, const PathCycleMatching& m) {
    return g.num_nodes() - m.size();
}

enum class ViolationKind { DeadArc, OutDegree, InDegree, OddCycle };

struct Violation {
    ViolationKind kind;
    NodeId node = kNoNode;
    ArcId arc = kNoArc;
    std::vector<NodeId> cycle;
    std::string describe() const;
};

/// A matching certified to contain no odd cycle. Obtain through verify().
struct EvenFactor {
    PathCycleMatching matching;
    int size() const { return matching.size(); }
};

struct VerifyResult {
    std::optional<EvenFactor> factor;
    std::optional<Violation> violation;
    bool ok() const { return factor.has_value(); }
};

/// Certificate check straight from the definitions: degree constraints, then
/// a decomposition scan for odd cycles.
VerifyResult verify(const Digraph& g, std::span<const ArcId> arcs);

struct Decomposition {
    struct Path {
        std::vector<NodeId> nodes; // singletons have one node, no arcs
        std::vector<ArcId> arcs;
    };
    struct Cycle {
        std::vector<NodeId> nodes; // nodes.size() == arcs.size()
        std::vector<ArcId> arcs;
        bool odd = false;
    };
    std::vector<Path> paths;
    std::vector<Cycle> cycles;
};

/// Splits a matching into its node-disjoint paths and cycles. Isolated alive
/// nodes appear as singleton paths. O(n + |m|).
Decomposition decompose(const Digraph& g, const PathCycleMatching& m);

bool is_even_factor(const Digraph& g, const PathCycleMatching& m);

/// Symmetric difference of m and `arcs` (removals applied before additions,
/// so alternating-path toggles never trip transient degree conflicts). Throws
/// PreconditionError if the result violates degree constraints.
PathCycleMatching symmetric_difference(const Digraph& g, const PathCycleMatching& m,
                                       std::span<const ArcId> arcs);

/// True when m contains all but one arc of the cycle and no member arc leaves
/// the cycle's node set.
bool fits(const Digraph& g, const PathCycleMatching& m,
          const std::vector<NodeId>& cycle_nodes, const std::vector<ArcId>& cycle_arcs);

/// Read-only auxiliary-digraph view for a matching: two node copies per graph
/// node, member arcs reversed. Every second-copy node has out-degree <= 1.
class AuxView {
public:
    AuxView(const Digraph& g, const PathCycleMatching& m) : g_(&g), m_(&m) {}

    bool is_source(NodeId u) const { return g_->node_alive(u) && m_->out_arc(u) == kNoArc; }
    bool is_sink(NodeId v) const { return g_->node_alive(v) && m_->in_arc(v) == kNoArc; }

    /// The unique arc leaving v's second copy: the member arc entering v, or kNoArc.
    ArcId second_copy_out(NodeId v) const { return m_->in_arc(v); }

    const Digraph& graph() const { return *g_; }
    const PathCycleMatching& matching() const { return *m_; }

private:
    const Digraph* g_;
    const PathCycleMatching* m_;
};

/// Lifts a matching across one recorded cycle contraction: the result is a
/// matching in the pre-contraction graph `h` with the same deficiency.
/// Throws PreconditionError when the record lacks cycle data or a required
/// reverse arc is missing (corrupted ledger or an input that was not
/// odd-cycle symmetric).
PathCycleMatching lift_once(const Digraph& h, const ContractionRecord& rec,
                            const PathCycleMatching& n_prime);

/// Lifts across every record in reverse order and certifies the result
/// against the original graph. `final_graph_nodes` is the alive node count of
/// the fully contracted graph (for the deficiency-preservation check).
EvenFactor lift_all(const Digraph& original, const ContractionLedger& ledger,
                    const PathCycleMatching& f, int final_graph_nodes);

/// Certificate text: `size k` then k lines `u v` with original node ids.
void write_certificate(std::ostream& os, const Digraph& g, const PathCycleMatching& m);
struct CertificateData {
    long long claimed_size = 0;
    std::vector<std::pair<NodeId, NodeId>> arcs;
};
CertificateData read_certificate(std::istream& is);

} // namespace evf
