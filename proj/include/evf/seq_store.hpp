#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "evf/digraph.hpp"

namespace evf {

/// Dynamic collection of node-disjoint directed paths and cycles over a fixed
/// node universe. Backing storage is one implicit treap node per universe
/// node; each treap holds the node order of one path, or of one cycle when
/// flagged circular (the split anchor is arbitrary, wrap-around adjacency is
/// handled in the operations). Link, cut and parity queries cost O(log n)
/// expected treap steps; every mutation is journaled so a speculative batch
/// can be rolled back.
class PathCycleStore {
public:
    struct Op {
        enum class Kind { Insert, Remove } kind;
        NodeId u, v;
    };
    struct InsertResult {
        bool closed_cycle = false;
        bool odd = false; // meaningful when closed_cycle
    };
    struct Token {
        std::uint64_t serial = 0;
    };

    explicit PathCycleStore(int universe);

    /// Links u's path end to v's path start, or closes u's path into a cycle
    /// when both live in the same container. Throws PreconditionError unless
    /// u is a path end and v a path start.
    InsertResult insert(NodeId u, NodeId v);

    /// Cuts arc (u,v): splits a path in two, or opens a cycle into the path
    /// that starts at v and ends at u. Throws PreconditionError if absent.
    void remove(NodeId u, NodeId v);

    /// True iff arc (u,v) is present and its container is an odd cycle; false
    /// for arcs on paths or even cycles. Throws PreconditionError if absent.
    bool is_odd_cycle(NodeId u, NodeId v);

    bool has_arc(NodeId u, NodeId v);

    /// Opens a speculation scope and applies `ops`. Nested scopes roll back in
    /// stack order; rolling back an outer scope discards inner ones. Rolling
    /// back the same token twice throws.
    Token speculate(std::span<const Op> ops);
    Token mark() { return speculate({}); }
    void rollback(Token t);

    int universe() const { return n_; }

    // instrumentation: public ops and treap steps (rotation-equivalent work)
    long long op_count() const { return op_count_; }
    long long tree_steps() const { return tree_steps_; }

    /// Logical state for differential tests: every container's node sequence,
    /// cycles rotated to start at their smallest node and suffixed with a -1
    /// marker, sorted by first node.
    std::vector<std::vector<NodeId>> canonical_state();

private:
    struct Node {
        NodeId left = kNoNode, right = kNoNode, parent = kNoNode;
        std::uint32_t prio = 0;
        std::int32_t size = 1;
        bool circular = false; // authoritative at roots only
    };

    NodeId root_of(NodeId x);
    int order_of(NodeId x);
    int size_of_root(NodeId r) const { return nodes_[r].size; }
    NodeId kth(NodeId root, int k);
    NodeId merge(NodeId a, NodeId b);
    std::pair<NodeId, NodeId> split(NodeId root, int k); // first k / rest
    void pull(NodeId x);
    NodeId successor_in_container(NodeId u, NodeId root, int pos_u);

    void apply_insert(NodeId u, NodeId v, bool journal);
    void apply_remove(NodeId u, NodeId v, bool journal);

    int n_ = 0;
    std::vector<Node> nodes_;
    std::vector<Op> journal_; // inverse operations, applied last-to-first
    struct Scope {
        std::uint64_t serial;
        std::size_t depth;
    };
    std::vector<Scope> open_scopes_;
    std::uint64_t next_serial_ = 1;
    long long op_count_ = 0;
    long long tree_steps_ = 0;
};

} // namespace evf
