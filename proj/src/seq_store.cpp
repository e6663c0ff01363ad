#include "evf/seq_store.hpp"

#include <algorithm>

namespace evf {

namespace {
// splitmix64; fixed priorities keep runs reproducible
std::uint32_t priority_for(std::uint64_t i) {
    std::uint64_t z = i + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return static_cast<std::uint32_t>((z ^ (z >> 31)) >> 16);
}
} // namespace

PathCycleStore::PathCycleStore(int universe) : n_(universe), nodes_(universe) {
    for (int i = 0; i < universe; ++i) nodes_[i].prio = priority_for(static_cast<std::uint64_t>(i));
}

void PathCycleStore::pull(NodeId x) {
    std::int32_t s = 1;
    if (nodes_[x].left != kNoNode) s += nodes_[nodes_[x].left].size;
    if (nodes_[x].right != kNoNode) s += nodes_[nodes_[x].right].size;
    nodes_[x].size = s;
}

NodeId PathCycleStore::root_of(NodeId x) {
    while (nodes_[x].parent != kNoNode) {
        x = nodes_[x].parent;
        ++tree_steps_;
    }
    return x;
}

int PathCycleStore::order_of(NodeId x) {
    int rank = nodes_[x].left == kNoNode ? 0 : nodes_[nodes_[x].left].size;
    NodeId cur = x;
    while (nodes_[cur].parent != kNoNode) {
        NodeId p = nodes_[cur].parent;
        if (nodes_[p].right == cur)
            rank += 1 + (nodes_[p].left == kNoNode ? 0 : nodes_[nodes_[p].left].size);
        cur = p;
        ++tree_steps_;
    }
    return rank;
}

NodeId PathCycleStore::kth(NodeId root, int k) {
    NodeId cur = root;
    while (true) {
        ++tree_steps_;
        int left = nodes_[cur].left == kNoNode ? 0 : nodes_[nodes_[cur].left].size;
        if (k < left) {
            cur = nodes_[cur].left;
        } else if (k == left) {
            return cur;
        } else {
            k -= left + 1;
            cur = nodes_[cur].right;
        }
    }
}

NodeId PathCycleStore::merge(NodeId a, NodeId b) {
    if (a == kNoNode) return b;
    if (b == kNoNode) return a;
    ++tree_steps_;
    if (nodes_[a].prio > nodes_[b].prio) {
        NodeId r = merge(nodes_[a].right, b);
        nodes_[a].right = r;
        nodes_[r].parent = a;
        pull(a);
        return a;
    }
    NodeId l = merge(a, nodes_[b].left);
    nodes_[b].left = l;
    nodes_[l].parent = b;
    pull(b);
    return b;
}

std::pair<NodeId, NodeId> PathCycleStore::split(NodeId root, int k) {
    if (root == kNoNode) return {kNoNode, kNoNode};
    if (k <= 0) {
        nodes_[root].parent = kNoNode;
        return {kNoNode, root};
    }
    if (k >= nodes_[root].size) {
        nodes_[root].parent = kNoNode;
        return {root, kNoNode};
    }
    ++tree_steps_;
    int left = nodes_[root].left == kNoNode ? 0 : nodes_[nodes_[root].left].size;
    if (k <= left) {
        auto [a, b] = split(nodes_[root].left, k);
        nodes_[root].left = b;
        if (b != kNoNode) nodes_[b].parent = root;
        pull(root);
        nodes_[root].parent = kNoNode;
        if (a != kNoNode) nodes_[a].parent = kNoNode;
        return {a, root};
    }
    auto [a, b] = split(nodes_[root].right, k - left - 1);
    nodes_[root].right = a;
    if (a != kNoNode) nodes_[a].parent = root;
    pull(root);
    nodes_[root].parent = kNoNode;
    if (b != kNoNode) nodes_[b].parent = kNoNode;
    return {root, b};
}

NodeId PathCycleStore::successor_in_container(NodeId u, NodeId root, int pos_u) {
    int sz = nodes_[root].size;
    if (pos_u + 1 < sz) return kth(root, pos_u + 1);
    return nodes_[root].circular ? kth(root, 0) : kNoNode;
}

bool PathCycleStore::has_arc(NodeId u, NodeId v) {
    if (u < 0 || v < 0 || u >= n_ || v >= n_ || u == v) return false;
    NodeId ru = root_of(u);
    if (root_of(v) != ru) return false;
    int pu = order_of(u);
    return successor_in_container(u, ru, pu) == v;
}

PathCycleStore::InsertResult PathCycleStore::insert(NodeId u, NodeId v) {
    ++op_count_;
    if (u < 0 || v < 0 || u >= n_ || v >= n_)
        throw PreconditionError("seqstore insert: node outside universe");
    if (u == v) throw PreconditionError("seqstore insert: loop arc");
    NodeId ru = root_of(u), rv = root_of(v);
    if (nodes_[ru].circular || nodes_[rv].circular)
        throw PreconditionError("seqstore insert: endpoint lies on a cycle");
    if (order_of(u) != nodes_[ru].size - 1)
        throw PreconditionError("seqstore insert: u is not a path end");
    if (order_of(v) != 0) throw PreconditionError("seqstore insert: v is not a path start");
    apply_insert(u, v, true);
    NodeId r = root_of(u);
    if (nodes_[r].circular) return {true, nodes_[r].size % 2 == 1};
    return {};
}

void PathCycleStore::apply_insert(NodeId u, NodeId v, bool journal) {
    NodeId ru = root_of(u), rv = root_of(v);
    if (ru == rv) {
        nodes_[ru].circular = true;
    } else {
        NodeId r = merge(ru, rv);
        nodes_[r].circular = false;
    }
    if (journal) journal_.push_back({Op::Kind::Remove, u, v});
}

void PathCycleStore::remove(NodeId u, NodeId v) {
    ++op_count_;
    if (!has_arc(u, v)) throw PreconditionError("seqstore remove: arc not present");
    apply_remove(u, v, true);
}

void PathCycleStore::apply_remove(NodeId u, NodeId v, bool journal) {
    NodeId r = root_of(v);
    int pv = order_of(v);
    if (nodes_[r].circular) {
        if (pv == 0) {
            nodes_[r].circular = false; // u is already the last node
        } else {
            auto [a, b] = split(r, pv);
            NodeId nr = merge(b, a); // rotate so the path starts at v
            nodes_[nr].circular = false;
        }
    } else {
        auto [a, b] = split(r, pv);
        nodes_[a].circular = false;
        nodes_[b].circular = false;
    }
    if (journal) journal_.push_back({Op::Kind::Insert, u, v});
}

bool PathCycleStore::is_odd_cycle(NodeId u, NodeId v) {
    ++op_count_;
    if (!has_arc(u, v)) throw PreconditionError("seqstore is_odd_cycle: arc not present");
    NodeId r = root_of(u);
    return nodes_[r].circular && nodes_[r].size % 2 == 1;
}

PathCycleStore::Token PathCycleStore::speculate(std::span<const Op> ops) {
    Token t{next_serial_++};
    open_scopes_.push_back({t.serial, journal_.size()});
    for (const Op& op : ops) {
        ++op_count_;
        if (op.kind == Op::Kind::Insert) {
            // validate as the public op does, then apply journaled
            NodeId ru = root_of(op.u), rv = root_of(op.v);
            if (op.u == op.v || nodes_[ru].circular || nodes_[rv].circular ||
                order_of(op.u) != nodes_[ru].size - 1 || order_of(op.v) != 0)
                throw PreconditionError("seqstore speculate: invalid insert");
            apply_insert(op.u, op.v, true);
        } else {
            if (!has_arc(op.u, op.v))
                throw PreconditionError("seqstore speculate: invalid remove");
            apply_remove(op.u, op.v, true);
        }
    }
    return t;
}

void PathCycleStore::rollback(Token t) {
    auto it = std::find_if(open_scopes_.rbegin(), open_scopes_.rend(),
                           [&](const Scope& s) { return s.serial == t.serial; });
    if (it == open_scopes_.rend())
        throw PreconditionError("seqstore rollback: token already rolled back or unknown");
    std::size_t depth = it->depth;
    open_scopes_.erase(std::prev(it.base()), open_scopes_.end());
    while (journal_.size() > depth) {
        Op op = journal_.back();
        journal_.pop_back();
        if (op.kind == Op::Kind::Insert)
            apply_insert(op.u, op.v, false);
        else
            apply_remove(op.u, op.v, false);
    }
}

std::vector<std::vector<NodeId>> PathCycleStore::canonical_state() {
    std::vector<char> seen(n_, 0);
    std::vector<std::vector<NodeId>> out;
    for (NodeId v = 0; v < n_; ++v) {
        if (seen[v]) continue;
        NodeId r = root_of(v);
        int sz = nodes_[r].size;
        std::vector<NodeId> seq(sz);
        for (int i = 0; i < sz; ++i) {
            seq[i] = kth(r, i);
            seen[seq[i]] = 1;
        }
        if (nodes_[r].circular) {
            auto mn = std::min_element(seq.begin(), seq.end());
            std::rotate(seq.begin(), mn, seq.end());
            seq.push_back(-1); // cycle marker
        }
        out.push_back(std::move(seq));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

} // namespace evf
