#include "evf/digraph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>

namespace evf {

// ---------------------------------------------------------------- ledger

NodeId ContractionLedger::find(NodeId v) const {
    if (v < 0 || v >= static_cast<NodeId>(parent_.size())) return v;
    NodeId r = v;
    while (parent_[r] != r) r = parent_[r];
    while (parent_[v] != r) {
        NodeId next = parent_[v];
        parent_[v] = r;
        v = next;
    }
    return r;
}

NodeId ContractionLedger::current_node_of(NodeId v) const { return find(v); }

void ContractionLedger::append(ContractionRecord rec) {
    NodeId need = rec.complex_node + 1;
    if (static_cast<NodeId>(parent_.size()) < need) {
        NodeId old = static_cast<NodeId>(parent_.size());
        parent_.resize(need);
        for (NodeId i = old; i < need; ++i) parent_[i] = i;
    }
    for (NodeId u : rec.cycle_nodes) parent_[find(u)] = rec.complex_node;
    records_.push_back(std::move(rec));
}

std::vector<std::pair<NodeId, std::vector<NodeId>>>
ContractionLedger::maximal_sets(NodeId original_node_cap) const {
    std::vector<std::pair<NodeId, std::vector<NodeId>>> out;
    std::unordered_map<NodeId, std::size_t> index;
    for (NodeId v = 0; v < original_node_cap; ++v) {
        NodeId r = find(v);
        if (r == v) continue;
        auto it = index.find(r);
        if (it == index.end()) {
            index.emplace(r, out.size());
            out.push_back({r, {v}});
        } else {
            out[it->second].second.push_back(v);
        }
    }
    return out;
}

// ---------------------------------------------------------------- digraph

NodeId Digraph::add_node() {
    node_alive_.push_back(1);
    out_.emplace_back();
    in_.emplace_back();
    ++alive_nodes_;
    return static_cast<NodeId>(node_alive_.size()) - 1;
}

ArcId Digraph::add_arc(NodeId tail, NodeId head) {
    if (!node_alive(tail) || !node_alive(head))
        throw PreconditionError("add_arc: endpoint not alive");
    if (tail == head)
        throw PreconditionError("add_arc: loops are not allowed");
    if (ArcId existing = find_arc(tail, head); existing != kNoArc)
        return existing;
    ArcId a = static_cast<ArcId>(arc_alive_.size());
    arc_alive_.push_back(1);
    ends_.emplace_back(tail, head);
    orig_ends_.emplace_back(tail, head);
    merged_into_.push_back(kNoArc);
    out_[tail].push_back(a);
    in_[head].push_back(a);
    by_pair_.emplace(pair_key(tail, head), a);
    ++alive_arcs_;
    return a;
}

ArcId Digraph::find_arc(NodeId tail, NodeId head) const {
    auto it = by_pair_.find(pair_key(tail, head));
    return it == by_pair_.end() ? kNoArc : it->second;
}

std::optional<ArcId> Digraph::symmetric_of(ArcId a) const {
    if (!arc_alive(a)) throw PreconditionError("symmetric_of: arc is dead");
    ArcId r = find_arc(ends_[a].second, ends_[a].first);
    if (r == kNoArc) return std::nullopt;
    return r;
}

ArcId Digraph::resolve_merged(ArcId a) const {
    while (a != kNoArc && !arc_alive_[a]) a = merged_into_[a];
    return a;
}

void Digraph::kill_arc(ArcId a) {
    arc_alive_[a] = 0;
    --alive_arcs_;
}

NodeId Digraph::contract(const std::vector<NodeId>& cycle_nodes,
                         const std::vector<ArcId>& cycle_arcs,
                         ContractionLedger* ledger) {
    const std::size_t len = cycle_nodes.size();
    if (len < 2 || cycle_arcs.size() != len)
        throw PreconditionError("contract: node and arc lists must form a cycle");
    for (std::size_t i = 0; i < len; ++i) {
        ArcId a = cycle_arcs[i];
        if (!arc_alive(a)) throw PreconditionError("contract: cycle arc is dead");
        NodeId want_tail = cycle_nodes[i];
        NodeId want_head = cycle_nodes[(i + 1) % len];
        if (ends_[a].first != want_tail || ends_[a].second != want_head)
            throw PreconditionError("contract: arc list does not trace the node cycle");
    }
    return contract_impl(cycle_nodes, cycle_arcs, ledger);
}

NodeId Digraph::contract_set(const std::vector<NodeId>& nodes, ContractionLedger* ledger) {
    if (nodes.size() < 2) throw PreconditionError("contract_set: need at least two nodes");
    return contract_impl(nodes, {}, ledger);
}

NodeId Digraph::contract_impl(const std::vector<NodeId>& nodes,
                              const std::vector<ArcId>& cycle_arcs,
                              ContractionLedger* ledger) {
    std::vector<char> in_set(node_cap(), 0);
    for (NodeId u : nodes) {
        if (!node_alive(u)) throw PreconditionError("contract: node not alive");
        if (in_set[u]) throw PreconditionError("contract: duplicate node in set");
        in_set[u] = 1;
    }

    ContractionRecord rec;
    rec.cycle_nodes = nodes;
    rec.cycle_arcs = cycle_arcs;
    rec.reverse_arcs.reserve(cycle_arcs.size());
    for (ArcId a : cycle_arcs)
        rec.reverse_arcs.push_back(find_arc(ends_[a].second, ends_[a].first));

    // Collect incident arcs in deterministic order; internal arcs die here.
    std::vector<ArcId> leaving, entering;
    for (NodeId u : nodes) {
        for (ArcId a : out_[u]) {
            if (!arc_alive_[a]) continue;
            by_pair_.erase(pair_key(ends_[a].first, ends_[a].second));
            if (in_set[ends_[a].second]) {
                kill_arc(a);
            } else {
                leaving.push_back(a);
            }
        }
        for (ArcId a : in_[u]) {
            if (!arc_alive_[a]) continue;
            if (in_set[ends_[a].first]) continue; // internal, handled by the out scan
            by_pair_.erase(pair_key(ends_[a].first, ends_[a].second));
            entering.push_back(a);
        }
        out_[u].clear();
        in_[u].clear();
        node_alive_[u] = 0;
        --alive_nodes_;
    }

    NodeId z = add_node();
    rec.complex_node = z;

    for (ArcId a : leaving) {
        NodeId old_tail = ends_[a].first;
        NodeId w = ends_[a].second;
        rec.left.emplace_back(a, old_tail);
        ends_[a] = {z, w};
        auto [it, inserted] = by_pair_.emplace(pair_key(z, w), a);
        if (inserted) {
            out_[z].push_back(a);
        } else {
            ArcId other = it->second;
            ArcId rep = std::min(a, other);
            ArcId loser = std::max(a, other);
            it->second = rep;
            if (rep == a) out_[z].push_back(a); // the old entry is now stale
            kill_arc(loser);
            merged_into_[loser] = rep;
            rec.merges.emplace_back(rep, loser);
        }
    }
    for (ArcId a : entering) {
        NodeId x = ends_[a].first;
        NodeId old_head = ends_[a].second;
        rec.entered.emplace_back(a, old_head);
        ends_[a] = {x, z};
        auto [it, inserted] = by_pair_.emplace(pair_key(x, z), a);
        if (inserted) {
            in_[z].push_back(a);
        } else {
            ArcId other = it->second;
            ArcId rep = std::min(a, other);
            ArcId loser = std::max(a, other);
            it->second = rep;
            if (rep == a) in_[z].push_back(a);
            kill_arc(loser);
            merged_into_[loser] = rep;
            rec.merges.emplace_back(rep, loser);
        }
    }

    if (ledger) ledger->append(std::move(rec));
    return z;
}

Digraph Digraph::arc_induced_copy(const std::vector<ArcId>& arcs) const {
    Digraph h;
    h.node_alive_ = node_alive_;
    h.out_.assign(node_alive_.size(), {});
    h.in_.assign(node_alive_.size(), {});
    h.alive_nodes_ = alive_nodes_;
    h.ends_ = ends_;
    h.orig_ends_ = orig_ends_;
    h.arc_alive_.assign(arc_alive_.size(), 0);
    h.merged_into_.assign(arc_alive_.size(), kNoArc);

    std::vector<ArcId> sorted = arcs;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (ArcId a : sorted) {
        if (!arc_alive(a)) throw PreconditionError("arc_induced_copy: arc not alive");
        h.arc_alive_[a] = 1;
        ++h.alive_arcs_;
        auto [t, hd] = ends_[a];
        h.out_[t].push_back(a);
        h.in_[hd].push_back(a);
        h.by_pair_.emplace(pair_key(t, hd), a);
    }
    return h;
}

std::vector<NodeId> Digraph::nodes() const {
    std::vector<NodeId> out;
    out.reserve(alive_nodes_);
    for (NodeId v = 0; v < node_cap(); ++v)
        if (node_alive_[v]) out.push_back(v);
    return out;
}

std::vector<ArcId> Digraph::arcs() const {
    std::vector<ArcId> out;
    out.reserve(alive_arcs_);
    for (ArcId a = 0; a < arc_cap(); ++a)
        if (arc_alive_[a]) out.push_back(a);
    return out;
}

// ---------------------------------------------------------------- validator

ValidationResult validate_odd_cycle_symmetric(const Digraph& g) {
    // Group the non-symmetric arcs by head; one BFS over (node, parity) states
    // per distinct head answers "is there an even walk head -> tail".
    std::unordered_map<NodeId, std::vector<ArcId>> suspects_by_head;
    for (ArcId a : g.arcs()) {
        if (g.find_arc(g.head(a), g.tail(a)) == kNoArc)
            suspects_by_head[g.head(a)].push_back(a);
    }
    if (suspects_by_head.empty()) return {};

    const int cap = g.node_cap();
    std::vector<int> state(2 * cap, 0);
    int stamp = 0;

    ArcId witness = kNoArc;
    for (NodeId v = 0; v < cap; ++v) {
        auto it = suspects_by_head.find(v);
        if (it == suspects_by_head.end()) continue;
        ++stamp;
        std::queue<std::pair<NodeId, int>> q;
        q.push({v, 0});
        state[2 * v] = stamp;
        while (!q.empty()) {
            auto [x, par] = q.front();
            q.pop();
            for (ArcId a : g.out_arcs(x)) {
                if (!g.arc_alive(a)) continue;
                NodeId w = g.head(a);
                int np = par ^ 1;
                if (state[2 * w + np] != stamp) {
                    state[2 * w + np] = stamp;
                    q.push({w, np});
                }
            }
        }
        for (ArcId a : it->second) {
            // an even walk head -> tail closes an odd walk through the arc
            if (state[2 * g.tail(a)] == stamp && (witness == kNoArc || a < witness))
                witness = a;
        }
    }
    if (witness != kNoArc) return {false, witness};
    return {};
}

// ---------------------------------------------------------------- text io

Digraph read_instance(std::istream& is) {
    std::string line;
    auto next_data_line = [&](std::string& out) -> bool {
        while (std::getline(is, out)) {
            std::size_t i = out.find_first_not_of(" \t\r");
            if (i == std::string::npos) continue;
            if (out[i] == '#') continue;
            return true;
        }
        return false;
    };

    if (!next_data_line(line)) throw ParseError("instance: missing header line");
    std::istringstream hdr(line);
    long long n = -1, m = -1;
    if (!(hdr >> n >> m) || n < 0 || m < 0)
        throw ParseError("instance: header must be `n m`");

    Digraph g;
    for (long long i = 0; i < n; ++i) g.add_node();
    for (long long i = 0; i < m; ++i) {
        if (!next_data_line(line)) throw ParseError("instance: fewer arc lines than header claims");
        std::istringstream ls(line);
        long long u = -1, v = -1;
        if (!(ls >> u >> v)) throw ParseError("instance: bad arc line `" + line + "`");
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw ParseError("instance: node index out of range in `" + line + "`");
        if (u == v) throw ParseError("instance: loop arc in `" + line + "`");
        g.add_arc(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
    return g;
}

Digraph read_instance_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open instance file: " + path);
    return read_instance(f);
}

void write_instance(std::ostream& os, const Digraph& g) {
    os << g.node_cap() << ' ' << g.num_arcs() << '\n';
    for (ArcId a : g.arcs()) os << g.tail(a) << ' ' << g.head(a) << '\n';
}

std::string to_dot(const Digraph& g) {
    std::ostringstream os;
    os << "digraph g {\n";
    for (NodeId v : g.nodes()) os << "  n" << v << ";\n";
    for (ArcId a : g.arcs())
        os << "  n" << g.tail(a) << " -> n" << g.head(a) << " [label=\"" << a << "\"];\n";
    os << "}\n";
    return os.str();
}

} // namespace evf
