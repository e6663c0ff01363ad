#include "evf/fast_augment.hpp"

#include <algorithm>
#include <sstream>

#include "evf/pap.hpp"
#include "evf/seq_store.hpp"

namespace evf {

// ---------------------------------------------------------------- forest

AlternatingForest::AlternatingForest(const Digraph& g, const PathCycleMatching& m) {
    int cap = g.node_cap();
    par1_.assign(cap, kNoNode);
    par2_.assign(cap, kNoNode);
    reach1_.assign(cap, 0);
    reach2_.assign(cap, 0);
    root_.assign(cap, 0);
    kids_.assign(cap, {});
    for (NodeId u = 0; u < cap; ++u) {
        if (g.node_alive(u) && m.out_arc(u) == kNoArc) {
            root_[u] = 1;
            reach1_[u] = 1;
            roots_.push_back(u);
        }
    }
}

void AlternatingForest::add_pair(NodeId u, NodeId v, NodeId w) {
    par2_[v] = u;
    reach2_[v] = 1;
    par1_[w] = v;
    reach1_[w] = 1;
    kids_[u].push_back(v);
}

std::vector<ArcId> AlternatingForest::path_to_first(const Digraph& g,
                                                    const PathCycleMatching& m, NodeId u) const {
    std::vector<ArcId> rev;
    NodeId cur = u;
    while (!root_[cur]) {
        NodeId v = par1_[cur];
        rev.push_back(m.out_arc(cur)); // member arc (cur, v)
        NodeId up = par2_[v];
        ArcId a = g.find_arc(up, v);
        if (a == kNoArc) throw CheckFailure("forest path: non-member arc vanished");
        rev.push_back(a);
        cur = up;
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
}

// ---------------------------------------------------------------- scan state

void ScanState::init(const Digraph& g) {
    lists_.assign(g.node_cap(), {});
    cursor_.assign(g.node_cap(), 0);
    scanned_.assign(g.arc_cap(), 0);
    for (ArcId a = 0; a < g.arc_cap(); ++a)
        if (g.arc_alive(a)) lists_[g.tail(a)].push_back(a);
}

ArcId ScanState::fetch(const Digraph& g, NodeId u) {
    auto& list = lists_[u];
    auto& cur = cursor_[u];
    while (cur < list.size()) {
        ArcId a = list[cur++];
        if (!g.arc_alive(a) || scanned_[a]) continue; // stale entry
        ++scans_;
        return a;
    }
    return kNoArc;
}

void ScanState::unscan(const Digraph& g, ArcId a) {
    if (!scanned_[a]) return;
    scanned_[a] = 0;
    NodeId t = g.tail(a);
    if (static_cast<NodeId>(lists_.size()) <= t) {
        lists_.resize(t + 1);
        cursor_.resize(t + 1, 0);
    }
    lists_[t].push_back(a);
}

void ScanState::on_contract(const std::vector<NodeId>& members, NodeId z) {
    if (static_cast<NodeId>(lists_.size()) <= z) {
        lists_.resize(z + 1);
        cursor_.resize(z + 1, 0);
    }
    for (NodeId u : members) {
        auto& src = lists_[u];
        lists_[z].insert(lists_[z].end(), src.begin() + cursor_[u], src.end());
        src.clear();
        cursor_[u] = 0;
    }
}

void unscan_after_recovery(ScanState& scan, const Digraph& gbar,
                           const PathCycleMatching& m_before,
                           const std::vector<NodeId>& complex_nodes) {
    for (ArcId a : m_before.arcs()) {
        ArcId r = gbar.resolve_merged(a);
        if (r != kNoArc) scan.unscan(gbar, r);
    }
    for (NodeId z : complex_nodes) {
        for (ArcId a : gbar.in_arcs(z))
            if (gbar.arc_alive(a)) scan.unscan(gbar, a);
    }
}

// ---------------------------------------------------------------- sparse digraph

Digraph build_sparse(const Digraph& g, const PathCycleMatching& m, const AlternatingForest& f,
                     const std::vector<NodeId>& cycle_nodes) {
    std::vector<ArcId> ids = m.arcs();
    for (NodeId v = 0; v < f.cap(); ++v) {
        NodeId u = f.parent_of_second(v);
        if (u == kNoNode) continue;
        ArcId a = g.find_arc(u, v);
        if (a == kNoArc) throw CheckFailure("build_sparse: forest arc vanished");
        ids.push_back(a);
    }
    std::size_t base = ids.size();
    for (std::size_t i = 0; i < base; ++i) {
        ArcId r = g.find_arc(g.head(ids[i]), g.tail(ids[i]));
        if (r != kNoArc) ids.push_back(r);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.size() > 4 * static_cast<std::size_t>(g.num_nodes()))
        throw CheckFailure("build_sparse: arc count exceeds the 4n bound");
    Digraph h = g.arc_induced_copy(ids);
    h.contract_set(cycle_nodes, nullptr);
    return h;
}

// ---------------------------------------------------------------- solver

namespace {

struct EpochOutcome {
    enum class Kind { Complete, Breakthrough, Infeasible } kind = Kind::Complete;
    PathCycleMatching new_factor; // breakthrough
    NodeId fail_node = kNoNode;   // infeasible: node whose list produced the arc
    ArcId fail_arc = kNoArc;
    bool single_step = false;
};

struct DfsFrame {
    NodeId u;
    std::size_t kid_idx = 0;
    PathCycleStore::Token tok{};
    bool is_root = false;
};

void emit(const FastOptions& opts, const char* what, std::initializer_list<long long> vals) {
    if (!opts.trace) return;
    std::ostringstream os;
    os << what;
    for (long long v : vals) os << ' ' << v;
    opts.trace(os.str());
}

PathCycleStore load_store(const Digraph& g, const PathCycleMatching& m, bool strict) {
    PathCycleStore store(g.node_cap());
    Decomposition d = decompose(g, m);
    for (const auto& p : d.paths)
        for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i)
            store.insert(p.nodes[i], p.nodes[i + 1]);
    for (const auto& c : d.cycles) {
        for (std::size_t i = 0; i + 1 < c.nodes.size(); ++i)
            store.insert(c.nodes[i], c.nodes[i + 1]);
        auto res = store.insert(c.nodes.back(), c.nodes.front());
        if (strict && (!res.closed_cycle || res.odd))
            throw CheckFailure("factor decomposition produced an odd cycle");
    }
    return store;
}

EpochOutcome run_epoch(const Digraph& g, const PathCycleMatching& m, AlternatingForest& forest,
                       ScanState& scan, const FastOptions& opts, FastStats* stats) {
    PathCycleStore store = load_store(g, m, opts.strict_checks);

    for (NodeId root : forest.roots()) {
        std::vector<DfsFrame> stack;
        stack.push_back({root, 0, {}, true});
        while (!stack.empty()) {
            NodeId u = stack.back().u;
            const auto& kids = forest.children(u);
            if (stack.back().kid_idx < kids.size()) {
                NodeId v = kids[stack.back().kid_idx++];
                ArcId bm = m.in_arc(v);
                if (bm == kNoArc) throw CheckFailure("forest child lost its member arc");
                NodeId w = g.tail(bm);
                auto tok = store.mark();
                store.remove(w, v);
                store.insert(u, v);
                if (opts.strict_checks && store.is_odd_cycle(u, v))
                    throw CheckFailure("alternating forest contains an infeasible path");
                stack.push_back({w, 0, tok, false});
                continue;
            }
            ArcId a = scan.fetch(g, u);
            if (a == kNoArc) {
                if (!stack.back().is_root) store.rollback(stack.back().tok);
                stack.pop_back();
                continue;
            }
            scan.mark_scanned(a);
            if (stats) ++stats->arc_scans;
            NodeId v = g.head(a);
            emit(opts, "scan", {a, u, v});
            if (m.contains(a) || forest.reach2(v)) continue;

            if (m.in_arc(v) == kNoArc) {
                // single step: v's second copy is a sink
                if (stats) ++stats->probes;
                PathCycleStore::Op op{PathCycleStore::Op::Kind::Insert, u, v};
                auto tok = store.speculate({&op, 1});
                bool infeasible = store.is_odd_cycle(u, v);
                if (!infeasible) {
                    std::vector<ArcId> path = forest.path_to_first(g, m, u);
                    path.push_back(a);
                    EpochOutcome out;
                    out.kind = EpochOutcome::Kind::Breakthrough;
                    out.new_factor = symmetric_difference(g, m, path);
                    return out;
                }
                store.rollback(tok);
                return {EpochOutcome::Kind::Infeasible, {}, u, a, true};
            }

            // double step through the unique arc leaving v's second copy
            ArcId bm = m.in_arc(v);
            NodeId w = g.tail(bm);
            if (opts.strict_checks && forest.reach1(w))
                throw CheckFailure("node behind a member arc was already reachable");
            if (stats) ++stats->probes;
            PathCycleStore::Op ops[2] = {{PathCycleStore::Op::Kind::Remove, w, v},
                                         {PathCycleStore::Op::Kind::Insert, u, v}};
            auto tok = store.speculate(ops);
            bool infeasible = store.is_odd_cycle(u, v);
            store.rollback(tok);
            if (infeasible) return {EpochOutcome::Kind::Infeasible, {}, u, a, false};
            forest.add_pair(u, v, w);
            emit(opts, "extend", {u, v, w});
            // the next loop turn descends into the new child
        }
    }
    return {};
}

PathCycleMatching remap_resolved(const Digraph& g, const PathCycleMatching& m) {
    PathCycleMatching out;
    for (ArcId a : m.arcs()) {
        ArcId r = g.resolve_merged(a);
        if (r != kNoArc && !out.contains(r)) out.add(g, r);
    }
    return out;
}

/// Transfers a factor between graphs sharing node ids, matching arcs by
/// endpoint pair.
PathCycleMatching transfer_by_pair(const Digraph& from, const Digraph& to,
                                   const PathCycleMatching& m) {
    PathCycleMatching out;
    for (ArcId a : m.arcs()) {
        ArcId b = to.find_arc(from.tail(a), from.head(a));
        if (b == kNoArc) throw CheckFailure("factor arc has no image in the target graph");
        out.add(to, b);
    }
    return out;
}

void check_scan_invariant(const Digraph& g, const PathCycleMatching& m,
                          const AlternatingForest& f, const ScanState& scan) {
    for (ArcId a = 0; a < g.arc_cap(); ++a) {
        if (!g.arc_alive(a) || !scan.is_scanned(a)) continue;
        if (m.contains(a)) continue;
        if (!f.reach1(g.tail(a)) || !f.reach2(g.head(a)))
            throw CheckFailure("scanned arc violates the reachability invariant");
    }
}

void check_complete_forest(const Digraph& g, const PathCycleMatching& m,
                           const AlternatingForest& f) {
    for (ArcId a = 0; a < g.arc_cap(); ++a) {
        if (!g.arc_alive(a) || m.contains(a)) continue;
        if (f.reach1(g.tail(a)) && !f.reach2(g.head(a)))
            throw CheckFailure("complete forest misses a reachable second copy");
    }
    for (NodeId v = 0; v < g.node_cap(); ++v)
        if (f.reach2(v) && m.in_arc(v) == kNoArc)
            throw CheckFailure("complete forest contains a sink");
}

} // namespace

FastResult fast_augment(Digraph g, PathCycleMatching m, bool sparsify, ContractionLedger& ledger,
                        const FastOptions& opts, FastStats* stats) {
    ScanState scan;
    scan.init(g);
    AlternatingForest forest(g, m);

    while (true) {
        EpochOutcome ep = run_epoch(g, m, forest, scan, opts, stats);
        if (ep.kind == EpochOutcome::Kind::Complete) {
            if (opts.strict_checks) check_complete_forest(g, m, forest);
            return {std::move(g), std::move(m), std::move(forest)};
        }
        if (ep.kind == EpochOutcome::Kind::Breakthrough) {
            emit(opts, "breakthrough", {ep.new_factor.size()});
            return {std::move(g), std::move(ep.new_factor), std::nullopt};
        }

        // infeasible probe: locate the blocking odd cycle and contract it
        std::vector<ArcId> path0 = forest.path_to_first(g, m, ep.fail_node);
        PathCycleMatching m0 = symmetric_difference(g, m, path0);
        std::vector<ArcId> path1 = path0;
        path1.push_back(ep.fail_arc);
        if (!ep.single_step) path1.push_back(m.in_arc(g.head(ep.fail_arc)));
        PathCycleMatching m1 = symmetric_difference(g, m, path1);
        if (opts.strict_checks && !is_even_factor(g, m0))
            throw CheckFailure("fast_augment: feasible prefix is not an even factor");
        auto [cyc_nodes, cyc_arcs] = unique_odd_cycle(g, m1);
        if (opts.strict_checks && !fits(g, m0, cyc_nodes, cyc_arcs))
            throw CheckFailure("fast_augment: factor does not fit the odd cycle");
        if (stats) ++stats->contractions;

        if (!sparsify) {
            NodeId z = g.contract(cyc_nodes, cyc_arcs, &ledger);
            emit(opts, "contract", {z, static_cast<long long>(cyc_nodes.size())});
            m = remap_resolved(g, m0);
            if (opts.strict_checks && !is_even_factor(g, m))
                throw CheckFailure("fast_augment: contracted factor is invalid");
            scan.init(g);
            forest = AlternatingForest(g, m);
            continue;
        }

        // sparse recovery: solve the contraction on a sparse stand-in, then
        // mirror its contractions here and adopt the forest it grew
        PathCycleMatching m_before = m;
        const NodeId cap_before = g.node_cap();

        Digraph h = build_sparse(g, m, forest, cyc_nodes);
        NodeId z = g.contract(cyc_nodes, cyc_arcs, &ledger);
        scan.on_contract(cyc_nodes, z);
        emit(opts, "contract", {z, static_cast<long long>(cyc_nodes.size())});
        if (opts.strict_checks && z != h.node_cap() - 1)
            throw CheckFailure("fast_augment: sparse graph id drift");

        PathCycleMatching m_inner = remap_resolved(h, m0);
        if (opts.strict_checks && !is_even_factor(h, m_inner))
            throw CheckFailure("fast_augment: factor invalid in the sparse digraph");

        ContractionLedger inner_ledger;
        FastResult inner =
            fast_augment(std::move(h), std::move(m_inner), false, inner_ledger, opts, stats);

        // replay the inner contractions on our graph (arc ids may differ,
        // resolve along the node cycle)
        for (const ContractionRecord& rec : inner_ledger.records()) {
            const std::size_t len = rec.cycle_nodes.size();
            std::vector<ArcId> arcs(len);
            for (std::size_t i = 0; i < len; ++i) {
                arcs[i] = g.find_arc(rec.cycle_nodes[i], rec.cycle_nodes[(i + 1) % len]);
                if (arcs[i] == kNoArc)
                    throw CheckFailure("fast_augment: replayed cycle arc missing");
            }
            NodeId zj = g.contract(rec.cycle_nodes, arcs, &ledger);
            scan.on_contract(rec.cycle_nodes, zj);
            if (zj != rec.complex_node)
                throw CheckFailure("fast_augment: replayed contraction id drift");
        }

        PathCycleMatching mbar = transfer_by_pair(inner.graph, g, inner.factor);
        if (inner.breakthrough()) {
            emit(opts, "breakthrough", {mbar.size()});
            return {std::move(g), std::move(mbar), std::nullopt};
        }

        if (stats) ++stats->recoveries;
        std::vector<NodeId> fresh;
        for (NodeId x = cap_before; x < g.node_cap(); ++x)
            if (g.node_alive(x)) fresh.push_back(x);
        unscan_after_recovery(scan, g, m_before, fresh);
        m = std::move(mbar);
        forest = std::move(*inner.forest);
        if (opts.trace) {
            std::ostringstream os;
            os << "recover " << fresh.size();
            for (NodeId x : fresh) os << ' ' << x;
            opts.trace(os.str());
        }
        if (opts.strict_checks) check_scan_invariant(g, m, forest, scan);
    }
}

EvenFactor solve_fast(const Digraph& g, const FastOptions& opts, FastStats* stats) {
    PathCycleMatching m;
    while (true) {
        if (stats) ++stats->iterations;
        const int n0 = g.num_nodes();
        const long long m0 = g.num_arcs();
        const long long scans_before = stats ? stats->arc_scans : 0;

        ContractionLedger ledger;
        FastResult r = fast_augment(g, m, true, ledger, opts, stats);

        if (stats) {
            long long delta = stats->arc_scans - scans_before;
            stats->max_call_scans = std::max(stats->max_call_scans, delta);
            if (delta > 10 * (m0 + static_cast<long long>(n0) * n0)) ++stats->bound_violations;
        }

        int def_before = n0 - m.size();
        int def_after = r.graph.num_nodes() - r.factor.size();
        if (def_after == def_before) {
            if (opts.strict_checks && r.breakthrough())
                throw CheckFailure("solve_fast: equal deficiency without a forest");
            break;
        }
        if (opts.strict_checks && def_after != def_before - 1)
            throw CheckFailure("solve_fast: deficiency changed by more than one");
        EvenFactor lifted = lift_all(g, ledger, r.factor, r.graph.num_nodes());
        m = std::move(lifted.matching);
    }
    VerifyResult vr = verify(g, m.arcs());
    if (!vr.ok())
        throw CheckFailure("solve_fast: final factor invalid: " + vr.violation->describe());
    return std::move(*vr.factor);
}

} // namespace evf
