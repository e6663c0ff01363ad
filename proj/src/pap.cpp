#include "evf/pap.hpp"

#include <algorithm>
#include <queue>

namespace evf {

std::optional<AuxPath> find_augmenting_path(const Digraph& g, const PathCycleMatching& m,
                                            PapStats* stats) {
    const int cap = g.node_cap();
    // predecessor bookkeeping per copy: for v's second copy the (arc) that
    // reached it; for w's first copy the node v whose second copy reached it
    std::vector<ArcId> pred2(cap, kNoArc);
    std::vector<NodeId> pred1(cap, kNoNode);
    std::vector<char> seen1(cap, 0), seen2(cap, 0);

    std::queue<std::pair<NodeId, int>> q; // (node, copy 1 or 2)
    for (NodeId u = 0; u < cap; ++u) {
        if (g.node_alive(u) && m.out_arc(u) == kNoArc) {
            seen1[u] = 1;
            q.push({u, 1});
        }
    }

    NodeId found_sink = kNoNode;
    while (!q.empty() && found_sink == kNoNode) {
        auto [x, copy] = q.front();
        q.pop();
        if (copy == 1) {
            for (ArcId a : g.out_arcs(x)) {
                if (!g.arc_alive(a) || m.contains(a)) continue;
                if (stats) ++stats->arc_scans;
                NodeId v = g.head(a);
                if (seen2[v]) continue;
                seen2[v] = 1;
                pred2[v] = a;
                if (m.in_arc(v) == kNoArc) {
                    found_sink = v;
                    break;
                }
                q.push({v, 2});
            }
        } else {
            ArcId b = m.in_arc(x); // unique arc leaving the second copy
            if (b == kNoArc) continue;
            if (stats) ++stats->arc_scans;
            NodeId w = g.tail(b);
            if (!seen1[w]) {
                seen1[w] = 1;
                pred1[w] = x;
                q.push({w, 1});
            }
        }
    }
    if (found_sink == kNoNode) return std::nullopt;

    AuxPath p;
    p.augmenting = true;
    NodeId v = found_sink;
    while (true) {
        ArcId a = pred2[v];
        p.arcs.push_back(a);
        NodeId u = g.tail(a);
        if (m.out_arc(u) == kNoArc) break; // reached a source
        NodeId pv = pred1[u];
        p.arcs.push_back(m.in_arc(pv));
        v = pv;
    }
    std::reverse(p.arcs.begin(), p.arcs.end());
    return p;
}

PathCycleMatching apply_prefix(const Digraph& g, const PathCycleMatching& m, const AuxPath& p,
                               int i) {
    std::span<const ArcId> prefix(p.arcs.data(), static_cast<std::size_t>(2 * i));
    return symmetric_difference(g, m, prefix);
}

PathCycleMatching apply_path(const Digraph& g, const PathCycleMatching& m, const AuxPath& p) {
    return symmetric_difference(g, m, p.arcs);
}

int find_infeasible_prefix(const Digraph& g, const PathCycleMatching& m, const AuxPath& p) {
    if (is_even_factor(g, apply_path(g, m, p)))
        throw PreconditionError("find_infeasible_prefix: path is feasible");
    int lo = 0;                // prefix 0 is m itself, an even factor
    int hi = p.pair_count() + 1; // the full path, infeasible
    auto prefix_feasible = [&](int t) {
        if (t == p.pair_count() + 1) return false;
        return is_even_factor(g, apply_prefix(g, m, p, t));
    };
    while (hi - lo > 1) {
        int t = (lo + hi) / 2;
        if (prefix_feasible(t))
            lo = t;
        else
            hi = t;
    }
    return lo;
}

std::pair<std::vector<NodeId>, std::vector<ArcId>>
unique_odd_cycle(const Digraph& g, const PathCycleMatching& m) {
    Decomposition d = decompose(g, m);
    std::pair<std::vector<NodeId>, std::vector<ArcId>> out;
    int count = 0;
    for (auto& c : d.cycles) {
        if (!c.odd) continue;
        ++count;
        out = {c.nodes, c.arcs};
    }
    if (count != 1)
        throw CheckFailure("expected exactly one odd cycle, found " + std::to_string(count) +
                           " (was the input odd-cycle symmetric?)");
    return out;
}

namespace {

/// Drops the arcs that died in a contraction and follows merges for the rest.
PathCycleMatching remap_after_contraction(const Digraph& g, const PathCycleMatching& m) {
    PathCycleMatching out;
    for (ArcId a : m.arcs()) {
        ArcId r = g.resolve_merged(a);
        if (r != kNoArc && !out.contains(r)) out.add(g, r);
    }
    return out;
}

} // namespace

AugmentOutcome simple_augment(const Digraph& g, const PathCycleMatching& m,
                              const PapOptions& opts, PapStats* stats) {
    AugmentOutcome out;
    out.contracted = g;
    Digraph& work = out.contracted;
    PathCycleMatching cur = m;
    const int start_nodes = work.num_nodes();
    long long phases = 0;

    while (true) {
        ++phases;
        if (stats) ++stats->phases;
        if (opts.strict_checks && phases > start_nodes + 1)
            throw CheckFailure("simple_augment: phase count exceeded node count");

        auto p = find_augmenting_path(work, cur, stats);
        if (!p) {
            out.augmented = false;
            out.factor = m;
            return out;
        }
        PathCycleMatching applied = apply_path(work, cur, *p);
        if (is_even_factor(work, applied)) {
            out.augmented = true;
            EvenFactor lifted = lift_all(g, out.ledger, applied, work.num_nodes());
            if (opts.strict_checks && lifted.size() != m.size() + 1)
                throw CheckFailure("simple_augment: lifted factor did not grow by one");
            out.factor = std::move(lifted.matching);
            return out;
        }

        int i = find_infeasible_prefix(work, cur, *p);
        PathCycleMatching m_i = apply_prefix(work, cur, *p, i);
        PathCycleMatching m_next =
            i + 1 == p->pair_count() + 1 ? applied : apply_prefix(work, cur, *p, i + 1);
        auto [cyc_nodes, cyc_arcs] = unique_odd_cycle(work, m_next);
        if (opts.strict_checks && !fits(work, m_i, cyc_nodes, cyc_arcs))
            throw CheckFailure("simple_augment: factor does not fit the odd cycle");

        work.contract(cyc_nodes, cyc_arcs, &out.ledger);
        if (stats) ++stats->contractions;
        cur = remap_after_contraction(work, m_i);
        if (opts.strict_checks && !is_even_factor(work, cur))
            throw CheckFailure("simple_augment: contracted factor is not an even factor");
    }
}

EvenFactor solve_pap(const Digraph& g, const PapOptions& opts, PapStats* stats) {
    PathCycleMatching m;
    while (true) {
        if (stats) ++stats->iterations;
        AugmentOutcome r = simple_augment(g, m, opts, stats);
        if (!r.augmented) break;
        m = std::move(r.factor);
    }
    VerifyResult vr = verify(g, m.arcs());
    if (!vr.ok()) throw CheckFailure("solve_pap: final factor invalid: " + vr.violation->describe());
    return std::move(*vr.factor);
}

} // namespace evf
