#include "evf/testkit.hpp"

#include <algorithm>
#include <random>

namespace evf::testkit {

FamilyTag family_from_name(const std::string& name) {
    if (name == "symmetrized-undirected") return FamilyTag::SymmetrizedUndirected;
    if (name == "bipartite-digraph") return FamilyTag::BipartiteDigraph;
    if (name == "mixed-symmetric") return FamilyTag::MixedSymmetric;
    if (name == "exhaustive-small") return FamilyTag::ExhaustiveSmall;
    throw PreconditionError("unknown instance family: " + name);
}

std::string family_name(FamilyTag tag) {
    switch (tag) {
    case FamilyTag::SymmetrizedUndirected: return "symmetrized-undirected";
    case FamilyTag::BipartiteDigraph: return "bipartite-digraph";
    case FamilyTag::MixedSymmetric: return "mixed-symmetric";
    case FamilyTag::ExhaustiveSmall: return "exhaustive-small";
    }
    return "?";
}

UndirectedGraph gen_undirected(int n, double edge_prob, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    UndirectedGraph u;
    u.n = n;
    for (NodeId a = 0; a < n; ++a)
        for (NodeId b = a + 1; b < n; ++b)
            if (coin(rng) < edge_prob) u.edges.emplace_back(a, b);
    return u;
}

Digraph symmetrize(const UndirectedGraph& u) {
    Digraph g;
    for (int i = 0; i < u.n; ++i) g.add_node();
    for (auto [a, b] : u.edges) {
        g.add_arc(a, b);
        g.add_arc(b, a);
    }
    return g;
}

namespace {

Digraph gen_bipartite(int n, double arcs_per_node, std::mt19937_64& rng) {
    Digraph g;
    for (int i = 0; i < n; ++i) g.add_node();
    int half = std::max(1, n / 2);
    long long target = static_cast<long long>(arcs_per_node * n);
    std::uniform_int_distribution<NodeId> left(0, half - 1);
    std::uniform_int_distribution<NodeId> right(half, std::max(half, n - 1));
    std::uniform_int_distribution<int> dir(0, 1);
    for (long long t = 0; t < target && n > 1; ++t) {
        NodeId a = left(rng), b = right(rng);
        if (a == b) continue;
        if (dir(rng))
            g.add_arc(a, b);
        else
            g.add_arc(b, a);
    }
    return g;
}

Digraph gen_mixed(int n, double arcs_per_node, std::mt19937_64& rng) {
    Digraph g;
    for (int i = 0; i < n; ++i) g.add_node();
    long long target = static_cast<long long>(arcs_per_node * n);
    std::uniform_int_distribution<NodeId> node(0, std::max(0, n - 1));
    for (long long t = 0; t < target && n > 1; ++t) {
        NodeId a = node(rng), b = node(rng);
        if (a == b) continue;
        g.add_arc(a, b);
    }
    // repair: complete arcs on odd closed walks until the validator accepts
    while (true) {
        ValidationResult vr = validate_odd_cycle_symmetric(g);
        if (vr.valid) break;
        g.add_arc(g.head(vr.witness), g.tail(vr.witness));
    }
    return g;
}

} // namespace

Digraph gen(const InstanceFamily& fam) {
    std::mt19937_64 rng(fam.seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
    for (int attempt = 0;; ++attempt) {
        Digraph g;
        double density = fam.arcs_per_node / (1 + attempt);
        switch (fam.tag) {
        case FamilyTag::SymmetrizedUndirected: {
            double p = std::min(1.0, fam.arcs_per_node / std::max(1, fam.n - 1));
            g = symmetrize(gen_undirected(fam.n, p / (1 + attempt), rng()));
            break;
        }
        case FamilyTag::BipartiteDigraph:
            g = gen_bipartite(fam.n, density, rng);
            break;
        case FamilyTag::MixedSymmetric:
            g = gen_mixed(fam.n, density, rng);
            break;
        case FamilyTag::ExhaustiveSmall: {
            auto all = enumerate_small_valid(fam.n);
            return all[fam.seed % all.size()];
        }
        }
        if (fam.max_arcs <= 0 || g.num_arcs() <= fam.max_arcs) return g;
    }
}

std::vector<Digraph> enumerate_small_valid(int n) {
    if (n < 0 || n > 4) throw PreconditionError("enumerate_small_valid: supported for n <= 4 only");
    std::vector<std::pair<NodeId, NodeId>> slots;
    for (NodeId a = 0; a < n; ++a)
        for (NodeId b = 0; b < n; ++b)
            if (a != b) slots.emplace_back(a, b);
    std::vector<Digraph> out;
    for (std::uint64_t mask = 0; mask < (1ULL << slots.size()); ++mask) {
        Digraph g;
        for (int i = 0; i < n; ++i) g.add_node();
        for (std::size_t i = 0; i < slots.size(); ++i)
            if (mask >> i & 1) g.add_arc(slots[i].first, slots[i].second);
        if (validate_odd_cycle_symmetric(g).valid) out.push_back(std::move(g));
    }
    return out;
}

// ---------------------------------------------------------------- oracles

namespace {

struct OracleSearch {
    const Digraph& g;
    std::vector<ArcId> arcs;
    std::vector<NodeId> succ; // partial factor as successor map
    std::vector<char> has_in;
    std::vector<ArcId> chosen;
    OracleResult best;

    explicit OracleSearch(const Digraph& gg) : g(gg) {
        arcs = g.arcs();
        succ.assign(g.node_cap(), kNoNode);
        has_in.assign(g.node_cap(), 0);
    }

    // adding (u,v) closes a cycle iff u is reachable from v along succ;
    // the cycle is odd iff that path has even arc count
    bool closes_odd_cycle(NodeId u, NodeId v) const {
        NodeId cur = v;
        int steps = 0;
        while (cur != kNoNode) {
            if (cur == u) return steps % 2 == 0;
            cur = succ[cur];
            ++steps;
        }
        return false;
    }

    void recurse(std::size_t i, int count) {
        if (count + static_cast<int>(arcs.size() - i) <= best.size) return;
        if (i == arcs.size()) {
            best.size = count;
            best.witness = chosen;
            return;
        }
        ArcId a = arcs[i];
        NodeId u = g.tail(a), v = g.head(a);
        if (succ[u] == kNoNode && !has_in[v] && !closes_odd_cycle(u, v)) {
            succ[u] = v;
            has_in[v] = 1;
            chosen.push_back(a);
            recurse(i + 1, count + 1);
            chosen.pop_back();
            succ[u] = kNoNode;
            has_in[v] = 0;
        }
        recurse(i + 1, count);
    }
};

} // namespace

OracleResult oracle_max_even_factor(const Digraph& g, int max_arcs) {
    if (g.num_arcs() > max_arcs)
        throw PreconditionError("oracle_max_even_factor: instance too large");
    OracleSearch s(g);
    s.best.size = -1;
    s.recurse(0, 0);
    return s.best;
}

int oracle_max_matching(const UndirectedGraph& u) {
    if (u.n > 22) throw PreconditionError("oracle_max_matching: instance too large");
    std::vector<std::uint32_t> adj(u.n, 0);
    for (auto [a, b] : u.edges) {
        adj[a] |= 1u << b;
        adj[b] |= 1u << a;
    }
    std::vector<int> dp(1u << u.n, 0);
    for (std::uint32_t mask = 1; mask < (1u << u.n); ++mask) {
        int v = std::countr_zero(mask);
        std::uint32_t rest = mask & ~(1u << v);
        int b = dp[rest]; // leave v unmatched
        std::uint32_t cand = adj[v] & rest;
        while (cand) {
            int w = std::countr_zero(cand);
            cand &= cand - 1;
            b = std::max(b, 1 + dp[rest & ~(1u << w)]);
        }
        dp[mask] = b;
    }
    return dp[(1u << u.n) - 1];
}

} // namespace evf::testkit
