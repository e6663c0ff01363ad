#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evf/digraph.hpp"
#include "evf/even_factor.hpp"

namespace evf::testkit {

struct UndirectedGraph {
    int n = 0;
    std::vector<std::pair<NodeId, NodeId>> edges;
};

enum class FamilyTag { SymmetrizedUndirected, BipartiteDigraph, MixedSymmetric, ExhaustiveSmall };

/// Deterministic instance description: same fields, same instance bytes.
struct InstanceFamily {
    FamilyTag tag = FamilyTag::MixedSymmetric;
    int n = 8;
    double arcs_per_node = 2.5; ///< target density before symmetry repair
    std::uint64_t seed = 1;
    int max_arcs = 0; ///< when positive, regenerate sparser until m fits
};

FamilyTag family_from_name(const std::string& name);
std::string family_name(FamilyTag tag);

/// Every generated instance passes validate_odd_cycle_symmetric.
Digraph gen(const InstanceFamily& fam);

UndirectedGraph gen_undirected(int n, double edge_prob, std::uint64_t seed);

/// One pair of opposite arcs per edge.
Digraph symmetrize(const UndirectedGraph& u);

/// All labeled digraphs on n nodes (n <= 4) that pass the validator.
std::vector<Digraph> enumerate_small_valid(int n);

struct OracleResult {
    int size = 0;
    std::vector<ArcId> witness;
};

/// Exhaustive maximum even factor by branch and bound over the arc list;
/// degree conflicts and odd-cycle closures are pruned at insertion. Refuses
/// instances with more than max_arcs arcs (default 22).
OracleResult oracle_max_even_factor(const Digraph& g, int max_arcs = 22);

/// Exhaustive maximum matching via subset DP; n <= 22ish, intended for n <= 12.
int oracle_max_matching(const UndirectedGraph& u);

} // namespace evf::testkit
