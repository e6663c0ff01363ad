#include "evf/even_factor.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace evf {

// ---------------------------------------------------------------- matching

void PathCycleMatching::grow(NodeId node_cap, ArcId arc_cap) {
    if (static_cast<NodeId>(out_.size()) < node_cap) {
        out_.resize(node_cap, kNoArc);
        in_.resize(node_cap, kNoArc);
    }
    if (static_cast<ArcId>(member_.size()) < arc_cap) member_.resize(arc_cap, 0);
}

void PathCycleMatching::add(const Digraph& g, ArcId a) {
    if (!g.arc_alive(a)) throw PreconditionError("matching add: arc is dead");
    grow(g.node_cap(), g.arc_cap());
    if (member_[a]) throw PreconditionError("matching add: arc already present");
    auto [t, h] = g.ends(a);
    if (out_[t] != kNoArc) throw PreconditionError("matching add: out-degree conflict");
    if (in_[h] != kNoArc) throw PreconditionError("matching add: in-degree conflict");
    out_[t] = a;
    in_[h] = a;
    member_[a] = 1;
    ++size_;
}

void PathCycleMatching::remove(const Digraph& g, ArcId a) {
    if (!contains(a)) throw PreconditionError("matching remove: arc not present");
    auto [t, h] = g.ends(a);
    out_[t] = kNoArc;
    in_[h] = kNoArc;
    member_[a] = 0;
    --size_;
}

void PathCycleMatching::toggle(const Digraph& g, ArcId a) {
    if (contains(a))
        remove(g, a);
    else
        add(g, a);
}

std::vector<ArcId> PathCycleMatching::arcs() const {
    std::vector<ArcId> out;
    out.reserve(size_);
    for (ArcId a = 0; a < static_cast<ArcId>(member_.size()); ++a)
        if (member_[a]) out.push_back(a);
    return out;
}

// ---------------------------------------------------------------- verify

std::string Violation::describe() const {
    std::ostringstream os;
    switch (kind) {
    case ViolationKind::DeadArc:
        os << "dead arc " << arc;
        break;
    case ViolationKind::OutDegree:
        os << "out-degree exceeds 1 at node " << node;
        break;
    case ViolationKind::InDegree:
        os << "in-degree exceeds 1 at node " << node;
        break;
    case ViolationKind::OddCycle:
        os << "odd cycle through nodes";
        for (NodeId v : cycle) os << ' ' << v;
        break;
    }
    return os.str();
}

VerifyResult verify(const Digraph& g, std::span<const ArcId> arcs) {
    PathCycleMatching m;
    for (ArcId a : arcs) {
        if (!g.arc_alive(a)) return {std::nullopt, Violation{ViolationKind::DeadArc, kNoNode, a, {}}};
        if (m.contains(a)) continue;
        auto [t, h] = g.ends(a);
        if (m.out_arc(t) != kNoArc)
            return {std::nullopt, Violation{ViolationKind::OutDegree, t, a, {}}};
        if (m.in_arc(h) != kNoArc)
            return {std::nullopt, Violation{ViolationKind::InDegree, h, a, {}}};
        m.add(g, a);
    }
    Decomposition d = decompose(g, m);
    for (const auto& c : d.cycles) {
        if (c.odd)
            return {std::nullopt, Violation{ViolationKind::OddCycle, kNoNode, kNoArc, c.nodes}};
    }
    return {EvenFactor{std::move(m)}, std::nullopt};
}

Decomposition decompose(const Digraph& g, const PathCycleMatching& m) {
    Decomposition d;
    std::vector<char> seen(g.node_cap(), 0);
    // paths start where no member arc enters
    for (NodeId v = 0; v < g.node_cap(); ++v) {
        if (!g.node_alive(v) || m.in_arc(v) != kNoArc) continue;
        Decomposition::Path p;
        NodeId cur = v;
        p.nodes.push_back(cur);
        seen[cur] = 1;
        for (ArcId a = m.out_arc(cur); a != kNoArc; a = m.out_arc(cur)) {
            cur = g.head(a);
            p.arcs.push_back(a);
            p.nodes.push_back(cur);
            seen[cur] = 1;
        }
        d.paths.push_back(std::move(p));
    }
    // what remains lies on cycles
    for (NodeId v = 0; v < g.node_cap(); ++v) {
        if (!g.node_alive(v) || seen[v]) continue;
        Decomposition::Cycle c;
        NodeId cur = v;
        do {
            seen[cur] = 1;
            c.nodes.push_back(cur);
            ArcId a = m.out_arc(cur);
            c.arcs.push_back(a);
            cur = g.head(a);
        } while (cur != v);
        c.odd = (c.arcs.size() % 2) == 1;
        d.cycles.push_back(std::move(c));
    }
    return d;
}

bool is_even_factor(const Digraph& g, const PathCycleMatching& m) {
    // cycle scan without materializing the decomposition
    std::vector<char> seen(g.node_cap(), 0);
    for (NodeId v = 0; v < g.node_cap(); ++v) {
        if (!g.node_alive(v) || m.in_arc(v) != kNoArc) continue;
        NodeId cur = v;
        seen[cur] = 1;
        for (ArcId a = m.out_arc(cur); a != kNoArc; a = m.out_arc(cur)) {
            cur = g.head(a);
            seen[cur] = 1;
        }
    }
    for (NodeId v = 0; v < g.node_cap(); ++v) {
        if (!g.node_alive(v) || seen[v]) continue;
        int len = 0;
        NodeId cur = v;
        do {
            seen[cur] = 1;
            cur = g.head(m.out_arc(cur));
            ++len;
        } while (cur != v);
        if (len % 2 == 1) return false;
    }
    return true;
}

PathCycleMatching symmetric_difference(const Digraph& g, const PathCycleMatching& m,
                                       std::span<const ArcId> arcs) {
    PathCycleMatching out = m;
    for (ArcId a : arcs)
        if (out.contains(a)) out.remove(g, a);
    for (ArcId a : arcs)
        if (!out.contains(a)) out.add(g, a);
    return out;
}

bool fits(const Digraph& g, const PathCycleMatching& m,
          const std::vector<NodeId>& cycle_nodes, const std::vector<ArcId>& cycle_arcs) {
    std::size_t inside = 0;
    for (ArcId a : cycle_arcs)
        if (m.contains(a)) ++inside;
    if (inside != cycle_nodes.size() - 1) return false;
    std::vector<char> in_set(g.node_cap(), 0);
    for (NodeId v : cycle_nodes) in_set[v] = 1;
    for (NodeId v : cycle_nodes) {
        ArcId a = m.out_arc(v);
        if (a != kNoArc && !in_set[g.head(a)]) return false;
    }
    return true;
}

// ---------------------------------------------------------------- lifting

namespace {

/// Case analysis for one uncontraction, on plain arc-id sets. `present` holds
/// the arcs of the factor valid just after this contraction; the result is
/// valid just before it.
std::vector<ArcId> lift_once_arcs(const ContractionRecord& rec, std::vector<ArcId> present) {
    const std::size_t len = rec.cycle_nodes.size();
    if (rec.cycle_arcs.size() != len || len < 3 || len % 2 == 0)
        throw PreconditionError("lift: record does not describe an odd cycle contraction");

    std::unordered_map<ArcId, NodeId> enter_head, leave_tail;
    for (auto [a, h] : rec.entered) enter_head.emplace(a, h);
    for (auto [a, t] : rec.left) leave_tail.emplace(a, t);

    NodeId attach_in = kNoNode, attach_out = kNoNode;
    for (ArcId a : present) {
        if (auto it = enter_head.find(a); it != enter_head.end()) {
            if (attach_in != kNoNode)
                throw PreconditionError("lift: two factor arcs enter the complex node");
            attach_in = it->second;
        }
        if (auto it = leave_tail.find(a); it != leave_tail.end()) {
            if (attach_out != kNoNode)
                throw PreconditionError("lift: two factor arcs leave the complex node");
            attach_out = it->second;
        }
    }

    std::unordered_map<NodeId, std::size_t> pos;
    for (std::size_t i = 0; i < len; ++i) pos.emplace(rec.cycle_nodes[i], i);
    auto fwd = [&](std::size_t i) { return rec.cycle_arcs[i % len]; };
    auto rev = [&](std::size_t i) {
        ArcId r = rec.reverse_arcs[i % len];
        if (r == kNoArc)
            throw PreconditionError("lift: required reverse arc missing from record");
        return r;
    };
    auto add = [&](ArcId a) { present.push_back(a); };
    // pairs nodes positions [from, from+count) into adjacent 2-cycles
    auto pair_segment = [&](std::size_t from, std::size_t count) {
        for (std::size_t k = 0; k + 1 < count; k += 2) {
            std::size_t i = (from + k) % len;
            add(fwd(i));
            add(rev(i));
        }
    };

    if (attach_in == kNoNode && attach_out == kNoNode) {
        for (std::size_t i = 0; i + 1 < len; ++i) add(fwd(i));
    } else if (attach_in != kNoNode && attach_out == kNoNode) {
        std::size_t p = pos.at(attach_in);
        for (std::size_t k = 0; k + 1 < len; ++k) add(fwd(p + k));
    } else if (attach_in == kNoNode && attach_out != kNoNode) {
        std::size_t q = pos.at(attach_out);
        for (std::size_t k = 0; k + 1 < len; ++k) add(fwd(q + 1 + k));
    } else {
        std::size_t p = pos.at(attach_in), q = pos.at(attach_out);
        std::size_t fwd_len = (q + len - p) % len;
        if (fwd_len % 2 == 0) {
            for (std::size_t k = 0; k < fwd_len; ++k) add(fwd(p + k));
            pair_segment(q + 1, len - fwd_len - 1);
        } else {
            std::size_t bwd_len = len - fwd_len;
            for (std::size_t k = 1; k <= bwd_len; ++k) add(rev((p + len - k) % len));
            pair_segment(p + 1, len - bwd_len - 1);
        }
    }
    return present;
}

} // namespace

PathCycleMatching lift_once(const Digraph& h, const ContractionRecord& rec,
                            const PathCycleMatching& n_prime) {
    std::vector<ArcId> lifted = lift_once_arcs(rec, n_prime.arcs());
    PathCycleMatching out;
    for (ArcId a : lifted) out.add(h, a);
    if (!is_even_factor(h, out)) throw CheckFailure("lift_once: result contains an odd cycle");
    if (out.size() != n_prime.size() + static_cast<int>(rec.cycle_nodes.size()) - 1)
        throw CheckFailure("lift_once: deficiency not preserved");
    return out;
}

EvenFactor lift_all(const Digraph& original, const ContractionLedger& ledger,
                    const PathCycleMatching& f, int final_graph_nodes) {
    std::vector<ArcId> cur = f.arcs();
    for (auto it = ledger.records().rbegin(); it != ledger.records().rend(); ++it)
        cur = lift_once_arcs(*it, std::move(cur));
    VerifyResult vr = verify(original, cur);
    if (!vr.ok())
        throw CheckFailure("lift_all: lifted factor invalid: " + vr.violation->describe());
    int lifted_def = original.num_nodes() - vr.factor->size();
    int inner_def = final_graph_nodes - f.size();
    if (lifted_def != inner_def) throw CheckFailure("lift_all: deficiency not preserved");
    return std::move(*vr.factor);
}

// ---------------------------------------------------------------- certificates

void write_certificate(std::ostream& os, const Digraph& g, const PathCycleMatching& m) {
    os << "size " << m.size() << '\n';
    for (ArcId a : m.arcs()) os << g.tail(a) << ' ' << g.head(a) << '\n';
}

CertificateData read_certificate(std::istream& is) {
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
    if (!next_data_line(line)) throw ParseError("certificate: missing header");
    std::istringstream hdr(line);
    std::string kw;
    CertificateData c;
    if (!(hdr >> kw >> c.claimed_size) || kw != "size" || c.claimed_size < 0)
        throw ParseError("certificate: header must be `size k`");
    for (long long i = 0; i < c.claimed_size; ++i) {
        if (!next_data_line(line)) throw ParseError("certificate: fewer arcs than claimed");
        std::istringstream ls(line);
        long long u = -1, v = -1;
        if (!(ls >> u >> v)) throw ParseError("certificate: bad arc line `" + line + "`");
        c.arcs.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
    return c;
}

} // namespace evf
