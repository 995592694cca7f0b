#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ringview/planner/view_tree.hpp"

namespace ringview {

struct Hyperedge {
    std::string label;
    std::set<VarId> vars;
};

struct Hypergraph {
    std::vector<Hyperedge> edges;

    void add(std::string label, std::set<VarId> vars) {
        if (vars.empty()) throw Error("hyperedge '" + label + "' has no variables");
        edges.push_back({std::move(label), std::move(vars)});
    }
};

namespace detail {

// E is an ear witnessed by W when every variable of E is exclusive to E or
// contained in W. Equal edges are absorbed into the smaller label so the
// reduction is deterministic.
inline bool is_ear(const Hypergraph& h, size_t e) {
    const auto& edge = h.edges[e];
    std::set<VarId> shared;
    for (VarId v : edge.vars) {
        bool exclusive = true;
        for (size_t i = 0; i < h.edges.size(); ++i) {
            if (i == e) continue;
            if (h.edges[i].vars.count(v)) {
                exclusive = false;
                break;
            }
        }
        if (!exclusive) shared.insert(v);
    }
    if (shared.empty()) return true;
    for (size_t i = 0; i < h.edges.size(); ++i) {
        if (i == e) continue;
        const auto& w = h.edges[i];
        if (!std::includes(w.vars.begin(), w.vars.end(), shared.begin(), shared.end())) continue;
        if (w.vars == edge.vars && w.label > edge.label) continue;
        return true;
    }
    return false;
}

} // namespace detail

// GYO reduction: repeatedly removes ear hyperedges (sorted label order) until
// none remains. A nonempty residue certifies a cyclic join.
inline Hypergraph gyo_reduce(Hypergraph h) {
    std::sort(h.edges.begin(), h.edges.end(),
              [](const Hyperedge& a, const Hyperedge& b) { return a.label < b.label; });
    bool changed = true;
    while (changed && !h.edges.empty()) {
        changed = false;
        for (size_t e = 0; e < h.edges.size(); ++e) {
            if (detail::is_ear(h, e)) {
                h.edges.erase(h.edges.begin() + static_cast<long>(e));
                changed = true;
                break;
            }
        }
    }
    return h;
}

// Bottom-up pass attaching indicator projections. At each view, candidate
// indicators are relations outside the view's own set that share variables
// with its keys; those left in the GYO residue together with the child edges
// become indicator children.
inline void add_indicators(ViewTree& tree, const QuerySpec& q) {
    for (int id : tree.bottom_up()) {
        ViewNode& n = tree.node(id);
        if (n.kind != NodeKind::Variable) continue;

        std::set<int> own(n.atoms.begin(), n.atoms.end());
        struct Candidate {
            int atom;
            std::vector<VarId> pk;
        };
        std::vector<Candidate> inds;
        for (size_t a = 0; a < q.atoms.size(); ++a) {
            if (own.count(static_cast<int>(a))) continue;
            std::vector<VarId> pk;
            for (VarId v : q.atoms[a].declared_vars)
                if (std::find(n.keys.begin(), n.keys.end(), v) != n.keys.end())
                    pk.push_back(v);
            if (pk.empty()) continue;
            sort_vars(pk);
            inds.push_back({static_cast<int>(a), std::move(pk)});
        }
        if (inds.empty()) continue;

        Hypergraph h;
        for (size_t c = 0; c < n.children.size(); ++c) {
            const ViewNode& cn = tree.node(n.children[c]);
            h.add("child#" + std::to_string(c),
                  std::set<VarId>(cn.keys.begin(), cn.keys.end()));
        }
        for (size_t i = 0; i < inds.size(); ++i)
            h.add("ind#" + std::to_string(i),
                  std::set<VarId>(inds[i].pk.begin(), inds[i].pk.end()));

        Hypergraph residue = gyo_reduce(h);
        for (size_t i = 0; i < inds.size(); ++i) {
            std::string label = "ind#" + std::to_string(i);
            bool in_cycle = false;
            for (const auto& e : residue.edges) in_cycle |= (e.label == label);
            if (!in_cycle) continue;
            ViewNode ind;
            ind.id = static_cast<int>(tree.nodes.size());
            ind.kind = NodeKind::Indicator;
            ind.atom = inds[i].atom;
            ind.proj_vars = inds[i].pk;
            ind.keys = inds[i].pk;
            ind.atoms = {};
            ind.parent = id;
            tree.nodes.push_back(ind);
            tree.node(id).indicators.push_back(ind.id); // n may be stale after push_back
        }
    }
}

} // namespace ringview
