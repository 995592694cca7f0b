#pragma once

#include <set>
#include <string>
#include <vector>

#include "ringview/planner/view_tree.hpp"

namespace ringview {

// Materialized-view selection: the root is always stored; any other view is
// stored only when it has a sibling whose relations intersect the updatable
// set. Leaves are base relations (always stored) and indicator nodes keep
// their own storage, so neither enters the set.
inline std::set<int> choose_materialization(const ViewTree& tree, const QuerySpec& q,
                                            const std::set<std::string>& updatable) {
    auto touches_update = [&](const ViewNode& n) {
        if (n.kind == NodeKind::Indicator)
            return updatable.count(q.atoms[static_cast<size_t>(n.atom)].name) > 0;
        for (int a : n.atoms)
            if (updatable.count(q.atoms[static_cast<size_t>(a)].name)) return true;
        return false;
    };

    std::set<int> out{tree.root};
    for (const auto& n : tree.nodes) {
        if (n.kind == NodeKind::Leaf || n.kind == NodeKind::Indicator) continue;
        auto inputs = tree.inputs(n.id);
        for (int ci : inputs) {
            const ViewNode& child = tree.node(ci);
            if (child.kind != NodeKind::Variable && child.kind != NodeKind::SuperRoot) continue;
            bool sibling_updates = false;
            for (int sj : inputs)
                if (sj != ci && touches_update(tree.node(sj))) sibling_updates = true;
            if (sibling_updates) out.insert(ci);
        }
    }
    return out;
}

// Leaf-to-root maintenance path: at each step the node's delta joins the
// changed input's delta with the other inputs in child order, then applies
// the node's marginalization.
struct DeltaStep {
    int node = -1;
    int changed_pos = -1; // index into ViewTree::inputs(node)
};

struct DeltaPath {
    int start = -1; // leaf or indicator node whose change enters here
    std::vector<DeltaStep> steps;
};

inline DeltaPath build_delta_path(const ViewTree& tree, int start_node) {
    DeltaPath path;
    path.start = start_node;
    int cur = start_node;
    for (int up : tree.path_to_root(start_node)) {
        auto inputs = tree.inputs(up);
        int pos = -1;
        for (size_t i = 0; i < inputs.size(); ++i)
            if (inputs[i] == cur) pos = static_cast<int>(i);
        path.steps.push_back({up, pos});
        cur = up;
    }
    return path;
}

inline int leaf_of_atom(const ViewTree& tree, int atom) {
    for (const auto& n : tree.nodes)
        if (n.kind == NodeKind::Leaf && n.atom == atom) return n.id;
    throw UnknownRelation("atom has no leaf in the view tree");
}

// Every view a delta path reads: siblings of the changed input at each step.
// Used to pin down the probe patterns the runtime maintains indexes for, and
// to check materialization sufficiency.
struct ReadSite {
    int node = -1;                // the node being read
    std::vector<VarId> probe;     // variables bound when probing it
};

inline std::vector<ReadSite> delta_read_sites(const ViewTree& tree, const DeltaPath& path) {
    std::vector<ReadSite> out;
    // Schema of the delta as it climbs, following the engine's fold order:
    // nearest left siblings first, then right siblings.
    const auto& start_keys = tree.node(path.start).keys;
    std::set<VarId> have(start_keys.begin(), start_keys.end());
    for (const auto& step : path.steps) {
        auto inputs = tree.inputs(step.node);
        std::vector<int> fold;
        for (int i = step.changed_pos - 1; i >= 0; --i) fold.push_back(i);
        for (int i = step.changed_pos + 1; i < static_cast<int>(inputs.size()); ++i)
            fold.push_back(i);
        for (int i : fold) {
            const ViewNode& sib = tree.node(inputs[static_cast<size_t>(i)]);
            std::vector<VarId> probe;
            for (VarId v : sib.keys)
                if (have.count(v)) probe.push_back(v);
            out.push_back({sib.id, probe});
            have.insert(sib.keys.begin(), sib.keys.end());
        }
        const auto& node_keys = tree.node(step.node).keys;
        have.clear();
        have.insert(node_keys.begin(), node_keys.end());
    }
    return out;
}

} // namespace ringview
