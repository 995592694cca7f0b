#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ringview/planner/query.hpp"
#include "ringview/planner/variable_order.hpp"

namespace ringview {

enum class NodeKind { Variable, Leaf, Indicator, SuperRoot };

// One view definition. Variable nodes join their children (real children
// first, then indicator children) and marginalize `marg_vars` in order
// (innermost first); a node for a free variable marginalizes nothing. Leaf
// nodes stand for one atom; indicator nodes for an indicator projection of
// one atom.
struct ViewNode {
    int id = -1;
    NodeKind kind = NodeKind::Variable;
    VarId at_var = 0;                // defining variable (Variable nodes)
    std::vector<VarId> covered_vars; // extra variables folded in by dedup/composition
    std::vector<VarId> keys;         // canonical order
    std::vector<int> atoms;          // contributing atom indices, sorted
    std::vector<int> children;       // node ids (real children)
    std::vector<int> indicators;     // node ids (indicator children)
    std::vector<VarId> marg_vars;    // marginalized here, application order
    int atom = -1;                   // Leaf / Indicator: source atom
    std::vector<VarId> proj_vars;    // Indicator: projection variable set
    int parent = -1;

    bool marginalizes() const { return !marg_vars.empty(); }

    Schema keys_schema(const QuerySpec& q) const {
        std::vector<Column> cols;
        cols.reserve(keys.size());
        for (VarId v : keys) cols.push_back({v, kind_of_var(q.atoms, v)});
        return Schema::of(std::move(cols));
    }
};

struct ViewTree {
    std::vector<ViewNode> nodes;
    int root = -1;

    const ViewNode& node(int id) const { return nodes[static_cast<size_t>(id)]; }
    ViewNode& node(int id) { return nodes[static_cast<size_t>(id)]; }

    // All joined inputs of a node, real children before indicators.
    std::vector<int> inputs(int id) const {
        std::vector<int> out = node(id).children;
        out.insert(out.end(), node(id).indicators.begin(), node(id).indicators.end());
        return out;
    }

    std::vector<int> bottom_up() const {
        std::vector<int> order;
        visit(root, order);
        return order;
    }

    // Path of node ids from `from` (exclusive) up to the root (inclusive).
    std::vector<int> path_to_root(int from) const {
        std::vector<int> out;
        for (int p = node(from).parent; p >= 0; p = node(p).parent) out.push_back(p);
        return out;
    }

    std::string name_of(int id) const {
        const ViewNode& n = node(id);
        switch (n.kind) {
            case NodeKind::Leaf: return "leaf " + leaf_label(n);
            case NodeKind::Indicator:
                return "exists_{" + vars_to_string(n.proj_vars) + "} " + leaf_label(n);
            case NodeKind::SuperRoot: return "V@<product>";
            case NodeKind::Variable: {
                std::string label = "V@" + var_name(n.at_var);
                for (VarId v : n.covered_vars) label += "." + var_name(v);
                return label;
            }
        }
        return "?";
    }

    std::string leaf_label(const ViewNode& n) const { return leaf_labels[static_cast<size_t>(n.atom)]; }

    std::vector<std::string> leaf_labels; // atom index -> relation name

private:
    void visit(int id, std::vector<int>& order) const {
        for (int c : node(id).children) visit(c, order);
        for (int c : node(id).indicators) visit(c, order);
        order.push_back(id);
    }
};

namespace detail {

struct TreeBuilder {
    const QuerySpec& q;
    const VariableOrder& order;
    std::set<VarId> free;
    ViewTree tree;

    TreeBuilder(const QuerySpec& q_, const VariableOrder& o)
        : q(q_), order(o), free(q_.free.begin(), q_.free.end()) {
        tree.leaf_labels.reserve(q.atoms.size());
        for (const auto& a : q.atoms) tree.leaf_labels.push_back(a.name);
    }

    int add_node(ViewNode n) {
        n.id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(std::move(n));
        return tree.nodes.back().id;
    }

    int build_leaf(int atom_idx) {
        const Atom& atom = q.atoms[static_cast<size_t>(atom_idx)];
        ViewNode n;
        n.kind = NodeKind::Leaf;
        n.atom = atom_idx;
        n.keys = atom.schema().vars();
        n.atoms = {atom_idx};
        return add_node(n);
    }

    int build_var(VarId x) {
        ViewNode n;
        n.kind = NodeKind::Variable;
        n.at_var = x;

        std::vector<int> child_ids;
        for (VarId c : order.children(x)) child_ids.push_back(build_var(c));
        for (size_t i = 0; i < q.atoms.size(); ++i)
            if (order.placement(q.atoms[i]) == x) child_ids.push_back(build_leaf(static_cast<int>(i)));
        if (child_ids.empty())
            throw InvalidVariableOrder("variable '" + var_name(x) +
                                       "' has neither child variables nor relations");

        std::set<VarId> key_set;
        std::set<int> atom_set;
        for (int c : child_ids) {
            const ViewNode& cn = tree.node(c);
            atom_set.insert(cn.atoms.begin(), cn.atoms.end());
            for (VarId k : cn.keys)
                if (free.count(k)) key_set.insert(k);
        }
        for (VarId d : order.dep(x, q)) key_set.insert(d);
        if (free.count(x)) key_set.insert(x); // X ∈ F: retained, so part of the keys
        else key_set.erase(x);

        n.children = child_ids;
        n.keys.assign(key_set.begin(), key_set.end());
        sort_vars(n.keys);
        n.atoms.assign(atom_set.begin(), atom_set.end());
        if (!free.count(x)) n.marg_vars = {x};
        return add_node(n);
    }

    void fix_parents() {
        for (auto& n : tree.nodes) {
            for (int c : n.children) tree.node(c).parent = n.id;
            for (int c : n.indicators) tree.node(c).parent = n.id;
        }
    }
};

} // namespace detail

// View tree construction: one view per variable, one leaf per atom; bound
// variables marginalize the join of their children, free variables join
// without marginalizing. Multi-root forests get an implicit product root.
inline ViewTree build_view_tree(const QuerySpec& q, const VariableOrder& order) {
    detail::TreeBuilder b(q, order);
    std::vector<int> root_ids;
    for (VarId r : order.roots()) root_ids.push_back(b.build_var(r));
    if (root_ids.size() == 1) {
        b.tree.root = root_ids.front();
    } else {
        ViewNode super;
        super.kind = NodeKind::SuperRoot;
        std::set<VarId> key_set;
        std::set<int> atom_set;
        for (int c : root_ids) {
            const ViewNode& cn = b.tree.node(c);
            key_set.insert(cn.keys.begin(), cn.keys.end());
            atom_set.insert(cn.atoms.begin(), cn.atoms.end());
        }
        super.children = root_ids;
        super.keys.assign(key_set.begin(), key_set.end());
        sort_vars(super.keys);
        super.atoms.assign(atom_set.begin(), atom_set.end());
        b.tree.root = b.add_node(super);
    }
    b.fix_parents();
    return b.tree;
}

namespace detail {

// Drops `child`, splicing its children into `parent`.
inline void absorb_child(ViewTree& tree, int parent, int child) {
    ViewNode& p = tree.node(parent);
    const ViewNode c = tree.node(child); // copy before mutation
    p.children = c.children;
    p.indicators = c.indicators;
    p.marg_vars = c.marg_vars;
    if (c.kind == NodeKind::Variable) {
        p.covered_vars.push_back(c.at_var);
        p.covered_vars.insert(p.covered_vars.end(), c.covered_vars.begin(),
                              c.covered_vars.end());
    }
    for (int g : p.children) tree.node(g).parent = parent;
    for (int g : p.indicators) tree.node(g).parent = parent;
    tree.node(child).parent = -1; // orphaned; compaction removes it
}

inline void compact(ViewTree& tree) {
    std::vector<int> remap(tree.nodes.size(), -1);
    std::vector<ViewNode> kept;
    std::vector<int> stack{tree.root};
    std::vector<char> live(tree.nodes.size(), 0);
    while (!stack.empty()) {
        int id = stack.back();
        stack.pop_back();
        live[static_cast<size_t>(id)] = 1;
        for (int c : tree.node(id).children) stack.push_back(c);
        for (int c : tree.node(id).indicators) stack.push_back(c);
    }
    for (size_t i = 0; i < tree.nodes.size(); ++i) {
        if (!live[i]) continue;
        remap[i] = static_cast<int>(kept.size());
        kept.push_back(tree.nodes[i]);
    }
    for (auto& n : kept) {
        n.id = remap[static_cast<size_t>(n.id)];
        for (auto& c : n.children) c = remap[static_cast<size_t>(c)];
        for (auto& c : n.indicators) c = remap[static_cast<size_t>(c)];
        if (n.parent >= 0) n.parent = remap[static_cast<size_t>(n.parent)];
    }
    tree.nodes = std::move(kept);
    tree.root = remap[static_cast<size_t>(tree.root)];
}

} // namespace detail

// Removes views identical to their single child: a free-variable view whose
// keys equal the child's keys is the child. The topmost view of each such
// run is kept.
inline void dedup_identical_views(ViewTree& tree) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& n : tree.nodes) {
            if (n.kind != NodeKind::Variable || n.marginalizes()) continue;
            if (n.children.size() != 1 || !n.indicators.empty()) continue;
            const ViewNode& c = tree.node(n.children.front());
            if (c.kind == NodeKind::Leaf || c.kind == NodeKind::Indicator) continue;
            if (c.keys != n.keys) continue;
            detail::absorb_child(tree, n.id, c.id);
            changed = true;
            break;
        }
    }
    detail::compact(tree);
}

// Merges maximal chains of single-child marginalization views over one
// relation into a single view that marginalizes several variables at once.
// With `bound_only` set (factorized-payload mode), chains crossing a
// payload-free variable stay split so every view keeps at most one of them.
inline void compose_chains(ViewTree& tree, const std::set<VarId>& protect = {}) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& n : tree.nodes) {
            if (n.kind != NodeKind::Variable || !n.marginalizes()) continue;
            if (n.children.size() != 1 || !n.indicators.empty()) continue;
            if (n.atoms.size() != 1) continue;
            ViewNode& c = tree.node(n.children.front());
            if (c.kind != NodeKind::Variable || !c.marginalizes()) continue;
            if (!c.indicators.empty()) continue;
            bool touches_protected = false;
            for (VarId v : c.marg_vars) touches_protected |= protect.count(v) > 0;
            for (VarId v : n.marg_vars) touches_protected |= protect.count(v) > 0;
            if (touches_protected) continue;
            std::vector<VarId> merged = c.marg_vars;
            merged.insert(merged.end(), n.marg_vars.begin(), n.marg_vars.end());
            std::vector<VarId> covered = n.covered_vars;
            detail::absorb_child(tree, n.id, c.id);
            n.marg_vars = merged;
            n.covered_vars = covered;
            n.covered_vars.push_back(c.at_var);
            n.covered_vars.insert(n.covered_vars.end(), c.covered_vars.begin(),
                                  c.covered_vars.end());
            changed = true;
            break;
        }
    }
    detail::compact(tree);
}

} // namespace ringview
