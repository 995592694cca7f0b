#pragma once

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ringview/planner/delta.hpp"
#include "ringview/planner/hypergraph.hpp"
#include "ringview/planner/query.hpp"
#include "ringview/planner/variable_order.hpp"
#include "ringview/planner/view_tree.hpp"

namespace ringview {

struct PlanOptions {
    // Relational payload modes: payload_free drives the lifting functions and,
    // in factorized mode, the per-view payload projection.
    bool relational_payloads = false;
    bool factorized_payloads = false;
    std::vector<VarId> payload_free;
    bool enable_indicators = true;
};

struct Plan {
    QuerySpec query;
    PlanOptions options;
    ViewTree tree;
    std::set<int> materialized;          // node ids
    std::set<std::string> updatable;     // relation names
    std::vector<DeltaPath> atom_paths;   // one per atom (index == atom index)
    std::vector<int> indicator_nodes;    // node ids, ascending (the in-sequence order)
    std::vector<DeltaPath> indicator_paths; // parallel to indicator_nodes
    std::vector<ReadSite> read_sites;    // probe patterns for index maintenance
    std::vector<std::string> warnings;
    std::map<VarId, uint32_t> var_index; // canonical variable -> 0-based index

    // In factorized-payload mode, the payload of a view keeps only the values
    // of the variables marginalized at the view that are free in the query.
    std::vector<VarId> payload_keep(int node_id) const {
        std::vector<VarId> keep;
        if (!options.factorized_payloads) return keep;
        const ViewNode& n = tree.node(node_id);
        std::set<VarId> free(options.payload_free.begin(), options.payload_free.end());
        for (VarId v : n.marg_vars)
            if (free.count(v)) keep.push_back(v);
        sort_vars(keep);
        return keep;
    }
};

inline Plan compile_plan(QuerySpec query, const VariableOrder& order,
                         std::set<std::string> updatable, PlanOptions options = {}) {
    query.validate();
    for (const auto& name : updatable)
        if (query.atoms_of(name).empty())
            throw UnknownRelation("updatable relation '" + name + "' is not in the query");

    Plan plan;
    auto diag = order.validate(query, options.factorized_payloads, options.payload_free);
    plan.warnings = diag.warnings;
    plan.query = std::move(query);
    plan.options = std::move(options);
    plan.updatable = std::move(updatable);

    plan.tree = build_view_tree(plan.query, order);
    dedup_identical_views(plan.tree);
    std::set<VarId> protect;
    if (plan.options.factorized_payloads)
        protect.insert(plan.options.payload_free.begin(), plan.options.payload_free.end());
    compose_chains(plan.tree, protect);
    if (plan.options.enable_indicators) add_indicators(plan.tree, plan.query);
    plan.materialized = choose_materialization(plan.tree, plan.query, plan.updatable);

    for (size_t a = 0; a < plan.query.atoms.size(); ++a)
        plan.atom_paths.push_back(build_delta_path(plan.tree, leaf_of_atom(plan.tree, static_cast<int>(a))));
    for (const auto& n : plan.tree.nodes)
        if (n.kind == NodeKind::Indicator) plan.indicator_nodes.push_back(n.id);
    for (int ind : plan.indicator_nodes)
        plan.indicator_paths.push_back(build_delta_path(plan.tree, ind));

    for (size_t a = 0; a < plan.query.atoms.size(); ++a) {
        if (!plan.updatable.count(plan.query.atoms[a].name)) continue;
        auto sites = delta_read_sites(plan.tree, plan.atom_paths[a]);
        plan.read_sites.insert(plan.read_sites.end(), sites.begin(), sites.end());
    }
    for (size_t i = 0; i < plan.indicator_paths.size(); ++i) {
        int atom = plan.tree.node(plan.indicator_nodes[i]).atom;
        if (!plan.updatable.count(plan.query.atoms[static_cast<size_t>(atom)].name)) continue;
        auto sites = delta_read_sites(plan.tree, plan.indicator_paths[i]);
        plan.read_sites.insert(plan.read_sites.end(), sites.begin(), sites.end());
    }

    // Canonical variable -> index map (drives the degree-m ring layout).
    std::vector<VarId> vars(plan.query.all_vars().begin(), plan.query.all_vars().end());
    sort_vars(vars);
    for (size_t i = 0; i < vars.size(); ++i)
        plan.var_index[vars[i]] = static_cast<uint32_t>(i);

    return plan;
}

// Deterministic human-readable plan listing for golden tests.
inline std::string dump_plan(const Plan& plan) {
    std::ostringstream out;
    const ViewTree& t = plan.tree;
    out << "views:\n";
    for (int id : t.bottom_up()) {
        const ViewNode& n = t.node(id);
        out << "  [" << id << "] " << t.name_of(id) << " keys=(" << vars_to_string(n.keys)
            << ")";
        if (n.kind == NodeKind::Leaf) {
            out << " relation=" << plan.query.atoms[static_cast<size_t>(n.atom)].name;
        } else if (n.kind == NodeKind::Indicator) {
            out << " source=" << plan.query.atoms[static_cast<size_t>(n.atom)].name
                << " proj=(" << vars_to_string(n.proj_vars) << ")";
        } else {
            out << " rels={";
            for (size_t i = 0; i < n.atoms.size(); ++i) {
                if (i) out << ",";
                out << plan.query.atoms[static_cast<size_t>(n.atoms[i])].name;
            }
            out << "} def=";
            if (n.marginalizes()) out << "agg(" << vars_to_string(n.marg_vars) << ") ";
            out << "join(";
            auto inputs = t.inputs(id);
            for (size_t i = 0; i < inputs.size(); ++i) {
                if (i) out << ",";
                out << "[" << inputs[i] << "]";
            }
            out << ")";
        }
        if (plan.materialized.count(id)) out << " materialized";
        out << "\n";
    }
    out << "root: [" << t.root << "]\n";
    out << "updatable:";
    for (const auto& r : plan.updatable) out << " " << r;
    out << "\n";
    for (size_t a = 0; a < plan.atom_paths.size(); ++a) {
        out << "delta " << plan.query.atoms[a].name << "#" << a << ": ["
            << plan.atom_paths[a].start << "]";
        for (const auto& s : plan.atom_paths[a].steps) out << " -> [" << s.node << "]";
        out << "\n";
    }
    for (size_t i = 0; i < plan.indicator_nodes.size(); ++i) {
        const ViewNode& n = t.node(plan.indicator_nodes[i]);
        out << "indicator [" << n.id << "]: exists_{" << vars_to_string(n.proj_vars) << "} "
            << plan.query.atoms[static_cast<size_t>(n.atom)].name << " under ["
            << n.parent << "]\n";
    }
    out << "variable index:";
    for (const auto& [v, i] : plan.var_index) out << " " << var_name(v) << "=" << i;
    out << "\n";
    for (const auto& w : plan.warnings) out << "warning: " << w << "\n";
    return out.str();
}

} // namespace ringview
