#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ringview/planner/query.hpp"

namespace ringview {

// Rooted forest over the query variables with the derived dependency sets.
// Relations attach below their lowest variable (or an explicit deeper
// placement). dep(X) is recomputed from the relation schemas: the ancestors
// of X that co-occur in some relation with a variable of X's subtree.
class VariableOrder {
public:
    // parents: var -> parent var; roots carry no entry.
    VariableOrder(std::vector<VarId> roots, std::map<VarId, VarId> parents)
        : roots_(std::move(roots)), parent_(std::move(parents)) {
        std::sort(roots_.begin(), roots_.end(), var_less);
        for (const auto& [child, parent] : parent_) children_[parent].push_back(child);
        for (auto& [v, kids] : children_) std::sort(kids.begin(), kids.end(), var_less);
        for (VarId r : roots_) assign_depths(r, 0);
    }

    const std::vector<VarId>& roots() const { return roots_; }

    std::vector<VarId> children(VarId v) const {
        auto it = children_.find(v);
        return it == children_.end() ? std::vector<VarId>{} : it->second;
    }

    bool contains(VarId v) const { return depth_.count(v) > 0; }
    int depth(VarId v) const { return depth_.at(v); }

    std::vector<VarId> ancestors(VarId v) const {
        std::vector<VarId> out;
        auto it = parent_.find(v);
        while (it != parent_.end()) {
            out.push_back(it->second);
            it = parent_.find(it->second);
        }
        return out;
    }

    bool is_ancestor(VarId anc, VarId v) const {
        for (VarId a : ancestors(v))
            if (a == anc) return true;
        return false;
    }

    std::vector<VarId> subtree_vars(VarId v) const {
        std::vector<VarId> out{v};
        for (VarId c : children(v)) {
            auto sub = subtree_vars(c);
            out.insert(out.end(), sub.begin(), sub.end());
        }
        return out;
    }

    // dep(X) = ancestors(X) ∩ {Y | some relation holds Y together with a
    // variable from subtree(X)}.
    std::vector<VarId> dep(VarId x, const QuerySpec& q) const {
        std::set<VarId> sub;
        for (VarId v : subtree_vars(x)) sub.insert(v);
        std::vector<VarId> out;
        for (VarId anc : ancestors(x)) {
            bool hit = false;
            for (const auto& atom : q.atoms) {
                bool has_anc = false, has_sub = false;
                for (VarId v : atom.declared_vars) {
                    has_anc |= (v == anc);
                    has_sub |= sub.count(v) > 0;
                }
                if (has_anc && has_sub) {
                    hit = true;
                    break;
                }
            }
            if (hit) out.push_back(anc);
        }
        sort_vars(out);
        return out;
    }

    // Leaf position of an atom: its lowest variable unless placed deeper.
    VarId placement(const Atom& atom) const {
        if (atom.placement) return *atom.placement;
        VarId lowest = atom.declared_vars.front();
        for (VarId v : atom.declared_vars)
            if (depth(v) > depth(lowest)) lowest = v;
        return lowest;
    }

    struct Diagnostics {
        std::vector<std::string> warnings;
    };

    // Def.-2 checks: every variable of a relation lies on one root-to-leaf
    // path; placements sit at or below the relation's variables. Free
    // variables below bound ones are a warning for listing payloads and an
    // error in factorized-payload mode.
    Diagnostics validate(const QuerySpec& q, bool factorized_payloads,
                         const std::vector<VarId>& payload_free = {}) const {
        Diagnostics diag;
        for (VarId v : q.all_vars())
            if (!contains(v))
                throw InvalidVariableOrder("variable '" + var_name(v) +
                                           "' missing from the variable order");
        for (const auto& atom : q.atoms) {
            // Sort by depth; each consecutive pair must be ancestor/descendant.
            std::vector<VarId> vs = atom.declared_vars;
            std::sort(vs.begin(), vs.end(),
                      [&](VarId a, VarId b) { return depth(a) < depth(b); });
            for (size_t i = 1; i < vs.size(); ++i)
                if (!is_ancestor(vs[i - 1], vs[i]))
                    throw InvalidVariableOrder(
                        "relation '" + atom.name + "': variables '" + var_name(vs[i - 1]) +
                        "' and '" + var_name(vs[i]) + "' do not lie on one root-to-leaf path");
            if (atom.placement) {
                VarId p = *atom.placement;
                if (!contains(p))
                    throw InvalidVariableOrder("relation '" + atom.name +
                                               "' placed under unknown variable");
                for (VarId v : atom.declared_vars)
                    if (v != p && !is_ancestor(v, p))
                        throw InvalidVariableOrder("relation '" + atom.name +
                                                   "' placed above its variable '" +
                                                   var_name(v) + "'");
            }
        }
        const std::vector<VarId>& fset = factorized_payloads ? payload_free : q.free;
        if (!fset.empty()) {
            std::set<VarId> free_set(fset.begin(), fset.end());
            for (VarId f : fset) {
                for (VarId below : subtree_vars(f)) {
                    if (below == f || free_set.count(below)) continue;
                    // `below` is bound with free ancestor f: fine. The problem
                    // is a free variable under a bound one.
                    (void)below;
                }
            }
            for (VarId v : q.all_vars()) {
                if (free_set.count(v)) continue;
                for (VarId below : subtree_vars(v)) {
                    if (below != v && free_set.count(below)) {
                        std::string msg = "free variable '" + var_name(below) +
                                          "' sits below bound variable '" + var_name(v) + "'";
                        if (factorized_payloads)
                            throw InvalidVariableOrder(msg + " (factorized payloads require "
                                                             "free variables on top)");
                        diag.warnings.push_back(msg);
                    }
                }
            }
        }
        return diag;
    }

private:
    void assign_depths(VarId v, int d) {
        depth_[v] = d;
        for (VarId c : children(v)) assign_depths(c, d + 1);
    }

    std::vector<VarId> roots_;
    std::map<VarId, VarId> parent_;
    std::map<VarId, std::vector<VarId>> children_;
    std::map<VarId, int> depth_;
};

} // namespace ringview
