#pragma once

#include <map>
#include <set>
#include <vector>

#include "ringview/planner/plan.hpp"
#include "ringview/relation.hpp"

namespace ringview {

// From-scratch recomputation of view contents by backtracking nested-loop
// join over the base relations. Shares only the ring primitives with the
// incremental path; used as the reference in soundness checks.
template <typename Ring>
class Oracle {
public:
    using P = typename Ring::Payload;
    using Rel = Relation<P>;

    Oracle(const Plan& plan, Ring ring, std::map<VarId, Lift<P>> lifts)
        : plan_(plan), ring_(std::move(ring)), lifts_(std::move(lifts)) {}

    // atom_rels: one relation per atom, in atom order.
    Rel eval_view(int node_id, const std::vector<Rel>& atom_rels) const {
        const ViewNode& n = plan_.tree.node(node_id);
        if (n.kind == NodeKind::Leaf) return atom_rels[static_cast<size_t>(n.atom)];
        if (n.kind == NodeKind::Indicator) return indicator_content(n, atom_rels);

        // Join factors: the subtree's atoms plus any indicator projections
        // hanging below this node (payload one, so they only filter).
        std::vector<const Rel*> factors;
        std::vector<Rel> owned;
        for (int a : n.atoms) factors.push_back(&atom_rels[static_cast<size_t>(a)]);
        for (int id : subtree_indicators(node_id)) {
            owned.push_back(indicator_content(plan_.tree.node(id), atom_rels));
        }
        for (const auto& r : owned) factors.push_back(&r);

        std::set<VarId> key_set(n.keys.begin(), n.keys.end());
        std::set<VarId> all_vars;
        for (const Rel* f : factors)
            for (VarId v : f->schema().vars()) all_vars.insert(v);
        std::vector<VarId> marg;
        for (VarId v : all_vars)
            if (!key_set.count(v)) marg.push_back(v);
        sort_vars(marg);

        Rel out(n.keys_schema(plan_.query));
        std::map<VarId, Value> binding;
        enumerate(factors, 0, binding, ring_.one(), [&](const P& payload,
                                                        const std::map<VarId, Value>& b) {
            P acc = payload;
            for (VarId v : marg) acc = ring_.mul(acc, lifts_.at(v)(b.at(v)));
            Tuple key;
            key.vals.reserve(n.keys.size());
            for (VarId v : n.keys) key.vals.push_back(b.at(v));
            out.accumulate(key, acc, ring_);
        });
        return project_payloads(node_id, std::move(out));
    }

    Rel eval_root(const std::vector<Rel>& atom_rels) const {
        return eval_view(plan_.tree.root, atom_rels);
    }

    // Flat natural join of all atoms over the full variable set; payload is
    // the product of atom payloads in atom order.
    Rel full_join(const std::vector<Rel>& atom_rels) const {
        std::vector<const Rel*> factors;
        for (const auto& r : atom_rels) factors.push_back(&r);
        std::set<VarId> all_vars;
        for (const Rel* f : factors)
            for (VarId v : f->schema().vars()) all_vars.insert(v);
        std::vector<VarId> vars(all_vars.begin(), all_vars.end());
        sort_vars(vars);
        std::vector<Column> cols;
        for (VarId v : vars) cols.push_back({v, kind_of_var(plan_.query.atoms, v)});
        Rel out(Schema::of(std::move(cols)));
        std::map<VarId, Value> binding;
        enumerate(factors, 0, binding, ring_.one(),
                  [&](const P& payload, const std::map<VarId, Value>& b) {
                      Tuple key;
                      for (VarId v : vars) key.vals.push_back(b.at(v));
                      out.accumulate(key, payload, ring_);
                  });
        return out;
    }

private:
    std::vector<int> subtree_indicators(int node_id) const {
        std::vector<int> out;
        std::vector<int> stack{node_id};
        while (!stack.empty()) {
            int id = stack.back();
            stack.pop_back();
            const ViewNode& n = plan_.tree.node(id);
            out.insert(out.end(), n.indicators.begin(), n.indicators.end());
            for (int c : n.children) stack.push_back(c);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    Rel indicator_content(const ViewNode& n, const std::vector<Rel>& atom_rels) const {
        const Rel& src = atom_rels[static_cast<size_t>(n.atom)];
        Schema out_schema = src.schema().project(n.proj_vars);
        std::vector<int> pos = projection_positions(src.schema(), out_schema);
        Rel out(out_schema);
        for (const auto& [t, p] : src.data()) {
            Tuple key = project_tuple(t, pos);
            if (!out.data().count(key)) out.insert_unchecked(std::move(key), ring_.one());
        }
        return out;
    }

    template <typename Fn>
    void enumerate(const std::vector<const Rel*>& factors, size_t i,
                   std::map<VarId, Value>& binding, P payload, const Fn& emit) const {
        if (i == factors.size()) {
            emit(payload, binding);
            return;
        }
        const Rel& f = *factors[i];
        const auto& cols = f.schema().cols();
        for (const auto& [t, p] : f.data()) {
            bool ok = true;
            std::vector<VarId> added;
            for (size_t c = 0; c < cols.size() && ok; ++c) {
                auto it = binding.find(cols[c].var);
                if (it == binding.end()) {
                    binding.emplace(cols[c].var, t.vals[c]);
                    added.push_back(cols[c].var);
                } else if (!(it->second == t.vals[c])) {
                    ok = false;
                }
            }
            if (ok) enumerate(factors, i + 1, binding, ring_.mul(payload, p), emit);
            for (VarId v : added) binding.erase(v);
        }
    }

    Rel project_payloads(int node_id, Rel r) const {
        if constexpr (requires(const Ring& rg, const P& p, const std::vector<VarId>& ks) {
                          rg.project_payload(p, ks);
                      }) {
            if (!plan_.options.factorized_payloads) return r;
            const ViewNode& n = plan_.tree.node(node_id);
            if (!n.marginalizes()) return r;
            std::vector<VarId> keep = plan_.payload_keep(node_id);
            Rel out(r.schema());
            for (const auto& [t, p] : r.data())
                out.accumulate(t, ring_.project_payload(p, keep), ring_);
            return out;
        } else {
            return r;
        }
    }

    const Plan& plan_;
    Ring ring_;
    std::map<VarId, Lift<P>> lifts_;
};

} // namespace ringview
