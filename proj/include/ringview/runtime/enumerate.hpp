#pragma once

#include <map>
#include <vector>

#include "ringview/rings/relational.hpp"
#include "ringview/runtime/engine.hpp"

namespace ringview {

namespace detail {

struct EnumCtx {
    const Engine<RelationalRing>& eng;
    const Plan& plan;
    std::map<int, std::vector<VarId>> keep;  // node -> payload variables kept there
    std::map<int, bool> free_below;          // node -> a kept variable exists strictly below

    bool compute_free_below(int id) {
        bool below = false;
        const ViewNode& n = plan.tree.node(id);
        for (int c : n.children) below |= compute_free_below(c) || !keep[c].empty();
        for (int c : n.indicators) below |= compute_free_below(c);
        free_below[id] = below;
        return below;
    }
};

using Partial = std::pair<std::map<VarId, Value>, long long>;

inline void enum_node(EnumCtx& ctx, int id, std::map<VarId, Value>& binding,
                      std::vector<Partial>& out) {
    const ViewNode& n = ctx.plan.tree.node(id);
    const Relation<RelationalPayload>* content = ctx.eng.view(id);
    if (!content) throw Error("factorized enumeration reads unstored view " +
                              ctx.plan.tree.name_of(id));

    Tuple key;
    key.vals.reserve(n.keys.size());
    for (VarId v : n.keys) key.vals.push_back(binding.at(v));
    const RelationalPayload* payload = content->find(key);
    if (!payload) return;

    const auto& keep = ctx.keep[id];
    if (keep.empty()) {
        // Bound view, leaf, or indicator: payload is a multiple of one.
        const long long* m = payload->find(Tuple{});
        if (m) out.push_back({{}, *m});
        return;
    }

    VarId x = keep.front();
    bool recurse = ctx.free_below[id];
    for (const auto& [vt, mult] : payload->data()) {
        const Value& xv = vt.vals.front();
        if (!recurse) {
            out.push_back({{{x, xv}}, mult});
            continue;
        }
        binding[x] = xv;
        std::vector<Partial> combo{{{{x, xv}}, 1}};
        for (int c : ctx.plan.tree.inputs(id)) {
            std::vector<Partial> child;
            enum_node(ctx, c, binding, child);
            std::vector<Partial> next;
            for (const auto& [lm, lc] : combo)
                for (const auto& [rm, rc] : child) {
                    auto merged = lm;
                    merged.insert(rm.begin(), rm.end());
                    next.push_back({std::move(merged), lc * rc});
                }
            combo = std::move(next);
            if (combo.empty()) break;
        }
        binding.erase(x);
        out.insert(out.end(), combo.begin(), combo.end());
    }
}

} // namespace detail

// Depth-first walk of the factorized payload hierarchy, yielding every result
// tuple over the query's free variables exactly once with its multiplicity.
// The total output equals the listing-mode root payload.
inline Relation<long long> enumerate_factorized(const Engine<RelationalRing>& eng) {
    const Plan& plan = eng.plan();
    if (!plan.options.factorized_payloads)
        throw ModeMismatch("plan was not compiled in factorized-payload mode");

    detail::EnumCtx ctx{eng, plan, {}, {}};
    for (const auto& n : plan.tree.nodes) ctx.keep[n.id] = plan.payload_keep(n.id);
    ctx.compute_free_below(plan.tree.root);

    std::vector<VarId> free = plan.options.payload_free;
    sort_vars(free);
    std::vector<Column> cols;
    for (VarId v : free) cols.push_back({v, kind_of_var(plan.query.atoms, v)});
    Relation<long long> result(Schema::of(std::move(cols)));

    // The (super)root may itself keep a variable; treat it like a child list
    // rooted at a virtual node.
    std::map<VarId, Value> binding;
    std::vector<detail::Partial> parts;
    const ViewNode& root = plan.tree.node(plan.tree.root);
    if (root.kind == NodeKind::SuperRoot) {
        parts.push_back({{}, 1});
        for (int c : plan.tree.inputs(plan.tree.root)) {
            std::vector<detail::Partial> child;
            detail::enum_node(ctx, c, binding, child);
            std::vector<detail::Partial> next;
            for (const auto& [lm, lc] : parts)
                for (const auto& [rm, rc] : child) {
                    auto merged = lm;
                    merged.insert(rm.begin(), rm.end());
                    next.push_back({std::move(merged), lc * rc});
                }
            parts = std::move(next);
        }
    } else {
        detail::enum_node(ctx, plan.tree.root, binding, parts);
    }

    CountRing count;
    for (const auto& [vals, mult] : parts) {
        Tuple t;
        t.vals.reserve(free.size());
        for (VarId v : free) t.vals.push_back(vals.at(v));
        result.accumulate(t, mult, count);
    }
    return result;
}

} // namespace ringview
