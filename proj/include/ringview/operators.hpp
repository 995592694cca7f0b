#pragma once

#include <functional>
#include <unordered_map>
#include <vector>

#include "ringview/relation.hpp"

namespace ringview {

// Lifting function: maps one variable's key values into the payload ring.
template <typename P>
using Lift = std::function<P(const Value&)>;

template <typename P>
Lift<P> constant_lift(P one) {
    return [one](const Value&) { return one; };
}

// (R ⊎ S)[t] = R[t] + S[t], zero-suppressed. Schemas must match.
template <typename Ring>
Relation<typename Ring::Payload> rel_union(const Relation<typename Ring::Payload>& a,
                                           const Relation<typename Ring::Payload>& b,
                                           const Ring& ring) {
    if (a.schema() != b.schema())
        throw SchemaMismatch("union over different schemas " + a.schema().to_string() +
                             " vs " + b.schema().to_string());
    Relation<typename Ring::Payload> out(a.schema());
    for (const auto& [t, p] : a.data()) out.accumulate(t, p, ring);
    for (const auto& [t, p] : b.data()) out.accumulate(t, p, ring);
    return out;
}

namespace detail {

// Merge positions for building a joined key: each output column comes from
// the left tuple (position) or the right tuple (position).
struct JoinLayout {
    Schema out_schema;
    std::vector<std::pair<bool, int>> out_from; // (from_left, position)
    std::vector<int> shared_left;               // positions of shared vars in left
    std::vector<int> shared_right;              // positions of shared vars in right
};

inline JoinLayout join_layout(const Schema& left, const Schema& right) {
    JoinLayout layout;
    layout.out_schema = left.union_with(right);
    for (const auto& c : layout.out_schema.cols()) {
        int li = left.index_of(c.var);
        if (li >= 0)
            layout.out_from.emplace_back(true, li);
        else
            layout.out_from.emplace_back(false, right.index_of(c.var));
    }
    for (const auto& c : left.cols()) {
        int ri = right.index_of(c.var);
        if (ri >= 0) {
            layout.shared_left.push_back(left.index_of(c.var));
            layout.shared_right.push_back(ri);
        }
    }
    return layout;
}

inline Tuple merge_tuples(const Tuple& l, const Tuple& r,
                          const std::vector<std::pair<bool, int>>& out_from) {
    Tuple t;
    t.vals.reserve(out_from.size());
    for (const auto& [from_left, pos] : out_from)
        t.vals.push_back(from_left ? l.vals[static_cast<size_t>(pos)]
                                   : r.vals[static_cast<size_t>(pos)]);
    return t;
}

} // namespace detail

// (S ⊗ T)[t] = S[π_S(t)] * T[π_T(t)] over the union schema; payload order is
// (left, right). Probes the contained side when one schema covers the other,
// otherwise builds a transient index over the right input.
template <typename Ring>
Relation<typename Ring::Payload> rel_join(const Relation<typename Ring::Payload>& a,
                                          const Relation<typename Ring::Payload>& b,
                                          const Ring& ring) {
    using P = typename Ring::Payload;
    auto layout = detail::join_layout(a.schema(), b.schema());
    Relation<P> out(layout.out_schema);

    if (b.schema().is_subset_of(a.schema())) {
        // Union schema equals a's; keys come straight from a.
        std::vector<int> pos = projection_positions(a.schema(), b.schema());
        for (const auto& [t, p] : a.data()) {
            const P* q = b.find(project_tuple(t, pos));
            if (!q) continue;
            opcount::mult();
            out.accumulate(t, ring.mul(p, *q), ring);
        }
        return out;
    }
    if (a.schema().is_subset_of(b.schema())) {
        std::vector<int> pos = projection_positions(b.schema(), a.schema());
        for (const auto& [t, q] : b.data()) {
            const P* p = a.find(project_tuple(t, pos));
            if (!p) continue;
            opcount::mult();
            out.accumulate(t, ring.mul(*p, q), ring);
        }
        return out;
    }

    // General case: group the right input by the shared variables.
    std::unordered_map<Tuple, std::vector<const std::pair<const Tuple, P>*>, TupleHash> index;
    for (const auto& entry : b.data())
        index[project_tuple(entry.first, layout.shared_right)].push_back(&entry);
    for (const auto& [t, p] : a.data()) {
        auto it = index.find(project_tuple(t, layout.shared_left));
        if (it == index.end()) continue;
        for (const auto* entry : it->second) {
            opcount::touch();
            opcount::mult();
            out.accumulate(detail::merge_tuples(t, entry->first, layout.out_from),
                           ring.mul(p, entry->second), ring);
        }
    }
    return out;
}

// (⊕_X R)[t] = Σ R[t1] * g_X(t1.X) over all t1 extending t; X leaves the
// schema and its lifted payload multiplies on the right.
template <typename Ring>
Relation<typename Ring::Payload> marginalize(const Relation<typename Ring::Payload>& r,
                                             VarId x,
                                             const Lift<typename Ring::Payload>& lift,
                                             const Ring& ring) {
    int xi = r.schema().index_of(x);
    if (xi < 0)
        throw UnknownVariable("cannot marginalize '" + var_name(x) + "': not in schema");
    Relation<typename Ring::Payload> out(r.schema().without(x));
    for (const auto& [t, p] : r.data()) {
        Tuple key;
        key.vals.reserve(t.size() - 1);
        for (size_t i = 0; i < t.size(); ++i)
            if (static_cast<int>(i) != xi) key.vals.push_back(t.vals[i]);
        opcount::mult();
        out.accumulate(key, ring.mul(p, lift(t.vals[static_cast<size_t>(xi)])), ring);
    }
    return out;
}

// Marginalizes several variables in one pass; the composed lifted payload is
// the product of the per-variable lifts in `xs` order. Equivalent to applying
// marginalize sequentially for each x in `xs`.
template <typename Ring>
Relation<typename Ring::Payload> marginalize_many(
    const Relation<typename Ring::Payload>& r, const std::vector<VarId>& xs,
    const std::vector<Lift<typename Ring::Payload>>& lifts, const Ring& ring) {
    if (xs.empty()) return r;
    if (xs.size() != lifts.size()) throw Error("marginalize_many: vars/lifts length mismatch");
    std::vector<int> xpos;
    xpos.reserve(xs.size());
    Schema out_schema = r.schema();
    for (VarId x : xs) {
        int i = r.schema().index_of(x);
        if (i < 0)
            throw UnknownVariable("cannot marginalize '" + var_name(x) + "': not in schema");
        xpos.push_back(i);
        out_schema = out_schema.without(x);
    }
    std::vector<int> keep = projection_positions(r.schema(), out_schema);

    Relation<typename Ring::Payload> out(out_schema);
    for (const auto& [t, p] : r.data()) {
        auto acc = p;
        for (size_t k = 0; k < xs.size(); ++k) {
            opcount::mult();
            acc = ring.mul(acc, lifts[k](t.vals[static_cast<size_t>(xpos[k])]));
        }
        out.accumulate(project_tuple(t, keep), acc, ring);
    }
    return out;
}

// ∃_A R: distinct projections of non-zero keys onto A, each with payload one.
template <typename Ring>
Relation<typename Ring::Payload> indicator_project(const Relation<typename Ring::Payload>& r,
                                                   const std::vector<VarId>& a,
                                                   const Ring& ring) {
    Schema out_schema = r.schema().project(a);
    std::vector<int> pos = projection_positions(r.schema(), out_schema);
    Relation<typename Ring::Payload> out(out_schema);
    for (const auto& [t, p] : r.data()) {
        Tuple key = project_tuple(t, pos);
        if (!out.find(key)) out.insert_unchecked(std::move(key), ring.one());
    }
    return out;
}

template <typename Ring>
Relation<typename Ring::Payload> rel_negate(const Relation<typename Ring::Payload>& r,
                                            const Ring& ring) {
    Relation<typename Ring::Payload> out(r.schema());
    for (const auto& [t, p] : r.data()) out.insert_unchecked(t, ring.negate(p));
    return out;
}

} // namespace ringview
