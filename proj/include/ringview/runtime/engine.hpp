#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ringview/operators.hpp"
#include "ringview/planner/plan.hpp"

namespace ringview {

// A batch update to one relation: either a listing delta or a sum of rank
// terms, each term a product of unary factors covering the relation schema.
// Inserts carry positive payloads, deletes negated ones.
template <typename P>
struct UpdateDelta {
    std::string relation;
    Relation<P> listing;
    struct RankTerm {
        std::vector<Relation<P>> factors;
    };
    std::vector<RankTerm> terms;

    bool is_factorized() const { return !terms.empty(); }
};

// Reverse log of entry-level changes; a failed batch rolls back in reverse
// order so the engine state is untouched.
struct UndoLog {
    std::vector<std::function<void()>> actions;

    void record(std::function<void()> f) { actions.push_back(std::move(f)); }
    void rollback() {
        for (auto it = actions.rbegin(); it != actions.rend(); ++it) (*it)();
        actions.clear();
    }
};

// A stored relation plus the secondary indexes the delta paths probe it with.
template <typename P>
class Stored {
public:
    Relation<P> rel;

    void init(Schema schema) { rel = Relation<P>(std::move(schema)); }

    void add_index(const std::vector<VarId>& pattern) {
        for (const auto& idx : indexes_)
            if (idx.pattern == pattern) return;
        Index idx;
        idx.pattern = pattern;
        idx.positions = projection_positions(rel.schema(), rel.schema().project(pattern));
        for (const auto& [t, p] : rel.data())
            idx.groups[project_tuple(t, idx.positions)].insert(t);
        indexes_.push_back(std::move(idx));
    }

    const std::unordered_set<Tuple, TupleHash>* probe(const std::vector<VarId>& pattern,
                                                      const Tuple& key) const {
        for (const auto& idx : indexes_) {
            if (idx.pattern != pattern) continue;
            auto it = idx.groups.find(key);
            return it == idx.groups.end() ? &empty_group() : &it->second;
        }
        return nullptr;
    }

    // Accumulates `p` at `t`, maintaining indexes and logging the inverse.
    template <typename Ring>
    void put(const Tuple& t, const P& p, const Ring& ring, UndoLog* undo) {
        if (ring.is_zero(p)) return;
        auto it = rel.raw().find(t);
        opcount::touch();
        if (undo) {
            std::optional<P> old;
            if (it != rel.raw().end()) old = it->second;
            undo->record([this, t, old, &ring]() { force_set(t, old, ring); });
        }
        if (it == rel.raw().end()) {
            rel.raw().emplace(t, p);
            index_add(t);
            return;
        }
        opcount::add();
        it->second = ring.add(it->second, p);
        if (ring.is_zero(it->second)) {
            rel.raw().erase(it);
            index_remove(t);
        }
    }

    template <typename Ring>
    void force_set(const Tuple& t, const std::optional<P>& v, const Ring& ring) {
        auto it = rel.raw().find(t);
        bool present = it != rel.raw().end();
        if (!v) {
            if (present) {
                rel.raw().erase(it);
                index_remove(t);
            }
            return;
        }
        (void)ring;
        if (present) {
            it->second = *v;
        } else {
            rel.raw().emplace(t, *v);
            index_add(t);
        }
    }

private:
    struct Index {
        std::vector<VarId> pattern;
        std::vector<int> positions;
        std::unordered_map<Tuple, std::unordered_set<Tuple, TupleHash>, TupleHash> groups;
    };

    static const std::unordered_set<Tuple, TupleHash>& empty_group() {
        static const std::unordered_set<Tuple, TupleHash> empty;
        return empty;
    }

    void index_add(const Tuple& t) {
        for (auto& idx : indexes_) idx.groups[project_tuple(t, idx.positions)].insert(t);
    }
    void index_remove(const Tuple& t) {
        for (auto& idx : indexes_) {
            Tuple key = project_tuple(t, idx.positions);
            auto it = idx.groups.find(key);
            if (it != idx.groups.end()) {
                it->second.erase(t);
                if (it->second.empty()) idx.groups.erase(it);
            }
        }
    }

    std::vector<Index> indexes_;
};

struct BatchSummary {
    size_t tuples = 0;
    bool root_changed = false;
};

// Holds the materialized state of one compiled plan and runs the update
// triggers. Single writer; reads may share. One ring instance and one
// lifting catalog cover the whole plan.
template <typename Ring>
class Engine {
public:
    using P = typename Ring::Payload;
    using Rel = Relation<P>;
    using Delta = UpdateDelta<P>;

    Engine(Plan plan, Ring ring, std::map<VarId, Lift<P>> lifts)
        : plan_(std::move(plan)), ring_(std::move(ring)), lifts_(std::move(lifts)) {
        for (const auto& n : plan_.tree.nodes)
            for (VarId v : n.marg_vars)
                if (!lifts_.count(v))
                    throw ValidationError("no lifting function for bound variable '" +
                                          var_name(v) + "'");
        // Self-join passes run in left-to-right leaf order.
        for (int id : plan_.tree.bottom_up()) {
            const ViewNode& n = plan_.tree.node(id);
            if (n.kind == NodeKind::Leaf)
                atoms_by_name_[plan_.query.atoms[static_cast<size_t>(n.atom)].name]
                    .push_back(n.atom);
        }
    }

    const Plan& plan() const { return plan_; }
    const Ring& ring() const { return ring_; }

    void initialize(const std::map<std::string, Rel>& database) {
        std::unique_lock lock(mu_);
        atom_store_.assign(plan_.query.atoms.size(), Stored<P>{});
        view_store_.clear();
        ind_store_.clear();

        for (size_t a = 0; a < plan_.query.atoms.size(); ++a) {
            const Atom& atom = plan_.query.atoms[a];
            auto it = database.find(atom.name);
            if (it == database.end())
                throw MissingRelation("relation '" + atom.name + "' missing from database");
            if (it->second.schema() != atom.schema())
                throw SchemaMismatch("relation '" + atom.name + "' loaded with schema " +
                                     it->second.schema().to_string() + ", expected " +
                                     atom.schema().to_string());
            atom_store_[a].rel = it->second;
        }

        for (const auto& n : plan_.tree.nodes)
            if (n.kind == NodeKind::Indicator) ind_store_.emplace(n.id, IndState{});
        rebuild_indicators();

        // Bottom-up evaluation; materialized views keep their content.
        std::map<int, Rel> cache;
        for (int id : plan_.tree.bottom_up()) {
            const ViewNode& n = plan_.tree.node(id);
            if (n.kind == NodeKind::Leaf || n.kind == NodeKind::Indicator) continue;
            Rel value = eval_node(n, cache);
            cache.emplace(id, value);
            if (is_stored_view(id)) {
                Stored<P> st;
                st.rel = std::move(value);
                view_store_.emplace(id, std::move(st));
            }
        }

        for (const auto& site : plan_.read_sites) register_index(site);
        counters_.reset();
    }

    BatchSummary apply_batch(const std::vector<Delta>& deltas) {
        std::unique_lock lock(mu_);
        opcount::Scope scope(&counters_);
        UndoLog undo;
        BatchSummary summary;
        try {
            for (const auto& d : deltas) {
                bool changed = apply_one(d, summary, &undo);
                summary.root_changed |= changed;
            }
        } catch (...) {
            undo.rollback();
            throw;
        }
        return summary;
    }

    bool apply_update(const Delta& d) { return apply_batch({d}).root_changed; }

    const Rel& root() const {
        std::shared_lock lock(mu_);
        return view_store_.at(plan_.tree.root).rel;
    }

    // Stored content of a node: materialized view, base atom, or indicator.
    const Rel* view(int node_id) const {
        std::shared_lock lock(mu_);
        return stored_content(node_id);
    }

    const Rel& atom_content(int atom) const {
        std::shared_lock lock(mu_);
        return atom_store_[static_cast<size_t>(atom)].rel;
    }

    long long indicator_counter(int node_id, const Tuple& key) const {
        std::shared_lock lock(mu_);
        auto it = ind_store_.at(node_id).counters.find(key);
        return it == ind_store_.at(node_id).counters.end() ? 0 : it->second;
    }

    OpCounters counters() const {
        std::shared_lock lock(mu_);
        return counters_;
    }
    void reset_counters() {
        std::unique_lock lock(mu_);
        counters_.reset();
    }

    // Total stored view entries, weighting relational payloads by their inner
    // size; the memory proxy reported by the metrics.
    size_t total_view_entries() const {
        std::shared_lock lock(mu_);
        size_t total = 0;
        for (const auto& [id, st] : view_store_)
            for (const auto& [t, p] : st.rel.data()) total += std::max<size_t>(1, ring_.payload_weight(p));
        return total;
    }

    std::map<std::string, size_t> view_entry_counts() const {
        std::shared_lock lock(mu_);
        std::map<std::string, size_t> out;
        for (const auto& [id, st] : view_store_) out[plan_.tree.name_of(id)] = st.rel.size();
        return out;
    }

    // Test hook: observes every propagated delta (node id, delta content).
    void set_delta_trace(std::function<void(int, const Rel&)> f) { trace_ = std::move(f); }

    // Recomputes the given delta's effect per rank term through the listing
    // path; exposed for the factorized-vs-listing equivalence checks.
    static Rel expand_factorized(const Delta& d, const Schema& schema, const Ring& ring) {
        Rel out(schema);
        for (const auto& term : d.terms) {
            Rel acc = term.factors.front();
            for (size_t i = 1; i < term.factors.size(); ++i)
                acc = rel_join(acc, term.factors[i], ring);
            if (acc.schema() != schema)
                throw BadFactorization("factor schemas do not cover the relation schema");
            for (const auto& [t, p] : acc.data()) out.accumulate(t, p, ring);
        }
        return out;
    }

private:
    struct IndState {
        std::unordered_map<Tuple, long long, TupleHash> counters;
        Stored<P> store;
    };

    bool is_stored_view(int id) const {
        if (plan_.materialized.count(id)) return true;
        if (plan_.options.factorized_payloads) {
            // Enumeration walks the whole payload hierarchy.
            NodeKind k = plan_.tree.node(id).kind;
            return k == NodeKind::Variable || k == NodeKind::SuperRoot;
        }
        return false;
    }

    const Rel* stored_content(int node_id) const {
        const ViewNode& n = plan_.tree.node(node_id);
        switch (n.kind) {
            case NodeKind::Leaf: return &atom_store_[static_cast<size_t>(n.atom)].rel;
            case NodeKind::Indicator: return &ind_store_.at(node_id).store.rel;
            default: {
                auto it = view_store_.find(node_id);
                return it == view_store_.end() ? nullptr : &it->second.rel;
            }
        }
    }

    Stored<P>& stored_of(int node_id) {
        const ViewNode& n = plan_.tree.node(node_id);
        switch (n.kind) {
            case NodeKind::Leaf: return atom_store_[static_cast<size_t>(n.atom)];
            case NodeKind::Indicator: return ind_store_.at(node_id).store;
            default: return view_store_.at(node_id);
        }
    }

    void register_index(const ReadSite& site) {
        const ViewNode& n = plan_.tree.node(site.node);
        if ((n.kind == NodeKind::Variable || n.kind == NodeKind::SuperRoot) &&
            !view_store_.count(site.node))
            throw Error("delta path reads unmaterialized view " + plan_.tree.name_of(site.node));
        Stored<P>& st = stored_of(site.node);
        // A probe by the full key uses the primary map directly.
        if (site.probe.size() == st.rel.schema().size()) return;
        st.add_index(site.probe);
    }

    void rebuild_indicators() {
        for (auto& [id, ind] : ind_store_) {
            const ViewNode& n = plan_.tree.node(id);
            const Rel& src = atom_store_[static_cast<size_t>(n.atom)].rel;
            std::vector<int> pos =
                projection_positions(src.schema(), src.schema().project(n.proj_vars));
            ind.counters.clear();
            ind.store.init(src.schema().project(n.proj_vars));
            for (const auto& [t, p] : src.data()) {
                Tuple key = project_tuple(t, pos);
                if (++ind.counters[key] == 1) ind.store.rel.insert_unchecked(key, ring_.one());
            }
        }
    }

    Rel eval_node(const ViewNode& n, const std::map<int, Rel>& cache) {
        auto content_of = [&](int id) -> const Rel& {
            const ViewNode& c = plan_.tree.node(id);
            if (c.kind == NodeKind::Leaf) return atom_store_[static_cast<size_t>(c.atom)].rel;
            if (c.kind == NodeKind::Indicator) return ind_store_.at(id).store.rel;
            return cache.at(id);
        };
        auto inputs = plan_.tree.inputs(n.id);
        Rel acc = content_of(inputs.front());
        for (size_t i = 1; i < inputs.size(); ++i)
            acc = rel_join(acc, content_of(inputs[i]), ring_);
        acc = apply_marginalize(n, std::move(acc));
        return apply_payload_keep(n.id, std::move(acc));
    }

    Rel apply_marginalize(const ViewNode& n, Rel r) {
        if (n.marg_vars.empty()) return r;
        std::vector<Lift<P>> ls;
        for (VarId v : n.marg_vars) ls.push_back(lifts_.at(v));
        return marginalize_many(r, n.marg_vars, ls, ring_);
    }

    Rel apply_payload_keep(int node_id, Rel r) {
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

    bool apply_one(const Delta& d, BatchSummary& summary, UndoLog* undo) {
        auto atoms_it = atoms_by_name_.find(d.relation);
        if (atoms_it == atoms_by_name_.end())
            throw UnknownRelation("relation '" + d.relation + "' is not in the query");
        if (!plan_.updatable.count(d.relation))
            throw NotUpdatable("relation '" + d.relation + "' is not declared updatable");

        const Schema atom_schema =
            plan_.query.atoms[static_cast<size_t>(atoms_it->second.front())].schema();
        if (d.is_factorized()) validate_partition(d, atom_schema);
        Rel listing = d.is_factorized() ? expand_factorized(d, atom_schema, ring_)
                                        : d.listing;
        if (listing.schema() != atom_schema)
            throw SchemaMismatch("update to '" + d.relation + "' has schema " +
                                 listing.schema().to_string() + ", expected " +
                                 atom_schema.to_string());
        summary.tuples += listing.size();
        if (listing.empty()) return false;

        bool use_factorized_path =
            d.is_factorized() && !plan_.options.factorized_payloads;

        bool root_changed = false;
        for (int atom : atoms_it->second) {
            auto ind_deltas = update_atom_content(atom, listing, undo);
            const DeltaPath& path = plan_.atom_paths[static_cast<size_t>(atom)];
            if (use_factorized_path)
                root_changed |= propagate_factorized(path, d.terms, undo);
            else
                root_changed |= propagate_listing(path, listing, undo);
            for (auto& [ind_node, idelta] : ind_deltas) {
                const DeltaPath* ipath = nullptr;
                for (size_t i = 0; i < plan_.indicator_nodes.size(); ++i)
                    if (plan_.indicator_nodes[i] == ind_node)
                        ipath = &plan_.indicator_paths[i];
                root_changed |= propagate_listing(*ipath, idelta, undo);
            }
        }
        return root_changed;
    }

    void validate_partition(const Delta& d, const Schema& schema) const {
        for (const auto& term : d.terms) {
            if (term.factors.empty())
                throw BadFactorization("rank term has no factors");
            std::set<VarId> seen;
            size_t total = 0;
            for (const auto& f : term.factors) {
                for (VarId v : f.schema().vars()) {
                    if (!schema.contains(v) || seen.count(v))
                        throw BadFactorization(
                            "factor schemas do not partition the relation schema");
                    seen.insert(v);
                    ++total;
                }
            }
            if (total != schema.size())
                throw BadFactorization("factor schemas do not partition the relation schema");
        }
    }

    // Applies the listing to the atom's stored relation, maintaining the
    // indicator counters; returns the emitted indicator deltas in ascending
    // indicator order.
    std::vector<std::pair<int, Rel>> update_atom_content(int atom, const Rel& listing,
                                                         UndoLog* undo) {
        Stored<P>& st = atom_store_[static_cast<size_t>(atom)];
        struct IndRef {
            int node;
            IndState* state;
            std::vector<int> pos;
            Rel delta;
        };
        std::vector<IndRef> inds;
        for (int id : plan_.indicator_nodes) {
            const ViewNode& n = plan_.tree.node(id);
            if (n.atom != atom) continue;
            IndRef ref;
            ref.node = id;
            ref.state = &ind_store_.at(id);
            ref.pos = projection_positions(st.rel.schema(),
                                           st.rel.schema().project(n.proj_vars));
            ref.delta = Rel(st.rel.schema().project(n.proj_vars));
            inds.push_back(std::move(ref));
        }

        for (const auto& [t, p] : listing.data()) {
            bool was = st.rel.raw().count(t) > 0;
            st.put(t, p, ring_, undo);
            bool now = st.rel.raw().count(t) > 0;
            if (was == now) continue;
            for (auto& ind : inds) {
                Tuple key = project_tuple(t, ind.pos);
                long long& c = ind.state->counters[key];
                if (undo) {
                    long long old = c;
                    auto* counters = &ind.state->counters;
                    undo->record([counters, key, old]() {
                        if (old == 0)
                            counters->erase(key);
                        else
                            (*counters)[key] = old;
                    });
                }
                if (now) {
                    if (++c == 1) ind.delta.accumulate(key, ring_.one(), ring_);
                } else {
                    if (c == 0)
                        throw CounterUnderflow("indicator counter below zero for key " +
                                               key.to_string());
                    if (--c == 0) {
                        ind.delta.accumulate(key, ring_.negate(ring_.one()), ring_);
                        ind.state->counters.erase(key);
                    }
                }
            }
        }

        std::vector<std::pair<int, Rel>> out;
        for (auto& ind : inds) {
            if (ind.delta.empty()) continue;
            for (const auto& [t, p] : ind.delta.data()) ind.state->store.put(t, p, ring_, undo);
            out.emplace_back(ind.node, std::move(ind.delta));
        }
        return out;
    }

    // --- listing propagation ------------------------------------------------

    Rel join_sibling(const Rel& delta, int sibling_node, bool sibling_left) {
        const ViewNode& sn = plan_.tree.node(sibling_node);
        if ((sn.kind == NodeKind::Variable || sn.kind == NodeKind::SuperRoot) &&
            !view_store_.count(sibling_node))
            throw Error("delta path reads unmaterialized view " +
                        plan_.tree.name_of(sibling_node));
        Stored<P>& sib = stored_of(sibling_node);
        const Rel& srel = sib.rel;
        auto layout = detail::join_layout(delta.schema(), srel.schema());
        std::vector<VarId> shared;
        for (int pos : layout.shared_left)
            shared.push_back(delta.schema().cols()[static_cast<size_t>(pos)].var);

        Rel out(layout.out_schema);
        bool full_key = shared.size() == srel.schema().size();
        for (const auto& [t, p] : delta.data()) {
            Tuple probe_key = project_tuple(t, layout.shared_left);
            if (full_key) {
                const P* q = srel.find(probe_key);
                if (!q) continue;
                opcount::mult();
                out.accumulate(detail::merge_tuples(t, Tuple{}, layout.out_from),
                               sibling_left ? ring_.mul(*q, p) : ring_.mul(p, *q), ring_);
                continue;
            }
            const auto* group = sib.probe(shared, probe_key);
            if (group) {
                for (const Tuple& k : *group) {
                    const P& q = srel.data().at(k);
                    opcount::touch();
                    opcount::mult();
                    out.accumulate(detail::merge_tuples(t, k, layout.out_from),
                                   sibling_left ? ring_.mul(q, p) : ring_.mul(p, q), ring_);
                }
                continue;
            }
            // No registered index: fall back to a scan.
            for (const auto& [k, q] : srel.data()) {
                if (project_tuple(k, layout.shared_right) != probe_key) continue;
                opcount::touch();
                opcount::mult();
                out.accumulate(detail::merge_tuples(t, k, layout.out_from),
                               sibling_left ? ring_.mul(q, p) : ring_.mul(p, q), ring_);
            }
        }
        return out;
    }

    bool propagate_listing(const DeltaPath& path, Rel delta, UndoLog* undo) {
        bool root_changed = false;
        for (const auto& step : path.steps) {
            if (delta.empty()) return root_changed;
            const ViewNode& n = plan_.tree.node(step.node);
            auto inputs = plan_.tree.inputs(step.node);
            for (int i = step.changed_pos - 1; i >= 0; --i)
                delta = join_sibling(delta, inputs[static_cast<size_t>(i)], true);
            for (int i = step.changed_pos + 1; i < static_cast<int>(inputs.size()); ++i)
                delta = join_sibling(delta, inputs[static_cast<size_t>(i)], false);
            delta = apply_marginalize(n, std::move(delta));
            delta = apply_payload_keep(step.node, std::move(delta));
            if (trace_) trace_(step.node, delta);
            if (is_stored_view(step.node) && !delta.empty()) {
                Stored<P>& st = view_store_.at(step.node);
                for (const auto& [t, p] : delta.data()) st.put(t, p, ring_, undo);
                if (step.node == plan_.tree.root) root_changed = true;
            }
        }
        return root_changed;
    }

    // --- factorized propagation ----------------------------------------------

    struct Item {
        std::shared_ptr<const Rel> own;
        const Rel* ref = nullptr;
        const Rel& get() const { return own ? *own : *ref; }
    };
    struct Group {
        std::vector<Item> items;
        Schema schema;
    };

    static Group make_group(Item item) {
        Group g;
        g.schema = item.get().schema();
        g.items.push_back(std::move(item));
        return g;
    }

    Rel eval_group(const Group& g) {
        Rel acc = g.items.front().get();
        for (size_t i = 1; i < g.items.size(); ++i)
            acc = rel_join(acc, g.items[i].get(), ring_);
        return acc;
    }

    bool propagate_factorized(const DeltaPath& path,
                              const std::vector<typename Delta::RankTerm>& terms,
                              UndoLog* undo) {
        bool root_changed = false;
        for (const auto& term : terms) {
            std::vector<Group> groups;
            for (const auto& f : term.factors)
                groups.push_back(make_group(Item{std::make_shared<Rel>(f), nullptr}));

            for (const auto& step : path.steps) {
                const ViewNode& n = plan_.tree.node(step.node);
                auto inputs = plan_.tree.inputs(step.node);
                std::vector<Group> next;
                for (int i = 0; i < step.changed_pos; ++i)
                    next.push_back(make_group(sibling_item(inputs[static_cast<size_t>(i)])));
                for (auto& g : groups) next.push_back(std::move(g));
                for (int i = step.changed_pos + 1; i < static_cast<int>(inputs.size()); ++i)
                    next.push_back(make_group(sibling_item(inputs[static_cast<size_t>(i)])));
                groups = std::move(next);

                for (VarId x : n.marg_vars) marginalize_groups(groups, x);

                if (is_stored_view(step.node) || trace_) {
                    Rel concrete = materialize_groups(groups);
                    if (concrete.schema() != keys_schema_of(step.node))
                        throw Error("factorized delta schema mismatch at " +
                                    plan_.tree.name_of(step.node));
                    if (trace_) trace_(step.node, concrete);
                    if (is_stored_view(step.node) && !concrete.empty()) {
                        Stored<P>& st = view_store_.at(step.node);
                        for (const auto& [t, p] : concrete.data()) st.put(t, p, ring_, undo);
                        if (step.node == plan_.tree.root) root_changed = true;
                    }
                }
            }
        }
        return root_changed;
    }

    Item sibling_item(int node_id) {
        const ViewNode& n = plan_.tree.node(node_id);
        if ((n.kind == NodeKind::Variable || n.kind == NodeKind::SuperRoot) &&
            !view_store_.count(node_id))
            throw Error("delta path reads unmaterialized view " + plan_.tree.name_of(node_id));
        Item item;
        item.ref = stored_content(node_id);
        return item;
    }

    void marginalize_groups(std::vector<Group>& groups, VarId x) {
        std::vector<size_t> hit;
        for (size_t i = 0; i < groups.size(); ++i)
            if (groups[i].schema.contains(x)) hit.push_back(i);
        if (hit.empty()) return;
        Group merged;
        for (size_t i : hit)
            for (auto& item : groups[i].items) merged.items.push_back(std::move(item));
        Rel folded = eval_group(merged);
        std::vector<Lift<P>> ls{lifts_.at(x)};
        Rel result = marginalize(folded, x, ls.front(), ring_);
        Group out = make_group(Item{std::make_shared<Rel>(std::move(result)), nullptr});
        std::vector<Group> next;
        for (size_t i = 0; i < groups.size(); ++i) {
            if (i == hit.front()) {
                next.push_back(std::move(out));
            } else if (std::find(hit.begin(), hit.end(), i) == hit.end()) {
                next.push_back(std::move(groups[i]));
            }
        }
        groups = std::move(next);
    }

    Rel materialize_groups(std::vector<Group>& groups) {
        Rel acc = eval_group(groups.front());
        for (size_t i = 1; i < groups.size(); ++i)
            acc = rel_join(acc, eval_group(groups[i]), ring_);
        return acc;
    }

    Schema keys_schema_of(int node_id) const {
        return plan_.tree.node(node_id).keys_schema(plan_.query);
    }

    Plan plan_;
    Ring ring_;
    std::map<VarId, Lift<P>> lifts_;
    std::map<std::string, std::vector<int>> atoms_by_name_;
    std::vector<Stored<P>> atom_store_;
    std::map<int, Stored<P>> view_store_;
    std::map<int, IndState> ind_store_;
    OpCounters counters_;
    std::function<void(int, const Rel&)> trace_;
    mutable std::shared_mutex mu_;
};

} // namespace ringview
