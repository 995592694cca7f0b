#pragma once

#include <algorithm>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ringview/opcount.hpp"
#include "ringview/schema.hpp"

namespace ringview {

// Finite map from key tuples to non-zero ring payloads. Entries with zero
// payloads are never stored; every mutation path re-normalizes. Iteration
// order is unspecified; sorted_entries() gives the deterministic view used
// for serialization and golden tests.
template <typename P>
class Relation {
public:
    using Map = std::unordered_map<Tuple, P, TupleHash>;

    Relation() = default;
    explicit Relation(Schema s) : schema_(std::move(s)) {}

    const Schema& schema() const { return schema_; }
    const Map& data() const { return data_; }
    size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    const P* find(const Tuple& t) const {
        auto it = data_.find(t);
        if (it == data_.end()) return nullptr;
        opcount::touch();
        return &it->second;
    }

    // Adds `p` into the payload at `t`, erasing the entry if the sum is zero.
    template <typename Ring>
    void accumulate(const Tuple& t, const P& p, const Ring& ring) {
        if (ring.is_zero(p)) return;
        auto it = data_.find(t);
        opcount::touch();
        if (it == data_.end()) {
            data_.emplace(t, p);
            return;
        }
        opcount::add();
        it->second = ring.add(it->second, p);
        if (ring.is_zero(it->second)) data_.erase(it);
    }

    // Inserts a fresh entry; the payload must be non-zero and the key absent.
    void insert_unchecked(Tuple t, P p) { data_.emplace(std::move(t), std::move(p)); }

    void clear() { data_.clear(); }

    std::vector<std::pair<Tuple, P>> sorted_entries() const {
        std::vector<std::pair<Tuple, P>> out(data_.begin(), data_.end());
        std::sort(out.begin(), out.end(),
                  [](const auto& a, const auto& b) { return tuple_less(a.first, b.first); });
        return out;
    }

    Map& raw() { return data_; }

private:
    Schema schema_;
    Map data_;
};

// Structural equality with a payload predicate (exact or tolerance-based).
template <typename P, typename Eq>
bool relation_equal(const Relation<P>& a, const Relation<P>& b, Eq eq) {
    if (a.schema() != b.schema() || a.size() != b.size()) return false;
    for (const auto& [t, p] : a.data()) {
        auto it = b.data().find(t);
        if (it == b.data().end() || !eq(p, it->second)) return false;
    }
    return true;
}

} // namespace ringview
