#pragma once

#include <string>
#include <vector>

#include "ringview/operators.hpp"
#include "ringview/relation.hpp"
#include "ringview/rings/scalar.hpp"

namespace ringview {

// Payloads of the relational data ring are themselves relations with integer
// multiplicities, reusing the core Relation type.
using RelationalPayload = Relation<long long>;

// Every empty inner relation is the additive zero, whatever schema it ended
// up with; payload equality works in that quotient.
inline bool relational_payload_equal(const RelationalPayload& a, const RelationalPayload& b) {
    if (a.empty() && b.empty()) return true;
    return relation_equal(a, b, [](long long x, long long y) { return x == y; });
}

// Addition is union, multiplication is natural join; the zero is the empty
// relation, the identity maps the empty tuple to 1. Union of two non-empty
// payloads over different schemas is rejected (the generalized structure the
// full ring would need is out of scope here; tests document the gap).
class RelationalRing {
public:
    using Payload = RelationalPayload;

    Payload zero() const { return Payload(Schema{}); }
    Payload one() const {
        Payload p((Schema{}));
        p.insert_unchecked(Tuple{}, 1);
        return p;
    }

    Payload lift_value(VarId v, Kind kind, const Value& x, bool free) const {
        if (!free) return one();
        Payload p(Schema::of({Column{v, kind}}));
        p.insert_unchecked(Tuple{{x}}, 1);
        return p;
    }

    Payload add(const Payload& a, const Payload& b) const {
        if (a.empty()) return b;
        if (b.empty()) return a;
        return rel_union(a, b, inner_);
    }

    Payload mul(const Payload& a, const Payload& b) const {
        if (a.empty() || b.empty()) return zero();
        return rel_join(a, b, inner_);
    }

    Payload negate(const Payload& a) const { return rel_negate(a, inner_); }

    bool is_zero(const Payload& a) const { return a.empty(); }

    // Projects the inner relation onto `keep`, summing multiplicities; used by
    // the factorized-payload mode so each view carries only the values of the
    // variable marginalized at that view.
    Payload project_payload(const Payload& p, const std::vector<VarId>& keep) const {
        if (p.empty()) return p;
        std::vector<VarId> present;
        for (VarId v : keep)
            if (p.schema().contains(v)) present.push_back(v);
        Schema out_schema = p.schema().project(present);
        if (out_schema == p.schema()) return p;
        std::vector<int> pos = projection_positions(p.schema(), out_schema);
        Payload out(out_schema);
        for (const auto& [t, m] : p.data()) out.accumulate(project_tuple(t, pos), m, inner_);
        return out;
    }

    // Bracketed tuple list sorted by key: [(v,...)*k;(v,...)*k;...].
    std::string encode(const Payload& p) const {
        std::string out = "[";
        bool first = true;
        for (const auto& [t, m] : p.sorted_entries()) {
            if (!first) out += ';';
            first = false;
            out += t.to_string();
            out += '*';
            out += std::to_string(m);
        }
        return out + "]";
    }

    size_t payload_weight(const Payload& p) const { return p.size(); }

    const CountRing& inner() const { return inner_; }

private:
    CountRing inner_;
};

} // namespace ringview
