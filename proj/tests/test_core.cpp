#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ringview/operators.hpp"
#include "ringview/relation.hpp"
#include "ringview/rings/scalar.hpp"

using namespace ringview;

namespace {

Schema schema2(const char* a, Kind ka, const char* b, Kind kb) {
    return Schema::of({{var(a), ka}, {var(b), kb}});
}

Tuple t_str(std::initializer_list<const char*> vals) {
    Tuple t;
    for (const char* v : vals) t.vals.push_back(Value::of_str(v));
    return t;
}

Relation<long long> rel_of(const Schema& s,
                           std::initializer_list<std::pair<Tuple, long long>> entries) {
    Relation<long long> r(s);
    CountRing ring;
    for (const auto& [t, p] : entries) r.accumulate(t, p, ring);
    return r;
}

const CountRing kCount;

bool eq(const Relation<long long>& a, const Relation<long long>& b) {
    return relation_equal(a, b, [](long long x, long long y) { return x == y; });
}

} // namespace

TEST_CASE("values compare within a kind and reject cross-kind order") {
    Value a = Value::of_int(3), b = Value::of_int(5);
    CHECK(value_less(a, b));
    CHECK_FALSE(value_less(b, a));
    CHECK(Value::of_str("x") == Value::of_str("x"));
    CHECK(Value::of_str("x") != Value::of_str("y"));
    CHECK(Value::of_int(1) != Value::of_float(1.0));
    CHECK_THROWS_AS(value_less(Value::of_int(1), Value::of_float(1.0)), SchemaMismatch);
}

TEST_CASE("schema keeps canonical variable order") {
    Schema s = Schema::of({{var("C"), Kind::Str}, {var("A"), Kind::Str}, {var("B"), Kind::Str}});
    CHECK(s.cols()[0].var == var("A"));
    CHECK(s.cols()[1].var == var("B"));
    CHECK(s.cols()[2].var == var("C"));
    CHECK_THROWS_AS(Schema::of({{var("A"), Kind::Str}, {var("A"), Kind::Int64}}), SchemaMismatch);

    Schema ab = schema2("A", Kind::Str, "B", Kind::Str);
    Schema bc = schema2("B", Kind::Str, "C", Kind::Str);
    Schema abc = ab.union_with(bc);
    CHECK(abc.size() == 3);
    CHECK(abc.to_string() == "(A,B,C)");
    CHECK_THROWS_AS(ab.union_with(schema2("B", Kind::Int64, "D", Kind::Str)), SchemaMismatch);
}

TEST_CASE("union adds payloads and removes cancelled entries") {
    Schema ab = schema2("A", Kind::Str, "B", Kind::Str);
    auto r1 = rel_of(ab, {{t_str({"a1", "b1"}), 1}});
    auto r2 = rel_of(ab, {{t_str({"a1", "b1"}), 2}});
    auto r3 = rel_of(ab, {{t_str({"a1", "b1"}), -1}});

    auto sum = rel_union(r1, r2, kCount);
    REQUIRE(sum.size() == 1);
    CHECK(*sum.find(t_str({"a1", "b1"})) == 3);

    auto gone = rel_union(r1, r3, kCount);
    CHECK(gone.empty());

    // Union of overlapping relations keeps distinct keys apart.
    auto r4 = rel_of(ab, {{t_str({"a1", "b1"}), 1}, {t_str({"a2", "b1"}), 1}});
    auto r5 = rel_of(ab, {{t_str({"a2", "b1"}), 1}, {t_str({"a3", "b2"}), 1}});
    auto u = rel_union(r4, r5, kCount);
    REQUIRE(u.size() == 3);
    CHECK(*u.find(t_str({"a1", "b1"})) == 1);
    CHECK(*u.find(t_str({"a2", "b1"})) == 2);
    CHECK(*u.find(t_str({"a3", "b2"})) == 1);

    CHECK_THROWS_AS(rel_union(r1, rel_of(schema2("A", Kind::Str, "C", Kind::Str), {}), kCount),
                    SchemaMismatch);
}

TEST_CASE("join multiplies matching payloads over the union schema") {
    Schema c = Schema::of({{var("C"), Kind::Str}});
    Schema ac = schema2("A", Kind::Str, "C", Kind::Str);
    auto vt = rel_of(c, {{t_str({"c1"}), 1}, {t_str({"c2"}), 2}, {t_str({"c3"}), 1}});
    auto vs = rel_of(ac, {{t_str({"a1", "c1"}), 2}, {t_str({"a1", "c2"}), 1},
                          {t_str({"a2", "c2"}), 1}});

    auto j = rel_join(vt, vs, kCount);
    REQUIRE(j.size() == 3);
    CHECK(*j.find(t_str({"a1", "c1"})) == 2);
    CHECK(*j.find(t_str({"a1", "c2"})) == 2);
    CHECK(*j.find(t_str({"a2", "c2"})) == 2);

    auto empty = Relation<long long>(ac);
    CHECK(rel_join(vt, empty, kCount).empty());

    // Disjoint schemas produce the product of singletons.
    auto ra = rel_of(Schema::of({{var("A"), Kind::Str}}), {{t_str({"a1"}), 2}});
    auto rb = rel_of(Schema::of({{var("B"), Kind::Str}}), {{t_str({"b1"}), 3}});
    auto prod = rel_join(ra, rb, kCount);
    REQUIRE(prod.size() == 1);
    CHECK(*prod.find(t_str({"a1", "b1"})) == 6);
}

TEST_CASE("marginalize aggregates with the lifted value on the right") {
    Schema cd = schema2("C", Kind::Str, "D", Kind::Str);
    auto t = rel_of(cd, {{t_str({"c1", "d1"}), 1},
                         {t_str({"c2", "d2"}), 1},
                         {t_str({"c2", "d3"}), 1},
                         {t_str({"c3", "d4"}), 1}});
    auto lift_one = constant_lift<long long>(1);
    auto m = marginalize(t, var("D"), lift_one, kCount);
    REQUIRE(m.size() == 3);
    CHECK(*m.find(t_str({"c1"})) == 1);
    CHECK(*m.find(t_str({"c2"})) == 2);
    CHECK(*m.find(t_str({"c3"})) == 1);

    CHECK(marginalize(Relation<long long>(cd), var("D"), lift_one, kCount).empty());
    CHECK_THROWS_AS(marginalize(t, var("Z"), lift_one, kCount), UnknownVariable);
}

TEST_CASE("marginalize_many equals sequential marginalization") {
    Schema ace = Schema::of({{var("A"), Kind::Str}, {var("C"), Kind::Str}, {var("E"), Kind::Str}});
    auto s = rel_of(ace, {{t_str({"a1", "c1", "e1"}), 1},
                          {t_str({"a1", "c1", "e2"}), 1},
                          {t_str({"a1", "c2", "e3"}), 1},
                          {t_str({"a2", "c2", "e4"}), 1}});
    auto lift_one = constant_lift<long long>(1);

    auto single = marginalize_many(s, {var("E")}, {lift_one}, kCount);
    CHECK(eq(single, marginalize(s, var("E"), lift_one, kCount)));

    auto both = marginalize_many(s, {var("C"), var("E")}, {lift_one, lift_one}, kCount);
    REQUIRE(both.size() == 2);
    CHECK(*both.find(t_str({"a1"})) == 3);
    CHECK(*both.find(t_str({"a2"})) == 1);

    auto seq = marginalize(marginalize(s, var("C"), lift_one, kCount), var("E"), lift_one, kCount);
    CHECK(eq(both, seq));

    auto swapped = marginalize_many(s, {var("E"), var("C")}, {lift_one, lift_one}, kCount);
    CHECK(eq(both, swapped));
}

TEST_CASE("indicator projection keeps distinct keys with payload one") {
    Schema ab = schema2("A", Kind::Str, "B", Kind::Str);
    auto r = rel_of(ab, {{t_str({"a1", "b1"}), 4},
                         {t_str({"a1", "b2"}), 7},
                         {t_str({"a2", "b3"}), 9}});
    auto q = indicator_project(r, {var("A")}, kCount);
    REQUIRE(q.size() == 2);
    CHECK(*q.find(t_str({"a1"})) == 1);
    CHECK(*q.find(t_str({"a2"})) == 1);

    auto full = indicator_project(r, {var("A"), var("B")}, kCount);
    CHECK(full.size() == 3);

    auto none = indicator_project(r, {}, kCount);
    REQUIRE(none.size() == 1);
    CHECK(*none.find(Tuple{}) == 1);

    CHECK_THROWS_AS(indicator_project(r, {var("Z")}, kCount), UnknownVariable);
}

namespace {

// Random relation over up to three string variables with small domains.
Relation<long long> random_relation(std::mt19937& rng, const Schema& s, int max_entries) {
    Relation<long long> r(s);
    std::uniform_int_distribution<int> count_dist(0, max_entries);
    std::uniform_int_distribution<int> val_dist(1, 5);
    std::uniform_int_distribution<int> pay_dist(-4, 4);
    int n = count_dist(rng);
    for (int i = 0; i < n; ++i) {
        Tuple t;
        for (size_t c = 0; c < s.size(); ++c)
            t.vals.push_back(Value::of_str("v" + std::to_string(val_dist(rng))));
        r.accumulate(t, pay_dist(rng), kCount);
    }
    return r;
}

} // namespace

TEST_CASE("operator algebra on random relations") {
    std::mt19937 rng(7);
    Schema ab = schema2("A", Kind::Str, "B", Kind::Str);
    Schema bc = schema2("B", Kind::Str, "C", Kind::Str);
    auto lift_one = constant_lift<long long>(1);

    for (int it = 0; it < 200; ++it) {
        auto r1 = random_relation(rng, ab, 50);
        auto r2 = random_relation(rng, ab, 50);
        auto r3 = random_relation(rng, ab, 50);
        auto s1 = random_relation(rng, bc, 50);

        // union commutative + associative
        CHECK(eq(rel_union(r1, r2, kCount), rel_union(r2, r1, kCount)));
        CHECK(eq(rel_union(rel_union(r1, r2, kCount), r3, kCount),
                 rel_union(r1, rel_union(r2, r3, kCount), kCount)));

        // join distributes over union
        CHECK(eq(rel_join(rel_union(r1, r2, kCount), s1, kCount),
                 rel_union(rel_join(r1, s1, kCount), rel_join(r2, s1, kCount), kCount)));

        // marginalization commutes with union
        CHECK(eq(marginalize(rel_union(r1, r2, kCount), var("A"), lift_one, kCount),
                 rel_union(marginalize(r1, var("A"), lift_one, kCount),
                           marginalize(r2, var("A"), lift_one, kCount), kCount)));
    }
}

TEST_CASE("no stored payload is zero after any operator") {
    std::mt19937 rng(11);
    Schema ab = schema2("A", Kind::Str, "B", Kind::Str);
    for (int it = 0; it < 100; ++it) {
        auto r1 = random_relation(rng, ab, 30);
        auto r2 = random_relation(rng, ab, 30);
        for (const auto& [t, p] : rel_union(r1, r2, kCount).data()) CHECK(p != 0);
        for (const auto& [t, p] : rel_join(r1, r2, kCount).data()) CHECK(p != 0);
    }
}

TEST_CASE("serialization is deterministic") {
    std::mt19937 rng(13);
    Schema ab = schema2("A", Kind::Str, "B", Kind::Str);
    auto r = random_relation(rng, ab, 40);
    auto snap1 = r.sorted_entries();
    auto snap2 = r.sorted_entries();
    REQUIRE(snap1.size() == snap2.size());
    for (size_t i = 0; i < snap1.size(); ++i) {
        CHECK(snap1[i].first == snap2[i].first);
        CHECK(snap1[i].second == snap2[i].second);
    }
}
