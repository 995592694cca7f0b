#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ringview/operators.hpp"
#include "ringview/rings/cofactor.hpp"
#include "ringview/rings/relational.hpp"
#include "ringview/rings/scalar.hpp"

using namespace ringview;

namespace {

// Definition-level ring axioms on random payload triples.
template <typename Ring, typename Gen, typename Eq>
void check_ring_axioms(const Ring& ring, Gen gen, Eq eq, int iters) {
    std::mt19937 rng(42);
    for (int i = 0; i < iters; ++i) {
        auto a = gen(rng), b = gen(rng), c = gen(rng);
        CHECK(eq(ring.add(a, b), ring.add(b, a)));
        CHECK(eq(ring.add(ring.add(a, b), c), ring.add(a, ring.add(b, c))));
        CHECK(eq(ring.add(a, ring.zero()), a));
        CHECK(ring.is_zero(ring.add(a, ring.negate(a))));
        CHECK(eq(ring.mul(ring.mul(a, b), c), ring.mul(a, ring.mul(b, c))));
        CHECK(eq(ring.mul(a, ring.one()), a));
        CHECK(eq(ring.mul(ring.one(), a), a));
        CHECK(eq(ring.mul(a, ring.add(b, c)), ring.add(ring.mul(a, b), ring.mul(a, c))));
        CHECK(eq(ring.mul(ring.add(a, b), c), ring.add(ring.mul(a, c), ring.mul(b, c))));
    }
}

CofactorPayload random_cof(std::mt19937& rng, uint32_t m) {
    std::uniform_int_distribution<int> cnt(-3, 3);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    std::uniform_int_distribution<int> coin(0, 1);
    CofactorPayload p;
    p.count = cnt(rng);
    for (uint32_t j = 0; j < m; ++j)
        if (coin(rng)) p.vars.push_back(j);
    size_t k = p.vars.size();
    p.s.resize(k);
    for (auto& v : p.s) v = val(rng);
    p.q.assign(CofactorPayload::tri_size(k), 0.0);
    for (auto& v : p.q) v = val(rng);
    return p;
}

const uint32_t kM = 5;

} // namespace

TEST_CASE("count ring satisfies the ring axioms") {
    CountRing ring;
    std::uniform_int_distribution<long long> dist(-50, 50);
    check_ring_axioms(
        ring, [&](std::mt19937& rng) { return dist(rng); },
        [](long long a, long long b) { return a == b; }, 1000);
}

TEST_CASE("numeric ring satisfies the ring axioms within 1e-9") {
    NumericRing ring;
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    check_ring_axioms(
        ring, [&](std::mt19937& rng) { return dist(rng); },
        [](double a, double b) { return std::fabs(a - b) <= 1e-9; }, 1000);
}

TEST_CASE("degree-m ring satisfies the ring axioms within 1e-9") {
    CofactorRing ring(kM);
    check_ring_axioms(
        ring, [&](std::mt19937& rng) { return random_cof(rng, kM); },
        [&](const CofactorPayload& a, const CofactorPayload& b) {
            return CofactorRing::approx_equal(a, b, kM, 1e-9);
        },
        1000);
}

TEST_CASE("degree-m multiplication is commutative") {
    CofactorRing ring(kM);
    std::mt19937 rng(3);
    for (int i = 0; i < 1000; ++i) {
        auto a = random_cof(rng, kM), b = random_cof(rng, kM);
        CHECK(CofactorRing::approx_equal(ring.mul(a, b), ring.mul(b, a), kM, 1e-9));
    }
}

TEST_CASE("degree-m add matches the per-component sums") {
    CofactorRing ring(kM);
    // Two lifted D-values merging into one key: counts add, sums add, squares add.
    double d2 = 3.0, d3 = 5.0;
    auto p = ring.add(ring.lift(3, Value::of_float(d2)), ring.lift(3, Value::of_float(d3)));
    CHECK(p.count == 2);
    CHECK(p.sum_at(3) == d2 + d3);
    CHECK(p.quad_at(3, 3) == d2 * d2 + d3 * d3);
    CHECK(p.sum_at(0) == 0.0);

    std::mt19937 rng(5);
    auto a = random_cof(rng, kM);
    CHECK(CofactorRing::approx_equal(ring.add(a, ring.zero()), a, kM, 0.0));
}

TEST_CASE("degree-m product assembles scaled sums and outer products") {
    CofactorRing ring(kM);
    // Indices in canonical order: A=0, B=1, C=2, D=3, E=4.
    double c2 = 2.0, d2 = 3.0, d3 = 5.0, e4 = 7.0;
    auto vt = ring.add(ring.lift(3, Value::of_float(d2)), ring.lift(3, Value::of_float(d3)));
    auto vs = ring.lift(4, Value::of_float(e4));
    auto gc = ring.lift(2, Value::of_float(c2));
    auto p = ring.mul(ring.mul(vt, vs), gc);

    CHECK(p.count == 2);
    CHECK(p.sum_at(2) == Catch::Approx(2 * c2).margin(1e-9));
    CHECK(p.sum_at(3) == Catch::Approx(d2 + d3).margin(1e-9));
    CHECK(p.sum_at(4) == Catch::Approx(2 * e4).margin(1e-9));
    CHECK(p.quad_at(2, 2) == Catch::Approx(2 * c2 * c2).margin(1e-9));
    CHECK(p.quad_at(2, 3) == Catch::Approx(c2 * (d2 + d3)).margin(1e-9));
    CHECK(p.quad_at(2, 4) == Catch::Approx(2 * c2 * e4).margin(1e-9));
    CHECK(p.quad_at(3, 3) == Catch::Approx(d2 * d2 + d3 * d3).margin(1e-9));
    CHECK(p.quad_at(3, 4) == Catch::Approx((d2 + d3) * e4).margin(1e-9));
    CHECK(p.quad_at(4, 4) == Catch::Approx(2 * e4 * e4).margin(1e-9));
    CHECK(p.sum_at(0) == 0.0);
    CHECK(p.quad_at(0, 1) == 0.0);

    std::mt19937 rng(9);
    auto a = random_cof(rng, kM);
    CHECK(CofactorRing::approx_equal(ring.mul(a, ring.one()), a, kM, 0.0));
}

TEST_CASE("degree-m lift places the value and its square") {
    CofactorRing ring(kM);
    auto p = ring.lift(3, Value::of_float(4.5));
    CHECK(p.count == 1);
    CHECK(p.sum_at(3) == 4.5);
    CHECK(p.quad_at(3, 3) == 4.5 * 4.5);

    auto z = ring.lift(1, Value::of_int(0));
    CHECK(CofactorRing::approx_equal(z, ring.one(), kM, 0.0));

    CHECK_THROWS_AS(ring.lift(9, Value::of_float(1.0)), DegreeMismatch);
    CHECK_THROWS_AS(ring.lift(1, Value::of_str("x")), NonNumericValue);
}

TEST_CASE("summing lifted rows of one relation equals the naive MtM") {
    // Three rows over variables (X0, X1): payload of a row is the product of
    // its lifted column values; the sum over rows carries rowcount, column
    // sums, and MtM.
    CofactorRing ring(2);
    double rows[3][2] = {{1.0, 2.0}, {3.0, -1.0}, {0.5, 4.0}};
    CofactorPayload total = ring.zero();
    for (auto& row : rows)
        total = ring.add(total, ring.mul(ring.lift(0, Value::of_float(row[0])),
                                         ring.lift(1, Value::of_float(row[1]))));

    double s0 = 0, s1 = 0, q00 = 0, q01 = 0, q11 = 0;
    for (auto& row : rows) {
        s0 += row[0];
        s1 += row[1];
        q00 += row[0] * row[0];
        q01 += row[0] * row[1];
        q11 += row[1] * row[1];
    }
    CHECK(total.count == 3);
    CHECK(total.sum_at(0) == Catch::Approx(s0).margin(1e-9));
    CHECK(total.sum_at(1) == Catch::Approx(s1).margin(1e-9));
    CHECK(total.quad_at(0, 0) == Catch::Approx(q00).margin(1e-9));
    CHECK(total.quad_at(0, 1) == Catch::Approx(q01).margin(1e-9));
    CHECK(total.quad_at(1, 1) == Catch::Approx(q11).margin(1e-9));
}

TEST_CASE("degree-m encode/decode round-trips dense payloads") {
    CofactorRing ring(3);
    std::mt19937 rng(17);
    for (int i = 0; i < 50; ++i) {
        auto p = random_cof(rng, 3);
        auto q = ring.decode(ring.encode(p));
        CHECK(CofactorRing::approx_equal(p, q, 3, 1e-9));
    }
}

namespace {

RelationalPayload inner_rel(const Schema& s,
                            std::initializer_list<std::pair<Tuple, long long>> entries) {
    RelationalPayload p(s);
    CountRing count;
    for (const auto& [t, m] : entries) p.accumulate(t, m, count);
    return p;
}

Tuple ts(std::initializer_list<const char*> vals) {
    Tuple t;
    for (const char* v : vals) t.vals.push_back(Value::of_str(v));
    return t;
}

bool payload_eq(const RelationalPayload& a, const RelationalPayload& b) {
    return relational_payload_equal(a, b);
}

} // namespace

TEST_CASE("relational ring lifting") {
    RelationalRing ring;
    auto free_lift = ring.lift_value(var("D"), Kind::Str, Value::of_str("d1"), true);
    REQUIRE(free_lift.size() == 1);
    CHECK(*free_lift.find(ts({"d1"})) == 1);

    auto bound_lift = ring.lift_value(var("E"), Kind::Str, Value::of_str("e1"), false);
    CHECK(payload_eq(bound_lift, ring.one()));

    auto b = ring.lift_value(var("B"), Kind::Str, Value::of_str("b1"), true);
    auto c = ring.lift_value(var("C"), Kind::Str, Value::of_str("c1"), true);
    auto prod = ring.mul(b, c);
    REQUIRE(prod.size() == 1);
    CHECK(*prod.find(ts({"b1", "c1"})) == 1);
}

TEST_CASE("relational ring axioms via union/join (same add schema; cross-schema union skipped)") {
    // The relational structure is only a ring once unions across schemas are
    // generalized; that generalization is out of scope, so the additive
    // axioms run over payloads sharing one inner schema.
    RelationalRing ring;
    Schema xy = Schema::of({{var("IX"), Kind::Str}, {var("IY"), Kind::Str}});
    std::uniform_int_distribution<int> val(1, 3);
    std::uniform_int_distribution<int> mult(-3, 3);
    std::uniform_int_distribution<int> n(0, 4);
    auto gen = [&](std::mt19937& rng) {
        RelationalPayload p(xy);
        CountRing count;
        int k = n(rng);
        for (int i = 0; i < k; ++i)
            p.accumulate(ts({("x" + std::to_string(val(rng))).c_str(),
                             ("y" + std::to_string(val(rng))).c_str()}),
                         mult(rng), count);
        return p;
    };
    check_ring_axioms(ring, gen, payload_eq, 300);
}

TEST_CASE("relational mul distributes over adds of a different schema") {
    RelationalRing ring;
    Schema sx = Schema::of({{var("IX"), Kind::Str}});
    Schema sy = Schema::of({{var("IY"), Kind::Str}});
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> val(1, 3);
    std::uniform_int_distribution<int> mult(-3, 3);
    auto gen = [&](const Schema& s) {
        RelationalPayload p(s);
        CountRing count;
        for (int i = 0; i < 3; ++i)
            p.accumulate(ts({("v" + std::to_string(val(rng))).c_str()}), mult(rng), count);
        return p;
    };
    for (int i = 0; i < 200; ++i) {
        auto a = gen(sx);
        auto b = gen(sy), c = gen(sy);
        CHECK(payload_eq(ring.mul(a, ring.add(b, c)),
                         ring.add(ring.mul(a, b), ring.mul(a, c))));
    }
}

TEST_CASE("payload projection sums multiplicities per kept value") {
    RelationalRing ring;
    Schema cd = Schema::of({{var("C"), Kind::Str}, {var("D"), Kind::Str}});
    auto p = inner_rel(cd, {{ts({"c1", "d1"}), 2}, {ts({"c2", "d2"}), 1}, {ts({"c2", "d3"}), 1}});

    auto proj = ring.project_payload(p, {var("C")});
    REQUIRE(proj.size() == 2);
    CHECK(*proj.find(ts({"c1"})) == 2);
    CHECK(*proj.find(ts({"c2"})) == 2);

    Schema c = Schema::of({{var("C"), Kind::Str}});
    auto single = inner_rel(c, {{ts({"c1"}), 5}});
    CHECK(payload_eq(ring.project_payload(single, {var("C")}), single));

    auto all = ring.project_payload(p, {});
    REQUIRE(all.size() == 1);
    CHECK(*all.find(Tuple{}) == 4);
}

TEST_CASE("relational payload encoding is sorted and bracketed") {
    RelationalRing ring;
    Schema cd = Schema::of({{var("C"), Kind::Str}, {var("D"), Kind::Str}});
    auto p = inner_rel(cd, {{ts({"c2", "d2"}), 1}, {ts({"c1", "d1"}), 2}});
    CHECK(ring.encode(p) == "[(c1,d1)*2;(c2,d2)*1]");
    CHECK(ring.encode(ring.zero()) == "[]");
    CHECK(ring.encode(ring.one()) == "[()*1]");
}
