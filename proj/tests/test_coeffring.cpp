#include <doctest.h>

#include <random>

#include "ccsym/poly.hpp"
#include "ccsym/ring.hpp"

using namespace ccs;

namespace {

RingPtr nil(const RingDescriptor& base, std::vector<std::string> g, std::vector<int> b) {
    return make_ring(RingDescriptor::nilpotent(base, std::move(g), std::move(b)));
}

RingPtr gf4() { return make_ring(RingDescriptor::finite_field(2, 2, {1, 1, 1})); }

RingValue random_value(RingPtr r, std::mt19937_64& rng) {
    std::vector<Num> c(r->dim());
    std::uniform_int_distribution<std::int64_t> d(-4, 4);
    for (Num& x : c) x = r->s_from_int(d(rng));
    if (r->is_rational())
        for (Num& x : c) x = rat::make(d(rng), 1 + (d(rng) + 4) % 3);
    return r->from_coords(std::move(c));
}

template <class F>
void expect_error(ErrorCode code, F&& f) {
    try {
        f();
        FAIL("expected " << error_name(code));
    } catch (const Error& e) {
        CHECK(e.code() == code);
    }
}

}  // namespace

TEST_CASE("ring construction") {
    RingPtr f5 = make_ring(RingDescriptor::prime_field(5));
    CHECK(f5->characteristic() == 5);
    CHECK(f5->nilradical_exponent() == 1);
    CHECK(f5->text() == "GF(5)");

    RingPtr qe = nil(RingDescriptor::rationals(), {"e"}, {3});
    CHECK(qe->characteristic() == 0);
    CHECK(qe->nilradical_exponent() == 3);
    CHECK(qe->text() == "Q[e]/(e^3)");

    RingPtr z9 = make_ring(RingDescriptor::integers_mod(3, 2));
    CHECK(z9->characteristic() == 9);
    CHECK(z9->nilradical_exponent() == 2);
    CHECK(z9->residue_field()->text() == "GF(3)");

    CHECK(gf4()->text() == "GF(4; mod=x^2+x+1)");
    CHECK(make_ring(RingDescriptor::prime_field(5)) == f5);
}

TEST_CASE("malformed descriptors") {
    expect_error(ErrorCode::MalformedDescriptor, [] { make_ring(RingDescriptor::prime_field(6)); });
    expect_error(ErrorCode::MalformedDescriptor, [] { make_ring(RingDescriptor::integers_mod(15, 1)); });
    expect_error(ErrorCode::MalformedDescriptor,
                 [] { make_ring(RingDescriptor::finite_field(2, 2, {1, 0, 1})); });
    expect_error(ErrorCode::MalformedDescriptor,
                 [] { nil(RingDescriptor::prime_field(3), {"e"}, {1}); });
    expect_error(ErrorCode::MalformedDescriptor, [] {
        nil(RingDescriptor::nilpotent(RingDescriptor::rationals(), {"e"}, {2}), {"e"}, {2});
    });
}

TEST_CASE("arithmetic examples") {
    RingPtr qe = nil(RingDescriptor::rationals(), {"e"}, {2});
    RingValue e = qe->generator("e");
    CHECK(((qe->one() + e) * (qe->one() - e)).is_one());
    CHECK((qe->one() + e).inverse() == qe->one() - e);

    RingPtr f7 = make_ring(RingDescriptor::prime_field(7));
    CHECK((f7->from_int(3) + f7->from_int(5)) == f7->one());
    CHECK(f7->from_int(3).inverse() == f7->from_int(5));

    RingPtr z9 = make_ring(RingDescriptor::integers_mod(3, 2));
    CHECK((z9->from_int(3) * z9->from_int(3)).is_zero());
    expect_error(ErrorCode::NotAUnit, [&] { z9->from_int(3).inverse(); });
    CHECK(z9->from_int(2).inverse() == z9->from_int(5));

    RingPtr f5 = make_ring(RingDescriptor::prime_field(5));
    expect_error(ErrorCode::RingMismatch, [&] { (void)(f5->one() + f7->one()); });
}

TEST_CASE("nilpotency and residues") {
    RingPtr qe3 = nil(RingDescriptor::rationals(), {"e"}, {3});
    CHECK(qe3->generator("e").nilpotency_index() == 3);
    RingPtr z9 = make_ring(RingDescriptor::integers_mod(3, 2));
    CHECK(z9->from_int(3).nilpotency_index() == 2);
    RingPtr f5 = make_ring(RingDescriptor::prime_field(5));
    CHECK(!f5->from_int(2).nilpotency_index().has_value());
    CHECK(f5->zero().nilpotency_index() == 1);

    RingPtr qe2 = nil(RingDescriptor::rationals(), {"e"}, {2});
    RingValue r = (qe2->one() + qe2->generator("e")).residue_image();
    CHECK(r.ring()->text() == "Q");
    CHECK(r.is_one());
    CHECK(z9->from_int(3).residue_image().is_zero());
    RingValue a = gf4()->field_generator(1);
    CHECK(a.residue_image() == a);
}

TEST_CASE("printing") {
    RingPtr r = nil(RingDescriptor::rationals(), {"e1", "e2"}, {2, 2});
    RingValue v = r->one() - r->generator("e1") * r->generator("e2") * r->from_rational(1, 2);
    CHECK(v.to_string() == "1-1/2*e1*e2");
    RingPtr g = gf4();
    RingValue a = g->field_generator(1);
    CHECK((a * a).to_string() == "x+1");
    CHECK(make_ring(RingDescriptor::prime_field(5))->from_int(-1).to_string() == "4");
}

TEST_CASE("norms") {
    RingPtr g = gf4();
    RingValue a = g->field_generator(1);
    RingValue n = norm_to_subfield(a, 0);
    CHECK(n.ring()->text() == "GF(2)");
    CHECK(n.is_one());
    RingValue one_plus = g->one() + a;
    CHECK(norm_to_subfield(one_plus, 0).is_one());

    // base field constant: c^d
    RingPtr g9 = make_ring(RingDescriptor::finite_field(3, 2, {1, 0, 1}));
    CHECK(norm_to_subfield(g9->from_int(2), 0) == g9->scalar_ring(0)->from_int(4));

    // GF(9)[e]/(e^2): Nm(1+e*a) = 1 + e*(a + a^3)
    RingPtr r = nil(RingDescriptor::finite_field(3, 2, {1, 0, 1}), {"e"}, {2});
    RingValue al = r->field_generator(1), e = r->generator("e");
    RingValue nm = norm_to_subfield(r->one() + e * al, 0);
    RingValue expect = r->one() + e * (al + al.pow(3));
    CHECK(embed(nm, r) == expect);
}

TEST_CASE("property: ring axioms and inverses") {
    std::mt19937_64 rng(11);
    std::vector<RingPtr> rings = {
        make_ring(RingDescriptor::prime_field(5)),
        gf4(),
        make_ring(RingDescriptor::integers_mod(3, 2)),
        nil(RingDescriptor::prime_field(3), {"e"}, {3}),
        nil(RingDescriptor::rationals(), {"e"}, {4}),
        nil(RingDescriptor::nilpotent(RingDescriptor::finite_field(2, 2, {1, 1, 1}), {"a"}, {2}), {"b", "c"}, {3, 2}),
    };
    for (RingPtr r : rings) {
        for (int trial = 0; trial < 60; ++trial) {
            RingValue a = random_value(r, rng), b = random_value(r, rng), c = random_value(r, rng);
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a * b == b * a);
            CHECK((a - b) + b == a);
            if (a.is_unit()) {
                CHECK((a * a.inverse()).is_one());
            } else {
                CHECK(a.pow(r->nilradical_exponent()).is_zero());
                auto n = a.nilpotency_index();
                REQUIRE(n.has_value());
                CHECK(a.pow(*n).is_zero());
                if (*n > 1) CHECK(!a.pow(*n - 1).is_zero());
            }
            CHECK(a.is_unit() == !a.residue_image().is_zero());
        }
    }
}

TEST_CASE("property: norm multiplicative and transitive") {
    std::mt19937_64 rng(5);
    for (std::int64_t p : {2, 3, 5}) {
        RingPtr fp = make_ring(RingDescriptor::prime_field(p));
        // find an irreducible quadratic over GF(p), then over GF(p^2)
        RingPtr k2 = nullptr;
        for (std::int64_t a = 0; a < p && !k2; ++a)
            for (std::int64_t b = 0; b < p && !k2; ++b)
                if (is_irreducible(UPoly(fp, {fp->from_int(b), fp->from_int(a), fp->one()})))
                    k2 = extend_field(fp, {fp->from_int(b), fp->from_int(a)}, "x");
        REQUIRE(k2);
        RingPtr k4 = nullptr;
        for (int tries = 0; tries < 200 && !k4; ++tries) {
            RingValue c0 = random_value(k2, rng), c1 = random_value(k2, rng);
            if (is_irreducible(UPoly(k2, {c0, c1, k2->one()}))) k4 = extend_field(k2, {c0, c1}, "z");
        }
        REQUIRE(k4);
        for (int trial = 0; trial < 20; ++trial) {
            RingValue a = random_value(k4, rng), b = random_value(k4, rng);
            if (!a.is_unit() || !b.is_unit()) continue;
            CHECK(norm_to_subfield(a * b, 0) == norm_to_subfield(a, 0) * norm_to_subfield(b, 0));
            CHECK(norm_to_subfield(a, 0) == norm_to_subfield(norm_to_subfield(a, 1), 0));
        }
    }
}

TEST_CASE("polynomial factoring over finite fields") {
    RingPtr f5 = make_ring(RingDescriptor::prime_field(5));
    auto P = [&](std::vector<int> c) {
        std::vector<RingValue> v;
        for (int x : c) v.push_back(f5->from_int(x));
        return UPoly(f5, v);
    };
    // (z-1)^2 (z^2+2) z
    UPoly f = P({-1, 1}) * P({-1, 1}) * P({2, 0, 1}) * P({0, 1});
    auto fs = irreducible_factors(f);
    REQUIRE(fs.size() == 3);
    CHECK(fs[0] == P({0, 1}));
    CHECK(fs[1] == P({4, 1}));
    CHECK(fs[2] == P({2, 0, 1}));
    CHECK(is_irreducible(P({2, 0, 1})));
    CHECK(!is_irreducible(P({1, 0, 1})));

    RingPtr g4 = gf4();
    UPoly x = UPoly::x(g4);
    UPoly h = x * x * x * x - x;  // splits completely over GF(4)
    CHECK(irreducible_factors(h).size() == 4);
    RingPtr f2 = make_ring(RingDescriptor::prime_field(2));
    UPoly y = UPoly::x(f2);
    UPoly sq = (y * y + y + UPoly::constant(f2->one())) * (y * y + y + UPoly::constant(f2->one()));
    CHECK(irreducible_factors(sq).size() == 1);
}
