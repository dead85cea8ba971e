#include "ccsym/random.hpp"
#include "ccsym/witt.hpp"
#include "support.hpp"

using namespace testing;

namespace {

UnitExpr U(const BiSeries& f) { return UnitExpr(f); }
BiSeries zero_series(RingPtr r) { return BiSeries::from_terms(r, {}); }
BiSeries mono(RingPtr r, const RingValue& c, Exp e) { return BiSeries::monomial(c, e); }

WittVector big(RingPtr r, std::vector<std::int64_t> v) {
    std::vector<RingValue> c;
    for (std::int64_t x : v) c.push_back(r->from_int(x));
    return WittVector::big(r, c);
}

WittVector random_witt(RingPtr r, gen::Rng& rng, int n) {
    std::vector<RingValue> c;
    for (int i = 0; i < n; ++i) c.push_back(gen::element(r, rng));
    return WittVector::big(r, c);
}

BiSeries laurent(RingPtr r, gen::Rng& rng) {
    std::vector<std::pair<Exp, RingValue>> terms;
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j)
            if (gen::coin(rng, 0.3)) terms.emplace_back(Exp{i, j}, gen::element(r, rng));
    return BiSeries::from_terms(r, std::move(terms));
}

std::vector<BiSeries> random_y(RingPtr r, gen::Rng& rng, int n) {
    std::vector<BiSeries> y;
    for (int i = 0; i < n; ++i) y.push_back(laurent(r, rng));
    return y;
}

UnitExpr random_g(RingPtr r, gen::Rng& rng) { return U(gen::unit_polynomial(r, rng, {-1, 1, 2})); }

}  // namespace

TEST_CASE("series correspondence examples") {
    RingPtr q = Q();
    auto p = witt_to_series(big(q, {2, 0}));
    REQUIRE(p.size() == 3);
    CHECK(p[0].is_one());
    CHECK(p[1] == num(q, -2));
    CHECK(p[2].is_zero());
    auto z = witt_to_series(big(q, {0, 0, 0}));
    CHECK(z == std::vector<RingValue>{q->one(), q->zero(), q->zero(), q->zero()});
    RingPtr r = nil(q, {"a"}, {3});
    RingValue a = r->generator("a");
    CHECK(witt_to_series(WittVector::big(r, {a})) == std::vector<RingValue>{r->one(), -a});

    CHECK(series_to_witt({q->one(), num(q, -2), q->zero()}) == big(q, {2, 0}));
    CHECK(series_to_witt({q->one(), q->zero(), q->zero()}).is_zero());
    CHECK(series_to_witt({q->one(), num(q, -1), num(q, -1)}) == big(q, {1, 1}));
    expect_error(ErrorCode::DomainViolation, [&] { series_to_witt({num(q, 2), q->zero()}); });
}

TEST_CASE("ghost components") {
    RingPtr q = Q();
    auto g = ghost(big(q, {1, 1}));
    CHECK(g == std::vector<RingValue>{q->one(), num(q, 3)});
    CHECK(ghost(big(q, {0, 0, 0}))[2].is_zero());
    RingPtr r = nil(q, {"a", "b"}, {4, 2});
    RingValue a = r->generator("a"), b = r->generator("b");
    auto h = ghost(WittVector::big(r, {a, b, r->zero(), b}));
    CHECK(h[0] == a);
    CHECK(h[1] == a * a + num(r, 2) * b);
    CHECK(h[2] == a.pow(3));
    CHECK(h[3] == a.pow(4) + num(r, 2) * b * b + num(r, 4) * b);
    auto pt = ghost(WittVector::p_typical(q, 2, {num(q, 1), num(q, 2), num(q, 3)}));
    CHECK(pt == std::vector<RingValue>{num(q, 1), num(q, 5), num(q, 1 + 2 * 4 + 4 * 3)});
}

TEST_CASE("p-typical projection") {
    RingPtr q = Q();
    WittVector x = big(q, {1, 2, 3, 4});
    CHECK(p_typical_projection(x, 2, 3).comps == big(q, {1, 2, 4}).comps);
    CHECK(p_typical_projection(x, 2, 1).comps == big(q, {1}).comps);
    CHECK(p_typical_projection(big(q, {1, 2, 3}), 3, 2).comps == big(q, {1, 3}).comps);
    CHECK(p_typical_projection(x, 3, 2).p == 3);
    expect_error(ErrorCode::IndexMismatch, [&] { p_typical_projection(x, 2, 4); });
    expect_error(ErrorCode::IndexMismatch, [&] { p_typical_projection(p_typical_projection(x, 2, 2), 2, 1); });
}

TEST_CASE("Witt symbol examples") {
    for (RingPtr k : {Q(), GF(2), GF(5)}) {
        UnitExpr u = U(BiSeries::variable_u(k)), t = U(BiSeries::variable_t(k));
        WittVector w = witt_symbol(u, t, {BiSeries::constant(k->one())});
        CHECK(w.comps == std::vector<RingValue>{k->one()});
        CHECK(witt_symbol(t, u, {BiSeries::constant(k->one())}).comps == std::vector<RingValue>{-k->one()});
        UnitExpr g = U(poly(k, {{1, 0, k->one()}, {0, 1, k->one()}, {1, 1, k->one()}}));
        CHECK(witt_symbol(g, g, {BiSeries::constant(k->one()), BiSeries::variable_t(k), mono(k, k->one(), {-1, 2})}).is_zero());
        CHECK(witt_symbol(u, t, {zero_series(k), zero_series(k)}).is_zero());
        CHECK(witt_symbol(u, t, {zero_series(k), zero_series(k)}).size() == 2);
    }
    RingPtr g5 = GF(5);
    UnitExpr u = U(BiSeries::variable_u(g5)), t = U(BiSeries::variable_t(g5));
    // the constant term of y is what pairs with du/u ^ dt/t
    WittVector w = witt_symbol(u, t, {poly(g5, {{0, 0, num(g5, 3)}, {1, 2, num(g5, 4)}}), zero_series(g5)});
    CHECK(w.comps == std::vector<RingValue>{num(g5, 3), g5->zero()});
}

TEST_CASE("ghost formula examples") {
    for (std::int64_t p : {2, 3, 5}) {
        RingPtr k = GF(p);
        UnitExpr u = U(BiSeries::variable_u(k)), t = U(BiSeries::variable_t(k));
        WittVector w = witt_symbol_ghost(u, t, {BiSeries::constant(k->one()), zero_series(k), zero_series(k)});
        CHECK(w.p == p);
        CHECK(w.comps == std::vector<RingValue>{k->one(), k->zero(), k->zero()});
        CHECK(witt_symbol_ghost(u, t, {zero_series(k), zero_series(k)}).is_zero());
    }
    RingPtr g2 = GF(2);
    UnitExpr u = U(BiSeries::variable_u(g2)), t = U(BiSeries::variable_t(g2));
    std::vector<BiSeries> y{mono(g2, g2->one(), {-1, -1}), zero_series(g2)};
    WittVector w = witt_symbol_ghost(u, t, y);
    CHECK(w.comps == std::vector<RingValue>{g2->zero(), g2->zero()});
    CHECK(w == p_typical_projection(witt_symbol(u, t, y), 2, 2));
    expect_error(ErrorCode::DomainViolation, [&] { witt_symbol_ghost(U(BiSeries::variable_u(Q())), U(BiSeries::variable_t(Q())), {}); });
}

TEST_CASE("property: series correspondence round trips") {
    gen::Rng rng(301);
    for (RingPtr r : {Q(), GF(3), Zmod(2, 3), nil(Q(), {"e"}, {3}), nil(GF(5), {"e"}, {2})}) {
        for (int trial = 0; trial < 20; ++trial) {
            int n = gen::uniform_int(rng, 1, 6);
            WittVector x = random_witt(r, rng, n);
            CHECK(series_to_witt(witt_to_series(x)) == x);
            std::vector<RingValue> p{r->one()};
            for (int i = 0; i < n; ++i) p.push_back(gen::element(r, rng));
            CHECK(witt_to_series(series_to_witt(p)) == p);
        }
    }
}

TEST_CASE("property: -log of the series is the ghost generating function") {
    gen::Rng rng(302);
    for (RingPtr r : {Q(), nil(Q(), {"e"}, {3})}) {
        for (int trial = 0; trial < 20; ++trial) {
            int n = gen::uniform_int(rng, 1, 6);
            WittVector x = random_witt(r, rng, n);
            std::vector<RingValue> p = witt_to_series(x);
            // log(1 + z) = sum (-1)^(k+1) z^k / k mod s^(n+1)
            std::vector<RingValue> z = p, zk = p, log(p.size(), r->zero());
            z[0] = r->zero();
            zk = z;
            for (int k = 1; k <= n; ++k) {
                RingValue c = num(r, k % 2 ? 1 : -1, k);
                for (std::size_t i = 0; i < p.size(); ++i) log[i] += c * zk[i];
                std::vector<RingValue> next(p.size(), r->zero());
                for (std::size_t i = 0; i < p.size(); ++i)
                    for (std::size_t j = 0; i + j < p.size(); ++j) next[i + j] += zk[i] * z[j];
                zk = next;
            }
            std::vector<RingValue> g = ghost(x);
            for (int l = 1; l <= n; ++l) CHECK(-log[static_cast<std::size_t>(l)] == g[static_cast<std::size_t>(l - 1)] * num(r, 1, l));
        }
    }
}

TEST_CASE("property: the Witt symbol is additive in y and multiplicative in g") {
    gen::Rng rng(303);
    for (RingPtr k : {Q(), GF(2), GF(3), GF(5)}) {
        for (int trial = 0; trial < 6; ++trial) {
            int n = gen::uniform_int(rng, 1, 3);
            std::vector<BiSeries> y = random_y(k, rng, n), z = random_y(k, rng, n);
            BiSeries a = gen::unit_polynomial(k, rng, {-1, 1, 2}), b = gen::unit_polynomial(k, rng, {-1, 1, 2});
            UnitExpr g1 = U(a), g2 = random_g(k, rng);
            WittVector sy = witt_symbol(g1, g2, y);
            CHECK(witt_symbol(g1, g2, witt_add(y, z)) == witt_add(sy, witt_symbol(g1, g2, z)));
            CHECK(witt_symbol(U(mul(a, b)), g2, y) == witt_add(sy, witt_symbol(U(b), g2, y)));
            // anti-symmetry in (g1, g2)
            CHECK(witt_add(sy, witt_symbol(g2, g1, y)).is_zero());
        }
    }
}

TEST_CASE("property: ghost formula matches the p-typical part of the Witt symbol") {
    gen::Rng rng(304);
    for (std::int64_t p : {2, 3}) {
        RingPtr k = GF(p);
        for (int m : {1, 2, 3}) {
            if (p == 3 && m == 3) continue;
            for (int trial = 0; trial < 4; ++trial) {
                std::vector<BiSeries> yp = random_y(k, rng, m);
                std::int64_t n = 1;
                for (int a = 1; a < m; ++a) n *= p;
                std::vector<BiSeries> y(static_cast<std::size_t>(n), zero_series(k));
                for (int a = 0, i = 1; a < m; ++a, i *= static_cast<int>(p)) y[static_cast<std::size_t>(i - 1)] = yp[static_cast<std::size_t>(a)];
                UnitExpr g1 = random_g(k, rng), g2 = random_g(k, rng);
                WittVector want = p_typical_projection(witt_symbol(g1, g2, y), p, m);
                CHECK_MESSAGE(witt_symbol_ghost(g1, g2, yp) == want, p << " " << m << " " << g1.to_string() << " " << g2.to_string());
            }
        }
    }
}
