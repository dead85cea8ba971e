#include "ccsym/random.hpp"
#include "ccsym/symbol1d.hpp"
#include "support.hpp"

using namespace testing;

namespace {

BiSeries t_pow(RingPtr r, int i) { return BiSeries::monomial(r->one(), {i, 0}); }

// 1 - c t^i
BiSeries one_minus(RingPtr r, const RingValue& c, int i) { return poly(r, {{0, 0, r->one()}, {0, i, -c}}); }

std::vector<RingPtr> mixed_rings() {
    return {Q(), GF(5), GF4(), Zmod(3, 2), nil(Q(), {"e"}, {3}), nil(GF(3), {"e"}, {3}), nil(Q(), {"a", "b"}, {2, 2})};
}

// coefficient of t^-1 in f * dg/dt
RingValue res_f_dg(const BiSeries& f, const BiSeries& g) {
    RingValue s = f.ring()->zero();
    for (std::size_t a = 0; a < f.size(); ++a)
        for (std::size_t b = 0; b < g.size(); ++b)
            if (f.exp(a).i + g.exp(b).i == 0) s += f.coeff_at(a) * g.coeff_at(b) * f.ring()->from_int(g.exp(b).i);
    return s;
}

// random Laurent polynomial over r, t-exponents in [-3, 3]
BiSeries laurent(RingPtr r, gen::Rng& rng) {
    std::vector<std::pair<Exp, RingValue>> terms;
    for (int i = -3; i <= 3; ++i)
        if (gen::coin(rng, 0.5)) terms.emplace_back(Exp{i, 0}, gen::element(r, rng));
    return BiSeries::from_terms(r, std::move(terms));
}

bool is_unit(const BiSeries& f) {
    try {
        unit_lead(f);
        return true;
    } catch (const Error&) {
        return false;
    }
}

}  // namespace

TEST_CASE("decompose1 examples") {
    RingPtr q = Q();
    Decomposition1 d = decompose1(t_pow(q, 3), 4);
    CHECK(d.minus.empty());
    CHECK(d.plus.empty());
    CHECK(d.r0 == q->one());
    CHECK(d.nu == 3);

    RingPtr qe = nil(q, {"e"}, {2});
    RingValue e = qe->generator("e");
    BiSeries f = mul(mul(poly(qe, {{0, 0, qe->one()}, {0, -1, e}}), scale(t_pow(qe, 1), num(qe, 2))), one_minus(qe, qe->one(), 1));
    Decomposition1 g = decompose1(f, 6);
    REQUIRE(g.minus.size() == 1);
    CHECK(g.minus[0].i == -1);
    CHECK(g.minus[0].c == -e);
    CHECK(g.r0 == num(qe, 2));
    CHECK(g.nu == 1);
    REQUIRE(g.plus.size() == 1);
    CHECK(g.plus[0].i == 1);
    CHECK(g.plus[0].c == qe->one());
    CHECK(g.plus_rows >= 6);

    RingPtr f7 = GF(7);
    Decomposition1 c = decompose1(BiSeries::constant(num(f7, 5)), 3);
    CHECK(c.minus.empty());
    CHECK(c.plus.empty());
    CHECK(c.r0 == num(f7, 5));
    CHECK(c.nu == 0);

    expect_error(ErrorCode::NotAUnit, [&] { decompose1(BiSeries::constant(e), 2); });
    expect_error(ErrorCode::DomainViolation, [&] { decompose1(BiSeries::variable_u(q), 2); });
}

TEST_CASE("cc1 examples") {
    RingPtr q = Q();
    BiSeries t = t_pow(q, 1);
    CHECK(cc1_product(t, t) == num(q, -1));
    CHECK(cc1_residue(t, t) == num(q, -1));
    CHECK(cc1_product(BiSeries::constant(num(q, -1)), t) == num(q, -1));
    CHECK(cc1_product(BiSeries::constant(num(q, 3, 2)), t_pow(q, 2)) == num(q, 9, 4));
    CHECK(cc1_residue(BiSeries::constant(num(q, 3, 2)), t_pow(q, 2)) == num(q, 9, 4));

    RingPtr r = nil(q, {"e1", "e2"}, {2, 2});
    RingValue e1 = r->generator("e1"), e2 = r->generator("e2");
    BiSeries a = one_minus(r, e1, 1), b = one_minus(r, e2, -1);
    CHECK(cc1_product(a, b) == r->one() - e1 * e2);
    CHECK(cc1_residue(a, b) == r->one() - e1 * e2);
    CHECK(cc1_product(b, a) == (r->one() - e1 * e2).inverse());

    RingPtr qe = nil(q, {"e"}, {2});
    BiSeries h = poly(qe, {{0, 0, qe->one()}, {0, 1, qe->generator("e")}});
    CHECK(cc1_residue(h, t_pow(qe, 1)) == qe->one());
    CHECK(cc1_product(h, t_pow(qe, 1)) == qe->one());
    CHECK(cc1_residue(h, BiSeries::constant(qe->one())) == qe->one());
    CHECK(cc1_product(h, BiSeries::constant(qe->one())) == qe->one());

    // the residue path needs 1/n
    RingPtr g5 = GF(5);
    expect_error(ErrorCode::CharacteristicObstruction, [&] { cc1_residue(t_pow(g5, 1), t_pow(g5, 1)); });
}

TEST_CASE("tame1 examples") {
    RingPtr g5 = GF(5);
    BiSeries t = t_pow(g5, 1);
    CHECK(tame1(t, one_minus(g5, g5->one(), 1)) == g5->one());
    CHECK(tame1(t, BiSeries::constant(num(g5, 3))) == num(g5, 3).inverse());
    CHECK(tame1(t, BiSeries::constant(num(g5, 3))) == cc1_product(t, BiSeries::constant(num(g5, 3))));
    RingPtr g7 = GF(7);
    CHECK(tame1(t_pow(g7, 2), t_pow(g7, 3)) == g7->one());
    CHECK(cc1_product(t_pow(g7, 2), t_pow(g7, 3)) == g7->one());
    expect_error(ErrorCode::DomainViolation, [&] { tame1(t_pow(Zmod(3, 2), 1), t_pow(Zmod(3, 2), 1)); });
}

TEST_CASE("property: bimultiplicative and anti-symmetric") {
    gen::Rng rng(101);
    for (RingPtr r : mixed_rings()) {
        for (int trial = 0; trial < 12; ++trial) {
            BiSeries f1 = gen::unit_polynomial1(r, rng), f2 = gen::unit_polynomial1(r, rng), g = gen::unit_polynomial1(r, rng);
            RingValue s = cc1_product(mul(f1, f2), g);
            CHECK_MESSAGE(s == cc1_product(f1, g) * cc1_product(f2, g), r->text() << " " << f1.to_string() << " " << f2.to_string());
            CHECK_MESSAGE((cc1_product(f1, g) * cc1_product(g, f1)).is_one(), r->text() << " " << f1.to_string() << " " << g.to_string());
        }
    }
}

TEST_CASE("property: Steinberg relation") {
    gen::Rng rng(102);
    int checked = 0;
    for (RingPtr r : mixed_rings()) {
        for (int trial = 0; trial < 12; ++trial) {
            BiSeries f = gen::unit_polynomial1(r, rng);
            BiSeries g = BiSeries::constant(r->one()) - f;
            if (!is_unit(g)) continue;
            ++checked;
            CHECK_MESSAGE(cc1_product(f, g).is_one(), r->text() << " " << f.to_string());
        }
    }
    CHECK(checked > 40);
}

TEST_CASE("property: product and residue paths agree") {
    gen::Rng rng(103);
    for (RingPtr r : {Q(), nil(Q(), {"e"}, {2}), nil(Q(), {"e"}, {4}), nil(Q(), {"a", "b"}, {2, 3})}) {
        for (int trial = 0; trial < 15; ++trial) {
            BiSeries f = gen::unit_polynomial1(r, rng), g = gen::unit_polynomial1(r, rng);
            CHECK_MESSAGE(cc1_product(f, g) == cc1_residue(f, g), r->text() << " " << f.to_string() << " " << g.to_string());
        }
    }
}

TEST_CASE("property: tame symbol over fields") {
    gen::Rng rng(104);
    for (RingPtr r : {Q(), GF(2), GF(5), GF4()}) {
        for (int trial = 0; trial < 20; ++trial) {
            BiSeries f = gen::unit_polynomial1(r, rng), g = gen::unit_polynomial1(r, rng);
            CHECK(cc1_product(f, g) == tame1(f, g));
        }
    }
}

TEST_CASE("property: first order deformation is the residue pairing") {
    // (1 + e f, 1 + e g) = 1 + e^2 res(f dg) over k[e]/(e^3)
    gen::Rng rng(105);
    for (RingPtr k : {Q(), GF(3), GF(7)}) {
        RingPtr r = nil(k, {"e"}, {3});
        RingValue e = r->generator("e");
        for (int trial = 0; trial < 15; ++trial) {
            BiSeries f = laurent(k, rng), g = laurent(k, rng);
            auto lift = [&](const BiSeries& s) {
                std::vector<std::pair<Exp, RingValue>> terms{{Exp{0, 0}, r->one()}};
                for (std::size_t n = 0; n < s.size(); ++n) terms.emplace_back(s.exp(n), e * embed(s.coeff_at(n), r));
                return BiSeries::from_terms(r, std::move(terms));
            };
            RingValue want = r->one() + e * e * embed(res_f_dg(f, g), r);
            CHECK_MESSAGE(cc1_product(lift(f), lift(g)) == want, f.to_string() << " " << g.to_string());
        }
    }
}

TEST_CASE("property: invariance under change of parameter") {
    gen::Rng rng(106);
    for (RingPtr r : {nil(Q(), {"e"}, {3}), nil(GF(5), {"e"}, {2}), Zmod(5, 2)}) {
        for (int trial = 0; trial < 10; ++trial) {
            // t' = a t + (terms above) + (nilpotent terms below t)
            std::vector<std::pair<Exp, RingValue>> terms{{Exp{1, 0}, gen::unit(r, rng)}};
            for (int i = -2; i <= 3; ++i) {
                if (i == 1 || !gen::coin(rng, 0.5)) continue;
                terms.emplace_back(Exp{i, 0}, i > 1 ? gen::element(r, rng) : gen::nilpotent(r, rng));
            }
            BiSeries tn = BiSeries::from_terms(r, std::move(terms));
            UnitExpr f(gen::unit_polynomial1(r, rng)), g(gen::unit_polynomial1(r, rng));
            BiSeries u = BiSeries::variable_u(r);
            UnitExpr sf = substitute(f, tn, u), sg = substitute(g, tn, u);
            CHECK_MESSAGE(cc1_product(sf, sg) == cc1_product(f, g), tn.to_string() << " " << f.to_string() << " " << g.to_string());
        }
    }
}
