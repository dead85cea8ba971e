#include "ccsym/random.hpp"
#include "ccsym/reciprocity.hpp"
#include "ccsym/symbol2d.hpp"
#include "support.hpp"

using namespace testing;

namespace {

UPoly zpolyv(RingPtr r, std::vector<RingValue> c) { return UPoly(r, std::move(c)); }
UPoly zpoly(RingPtr r, std::vector<std::int64_t> c) {
    std::vector<RingValue> v;
    for (std::int64_t x : c) v.push_back(r->from_int(x));
    return UPoly(r, std::move(v));
}

using RFE = RationalFunctionElement;

RFE fn(const UPoly& n, const UPoly& d) { return RFE::function(n, d); }
RFE fn(const UPoly& n) { return RFE::function(n); }

// sum_k t_C^k * (terms[k])
RFE with_t(RingPtr r, std::map<int, RatFunc> terms) { return RFE::from_terms(r, std::move(terms)); }

UnitExpr U(const BiSeries& f) { return UnitExpr(f); }

// random polynomial in z of degree <= deg whose residue image is nonzero
UPoly random_unit_poly(RingPtr r, gen::Rng& rng, int deg) {
    for (;;) {
        std::vector<RingValue> c;
        int d = gen::uniform_int(rng, 0, deg);
        for (int i = 0; i <= d; ++i) c.push_back(gen::coin(rng, 0.7) ? gen::element(r, rng) : gen::nilpotent(r, rng));
        UPoly p(r, c);
        bool unit_part = false;
        for (const RingValue& x : p.coeffs()) unit_part = unit_part || x.is_unit();
        if (unit_part) return p;
    }
}

UPoly random_poly(RingPtr r, gen::Rng& rng, int deg) {
    std::vector<RingValue> c;
    for (int i = 0; i <= deg; ++i) c.push_back(gen::element(r, rng));
    return UPoly(r, c);
}

UPoly nilpotent_poly(RingPtr r, gen::Rng& rng, int deg) {
    std::vector<RingValue> c;
    for (int i = 0; i <= deg; ++i) c.push_back(gen::nilpotent(r, rng));
    return UPoly(r, c);
}

RFE random_function(RingPtr r, gen::Rng& rng) { return fn(random_unit_poly(r, rng, 3), random_unit_poly(r, rng, 2)); }

// unit of (k(z) (x) R)((t_C)): unit coefficient at t^k0, arbitrary above, nilpotent below
RFE random_element(RingPtr r, gen::Rng& rng) {
    int k0 = gen::uniform_int(rng, -1, 1);
    std::map<int, RatFunc> terms;
    terms[k0] = {random_unit_poly(r, rng, 2), random_unit_poly(r, rng, 1)};
    if (gen::coin(rng)) terms[k0 + 1] = {random_poly(r, rng, 1), random_unit_poly(r, rng, 1)};
    if (gen::coin(rng, 0.3)) terms[k0 - 1] = {nilpotent_poly(r, rng, 1), UPoly::constant(r->one())};
    return with_t(r, std::move(terms));
}

// products of the supported factor shapes around the origin
UnitExpr random_point_unit(RingPtr r, gen::Rng& rng) {
    UnitExpr out(r);
    int n = gen::uniform_int(rng, 1, 3);
    for (int k = 0; k < n; ++k) {
        std::vector<std::pair<Exp, RingValue>> terms;
        switch (gen::uniform_int(rng, 0, 3)) {
        case 0:  // monomial
            terms.emplace_back(Exp{gen::uniform_int(rng, -2, 2), gen::uniform_int(rng, -2, 2)}, gen::unit(r, rng));
            break;
        case 1: {  // t - phi(u)
            terms.emplace_back(Exp{1, 0}, gen::unit(r, rng));
            int deg = gen::uniform_int(rng, 1, 2);
            terms.emplace_back(Exp{0, deg}, gen::unit(r, rng));
            if (deg == 2 && gen::coin(rng)) terms.emplace_back(Exp{0, 1}, gen::element(r, rng));
            break;
        }
        default:  // unit of k[[u, t]]
            terms.emplace_back(Exp{0, 0}, gen::unit(r, rng));
            for (Exp e : {Exp{0, 1}, Exp{1, 0}, Exp{1, 1}, Exp{0, 2}})
                if (gen::coin(rng)) terms.emplace_back(e, gen::element(r, rng));
        }
        // infinitesimal deformation
        if (gen::coin(rng, 0.4)) terms.emplace_back(Exp{gen::uniform_int(rng, -1, 1), gen::uniform_int(rng, -1, 1)}, gen::nilpotent(r, rng));
        std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<std::pair<Exp, RingValue>> merged;
        for (auto& [e, c] : terms) {
            if (!merged.empty() && merged.back().first == e)
                merged.back().second += c;
            else
                merged.emplace_back(e, c);
        }
        BiSeries p = BiSeries::from_terms(r, std::move(merged));
        if (!p.is_zero()) out = out * U(p).pow(gen::coin(rng, 0.3) ? -1 : 1);
    }
    return out;
}

// equal modulo nilpotents
bool same_branch(const Branch& a, const Branch& b) {
    if (a.kind != b.kind) return false;
    if (a.kind != Branch::Kind::Graph) return true;
    BiSeries d = a.phi - b.phi;
    for (int j = 0; j <= 8; ++j)
        if (!d.coeff({0, j}).residue_image().is_zero()) return false;
    return true;
}

std::string names(const ReciprocityReport& rep) {
    std::string s;
    for (const SiteValue& v : rep.sites) s += v.site + ": " + v.local_value.to_string() + " -> " + v.norm_value.to_string() + "; ";
    return s;
}

}  // namespace

TEST_CASE("expansion at points") {
    RingPtr q = Q();
    BiSeries a = expand_at_point(fn(zpoly(q, {1}), zpoly(q, {-1, 1})), ClosedPoint::finite(zpoly(q, {0, 1})), Window::rows(0, 4));
    for (int j = 0; j <= 4; ++j) CHECK(a.coeff({0, j}) == num(q, -1));
    CHECK(a.coeff({0, -1}).is_zero());

    BiSeries b = expand_at_point(fn(zpoly(q, {0, 1})), ClosedPoint::at_infinity(), Window::rows(0, 4));
    CHECK(b == BiSeries::monomial(q->one(), {0, -1}));

    RingPtr g5 = GF(5);
    BiSeries c = expand_at_point(fn(zpoly(g5, {0, 1}), zpoly(g5, {-1, 1})), ClosedPoint::finite(zpoly(g5, {-1, 1})), Window::rows(0, 6));
    CHECK(c.coeff({0, -1}) == g5->one());
    CHECK(c.coeff({0, 0}) == g5->one());
    for (int j = 1; j <= 6; ++j) CHECK(c.coeff({0, j}).is_zero());

    // z at the point z^2 + 1 over GF(3) is a root plus u
    RingPtr g3 = GF(3);
    BiSeries d = expand_at_point(fn(zpoly(g3, {0, 1})), ClosedPoint::finite(zpoly(g3, {1, 0, 1})), Window::rows(0, 3));
    RingValue theta = d.coeff({0, 0});
    CHECK(theta * theta == num(d.ring(), -1));
    CHECK(d.coeff({0, 1}).is_one());

    // t_C structure: t_C + 1/z at z = 0
    RFE e = with_t(q, {{1, {zpoly(q, {1}), zpoly(q, {1})}}, {0, {zpoly(q, {1}), zpoly(q, {0, 1})}}});
    BiSeries x = expand_at_point(e, ClosedPoint::finite(zpoly(q, {0, 1})), Window::rows(1, 3));
    CHECK(x.coeff({0, -1}).is_one());
    CHECK(x.coeff({1, 0}).is_one());
    CHECK(x.coeff({0, 0}).is_zero());

    expect_error(ErrorCode::NotAUnit, [&] {
        RingPtr r = nil(g5, {"e"}, {2});
        fn(zpoly(r, {1}), zpolyv(r, {r->generator("e")}));
    });
}

TEST_CASE("one-dimensional law examples") {
    RingPtr g5 = GF(5);
    RFE z = fn(zpoly(g5, {0, 1})), zm1 = fn(zpoly(g5, {-1, 1}));
    ReciprocityReport rep = check_curve_1d(z, zm1);
    CHECK(rep.law == "curve1d");
    REQUIRE(rep.sites.size() == 3);
    CHECK(rep.sites[0].site == "z");
    CHECK(rep.sites[0].norm_value == num(g5, -1));
    CHECK(rep.sites[1].norm_value.is_one());
    CHECK(rep.sites[2].site == "inf");
    CHECK(rep.sites[2].norm_value == num(g5, -1));
    CHECK(rep.product.is_one());
    CHECK(rep.pass);
    CHECK(rep.nontrivial == std::vector<std::string>{"z", "inf"});

    ReciprocityReport same = check_curve_1d(zm1, zm1);
    CHECK(same.pass);
    ReciprocityReport c = check_curve_1d(fn(zpoly(g5, {3})), fn(zpoly(g5, {1, 0, 0, 1}), zpoly(g5, {2, 1})));
    CHECK(c.pass);

    // a degree two point: (z^2 + 2, z) over GF(5) meets z^2 + 2 and 0 and infinity
    ReciprocityReport d = check_curve_1d(fn(zpoly(g5, {2, 0, 1})), z);
    CHECK(d.pass);
    bool deg2 = false;
    for (const SiteValue& s : d.sites) deg2 = deg2 || s.degree == 2;
    CHECK(deg2);
    expect_error(ErrorCode::DomainViolation, [&] { check_curve_1d(with_t(g5, {{1, {zpoly(g5, {1}), zpoly(g5, {1})}}}), z); });
}

TEST_CASE("two-dimensional law along a curve: examples") {
    RingPtr g5 = GF(5);
    RFE z = fn(zpoly(g5, {0, 1})), zm1 = fn(zpoly(g5, {-1, 1}));
    RFE t = with_t(g5, {{1, {zpoly(g5, {1}), zpoly(g5, {1})}}});
    ReciprocityReport rep = check_curve_2d(z, zm1, t);
    CHECK(rep.law == "curve2d");
    CHECK(rep.pass);
    // with h = t_C the local symbols are the tame symbols of (f, g) at each point, up to orientation
    ReciprocityReport one = check_curve_1d(z, zm1);
    REQUIRE(rep.sites.size() == one.sites.size());
    for (std::size_t k = 0; k < rep.sites.size(); ++k) CHECK(rep.sites[k].norm_value == one.sites[k].norm_value);

    RFE h1 = fn(zpoly(g5, {1}));
    ReciprocityReport triv = check_curve_2d(z, zm1, h1);
    CHECK(triv.pass);
    CHECK(triv.nontrivial.empty());

    RingPtr r = nil(GF(3), {"e"}, {2});
    RingValue e = r->generator("e");
    RFE f = fn(zpolyv(r, {e, r->one()}));  // z + e
    RFE g = with_t(r, {{1, {zpoly(r, {1}), zpoly(r, {1})}}, {0, {zpoly(r, {0, -1}), zpoly(r, {1})}}});  // t_C - z
    RFE h = with_t(r, {{1, {zpoly(r, {1}), zpoly(r, {1})}}});
    ReciprocityReport rr = check_curve_2d(f, g, h);
    CHECK_MESSAGE(rr.pass, names(rr));
}

TEST_CASE("branch expansion") {
    RingPtr q = Q();
    BiSeries u2 = BiSeries::monomial(q->one(), {0, 2});
    Branch b = Branch::graph(u2);
    Window w = Window::rows(3, 3);
    CHECK(branch_expand(BiSeries::variable_t(q), b, w) == u2 + BiSeries::variable_t(q));
    CHECK(branch_expand(BiSeries::variable_t(q) - u2, b, w) == BiSeries::variable_t(q));
    BiSeries upt = BiSeries::variable_u(q) + BiSeries::variable_t(q);
    BiSeries sw = branch_expand(upt, Branch::u_axis(), w);
    CHECK(sw == upt);
    UnitLead lead = unit_lead(sw);
    CHECK(lead.nu == Exp{0, 1});
    BiSeries ut2 = poly(q, {{1, 2, q->one()}});
    CHECK(branch_expand(ut2, Branch::u_axis(), w) == poly(q, {{2, 1, q->one()}}));
    expect_error(ErrorCode::UnsupportedShape, [&] { branch_expand(invert(upt, w), Branch::u_axis(), w); });
    expect_error(ErrorCode::UnsupportedShape, [&] { Branch::graph(BiSeries::constant(q->one())); });
    // negative powers of t become series on a graph branch
    BiSeries inv = branch_expand(poly(q, {{0, -1, q->one()}}), b, Window::rows(1, 3));
    CHECK(inv.coeff({0, -2}).is_one());
    CHECK(inv.coeff({1, -4}) == num(q, -1));
}

TEST_CASE("two-dimensional law at a point: examples") {
    for (RingPtr r : {Q(), GF(5), nil(GF(3), {"e"}, {2})}) {
        UnitExpr u = U(BiSeries::variable_u(r)), t = U(BiSeries::variable_t(r));
        UnitExpr tmu = U(poly(r, {{0, 1, r->one()}, {1, 0, -r->one()}}));
        UnitExpr tmu2 = U(poly(r, {{0, 1, r->one()}, {2, 0, -r->one()}}));
        ReciprocityReport a = check_point_2d(u, t, tmu);
        CHECK(a.law == "point2d");
        CHECK(a.sites.size() == 3);
        CHECK_MESSAGE(a.pass, names(a));
        ReciprocityReport b = check_point_2d(u, t, tmu2);
        CHECK(b.sites.size() == 3);
        CHECK_MESSAGE(b.pass, names(b));
        UnitExpr unit = U(poly(r, {{0, 0, num(r, 2)}, {1, 0, r->one()}, {0, 1, r->one()}}));
        ReciprocityReport c = check_point_2d(u, t, unit);
        CHECK(c.sites.size() == 2);
        CHECK_MESSAGE(c.pass, names(c));
    }
    RingPtr q = Q();
    expect_error(ErrorCode::UnsupportedShape, [&] {
        check_point_2d(U(BiSeries::variable_u(q)), U(poly(q, {{0, 2, q->one()}, {3, 0, -q->one()}})), U(BiSeries::variable_t(q)));
    });
}

TEST_CASE("property: one-dimensional law holds") {
    int nontrivial = 0;
    gen::Rng rng(401);
    for (RingPtr r : {GF(3), GF(5), GF4(), nil(GF(3), {"e"}, {2}), nil(GF(2), {"e"}, {3})}) {
        for (int trial = 0; trial < 12; ++trial) {
            RFE f = random_function(r, rng), g = random_function(r, rng);
            ReciprocityReport rep = check_curve_1d(f, g);
            nontrivial += !rep.nontrivial.empty();
            CHECK_MESSAGE(rep.pass, r->text() << " " << f.to_string() << " | " << g.to_string() << " | " << names(rep));
        }
    }
    // over Q with rational zeros and poles
    RingPtr q = Q();
    for (int trial = 0; trial < 12; ++trial) {
        auto linear_product = [&] {
            UPoly p = UPoly::constant(num(q, gen::uniform_int(rng, 1, 3), gen::uniform_int(rng, 1, 2)));
            for (int k = gen::uniform_int(rng, 0, 2); k > 0; --k) p = p * zpolyv(q, {num(q, gen::uniform_int(rng, -3, 3), gen::uniform_int(rng, 1, 2)), q->one()});
            return p;
        };
        RFE f = fn(linear_product(), linear_product()), g = fn(linear_product(), linear_product());
        ReciprocityReport rep = check_curve_1d(f, g);
        nontrivial += !rep.nontrivial.empty();
        CHECK_MESSAGE(rep.pass, f.to_string() << " | " << g.to_string() << " | " << names(rep));
    }
    CHECK(nontrivial > 0);
}

TEST_CASE("property: two-dimensional law along P^1 holds") {
    int nontrivial = 0;
    gen::Rng rng(402);
    for (RingPtr r : {GF(3), GF(5), nil(GF(3), {"e"}, {2})}) {
        for (int trial = 0; trial < 12; ++trial) {
            RFE f = random_element(r, rng), g = random_element(r, rng), h = random_element(r, rng);
            ReciprocityReport rep = check_curve_2d(f, g, h);
            nontrivial += !rep.nontrivial.empty();
            CHECK_MESSAGE(rep.pass, r->text() << " " << f.to_string() << " | " << g.to_string() << " | " << h.to_string() << " | " << names(rep));
        }
    }
    CHECK(nontrivial > 0);
}

TEST_CASE("property: two-dimensional law at a point holds") {
    int nontrivial = 0;
    gen::Rng rng(403);
    for (RingPtr r : {Q(), GF(3), GF(5), nil(GF(3), {"e"}, {2}), nil(Q(), {"e"}, {2})}) {
        for (int trial = 0; trial < 8; ++trial) {
            UnitExpr f = random_point_unit(r, rng), g = random_point_unit(r, rng), h = random_point_unit(r, rng);
            ReciprocityReport rep = check_point_2d(f, g, h);
            nontrivial += !rep.nontrivial.empty();
            CHECK_MESSAGE(rep.pass, r->text() << " " << f.to_string() << " | " << g.to_string() << " | " << h.to_string() << " | " << names(rep));
        }
    }
    CHECK(nontrivial > 0);
}

TEST_CASE("property: sites outside the candidate set contribute 1") {
    gen::Rng rng(404);
    RingPtr g5 = GF(5);
    std::vector<ClosedPoint> extra{ClosedPoint::finite(zpoly(g5, {2, 1})), ClosedPoint::finite(zpoly(g5, {2, 0, 1})),
                                   ClosedPoint::finite(zpoly(g5, {1, 1, 0, 1}))};
    for (int trial = 0; trial < 8; ++trial) {
        // zeros and poles only at 0, 1 and infinity
        auto f01 = [&] {
            UPoly p = UPoly::constant(gen::unit(g5, rng)), d = UPoly::constant(g5->one());
            for (int k = gen::uniform_int(rng, 0, 2); k > 0; --k) (gen::coin(rng) ? p : d) = (gen::coin(rng) ? p : d) * zpoly(g5, std::vector<std::int64_t>{gen::uniform_int(rng, -1, 0), 1});
            return fn(p, d);
        };
        RFE f = f01(), g = f01();
        RFE h = with_t(g5, {{1, {zpoly(g5, {1}), zpoly(g5, {1})}}, {2, {zpoly(g5, {0, 1}), zpoly(g5, {-1, 1})}}});
        for (const ClosedPoint& x : extra) {
            CHECK(curve_symbol1_at(f, g, x).norm_value.is_one());
            CHECK(curve_symbol2_at(f, g, h, x).norm_value.is_one());
        }
    }
    for (RingPtr r : {GF(5), nil(GF(3), {"e"}, {2})}) {
        for (int trial = 0; trial < 8; ++trial) {
            UnitExpr f = random_point_unit(r, rng), g = random_point_unit(r, rng), h = random_point_unit(r, rng);
            std::vector<Branch> known = candidate_branches({f, g, h});
            for (int k = 0; k < 3; ++k) {
                Branch b = Branch::graph(BiSeries::monomial(gen::unit(r, rng), {0, gen::uniform_int(rng, 1, 3)}));
                bool listed = false;
                for (const Branch& c : known) listed = listed || same_branch(c, b);
                if (listed) continue;
                CHECK_MESSAGE(branch_symbol(f, g, h, b).norm_value.is_one(), b.name() << " " << f.to_string() << " | " << g.to_string() << " | " << h.to_string());
            }
        }
    }
}
