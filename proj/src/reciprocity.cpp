#include "ccsym/reciprocity.hpp"

#include <algorithm>
#include <set>

#include "ccsym/errors.hpp"
#include "ccsym/symbol1d.hpp"
#include "ccsym/symbol2d.hpp"

namespace ccs {

namespace {

UPoly residue_image(const UPoly& f) {
    RingPtr k = f.ring()->residue_field();
    std::vector<RingValue> c;
    for (const RingValue& x : f.coeffs()) c.push_back(x.residue_image());
    return UPoly(k, std::move(c));
}

UPoly lift_poly(const UPoly& f, RingPtr r) {
    std::vector<RingValue> c;
    for (const RingValue& x : f.coeffs()) c.push_back(embed(x, r));
    return UPoly(r, std::move(c));
}

std::string poly_key(const UPoly& f) {
    std::string s;
    for (const RingValue& c : f.coeffs()) s += c.to_string() + ";";
    return s;
}

// ---------------------------------------------------------------- rational roots over Q

std::vector<mpz_class> divisors(mpz_class n) {
    if (n < 0) n = -n;
    if (n > mpz_class("1000000000000")) fail(ErrorCode::UnsupportedShape, "coefficients too large to search for rational roots");
    std::vector<mpz_class> out;
    for (mpz_class d = 1; d * d <= n; ++d)
        if (n % d == 0) {
            out.push_back(d);
            if (d * d != n) out.push_back(n / d);
        }
    return out;
}

std::vector<ClosedPoint> rational_points(const UPoly& f) {
    std::vector<mpq_class> c;
    for (const RingValue& x : f.coeffs()) c.push_back(rat::to_mpq(x.coords()[0]));
    std::vector<ClosedPoint> out;
    RingPtr q = f.ring();
    auto point = [&](const mpq_class& r) { return ClosedPoint::finite(UPoly(q, {q->from_mpq(-r), q->one()})); };
    if (c.size() > 1 && c[0] == 0) {
        out.push_back(point(0));
        while (c.size() > 1 && c[0] == 0) c.erase(c.begin());
    }
    // clear denominators
    mpz_class l = 1;
    for (const mpq_class& x : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    std::vector<mpq_class> a;
    for (const mpq_class& x : c) a.push_back(x * l);
    while (a.size() > 1) {
        bool found = false;
        for (const mpz_class& p : divisors(a.front().get_num()))
            for (const mpz_class& d : divisors(a.back().get_num()))
                for (int sg : {1, -1}) {
                    if (found) break;
                    mpq_class r(sg * p, d);
                    r.canonicalize();
                    mpq_class v = 0;
                    for (auto it = a.rbegin(); it != a.rend(); ++it) v = v * r + *it;
                    if (v != 0) continue;
                    found = true;
                    out.push_back(point(r));
                    // deflate by (z - r)
                    std::vector<mpq_class> b(a.size() - 1);
                    mpq_class carry = 0;
                    for (std::size_t i = a.size() - 1; i > 0; --i) {
                        carry = carry * r + a[i];
                        b[i - 1] = carry;
                    }
                    a = b;
                }
        if (!found) fail(ErrorCode::UnsupportedShape, "zeros and poles over Q must be rational, left with " + f.to_string("z"));
    }
    return out;
}

// ---------------------------------------------------------------- local fields at points

struct LocalField {
    RingPtr ring;   // k(x) (x) R
    RingValue theta;
    int level = 0;  // field levels of R
};

LocalField local_field(RingPtr r, const ClosedPoint& x) {
    LocalField lf{r, {}, r->field_levels()};
    if (x.infinite) return lf;
    if (x.pi.degree() < 1) fail(ErrorCode::DomainViolation, "point polynomial must have positive degree");
    if (!x.pi.lead().is_one()) fail(ErrorCode::DomainViolation, "point polynomial must be monic");
    if (x.pi.degree() == 1) {
        lf.theta = -embed(x.pi.coeff(0), r);
        return lf;
    }
    if (r->is_rational()) fail(ErrorCode::UnsupportedShape, "points of degree > 1 over Q need number fields");
    std::vector<RingValue> mod;
    for (int i = 0; i < x.pi.degree(); ++i) mod.push_back(embed(x.pi.coeff(i), r->scalar_ring()));
    lf.ring = extend_field(r, mod, "th" + std::to_string(r->field_levels() + 1));
    lf.theta = lf.ring->field_generator(lf.ring->field_levels());
    return lf;
}

// coefficients of p at the point as a Laurent polynomial in u: index j -> u^(j + shift)
std::pair<std::vector<RingValue>, int> at_point(const UPoly& p, const LocalField& lf, bool infinite) {
    if (infinite) {
        std::vector<RingValue> c;
        for (const RingValue& x : p.coeffs()) c.push_back(embed(x, lf.ring));
        std::reverse(c.begin(), c.end());
        return {c, -p.degree()};
    }
    UPoly s = lift_poly(p, lf.ring).shifted(lf.theta);
    return {s.coeffs(), 0};
}

// common denominator form: e = (sum_k t^k P_k) / D
struct Combined {
    std::map<int, UPoly> num;
    UPoly den;
};

Combined combine(const RationalFunctionElement& e) {
    Combined c;
    RingPtr r = e.ring;
    c.den = UPoly::constant(r->one());
    for (const auto& [k, f] : e.terms) c.den = c.den * f.den;
    for (const auto& [k, f] : e.terms) {
        UPoly p = f.num;
        for (const auto& [l, g] : e.terms)
            if (l != k) p = p * g.den;
        if (!p.is_zero()) c.num[k] = p;
    }
    return c;
}

enum class Layout { OneDim, TwoDim };

BiSeries laurent_of(RingPtr r, const std::vector<std::pair<int, std::pair<std::vector<RingValue>, int>>>& rows, Layout layout) {
    std::vector<std::pair<Exp, RingValue>> terms;
    for (const auto& [k, cs] : rows) {
        const auto& [c, shift] = cs;
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (c[j].is_zero()) continue;
            int uj = static_cast<int>(j) + shift;
            terms.emplace_back(layout == Layout::TwoDim ? Exp{k, uj} : Exp{uj, 0}, c[j]);
        }
    }
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return BiSeries::from_terms(r, std::move(terms));
}

UnitExpr local_unit(const RationalFunctionElement& e, const ClosedPoint& x, Layout layout) {
    if (!e.ring) fail(ErrorCode::Usage, "element without a ring");
    LocalField lf = local_field(e.ring, x);
    Combined c = combine(e);
    std::vector<std::pair<int, std::pair<std::vector<RingValue>, int>>> rows;
    for (const auto& [k, p] : c.num) rows.push_back({k, at_point(p, lf, x.infinite)});
    BiSeries num = laurent_of(lf.ring, rows, layout);
    BiSeries den = laurent_of(lf.ring, {{0, at_point(c.den, lf, x.infinite)}}, layout);
    return UnitExpr(num) * UnitExpr(den).inverse();
}

RingValue norm_down(const RingValue& v, RingPtr base) {
    if (v.ring() == base) return v;
    return norm_to_subfield(v, base->field_levels());
}

ReciprocityReport finish(std::string law, std::vector<SiteValue> sites, RingPtr r) {
    ReciprocityReport rep;
    rep.law = std::move(law);
    rep.product = r->one();
    for (const SiteValue& s : sites) {
        rep.product *= s.norm_value;
        if (!s.norm_value.is_one()) rep.nontrivial.push_back(s.site);
    }
    rep.sites = std::move(sites);
    rep.pass = rep.product.is_one();
    return rep;
}

RingPtr common_ring(const std::vector<const RationalFunctionElement*>& es) {
    RingPtr r = es.front()->ring;
    for (const auto* e : es) check_same_ring(r, e->ring);
    if (r->prime_power() > 1) fail(ErrorCode::DomainViolation, "curve checks need a field of constants under the nilpotents");
    return r;
}

}  // namespace

// ---------------------------------------------------------------- elements and points

RationalFunctionElement RationalFunctionElement::function(const UPoly& num, const UPoly& den) {
    check_same_ring(num.ring(), den.ring());
    return from_terms(num.ring(), {{0, RatFunc{num, den}}});
}

RationalFunctionElement RationalFunctionElement::function(const UPoly& num) {
    return function(num, UPoly::constant(num.ring()->one()));
}

RationalFunctionElement RationalFunctionElement::from_terms(RingPtr r, std::map<int, RatFunc> terms) {
    RationalFunctionElement e;
    e.ring = r;
    for (auto& [k, f] : terms) {
        check_same_ring(r, f.num.ring());
        check_same_ring(r, f.den.ring());
        if (residue_image(f.den).is_zero()) fail(ErrorCode::NotAUnit, "denominator vanishes modulo the nilradical");
        if (!f.num.is_zero()) e.terms.emplace(k, std::move(f));
    }
    return e;
}

bool RationalFunctionElement::has_t_structure() const { return !(terms.empty() || (terms.size() == 1 && terms.begin()->first == 0)); }

std::string RationalFunctionElement::to_string() const {
    std::string s;
    for (const auto& [k, f] : terms) {
        if (!s.empty()) s += " + ";
        s += "(" + f.num.to_string("z") + ")/(" + f.den.to_string("z") + ")";
        if (k != 0) s += "*t_C^" + std::to_string(k);
    }
    return s.empty() ? "0" : s;
}

ClosedPoint ClosedPoint::finite(const UPoly& pi) { return {false, pi}; }

std::string ClosedPoint::name() const { return infinite ? "inf" : pi.to_string("z"); }

BiSeries expand_at_point(const RationalFunctionElement& e, const ClosedPoint& x, const Window& w) {
    return local_unit(e, x, Layout::TwoDim).expand(w);
}

UnitExpr local_unit(const RationalFunctionElement& e, const ClosedPoint& x) { return local_unit(e, x, Layout::TwoDim); }

std::vector<ClosedPoint> candidate_points(const std::vector<RationalFunctionElement>& es) {
    std::vector<ClosedPoint> out;
    std::set<std::string> seen;
    for (const RationalFunctionElement& e : es)
        for (const auto& [k, f] : e.terms)
            for (const UPoly* p : {&f.num, &f.den}) {
                UPoly rp = residue_image(*p);
                if (rp.degree() < 1) continue;
                std::vector<ClosedPoint> pts;
                if (rp.ring()->is_rational()) {
                    pts = rational_points(rp);
                } else {
                    for (const UPoly& pi : irreducible_factors(rp)) pts.push_back(ClosedPoint::finite(pi));
                }
                for (ClosedPoint& x : pts)
                    if (seen.insert(poly_key(x.pi)).second) out.push_back(std::move(x));
            }
    std::stable_sort(out.begin(), out.end(), [](const ClosedPoint& a, const ClosedPoint& b) { return a.degree() < b.degree(); });
    out.push_back(ClosedPoint::at_infinity());
    return out;
}

// ---------------------------------------------------------------- branches

Branch Branch::graph(const BiSeries& phi) {
    if (!phi.is_exact()) fail(ErrorCode::UnsupportedShape, "branch polynomial must be exact");
    if (phi.is_zero()) return t_axis();
    for (Exp e : phi.exps())
        if (e.i != 0 || e.j < 1) fail(ErrorCode::UnsupportedShape, "branch polynomial must be a polynomial in u without constant term");
    return {Kind::Graph, phi};
}

std::string Branch::name() const {
    switch (kind) {
    case Kind::TAxis: return "t_C=t";
    case Kind::UAxis: return "t_C=u";
    case Kind::Graph: return "t_C=t-(" + phi.to_string() + ")";
    }
    return "?";
}

namespace {

BiSeries swap_roles(const BiSeries& e) {
    std::vector<std::pair<Exp, RingValue>> terms;
    for (std::size_t k = 0; k < e.size(); ++k) terms.emplace_back(Exp{e.exp(k).j, e.exp(k).i}, e.coeff_at(k));
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return BiSeries::from_terms(e.ring(), std::move(terms));
}

// image of a Laurent polynomial under t -> phi(u) + t: u^a (phi + t)^b Q(u, phi + t)
UnitExpr graph_image(const BiSeries& p, const BiSeries& phi) {
    RingPtr r = p.ring();
    int a = 0, b = 0;
    for (Exp e : p.exps()) {
        a = std::min(a, e.j);
        b = std::min(b, e.i);
    }
    BiSeries q = shift(p, Exp{-b, -a});
    BiSeries tn = phi + BiSeries::variable_t(r);
    // Horner in t over rows of q
    int top = 0;
    for (Exp e : q.exps()) top = std::max(top, e.i);
    std::vector<std::vector<std::pair<Exp, RingValue>>> rows(static_cast<std::size_t>(top) + 1);
    for (std::size_t k = 0; k < q.size(); ++k) rows[static_cast<std::size_t>(q.exp(k).i)].emplace_back(Exp{0, q.exp(k).j}, q.coeff_at(k));
    BiSeries acc = BiSeries::from_terms(r, {});
    for (int i = top; i >= 0; --i) acc = mul(acc, tn) + BiSeries::from_terms(r, rows[static_cast<std::size_t>(i)]);
    UnitExpr out(acc);
    if (a != 0) out = out * UnitExpr(BiSeries::variable_u(r)).pow(a);
    if (b != 0) out = out * UnitExpr(tn).pow(b);
    return out;
}

}  // namespace

BiSeries branch_expand(const BiSeries& e, const Branch& b, const Window& w) {
    switch (b.kind) {
    case Branch::Kind::TAxis: return e.is_exact() ? e : e.truncated(w);
    case Branch::Kind::UAxis:
        if (!e.is_exact()) fail(ErrorCode::UnsupportedShape, "swapping the parameters needs the whole series");
        return swap_roles(e);
    case Branch::Kind::Graph: {
        if (!e.is_exact()) fail(ErrorCode::UnsupportedShape, "graph branches need exact polynomials");
        bool polynomial_in_t = true;
        for (Exp x : e.exps()) polynomial_in_t = polynomial_in_t && x.i >= 0;
        UnitExpr img = graph_image(e, b.phi);
        if (polynomial_in_t) {
            BiSeries out = BiSeries::constant(e.ring()->one());
            for (const auto& [p, k] : img.factors()) {
                if (k < 0) return img.expand(w);
                for (std::int64_t n = 0; n < k; ++n) out = mul(out, p);
            }
            return out;
        }
        return img.expand(w);
    }
    }
    return e;
}

UnitExpr branch_unit(const UnitExpr& e, const Branch& b) {
    if (b.kind == Branch::Kind::TAxis || e.is_one()) return e;
    UnitExpr out(e.ring());
    for (const auto& [p, k] : e.factors()) {
        if (b.kind == Branch::Kind::UAxis)
            out = out * UnitExpr(swap_roles(p)).pow(k);
        else
            out = out * graph_image(p, b.phi).pow(k);
    }
    return out;
}

std::vector<Branch> candidate_branches(const std::vector<UnitExpr>& es) {
    std::vector<Branch> out{Branch::t_axis(), Branch::u_axis()};
    std::set<std::string> seen;
    for (const UnitExpr& e : es)
        for (const auto& [p, k] : e.factors()) {
            // residue image with the monomial part divided out
            std::vector<std::pair<Exp, RingValue>> terms;
            for (std::size_t n = 0; n < p.size(); ++n) {
                RingValue c = p.coeff_at(n).residue_image();
                if (!c.is_zero()) terms.emplace_back(p.exp(n), c);
            }
            if (terms.empty()) fail(ErrorCode::NotAUnit, "factor vanishes modulo the nilradical");
            int a = kInf, b = kInf;
            for (const auto& [x, c] : terms) {
                a = std::min(a, x.j);
                b = std::min(b, x.i);
            }
            std::map<Exp, RingValue> q;
            for (const auto& [x, c] : terms) q.emplace(Exp{x.i - b, x.j - a}, c);
            if (q.count(Exp{0, 0})) continue;  // unit of k[[u, t]] times a monomial
            // a t - psi(u) with a a nonzero constant
            auto lin = q.find(Exp{1, 0});
            bool graph = lin != q.end();
            for (const auto& [x, c] : q) graph = graph && (x == Exp{1, 0} || (x.i == 0 && x.j >= 1));
            if (!graph) fail(ErrorCode::UnsupportedShape, "factor " + p.to_string() + " is not a monomial times a unit or a graph t - phi(u)");
            RingPtr r = p.ring();
            RingValue inv = embed(lin->second.inverse(), r);
            std::vector<std::pair<Exp, RingValue>> phi;
            for (const auto& [x, c] : q)
                if (x.i == 0) phi.emplace_back(x, -embed(c, r) * inv);
            Branch br = Branch::graph(BiSeries::from_terms(r, std::move(phi)));
            if (seen.insert(br.name()).second) out.push_back(br);
        }
    return out;
}

// ---------------------------------------------------------------- symbols and checks

SiteValue curve_symbol1_at(const RationalFunctionElement& f, const RationalFunctionElement& g, const ClosedPoint& x) {
    RingPtr r = common_ring({&f, &g});
    if (f.has_t_structure() || g.has_t_structure()) fail(ErrorCode::DomainViolation, "one-dimensional law takes plain rational functions");
    RingValue v = cc1_product(local_unit(f, x, Layout::OneDim), local_unit(g, x, Layout::OneDim));
    return {x.name(), x.degree(), v, norm_down(v, r)};
}

SiteValue curve_symbol2_at(const RationalFunctionElement& f, const RationalFunctionElement& g, const RationalFunctionElement& h,
                           const ClosedPoint& x) {
    RingPtr r = common_ring({&f, &g, &h});
    RingValue v = cc2(local_unit(f, x, Layout::TwoDim), local_unit(g, x, Layout::TwoDim), local_unit(h, x, Layout::TwoDim)).value;
    return {x.name(), x.degree(), v, norm_down(v, r)};
}

SiteValue branch_symbol(const UnitExpr& f, const UnitExpr& g, const UnitExpr& h, const Branch& b) {
    RingValue v = cc2(branch_unit(f, b), branch_unit(g, b), branch_unit(h, b)).value;
    return {b.name(), 1, v, v};
}

ReciprocityReport check_curve_1d(const RationalFunctionElement& f, const RationalFunctionElement& g) {
    RingPtr r = common_ring({&f, &g});
    std::vector<SiteValue> sites;
    for (const ClosedPoint& x : candidate_points({f, g})) sites.push_back(curve_symbol1_at(f, g, x));
    return finish("curve1d", std::move(sites), r);
}

ReciprocityReport check_curve_2d(const RationalFunctionElement& f, const RationalFunctionElement& g, const RationalFunctionElement& h) {
    RingPtr r = common_ring({&f, &g, &h});
    std::vector<SiteValue> sites;
    for (const ClosedPoint& x : candidate_points({f, g, h})) sites.push_back(curve_symbol2_at(f, g, h, x));
    return finish("curve2d", std::move(sites), r);
}

ReciprocityReport check_point_2d(const UnitExpr& f, const UnitExpr& g, const UnitExpr& h) {
    RingPtr r = f.ring() ? f.ring() : g.ring() ? g.ring() : h.ring();
    if (!r) fail(ErrorCode::Usage, "point check without a coefficient ring");
    std::vector<SiteValue> sites;
    for (const Branch& b : candidate_branches({f, g, h})) sites.push_back(branch_symbol(f, g, h, b));
    return finish("point2d", std::move(sites), r);
}

}  // namespace ccs
