#include "ccsym/suites.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "ccsym/poly.hpp"
#include "ccsym/random.hpp"
#include "ccsym/reciprocity.hpp"
#include "ccsym/symbol2d.hpp"
#include "ccsym/witt.hpp"

namespace ccs {

namespace {

constexpr std::size_t kMaxFailures = 5;

using Terms = std::vector<std::pair<Exp, RingValue>>;

BiSeries sorted_series(RingPtr r, Terms terms) {
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Terms merged;
    for (auto& [e, c] : terms) {
        if (!merged.empty() && merged.back().first == e)
            merged.back().second += c;
        else
            merged.emplace_back(e, c);
    }
    return BiSeries::from_terms(r, std::move(merged));
}

UnitExpr U(const BiSeries& f) { return UnitExpr(f); }
UnitExpr u_of(RingPtr r) { return U(BiSeries::variable_u(r)); }
UnitExpr t_of(RingPtr r) { return U(BiSeries::variable_t(r)); }

bool is_unit(const BiSeries& f) {
    try {
        unit_lead(f);
        return true;
    } catch (const Error&) {
        return false;
    }
}

std::string show(std::initializer_list<std::string> parts) {
    std::string s;
    for (const std::string& p : parts) s += (s.empty() ? "" : " | ") + p;
    return s;
}

class Runner {
public:
    Runner(SuiteReport& rep) : rep_(rep) {}

    // one instance; a thrown Error counts as a failure
    void instance(const std::function<std::string()>& body) {
        ++rep_.instances;
        std::string why;
        try {
            why = body();
        } catch (const Error& e) {
            why = std::string(error_name(e.code())) + ": " + e.what();
        }
        if (why.empty()) return;
        ++rep_.failed;
        if (rep_.failures.size() < kMaxFailures) rep_.failures.push_back(why);
    }
    void nontrivial(bool b) { rep_.nontrivial += b; }
    void degree(int d) { rep_.max_degree = std::max(rep_.max_degree, d); }

private:
    SuiteReport& rep_;
};

void need(bool ok, const std::string& suite, const std::string& what) {
    if (!ok) fail(ErrorCode::DomainViolation, "suite '" + suite + "' needs " + what);
}

gen::Shape box3() { return {-3, 3, 3}; }
gen::Shape box2() { return {-2, 2, 2}; }

RingValue symbol(const UnitExpr& f, const UnitExpr& g, const UnitExpr& h) {
    SymbolResult s = cc2(f, g, h);
    if (!s.stabilized) fail(ErrorCode::StabilizationFailure, "not stabilized");
    return s.value;
}

// 1 + c u^j t^i
BiSeries one_plus(RingPtr r, const RingValue& c, Exp e) { return sorted_series(r, {{Exp{0, 0}, r->one()}, {e, c}}); }

Exp nonzero_exp(gen::Rng& rng, int m) {
    Exp e;
    while (e.is_zero()) e = {gen::uniform_int(rng, -m, m), gen::uniform_int(rng, -m, m)};
    return e;
}

BiSeries laurent(RingPtr r, gen::Rng& rng, int m) {
    Terms terms;
    int n = gen::uniform_int(rng, 1, 4);
    for (int k = 0; k < n; ++k) terms.emplace_back(Exp{gen::uniform_int(rng, -m, m), gen::uniform_int(rng, -m, m)}, gen::element(r, rng));
    return sorted_series(r, std::move(terms));
}

// ---------------------------------------------------------------- two-dimensional symbol

void path_agreement(Runner& run, RingPtr r, int trials, gen::Rng& rng) {
    need(r->is_rational(), "path-agreement", "a Q-algebra");
    for (int k = 0; k < trials; ++k) {
        UnitExpr f = gen::unit_expr(r, rng, box3()), g = gen::unit_expr(r, rng, box3()), h = gen::unit_expr(r, rng, box3());
        run.instance([&] {
            SymbolResult a = cc2_product(f, g, h), b = cc2_residue(f, g, h);
            run.nontrivial(!a.value.is_one());
            if (!a.stabilized || !b.stabilized) return "not stabilized: " + show({f.to_string(), g.to_string(), h.to_string()});
            if (a.value != b.value)
                return show({f.to_string(), g.to_string(), h.to_string(), "product " + a.value.to_string(), "residue " + b.value.to_string()});
            return std::string();
        });
    }
}

void tame(Runner& run, RingPtr r, int trials, gen::Rng& rng) {
    need(r->is_field(), "tame", "a field");
    for (int k = 0; k < trials; ++k) {
        UnitExpr f = gen::unit_expr(r, rng, box3()), g = gen::unit_expr(r, rng, box3()), h = gen::unit_expr(r, rng, box3());
        run.instance([&] {
            RingValue a = symbol(f, g, h), b = tame2(f, g, h);
            run.nontrivial(!a.is_one());
            return a == b ? std::string() : show({f.to_string(), g.to_string(), h.to_string(), a.to_string(), b.to_string()});
        });
    }
}

// Res(f dg ^ dh) term by term
RingValue res_f_dg_dh(const BiSeries& f, const BiSeries& g, const BiSeries& h) {
    RingPtr r = f.ring();
    RingValue s = r->zero();
    for (std::size_t a = 0; a < f.size(); ++a)
        for (std::size_t b = 0; b < g.size(); ++b)
            for (std::size_t c = 0; c < h.size(); ++c) {
                Exp e1 = f.exp(a), e2 = g.exp(b), e3 = h.exp(c);
                if (!(e1 + e2 + e3).is_zero()) continue;
                s += f.coeff_at(a) * g.coeff_at(b) * h.coeff_at(c) * r->from_int(static_cast<std::int64_t>(e2.j) * e3.i - static_cast<std::int64_t>(e3.j) * e2.i);
            }
    return s;
}

void deformation(Runner& run, RingPtr r, int trials, gen::Rng& rng) {
    need(r->generators().size() == 1 && r->bounds()[0] == 4 && r->prime_power() == 1, "deformation", "k[e]/(e^4) over a field k");
    RingPtr k = r->residue_field();
    RingValue e = r->generator(r->generators()[0]);
    auto lift = [&](const BiSeries& s) {
        Terms terms{{Exp{0, 0}, r->one()}};
        for (std::size_t n = 0; n < s.size(); ++n) terms.emplace_back(s.exp(n), e * embed(s.coeff_at(n), r));
        return U(sorted_series(r, std::move(terms)));
    };
    for (int n = 0; n < trials; ++n) {
        BiSeries f = laurent(k, rng, 3), g = laurent(k, rng, 3), h = laurent(k, rng, 3);
        // a term of h closing a pair of terms of f and g, so that the residue can be nonzero
        if (!f.is_zero() && !g.is_zero() && gen::coin(rng, 0.8)) {
            Exp c = -(f.exp(static_cast<std::size_t>(gen::uniform_int(rng, 0, static_cast<int>(f.size()) - 1))) +
                      g.exp(static_cast<std::size_t>(gen::uniform_int(rng, 0, static_cast<int>(g.size()) - 1))));
            if (std::abs(c.i) <= 3 && std::abs(c.j) <= 3 && !h.find(c)) h = h + BiSeries::monomial(gen::unit(k, rng), c);
        }
        run.instance([&] {
            RingValue res = res_f_dg_dh(f, g, h);
            run.nontrivial(!res.is_zero());
            RingValue want = r->one() + e.pow(3) * embed(res, r);
            RingValue got = symbol(lift(f), lift(g), lift(h));
            return got == want ? std::string() : show({f.to_string(), g.to_string(), h.to_string(), got.to_string(), want.to_string()});
        });
    }
}

void closed_forms(Runner& run, RingPtr k) {
    need(k->is_field() && k->generators().empty(), "closed-forms", "a field without nilpotent generators");
    need(k->is_rational() || k->field_levels() == 0, "closed-forms", "Q or a prime field");
    RingDescriptor kd = k->is_rational() ? RingDescriptor::rationals() : RingDescriptor::prime_field(k->modulus());
    RingPtr r3 = make_ring(RingDescriptor::nilpotent(kd, {"e1", "e2", "e3"}, {2, 2, 2}));
    RingPtr r2 = make_ring(RingDescriptor::nilpotent(kd, {"e1", "e2"}, {2, 2}));
    std::vector<Exp> box;
    for (int i = -3; i <= 3; ++i)
        for (int j = -3; j <= 3; ++j)
            if (i != 0 || j != 0) box.push_back({i, j});
    RingValue e1 = r3->generator("e1"), e2 = r3->generator("e2"), e3 = r3->generator("e3");
    RingValue d1 = r2->generator("e1"), d2 = r2->generator("e2");
    for (Exp a : box)
        for (Exp b : box) {
            for (Exp c : box) {
                run.instance([&] {
                    bool closed = (a + b + c).is_zero();
                    RingValue want = r3->one() + (closed ? r3->from_int(static_cast<std::int64_t>(b.j) * c.i - static_cast<std::int64_t>(c.j) * b.i) * e1 * e2 * e3 : r3->zero());
                    RingValue got = symbol(U(one_plus(r3, e1, a)), U(one_plus(r3, e2, b)), U(one_plus(r3, e3, c)));
                    run.nontrivial(!got.is_one());
                    if (got == want) return std::string();
                    std::ostringstream s;
                    s << "(" << a.i << "," << a.j << ") (" << b.i << "," << b.j << ") (" << c.i << "," << c.j << "): " << got.to_string() << " want " << want.to_string();
                    return s.str();
                });
            }
            run.instance([&] {
                bool opposite = (a + b).is_zero();
                UnitExpr f = U(one_plus(r2, d1, a)), g = U(one_plus(r2, d2, b));
                RingValue want_u = r2->one() + (opposite ? r2->from_int(a.i) * d1 * d2 : r2->zero());
                RingValue want_t = r2->one() + (opposite ? r2->from_int(b.j) * d1 * d2 : r2->zero());
                RingValue gu = symbol(f, g, u_of(r2)), gt = symbol(f, g, t_of(r2));
                run.nontrivial(!gu.is_one() || !gt.is_one());
                if (gu == want_u && gt == want_t) return std::string();
                std::ostringstream s;
                s << "(" << a.i << "," << a.j << ") (" << b.i << "," << b.j << "): " << gu.to_string() << ", " << gt.to_string();
                return s.str();
            });
        }
}

enum Algebraic { kSteinberg = 1, kAntisymmetry = 2, kTrimultiplicative = 4, kFFG = 8 };

void algebraic(Runner& run, RingPtr r, int trials, gen::Rng& rng, int mask) {
    for (int n = 0; n < trials; ++n) {
        BiSeries f1 = gen::unit_polynomial(r, rng, box2()), f2 = gen::unit_polynomial(r, rng, box2());
        UnitExpr g = U(gen::unit_polynomial(r, rng, box2())), h = U(gen::unit_polynomial(r, rng, box2()));
        UnitExpr a = U(f1), b = U(f2);
        std::string in = show({r->text(), f1.to_string(), f2.to_string(), g.to_string(), h.to_string()});
        run.instance([&] {
            RingValue agh = symbol(a, g, h);
            run.nontrivial(!agh.is_one());
            if (mask & kTrimultiplicative) {
                UnitExpr ab = U(mul(f1, f2));
                if (symbol(ab, g, h) != agh * symbol(b, g, h)) return "first slot: " + in;
                if (symbol(g, ab, h) != symbol(g, a, h) * symbol(g, b, h)) return "second slot: " + in;
                if (symbol(g, h, ab) != symbol(g, h, a) * symbol(g, h, b)) return "third slot: " + in;
            }
            if (mask & kAntisymmetry) {
                if (!(agh * symbol(g, a, h)).is_one()) return "swap 12: " + in;
                if (!(agh * symbol(a, h, g)).is_one()) return "swap 23: " + in;
                if (!(agh * symbol(h, g, a)).is_one()) return "swap 13: " + in;
            }
            if (mask & kFFG) {
                RingValue sign = nu_pair(a, g) % 2 ? -r->one() : r->one();
                if (symbol(a, a, g) != sign) return "(f, f, g): " + in;
            }
            if (mask & kSteinberg) {
                BiSeries omf = BiSeries::constant(r->one()) - f1;
                if (is_unit(omf)) {
                    UnitExpr c = U(omf);
                    if (!symbol(a, c, g).is_one()) return "(f, 1-f, g): " + in;
                    if (!symbol(g, a, c).is_one()) return "(g, f, 1-f): " + in;
                    if (!symbol(a, g, c).is_one()) return "(f, g, 1-f): " + in;
                }
            }
            return std::string();
        });
    }
}

// t' = a t + ..., u' = b u + ... with higher terms arbitrary and lower ones nilpotent
std::pair<BiSeries, BiSeries> parameters(RingPtr r, gen::Rng& rng) {
    Terms tt{{Exp{1, 0}, gen::unit(r, rng)}}, uu{{Exp{0, 1}, gen::unit(r, rng)}};
    Exp te{gen::uniform_int(rng, 0, 2), gen::uniform_int(rng, -1, 1)};
    if (te != Exp{1, 0}) tt.emplace_back(te, Exp{1, 0} < te ? gen::element(r, rng) : gen::nilpotent(r, rng));
    Exp ue{gen::uniform_int(rng, 0, 1), gen::uniform_int(rng, -1, 2)};
    if (ue != Exp{0, 1}) uu.emplace_back(ue, Exp{0, 1} < ue ? gen::element(r, rng) : gen::nilpotent(r, rng));
    return {sorted_series(r, std::move(tt)), sorted_series(r, std::move(uu))};
}

void invariance(Runner& run, RingPtr r, int trials, gen::Rng& rng) {
    gen::Shape s = box2();
    for (int n = 0; n < trials; ++n) {
        UnitExpr f = U(gen::unit_polynomial(r, rng, s)), g = U(gen::unit_polynomial(r, rng, s)), h = U(gen::unit_polynomial(r, rng, s));
        RingValue base = symbol(f, g, h);
        run.nontrivial(!base.is_one());
        for (int k = 0; k < 10; ++k) {
            auto [tn, un] = parameters(r, rng);
            run.instance([&] {
                RingValue v = symbol(substitute(f, tn, un), substitute(g, tn, un), substitute(h, tn, un));
                return v == base ? std::string() : show({f.to_string(), g.to_string(), h.to_string(), "t'=" + tn.to_string(), "u'=" + un.to_string()});
            });
        }
    }
}

void nu_residue(Runner& run, RingPtr r, int trials, gen::Rng& rng) {
    for (int n = 0; n < trials; ++n) {
        UnitExpr f = gen::unit_expr(r, rng, box3()), g = gen::unit_expr(r, rng, box3());
        run.instance([&] {
            std::int64_t nu = nu_pair(f, g);
            run.nontrivial(nu != 0);
            RingValue res = log_residue(f, g);
            return res == r->from_int(nu) ? std::string() : show({f.to_string(), g.to_string(), std::to_string(nu), res.to_string()});
        });
    }
}

RingValue coefficient_for(RingPtr r, Exp e, gen::Rng& rng) { return e.lex_positive() ? gen::element(r, rng) : gen::nilpotent(r, rng); }

void primitives(Runner& run, RingPtr r, int trials, gen::Rng& rng) {
    need(r->is_rational() && !r->is_field(), "primitives", "a Q-algebra with nilpotents");
    for (int n = 0; n < trials; ++n) {
        Exp ea = nonzero_exp(rng, 3), eb = nonzero_exp(rng, 3), ec = nonzero_exp(rng, 3);
        // closing the triple often enough to make T nontrivial
        if (gen::coin(rng, 0.5)) {
            Exp c = -(ea + eb);
            if (!c.is_zero()) ec = c;
        }
        RingValue a = coefficient_for(r, ea, rng), b = coefficient_for(r, eb, rng), c = coefficient_for(r, ec, rng);
        BiSeries fa = one_plus(r, -a, ea), fb = one_plus(r, -b, eb), fc = one_plus(r, -c, ec);
        if (!is_unit(fa) || !is_unit(fb) || !is_unit(fc)) {
            --n;
            continue;
        }
        run.instance([&] {
            std::string in = show({fa.to_string(), fb.to_string(), fc.to_string()});
            RingValue t = T(a, ea, b, eb, c, ec), s = S(a, ea, b, eb), q = Qsym(a, ea, b, eb);
            run.nontrivial(!t.is_one() || !s.is_one() || !q.is_one());
            if (cc2_residue(U(fa), U(fb), U(fc)).value != t) return "T: " + in;
            if (cc2_residue(U(fa), U(fb), t_of(r)).value != s) return "S: " + in;
            if (cc2_residue(U(fa), U(fb), u_of(r)).value != q) return "Q: " + in;
            return std::string();
        });
    }
}

// ---------------------------------------------------------------- reciprocity

// monic irreducible of degree d over the residue field, lifted to r with a nilpotent perturbation
UPoly irreducible(RingPtr r, int d, gen::Rng& rng) {
    RingPtr k = r->residue_field();
    for (;;) {
        std::vector<RingValue> c;
        for (int i = 0; i < d; ++i) c.push_back(gen::element(k, rng));
        c.push_back(k->one());
        UPoly p(k, c);
        if (!is_irreducible(p)) continue;
        std::vector<RingValue> lifted;
        for (int i = 0; i < d; ++i) lifted.push_back(embed(c[static_cast<std::size_t>(i)], r) + (gen::coin(rng, 0.4) ? gen::nilpotent(r, rng) : r->zero()));
        lifted.push_back(r->one());
        return UPoly(r, lifted);
    }
}

UPoly linear_over_q(RingPtr r, gen::Rng& rng) {
    return UPoly(r, {r->from_rational(gen::uniform_int(rng, -3, 3), gen::uniform_int(rng, 1, 2)) + gen::nilpotent(r, rng), r->one()});
}

// c * prod pi_i^a_i as numerator and denominator
RatFunc factored_function(RingPtr r, gen::Rng& rng, int max_degree) {
    UPoly num = UPoly::constant(gen::unit(r, rng)), den = UPoly::constant(r->one());
    int n = gen::uniform_int(rng, 1, 3);
    for (int k = 0; k < n; ++k) {
        UPoly p = r->is_rational() ? linear_over_q(r, rng) : irreducible(r, gen::uniform_int(rng, 1, max_degree), rng);
        int a = gen::uniform_int(rng, 1, 2);
        for (int i = 0; i < a; ++i) (gen::coin(rng) ? num : den) = (gen::coin(rng) ? num : den) * p;
    }
    return {num, den};
}

UPoly nilpotent_poly(RingPtr r, gen::Rng& rng, int deg) {
    std::vector<RingValue> c;
    for (int i = 0; i <= deg; ++i) c.push_back(gen::nilpotent(r, rng));
    return UPoly(r, c);
}

void record(Runner& run, const ReciprocityReport& rep) {
    run.nontrivial(!rep.nontrivial.empty());
    for (const SiteValue& s : rep.sites)
        if (!s.norm_value.is_one()) run.degree(s.degree);
}

std::string sites(const ReciprocityReport& rep) {
    std::string s;
    for (const SiteValue& v : rep.sites) s += v.site + ":" + v.norm_value.to_string() + " ";
    return s + "product " + rep.product.to_string();
}

void curve1d(Runner& run, RingPtr r, int trials, gen::Rng& rng) {
    for (int n = 0; n < trials; ++n) {
        RatFunc a = factored_function(r, rng, 3), b = factored_function(r, rng, 3);
        run.instance([&] {
            RationalFunctionElement f = RationalFunctionElement::function(a.num, a.den), g = RationalFunctionElement::function(b.num, b.den);
            ReciprocityReport rep = check_curve_1d(f, g);
            record(run, rep);
            return rep.pass ? std::string() : show({f.to_string(), g.to_string(), sites(rep)});
        });
    }
}

RationalFunctionElement curve_element(RingPtr r, gen::Rng& rng) {
    int k0 = gen::uniform_int(rng, -1, 1);
    std::map<int, RatFunc> terms;
    terms[k0] = factored_function(r, rng, 2);
    if (gen::coin(rng)) {
        RatFunc next = factored_function(r, rng, 2);
        std::vector<RingValue> extra;
        for (int i = 0; i < 2; ++i) extra.push_back(gen::element(r, rng));
        terms[k0 + 1] = {next.num * UPoly(r, extra), next.den};
    }
    if (!r->is_field() && gen::coin(rng, 0.3)) terms[k0 - 1] = {nilpotent_poly(r, rng, 1), UPoly::constant(r->one())};
    return RationalFunctionElement::from_terms(r, std::move(terms));
}

void curve2d(Runner& run, RingPtr r, int trials, gen::Rng& rng) {
    need(r->has_finite_residue_field(), "curve2d", "a finite residue field");
    for (int n = 0; n < trials; ++n) {
        RationalFunctionElement f = curve_element(r, rng), g = curve_element(r, rng), h = curve_element(r, rng);
        run.instance([&] {
            ReciprocityReport rep = check_curve_2d(f, g, h);
            record(run, rep);
            return rep.pass ? std::string() : show({f.to_string(), g.to_string(), h.to_string(), sites(rep)});
        });
    }
}

UnitExpr point_unit(RingPtr r, gen::Rng& rng) {
    UnitExpr out(r);
    int n = gen::uniform_int(rng, 1, 3);
    for (int k = 0; k < n; ++k) {
        Terms terms;
        switch (gen::uniform_int(rng, 0, 3)) {
        case 0: terms.emplace_back(Exp{gen::uniform_int(rng, -2, 2), gen::uniform_int(rng, -2, 2)}, gen::unit(r, rng)); break;
        case 1: {
            terms.emplace_back(Exp{1, 0}, gen::unit(r, rng));
            int deg = gen::uniform_int(rng, 1, 2);
            terms.emplace_back(Exp{0, deg}, gen::unit(r, rng));
            if (deg == 2 && gen::coin(rng)) terms.emplace_back(Exp{0, 1}, gen::element(r, rng));
            break;
        }
        default:
            terms.emplace_back(Exp{0, 0}, gen::unit(r, rng));
            for (Exp e : {Exp{0, 1}, Exp{1, 0}, Exp{1, 1}, Exp{0, 2}})
                if (gen::coin(rng)) terms.emplace_back(e, gen::element(r, rng));
        }
        if (gen::coin(rng, 0.4)) terms.emplace_back(Exp{gen::uniform_int(rng, -1, 1), gen::uniform_int(rng, -1, 1)}, gen::nilpotent(r, rng));
        BiSeries p = sorted_series(r, std::move(terms));
        if (!p.is_zero() && is_unit(p)) out = out * U(p).pow(gen::coin(rng, 0.3) ? -1 : 1);
    }
    return out;
}

void point2d(Runner& run, RingPtr r, int trials, gen::Rng& rng) {
    auto check = [&](const UnitExpr& f, const UnitExpr& g, const UnitExpr& h) {
        run.instance([&] {
            ReciprocityReport rep = check_point_2d(f, g, h);
            record(run, rep);
            return rep.pass ? std::string() : show({f.to_string(), g.to_string(), h.to_string(), sites(rep)});
        });
    };
    RingValue one = r->one();
    UnitExpr u = u_of(r), t = t_of(r);
    UnitExpr tmu = U(sorted_series(r, {{Exp{1, 0}, one}, {Exp{0, 1}, -one}}));
    UnitExpr tmu2 = U(sorted_series(r, {{Exp{1, 0}, one}, {Exp{0, 2}, -one}}));
    check(u, t, tmu);
    check(u, t, tmu2);
    if (!r->is_field()) {
        RingValue e = gen::nilpotent(r, rng);
        while (e.is_zero()) e = gen::nilpotent(r, rng);
        UnitExpr ue = U(sorted_series(r, {{Exp{0, 1}, one}, {Exp{1, 0}, e}}));
        UnitExpr te = U(sorted_series(r, {{Exp{1, -1}, e}, {Exp{1, 0}, one}}));
        UnitExpr tmu2e = U(sorted_series(r, {{Exp{1, 0}, one}, {Exp{0, 2}, -one}, {Exp{0, 3}, e}}));
        check(ue, t, tmu);
        check(u, te, tmu2);
        check(u, t, tmu2e);
        check(ue, te, tmu2e);
    }
    for (int n = 0; n < trials; ++n) check(point_unit(r, rng), point_unit(r, rng), point_unit(r, rng));
}

// ---------------------------------------------------------------- Witt vectors

void witt_ghost(Runner& run, RingPtr r, int trials, gen::Rng& rng) {
    need(r->is_field() && !r->is_rational() && r->field_levels() == 0, "witt-ghost", "a prime field GF(p)");
    std::int64_t p = r->modulus();
    for (int n = 0; n < trials; ++n) {
        int m = n % 3 + 1;
        std::vector<BiSeries> yp;
        for (int a = 0; a < m; ++a) yp.push_back(laurent(r, rng, 1));
        UnitExpr g1 = U(gen::unit_polynomial(r, rng, {-1, 2, 2})), g2 = U(gen::unit_polynomial(r, rng, {-1, 2, 2}));
        run.instance([&] {
            std::int64_t size = 1;
            for (int a = 1; a < m; ++a) size *= p;
            std::vector<BiSeries> y(static_cast<std::size_t>(size), BiSeries::from_terms(r, {}));
            std::int64_t i = 1;
            for (int a = 0; a < m; ++a, i *= p) y[static_cast<std::size_t>(i - 1)] = yp[static_cast<std::size_t>(a)];
            WittVector want = p_typical_projection(witt_symbol(g1, g2, y), p, m);
            WittVector got = witt_symbol_ghost(g1, g2, yp);
            run.nontrivial(!got.is_zero());
            return got == want ? std::string() : show({g1.to_string(), g2.to_string(), got.to_string(), want.to_string()});
        });
    }
}

void witt_series(Runner& run, RingPtr r, int trials, gen::Rng& rng) {
    for (int n = 0; n < trials; ++n) {
        int len = gen::uniform_int(rng, 1, 6);
        std::vector<RingValue> c, p{r->one()};
        for (int i = 0; i < len; ++i) {
            c.push_back(gen::element(r, rng));
            p.push_back(gen::element(r, rng));
        }
        WittVector x = WittVector::big(r, c);
        run.instance([&] {
            run.nontrivial(!x.is_zero());
            if (!(series_to_witt(witt_to_series(x)) == x)) return "round trip: " + x.to_string();
            if (witt_to_series(series_to_witt(p)) != p) return std::string("series round trip");
            if (!r->is_rational()) return std::string();
            // -log of the series against the ghost components
            std::vector<RingValue> s = witt_to_series(x), z = s, zk, log(s.size(), r->zero());
            z[0] = r->zero();
            zk = z;
            for (int k = 1; k <= len; ++k) {
                RingValue q = r->from_rational(k % 2 ? 1 : -1, k);
                for (std::size_t i = 0; i < s.size(); ++i) log[i] += q * zk[i];
                std::vector<RingValue> next(s.size(), r->zero());
                for (std::size_t i = 0; i < s.size(); ++i)
                    for (std::size_t j = 0; i + j < s.size(); ++j) next[i + j] += zk[i] * z[j];
                zk = next;
            }
            std::vector<RingValue> g = ghost(x);
            for (int l = 1; l <= len; ++l)
                if (-log[static_cast<std::size_t>(l)] != g[static_cast<std::size_t>(l - 1)] * r->from_rational(1, l)) return "ghost identity: " + x.to_string();
            return std::string();
        });
    }
}

struct SuiteDef {
    std::string name;
    std::string rings;
};

const std::vector<SuiteDef>& defs() {
    static const std::vector<SuiteDef> d{
        {"path-agreement", "Q-algebras"},
        {"tame", "fields"},
        {"deformation", "k[e]/(e^4), k a field"},
        {"closed-forms", "Q or GF(p); trials ignored, the grid is exhaustive"},
        {"algebraic", "any"},
        {"steinberg", "any"},
        {"antisymmetry", "any"},
        {"trimultiplicativity", "any"},
        {"ffg", "any"},
        {"invariance", "any; 10 parameter changes per trial"},
        {"nu-residue", "any"},
        {"primitives", "Q-algebras with nilpotents"},
        {"curve1d", "fields or nilpotent extensions of them; Q uses rational zeros and poles"},
        {"curve2d", "finite fields or nilpotent extensions of them"},
        {"point2d", "fields or nilpotent extensions of them"},
        {"witt-ghost", "GF(p)"},
        {"witt-series", "any; the ghost identity is checked over Q-algebras"},
    };
    return d;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const SuiteDef& d : defs()) v.push_back(d.name);
        return v;
    }();
    return names;
}

std::string suite_help() {
    std::string s;
    for (const SuiteDef& d : defs()) s += "  " + d.name + std::string(d.name.size() < 22 ? 22 - d.name.size() : 1, ' ') + d.rings + "\n";
    return s;
}

SuiteReport run_suite(const std::string& name, RingPtr r, int trials, std::uint64_t seed) {
    if (trials < 1) fail(ErrorCode::Usage, "trials must be positive");
    SuiteReport rep;
    rep.suite = name;
    rep.ring = r->text();
    rep.seed = seed;
    Runner run(rep);
    gen::Rng rng(seed);
    bool field_base = r->prime_power() == 1;
    if (name == "path-agreement")
        path_agreement(run, r, trials, rng);
    else if (name == "tame")
        tame(run, r, trials, rng);
    else if (name == "deformation")
        deformation(run, r, trials, rng);
    else if (name == "closed-forms")
        closed_forms(run, r);
    else if (name == "algebraic")
        algebraic(run, r, trials, rng, kSteinberg | kAntisymmetry | kTrimultiplicative | kFFG);
    else if (name == "steinberg")
        algebraic(run, r, trials, rng, kSteinberg);
    else if (name == "antisymmetry")
        algebraic(run, r, trials, rng, kAntisymmetry);
    else if (name == "trimultiplicativity")
        algebraic(run, r, trials, rng, kTrimultiplicative);
    else if (name == "ffg")
        algebraic(run, r, trials, rng, kFFG);
    else if (name == "invariance")
        invariance(run, r, trials, rng);
    else if (name == "nu-residue")
        nu_residue(run, r, trials, rng);
    else if (name == "primitives")
        primitives(run, r, trials, rng);
    else if (name == "curve1d") {
        need(field_base, name, "a field or a nilpotent extension of one");
        curve1d(run, r, trials, rng);
    } else if (name == "curve2d") {
        need(field_base, name, "a field or a nilpotent extension of one");
        curve2d(run, r, trials, rng);
    } else if (name == "point2d") {
        need(field_base, name, "a field or a nilpotent extension of one");
        point2d(run, r, trials, rng);
    } else if (name == "witt-ghost")
        witt_ghost(run, r, trials, rng);
    else if (name == "witt-series")
        witt_series(run, r, trials, rng);
    else
        fail(ErrorCode::Usage, "unknown suite '" + name + "'");
    return rep;
}

}  // namespace ccs
