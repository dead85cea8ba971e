#include "ccsym/random.hpp"

#include <set>

namespace ccs::gen {

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

namespace {

Num coordinate(RingPtr r, Rng& rng) {
    if (r->is_rational()) {
        int n = uniform_int(rng, -3, 3);
        return coin(rng, 0.2) ? rat::make(n, 2) : rat::make(n);
    }
    return r->s_from_int(std::uniform_int_distribution<std::int64_t>(0, r->modulus() - 1)(rng));
}

}  // namespace

RingValue element(RingPtr r, Rng& rng) {
    std::vector<Num> c(r->dim());
    std::size_t fd = r->field_dim();
    for (std::size_t mono = 0; mono < r->mono_count(); ++mono) {
        // keep nilpotent parts sparse
        bool live = mono == 0 || coin(rng, 0.5);
        for (std::size_t k = 0; k < fd; ++k) c[mono * fd + k] = live ? coordinate(r, rng) : r->s_from_int(0);
    }
    return r->from_coords(std::move(c));
}

RingValue unit(RingPtr r, Rng& rng) {
    for (;;) {
        RingValue v = element(r, rng);
        if (v.is_unit()) return v;
    }
}

RingValue nilpotent(RingPtr r, Rng& rng) {
    if (r->is_field()) return r->zero();
    RingValue v = element(r, rng);
    std::vector<Num> c = v.coords();
    std::size_t fd = r->field_dim();
    for (std::size_t k = 0; k < fd; ++k)
        c[k] = r->prime_power() > 1 ? r->s_mul(c[k], r->s_from_int(r->residue_characteristic())) : r->s_from_int(0);
    return r->from_coords(std::move(c));
}

BiSeries unit_polynomial(RingPtr r, Rng& rng, const Shape& s) {
    Exp lead{uniform_int(rng, s.lo, s.hi), uniform_int(rng, s.lo, s.hi)};
    std::vector<std::pair<Exp, RingValue>> terms{{lead, unit(r, rng)}};
    int n = uniform_int(rng, 0, s.terms);
    std::set<Exp> used{lead};
    for (int k = 0; k < n; ++k) {
        Exp e{uniform_int(rng, s.lo, s.hi), uniform_int(rng, s.lo, s.hi)};
        if (!used.insert(e).second) continue;
        terms.emplace_back(e, lead < e ? element(r, rng) : nilpotent(r, rng));
    }
    return BiSeries::from_terms(r, std::move(terms));
}

BiSeries unit_polynomial1(RingPtr r, Rng& rng, const Shape& s) {
    Exp lead{uniform_int(rng, s.lo, s.hi), 0};
    std::vector<std::pair<Exp, RingValue>> terms{{lead, unit(r, rng)}};
    int n = uniform_int(rng, 0, s.terms);
    std::set<Exp> used{lead};
    for (int k = 0; k < n; ++k) {
        Exp e{uniform_int(rng, s.lo, s.hi), 0};
        if (!used.insert(e).second) continue;
        terms.emplace_back(e, lead < e ? element(r, rng) : nilpotent(r, rng));
    }
    return BiSeries::from_terms(r, std::move(terms));
}

BiSeries one_plus(RingPtr r, Rng& rng, const Shape& s) {
    std::vector<std::pair<Exp, RingValue>> terms{{Exp{0, 0}, r->one()}};
    int n = uniform_int(rng, 1, std::max(1, s.terms));
    std::set<Exp> used{Exp{0, 0}};
    for (int k = 0; k < n; ++k) {
        Exp e{uniform_int(rng, s.lo, s.hi), uniform_int(rng, s.lo, s.hi)};
        if (!used.insert(e).second) continue;
        terms.emplace_back(e, e.lex_positive() ? element(r, rng) : nilpotent(r, rng));
    }
    return BiSeries::from_terms(r, std::move(terms));
}

UnitExpr unit_expr(RingPtr r, Rng& rng, const Shape& s) {
    static const int exps[] = {-1, 1, 1, 2};
    UnitExpr out(r);
    int n = uniform_int(rng, 1, 2);
    for (int k = 0; k < n; ++k) out = out * UnitExpr(unit_polynomial(r, rng, s)).pow(exps[uniform_int(rng, 0, 3)]);
    return out;
}

}  // namespace ccs::gen
