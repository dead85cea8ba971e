#include "ccsym/symbol1d.hpp"

#include <numeric>

#include "ccsym/errors.hpp"

namespace ccs {

namespace {

void require_series1(const BiSeries& f) {
    if (!f.is_exact()) fail(ErrorCode::InsufficientWindow, "one-dimensional symbols need exact arguments");
    for (Exp e : f.exps())
        if (e.j != 0) fail(ErrorCode::DomainViolation, "argument depends on u");
}

RingValue sign(RingPtr r, std::int64_t e) { return e % 2 ? -r->one() : r->one(); }

// largest i such that a plus factor at t^i can meet one of the minus factors
int plus_bound(const std::vector<Factor1>& minus) {
    int bound = 0;
    for (const Factor1& m : minus) {
        auto n = m.c.nilpotency_index();
        if (!n) fail(ErrorCode::DomainViolation, "minus factor with unit coefficient");
        bound = std::max(bound, *n * -m.i - 1);
    }
    return bound;
}

// (1 - a^{j/d} b^{i/d})^d, d = gcd(i, j)
RingValue pair_term(const RingValue& a, int i, const RingValue& b, int j) {
    int d = std::gcd(i, j);
    RingValue x = a.pow(j / d) * b.pow(i / d);
    return (a.ring()->one() - x).pow(d);
}

BiSeries one_plus_tail(const BiSeries& f, const UnitLead& lead) { return shift(scale(f, lead.c.inverse()), -lead.nu); }

RingValue scalar_exp(const RingValue& a) {
    if (a.is_zero()) return a.ring()->one();
    return exp_window(BiSeries::constant(a), Window::rows(0)).coeff({0, 0});
}

int log_row_lo(const BiSeries& one_plus) {
    RingPtr r = one_plus.ring();
    std::vector<Atom> atoms = atoms_of(one_plus - BiSeries::constant(r->one()));
    if (atoms.empty()) return 0;
    return std::min(0, MonoidProfile(atoms, r->nilradical_exponent() - 1, 0).row_lo());
}

}  // namespace

Decomposition1 decompose1(const BiSeries& f, int rows) {
    require_series1(f);
    UnitLead lead = unit_lead(f);
    UnitFactorization uf = decompose_unit(f, Window::rows(std::max(rows, 0) + lead.nu.i, 0));
    Decomposition1 d;
    d.r0 = uf.f0;
    d.nu = lead.nu.i;
    for (const ElementaryFactor& m : uf.minus_factors) d.minus.push_back({m.e.i, m.c});
    for (const ElementaryFactor& p : uf.plus_factors) d.plus.push_back({p.e.i, p.c});
    if (uf.parts_window.unbounded()) {
        d.plus_rows = kInf;
    } else {
        int k = 1;
        while (k <= uf.parts_window.t_max() && uf.parts_window.contains({k, 0})) ++k;
        d.plus_rows = k - 1;
        if (d.plus_rows < rows) fail(ErrorCode::InsufficientWindow, "plus factors are not determined far enough");
        std::erase_if(d.plus, [&](const Factor1& p) { return p.i > d.plus_rows; });
    }
    return d;
}

RingValue cc1_product(const BiSeries& f, const BiSeries& g) {
    require_series1(f);
    require_series1(g);
    check_same_ring(f.ring(), g.ring());
    RingPtr r = f.ring();
    Decomposition1 df = decompose1(f, 0), dg = decompose1(g, 0);
    if (int n = plus_bound(dg.minus); n > 0) df = decompose1(f, n);
    if (int n = plus_bound(df.minus); n > 0) dg = decompose1(g, n);

    RingValue v = sign(r, static_cast<std::int64_t>(df.nu) * dg.nu) * df.r0.pow(dg.nu) * dg.r0.pow(-df.nu);
    for (const Factor1& a : df.plus)
        for (const Factor1& b : dg.minus) v *= pair_term(a.c, a.i, b.c, -b.i);
    RingValue den = r->one();
    for (const Factor1& a : df.minus)
        for (const Factor1& b : dg.plus) den *= pair_term(a.c, -a.i, b.c, b.i);
    return v * den.inverse();
}

RingValue cc1_residue(const BiSeries& f, const BiSeries& g) {
    require_series1(f);
    require_series1(g);
    check_same_ring(f.ring(), g.ring());
    RingPtr r = f.ring();
    if (r->characteristic() != 0) fail(ErrorCode::CharacteristicObstruction, "the residue formula needs rational coefficients");
    UnitLead lf = unit_lead(f), lg = unit_lead(g);
    BiSeries uf = one_plus_tail(f, lf), ug = one_plus_tail(g, lg);
    int rf = log_row_lo(uf), rg = log_row_lo(ug);
    BiSeries log_f = log_window(uf, Window::rows(-rg, 0));
    BiSeries log_g = log_window(ug, Window::rows(-rf, 0));
    int nf = lf.nu.i, ng = lg.nu.i;

    // res(log f * dg/g) for the one-unit parts: constant term of log_f * (nu_g + t d/dt log_g)
    RingValue s = r->zero();
    for (std::size_t k = 0; k < log_f.size(); ++k) {
        int i = log_f.exp(k).i;
        RingValue a = log_f.coeff_at(k);
        if (i == 0)
            s += a * r->from_int(ng);
        else
            s += a * log_g.coeff({-i, 0}) * r->from_int(-i);
    }
    RingValue c0 = log_g.coeff({0, 0});
    RingValue v = lf.c.pow(ng) * scalar_exp(s);
    // (t, g) = c_g^{-1} (-1)^{nu_g} exp(-[log g]_0)
    RingValue tg = lg.c.inverse() * sign(r, ng) * scalar_exp(-c0);
    return v * tg.pow(nf);
}

RingValue tame1(const BiSeries& f, const BiSeries& g) {
    require_series1(f);
    require_series1(g);
    check_same_ring(f.ring(), g.ring());
    RingPtr r = f.ring();
    if (!r->is_field()) fail(ErrorCode::DomainViolation, "the tame symbol needs a field of coefficients");
    UnitLead lf = unit_lead(f), lg = unit_lead(g);
    return sign(r, static_cast<std::int64_t>(lf.nu.i) * lg.nu.i) * lf.c.pow(lg.nu.i) * lg.c.pow(-lf.nu.i);
}

namespace {

template <class F>
RingValue over_factors(const UnitExpr& f, const UnitExpr& g, F&& symbol) {
    check_same_ring(f.ring(), g.ring());
    RingValue v = f.ring()->one();
    for (const auto& [a, ea] : f.factors())
        for (const auto& [b, eb] : g.factors()) v *= symbol(a, b).pow(ea * eb);
    return v;
}

}  // namespace

RingValue cc1_product(const UnitExpr& f, const UnitExpr& g) {
    return over_factors(f, g, [](const BiSeries& a, const BiSeries& b) { return cc1_product(a, b); });
}

RingValue cc1_residue(const UnitExpr& f, const UnitExpr& g) {
    return over_factors(f, g, [](const BiSeries& a, const BiSeries& b) { return cc1_residue(a, b); });
}

}  // namespace ccs
