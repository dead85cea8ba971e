#include "ccsym/symbol2d.hpp"

#include <array>
#include <cstdlib>
#include <map>
#include <numeric>

#include "ccsym/errors.hpp"

namespace ccs {

const char* path_name(SymbolPath p) {
    switch (p) {
    case SymbolPath::Product: return "product-formula";
    case SymbolPath::Residue: return "residue-formula";
    case SymbolPath::Tame: return "tame-closed-form";
    }
    return "?";
}

std::int64_t nu_pair(Exp nf, Exp ng) {
    return static_cast<std::int64_t>(nf.j) * ng.i - static_cast<std::int64_t>(ng.j) * nf.i;
}

int sign_exponent(Exp f, Exp g, Exp h) {
    std::int64_t fg = nu_pair(f, g), fh = nu_pair(f, h), gh = nu_pair(g, h);
    std::int64_t a = fg * fh + gh * -fg + -fh * -gh + fg * fh * gh;
    return static_cast<int>(((a % 2) + 2) % 2);
}

namespace {

Exp nu_of(const UnitExpr& f) { return f.is_one() ? Exp{} : prepare_unit(f).nu; }

RingValue minus_one_pow(RingPtr r, std::int64_t e) { return e % 2 ? -r->one() : r->one(); }

void require_nonzero(Exp e) {
    if (e.is_zero()) fail(ErrorCode::BadExponent, "elementary factor with exponent (0,0)");
}

// (1 - x)^d, 1 when x vanishes
RingValue one_minus_pow(const RingValue& x, std::int64_t d) {
    if (x.is_zero()) return x.ring()->one();
    return (x.ring()->one() - x).pow(d);
}

}  // namespace

std::int64_t nu_pair(const UnitExpr& f, const UnitExpr& g) { return nu_pair(nu_of(f), nu_of(g)); }

int sign_exponent(const UnitExpr& f, const UnitExpr& g, const UnitExpr& h) { return sign_exponent(nu_of(f), nu_of(g), nu_of(h)); }

RingValue T(const RingValue& a, Exp ea, const RingValue& b, Exp eb, const RingValue& c, Exp ec) {
    require_nonzero(ea);
    require_nonzero(eb);
    require_nonzero(ec);
    std::int64_t i = ea.i, j = ea.j, k = eb.i, l = eb.j, m = ec.i, n = ec.j;
    std::int64_t p0 = l * m - n * k, q0 = n * i - j * m, r0 = j * k - l * i;
    bool pos = p0 > 0 && q0 > 0 && r0 > 0, neg = p0 < 0 && q0 < 0 && r0 < 0;
    if (!pos && !neg) return a.ring()->one();
    std::int64_t d = std::gcd(std::gcd(p0, q0), r0);
    if (neg) d = -d;
    return one_minus_pow(a.pow(p0 / d) * b.pow(q0 / d) * c.pow(r0 / d), d);
}

RingValue S(const RingValue& a, Exp ea, const RingValue& b, Exp eb) {
    require_nonzero(ea);
    require_nonzero(eb);
    std::int64_t i = ea.i, j = ea.j, k = eb.i, l = eb.j;
    if (j * k - i * l != 0 || j * l + i * k >= 0 || j * l == 0) return a.ring()->one();
    std::int64_t g = std::gcd(j, l);
    return one_minus_pow(a.pow(std::abs(l) / g) * b.pow(std::abs(j) / g), l > 0 ? -g : g);
}

RingValue Qsym(const RingValue& a, Exp ea, const RingValue& b, Exp eb) {
    require_nonzero(ea);
    require_nonzero(eb);
    std::int64_t i = ea.i, j = ea.j, k = eb.i, l = eb.j;
    if (j * k - i * l != 0 || j * l + i * k >= 0 || i * k == 0) return a.ring()->one();
    std::int64_t g = std::gcd(i, k);
    return one_minus_pow(a.pow(std::abs(k) / g) * b.pow(std::abs(i) / g), k > 0 ? g : -g);
}

namespace {

// ------------------------------------------------------------------ shared setup

struct Arg {
    BiSeries p;
    UnitLead lead;
    BiSeries one;  // p / (lead term)
};

// Enumeration targets grow through these sizes until two evaluations agree.
constexpr std::array<int, 5> kRounds{0, 1, 2, 4, 8};

struct Setup {
    RingPtr r;
    std::array<Arg, 3> a;
    int budget = 0;
    int lo = 0;
    MonoidProfile mon;  // products of the atoms of all three arguments
};

Setup make_setup(const std::array<BiSeries, 3>& p) {
    Setup s;
    s.r = p[0].ring();
    s.budget = s.r->nilradical_exponent() - 1;
    std::map<Exp, int> weights;
    for (std::size_t k = 0; k < 3; ++k) {
        check_same_ring(s.r, p[k].ring());
        Arg& a = s.a[k];
        a.p = p[k];
        a.lead = unit_lead(p[k]);
        a.one = shift(scale(p[k], a.lead.c.inverse()), -a.lead.nu);
        std::vector<Atom> atoms = atoms_of(a.one - BiSeries::constant(s.r->one()));
        if (!atoms.empty()) s.lo = std::min(s.lo, MonoidProfile(atoms, s.budget, 0).row_lo());
        for (const Atom& x : atoms) {
            auto it = weights.find(x.e);
            if (it == weights.end())
                weights.emplace(x.e, x.weight);
            else
                it->second = std::min(it->second, x.weight);
        }
    }
    std::vector<Atom> all;
    for (const auto& [e, w] : weights) all.push_back({e, w});
    s.mon = MonoidProfile(all, s.budget, kRounds.back() - s.lo);
    return s;
}

// Exponents e with e + m in the target box for some product m of atoms. A factor outside it
// cannot meet the others in a term that survives, since every surviving term sums to (0,0).
Window factor_window(const Setup& s, int size) {
    Window target = Window::explicit_rows(-size, std::vector<int>(static_cast<std::size_t>(2 * size + 1), size));
    return keep_window(target, s.mon, s.lo);
}

Window union_window(const Window& a, const Window& b) {
    if (a.t_max() <= -kInf) return b;
    if (b.t_max() <= -kInf) return a;
    int lo = std::min(a.first_explicit_row(), b.first_explicit_row()), hi = std::max(a.t_max(), b.t_max());
    std::vector<int> caps;
    for (int r = lo; r <= hi; ++r) caps.push_back(std::max(a.cap(r), b.cap(r)));
    return Window::explicit_rows(lo, caps);
}

template <class Eval>
SymbolResult stabilize(const Setup& s, SymbolPath path, Eval&& eval) {
    SymbolResult prev;
    for (std::size_t k = 0; k < kRounds.size(); ++k) {
        SymbolResult cur = eval(factor_window(s, kRounds[k]));
        cur.path = path;
        if (k > 0 && cur.value == prev.value) {
            cur.stabilized = true;
            return cur;
        }
        prev = std::move(cur);
    }
    fail(ErrorCode::StabilizationFailure, "symbol did not stabilize within " + std::to_string(kRounds.size()) + " rounds");
}

RingValue leading_units(const Setup& s, const std::array<RingValue, 3>& c) {
    Exp f = s.a[0].lead.nu, g = s.a[1].lead.nu, h = s.a[2].lead.nu;
    return minus_one_pow(s.r, sign_exponent(f, g, h)) * c[0].pow(nu_pair(g, h)) * c[1].pow(nu_pair(h, f)) * c[2].pow(nu_pair(f, g));
}

// ------------------------------------------------------------------ product path

struct Fac {
    Exp e;
    RingValue c;
    int w;  // nil order, 0 for units
};

SymbolResult product_at(const Setup& s, const Window& win) {
    std::array<std::vector<Fac>, 3> fs;
    std::array<RingValue, 3> f0;
    for (std::size_t k = 0; k < 3; ++k) {
        UnitFactorization d = unit_factors(s.a[k].p, win.shifted(s.a[k].lead.nu));
        f0[k] = d.f0;
        for (const auto* list : {&d.minus_factors, &d.plus_factors})
            for (const ElementaryFactor& x : *list)
                if (win.contains(x.e) && !x.c.is_zero()) fs[k].push_back({x.e, x.c, x.c.is_unit() ? 0 : x.c.nil_order()});
    }
    SymbolResult res;
    res.window = win;
    RingValue v = leading_units(s, f0);
    auto record = [&](const char* kind, std::vector<Exp> exps, const RingValue& val, std::int64_t power) {
        if (val.is_one() || power == 0) return;
        v *= val.pow(power);
        res.factors.push_back({kind, std::move(exps), val, power});
    };

    for (const Fac& a : fs[0])
        for (const Fac& b : fs[1]) {
            std::int64_t r0 = static_cast<std::int64_t>(a.e.j) * b.e.i - static_cast<std::int64_t>(b.e.j) * a.e.i;
            if (r0 == 0) continue;
            for (const Fac& c : fs[2]) {
                if (a.e.lex_positive() && b.e.lex_positive() && c.e.lex_positive()) continue;
                std::int64_t p0 = static_cast<std::int64_t>(b.e.j) * c.e.i - static_cast<std::int64_t>(c.e.j) * b.e.i;
                std::int64_t q0 = static_cast<std::int64_t>(c.e.j) * a.e.i - static_cast<std::int64_t>(a.e.j) * c.e.i;
                if (!((p0 > 0 && q0 > 0 && r0 > 0) || (p0 < 0 && q0 < 0 && r0 < 0))) continue;
                std::int64_t d = std::abs(std::gcd(std::gcd(p0, q0), r0));
                if ((p0 / d) * a.w + (q0 / d) * b.w + (r0 / d) * c.w > s.budget && p0 > 0) continue;
                if ((-p0 / d) * a.w + (-q0 / d) * b.w + (-r0 / d) * c.w > s.budget && p0 < 0) continue;
                record("T", {a.e, b.e, c.e}, T(a.c, a.e, b.c, b.e, c.c, c.e), 1);
            }
        }

    // S and Q pairs, each weighted by the valuations of the remaining argument
    const std::array<std::array<std::size_t, 3>, 3> pairs{{{0, 1, 2}, {2, 0, 1}, {1, 2, 0}}};
    for (const auto& [x, y, z] : pairs) {
        Exp nz = s.a[z].lead.nu;
        for (const Fac& a : fs[x])
            for (const Fac& b : fs[y]) {
                if (nz.i != 0) record("S", {a.e, b.e}, S(a.c, a.e, b.c, b.e), nz.i);
                if (nz.j != 0) record("Q", {a.e, b.e}, Qsym(a.c, a.e, b.c, b.e), nz.j);
            }
    }
    res.value = v;
    return res;
}

// ------------------------------------------------------------------ residue path

RingValue scalar_exp(const RingValue& a) {
    if (a.is_zero()) return a.ring()->one();
    return exp_window(BiSeries::constant(a), Window::rows(0)).coeff({0, 0});
}

RingValue at(const BiSeries& s, Exp e) {
    auto k = s.find(e);
    return k ? s.coeff_at(*k) : s.ring()->zero();
}

// One slot of the wedge: either the monomial u^nu.j t^nu.i or log of a one-unit.
struct Slot {
    bool mono;
    Exp nu;
    const BiSeries* log;
};

// Res(L * dlog X ^ dlog Y)
RingValue omega(RingPtr r, const BiSeries& L, const Slot& x, const Slot& y) {
    RingValue s = r->zero();
    if (x.mono && y.mono) return at(L, {0, 0}) * r->from_int(nu_pair(x.nu, y.nu));
    if (!x.mono && y.mono) return -omega(r, L, y, x);
    if (x.mono) {
        const BiSeries& G = *y.log;
        for (std::size_t k = 0; k < G.size(); ++k) {
            Exp e = G.exp(k);
            RingValue l = at(L, -e);
            if (l.is_zero()) continue;
            s += l * G.coeff_at(k) * r->from_int(static_cast<std::int64_t>(x.nu.j) * e.i - static_cast<std::int64_t>(x.nu.i) * e.j);
        }
        return s;
    }
    const BiSeries &G = *x.log, &H = *y.log;
    for (std::size_t a = 0; a < L.size(); ++a) {
        Exp e1 = L.exp(a);
        RingValue la = L.coeff_at(a);
        for (std::size_t b = 0; b < G.size(); ++b) {
            Exp e2 = G.exp(b), e3 = -(e1 + e2);
            std::int64_t det = static_cast<std::int64_t>(e2.j) * e3.i - static_cast<std::int64_t>(e2.i) * e3.j;
            if (det == 0) continue;
            RingValue h = at(H, e3);
            if (h.is_zero()) continue;
            s += la * G.coeff_at(b) * h * r->from_int(det);
        }
    }
    return s;
}

SymbolResult residue_at(const Setup& s, const Window& win) {
    RingPtr r = s.r;
    std::array<BiSeries, 3> logs;
    for (std::size_t k = 0; k < 3; ++k) logs[k] = log_window(s.a[k].one, win);
    auto mono = [&](std::size_t k) { return Slot{true, s.a[k].lead.nu, nullptr}; };
    auto series = [&](std::size_t k) { return Slot{false, {}, &logs[k]}; };

    // split each argument into constant, monomial and one-unit; the constants give the
    // leading factor, every other combination with a one-unit goes through the residue
    RingValue sum = r->zero();
    for (int mask = 1; mask < 8; ++mask) {
        std::array<Slot, 3> slot;
        for (std::size_t k = 0; k < 3; ++k) slot[k] = (mask >> k) & 1 ? series(k) : mono(k);
        if (mask & 1)
            sum += omega(r, logs[0], slot[1], slot[2]);
        else if (mask & 2)
            sum -= omega(r, logs[1], slot[0], slot[2]);
        else
            sum += omega(r, logs[2], slot[0], slot[1]);
    }
    SymbolResult res;
    res.window = win;
    res.value = leading_units(s, {s.a[0].lead.c, s.a[1].lead.c, s.a[2].lead.c}) * scalar_exp(sum);
    return res;
}

// ------------------------------------------------------------------ unit expressions

template <class Triple>
SymbolResult over_factors(const UnitExpr& f, const UnitExpr& g, const UnitExpr& h, SymbolPath path, Triple&& triple) {
    RingPtr r = f.ring() ? f.ring() : g.ring() ? g.ring() : h.ring();
    if (!r) fail(ErrorCode::Usage, "symbol of three empty expressions has no ring");
    for (const UnitExpr* x : {&f, &g, &h})
        if (x->ring()) check_same_ring(r, x->ring());
    SymbolResult out;
    out.value = r->one();
    out.path = path;
    out.stabilized = true;
    for (const auto& [p, ep] : f.factors())
        for (const auto& [q, eq] : g.factors())
            for (const auto& [s, es] : h.factors()) {
                SymbolResult part = triple(std::array<BiSeries, 3>{p, q, s});
                std::int64_t e = ep * eq * es;
                out.value *= part.value.pow(e);
                out.window = union_window(out.window, part.window);
                out.stabilized = out.stabilized && part.stabilized;
                for (SymbolFactor& x : part.factors) {
                    x.power *= e;
                    out.factors.push_back(std::move(x));
                }
            }
    return out;
}

}  // namespace

SymbolResult cc2_product(const UnitExpr& f, const UnitExpr& g, const UnitExpr& h) {
    return over_factors(f, g, h, SymbolPath::Product, [](const std::array<BiSeries, 3>& p) {
        Setup s = make_setup(p);
        return stabilize(s, SymbolPath::Product, [&](const Window& w) { return product_at(s, w); });
    });
}

SymbolResult cc2_residue(const UnitExpr& f, const UnitExpr& g, const UnitExpr& h) {
    return over_factors(f, g, h, SymbolPath::Residue, [](const std::array<BiSeries, 3>& p) {
        if (p[0].ring()->characteristic() != 0)
            fail(ErrorCode::CharacteristicObstruction, "the residue formula needs rational coefficients");
        Setup s = make_setup(p);
        return stabilize(s, SymbolPath::Residue, [&](const Window& w) { return residue_at(s, w); });
    });
}

SymbolResult cc2(const UnitExpr& f, const UnitExpr& g, const UnitExpr& h) {
    RingPtr r = f.ring() ? f.ring() : g.ring() ? g.ring() : h.ring();
    if (r && r->characteristic() == 0) return cc2_residue(f, g, h);
    return cc2_product(f, g, h);
}

RingValue tame2(const UnitExpr& f, const UnitExpr& g, const UnitExpr& h) {
    RingPtr r = f.ring() ? f.ring() : g.ring() ? g.ring() : h.ring();
    if (!r) fail(ErrorCode::Usage, "symbol of three empty expressions has no ring");
    if (!r->is_field()) fail(ErrorCode::DomainViolation, "the tame symbol needs a field of coefficients");
    std::array<Exp, 3> nu;
    std::array<RingValue, 3> c;
    std::size_t k = 0;
    for (const UnitExpr* x : {&f, &g, &h}) {
        if (x->ring()) check_same_ring(r, x->ring());
        if (x->is_one()) {
            nu[k] = {};
            c[k] = r->one();
        } else {
            PreparedUnit p = prepare_unit(*x);
            nu[k] = p.nu;
            c[k] = p.c;
        }
        ++k;
    }
    return minus_one_pow(r, sign_exponent(nu[0], nu[1], nu[2])) * c[0].pow(nu_pair(nu[1], nu[2])) *
           c[1].pow(nu_pair(nu[2], nu[0])) * c[2].pow(nu_pair(nu[0], nu[1]));
}

RingValue log_residue(const UnitExpr& f, const UnitExpr& g) {
    RingPtr r = f.ring() ? f.ring() : g.ring();
    if (!r) fail(ErrorCode::Usage, "empty expressions have no ring");
    return log_residue(f, g, BiSeries::constant(r->one()));
}

RingValue log_residue(const UnitExpr& f, const UnitExpr& g, const BiSeries& y) {
    RingPtr r = y.ring();
    if (!y.is_exact()) fail(ErrorCode::InsufficientWindow, "residue needs an exact multiplier");
    RingValue out = r->zero();
    for (const auto& [p, ep] : f.factors())
        for (const auto& [q, eq] : g.factors()) {
            check_same_ring(p.ring(), q.ring());
            check_same_ring(r, p.ring());
            // Res(y (dp ^ dq) / (p q))
            BiSeries w = mul(y, mul(partial_derivative(p, 'u'), partial_derivative(q, 't')) - mul(partial_derivative(q, 'u'), partial_derivative(p, 't')));
            if (w.is_zero()) continue;
            std::map<int, int> caps;
            for (Exp e : w.exps()) {
                Exp need = Exp{-1, -1} - e;
                auto [it, fresh] = caps.emplace(need.i, need.j);
                if (!fresh) it->second = std::max(it->second, need.j);
            }
            int row0 = caps.begin()->first;
            std::vector<int> cv;
            for (int row = row0; row <= caps.rbegin()->first; ++row) cv.push_back(caps.count(row) ? caps[row] : -kInf);
            BiSeries inv = invert(mul(p, q), Window::explicit_rows(row0, cv));
            RingValue s = r->zero();
            for (std::size_t k = 0; k < w.size(); ++k) s += w.coeff_at(k) * inv.coeff(Exp{-1, -1} - w.exp(k));
            out += s * r->from_int(ep * eq);
        }
    return out;
}

}  // namespace ccs
