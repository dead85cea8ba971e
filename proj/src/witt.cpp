#include "ccsym/witt.hpp"

#include <gmpxx.h>

#include "ccsym/errors.hpp"
#include "ccsym/symbol2d.hpp"

namespace ccs {

WittVector WittVector::big(RingPtr r, std::vector<RingValue> comps) {
    for (const RingValue& c : comps) check_same_ring(r, c.ring());
    return {r, 0, std::move(comps)};
}

WittVector WittVector::p_typical(RingPtr r, std::int64_t p, std::vector<RingValue> comps) {
    if (p < 2) fail(ErrorCode::IndexMismatch, "p-typical vectors need a prime p");
    for (const RingValue& c : comps) check_same_ring(r, c.ring());
    return {r, p, std::move(comps)};
}

WittVector WittVector::zero_big(RingPtr r, int n) { return big(r, std::vector<RingValue>(static_cast<std::size_t>(std::max(n, 0)), r->zero())); }

std::int64_t WittVector::index(std::size_t k) const {
    if (is_big()) return static_cast<std::int64_t>(k) + 1;
    std::int64_t i = 1;
    for (std::size_t n = 0; n < k; ++n) i *= p;
    return i;
}

bool WittVector::is_zero() const {
    for (const RingValue& c : comps)
        if (!c.is_zero()) return false;
    return true;
}

bool WittVector::operator==(const WittVector& o) const { return ring == o.ring && p == o.p && comps == o.comps; }

std::string WittVector::to_string() const {
    std::string s = "(";
    for (std::size_t k = 0; k < comps.size(); ++k) s += (k ? ", " : "") + comps[k].to_string();
    return s + ")";
}

namespace {

// a * b mod s^(n+1), coefficient lists of equal length n+1
template <class V, class Mul>
std::vector<V> truncated_product(const std::vector<V>& a, const std::vector<V>& b, const V& zero, Mul&& mul) {
    std::vector<V> out(a.size(), zero);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; i + j < a.size(); ++j) out[i + j] = out[i + j] + mul(a[i], b[j]);
    return out;
}

// peels prod (1 - x_i s^i) off a series with constant term 1, lowest degree first
template <class V, class Mul>
std::vector<V> peel(std::vector<V> p, const V& zero, const V& one, Mul&& mul) {
    std::size_t n = p.size() - 1;
    std::vector<V> x;
    for (std::size_t i = 1; i <= n; ++i) {
        V xi = zero - p[i];
        x.push_back(xi);
        // divide by 1 - xi s^i
        std::vector<V> geo(n + 1, zero);
        V pw = one;
        for (std::size_t k = 0; k <= n; k += i) {
            geo[k] = pw;
            pw = mul(pw, xi);
        }
        p = truncated_product(p, geo, zero, mul);
    }
    return x;
}

template <class V, class Mul>
std::vector<V> to_series(const std::vector<V>& x, const V& zero, const V& one, Mul&& mul) {
    std::vector<V> p(x.size() + 1, zero);
    p[0] = one;
    for (std::size_t i = 1; i <= x.size(); ++i) {
        std::vector<V> f(x.size() + 1, zero);
        f[0] = one;
        f[i] = zero - x[i - 1];
        p = truncated_product(p, f, zero, mul);
    }
    return p;
}

auto ring_mul = [](const RingValue& a, const RingValue& b) { return a * b; };
auto series_mul = [](const BiSeries& a, const BiSeries& b) { return mul(a, b); };

WittVector spread(const WittVector& x) {
    std::size_t n = static_cast<std::size_t>(x.index(x.size() - 1));
    std::vector<RingValue> c(n, x.ring->zero());
    for (std::size_t k = 0; k < x.size(); ++k) c[static_cast<std::size_t>(x.index(k)) - 1] = x.comps[k];
    return WittVector::big(x.ring, std::move(c));
}

BiSeries lift(const BiSeries& f, RingPtr target) {
    std::vector<std::pair<Exp, RingValue>> terms;
    for (std::size_t k = 0; k < f.size(); ++k) terms.emplace_back(f.exp(k), embed(f.coeff_at(k), target));
    return BiSeries::from_terms(target, std::move(terms));
}

template <class Lift>
UnitExpr lift(const UnitExpr& f, RingPtr target, Lift&& map) {
    UnitExpr out(target);
    for (const auto& [p, e] : f.factors()) out = out * UnitExpr(map(p)).pow(e);
    return out;
}

RingPtr common_ring(const UnitExpr& g1, const UnitExpr& g2, const std::vector<BiSeries>& y) {
    RingPtr r = g1.ring() ? g1.ring() : g2.ring();
    for (const BiSeries& s : y)
        if (!r) r = s.ring();
    if (!r) fail(ErrorCode::Usage, "Witt symbol without a coefficient ring");
    for (const UnitExpr* g : {&g1, &g2})
        if (g->ring()) check_same_ring(r, g->ring());
    for (const BiSeries& s : y)
        if (s.ring()) check_same_ring(r, s.ring());
    return r;
}

}  // namespace

std::vector<RingValue> witt_to_series(const WittVector& x) {
    if (!x.is_big()) fail(ErrorCode::IndexMismatch, "the series correspondence needs a big Witt vector");
    return to_series(x.comps, x.ring->zero(), x.ring->one(), ring_mul);
}

WittVector series_to_witt(const std::vector<RingValue>& p) {
    if (p.empty() || !p[0].is_one()) fail(ErrorCode::DomainViolation, "series must have constant term 1");
    RingPtr r = p[0].ring();
    return WittVector::big(r, peel(p, r->zero(), r->one(), ring_mul));
}

std::vector<RingValue> ghost(const WittVector& x) {
    std::vector<RingValue> out;
    for (std::size_t k = 0; k < x.size(); ++k) {
        std::int64_t i = x.index(k);
        RingValue s = x.ring->zero();
        for (std::size_t b = 0; b <= k; ++b) {
            std::int64_t d = x.index(b);
            if (i % d == 0) s += x.ring->from_int(d) * x.comps[b].pow(i / d);
        }
        out.push_back(s);
    }
    return out;
}

WittVector witt_add(const WittVector& x, const WittVector& y) {
    if (x.p != y.p || x.size() != y.size()) fail(ErrorCode::IndexMismatch, "Witt vectors with different index sets");
    check_same_ring(x.ring, y.ring);
    if (!x.is_big()) {
        if (x.size() == 0) return x;
        return p_typical_projection(witt_add(spread(x), spread(y)), x.p, static_cast<int>(x.size()));
    }
    RingPtr r = x.ring;
    return series_to_witt(truncated_product(witt_to_series(x), witt_to_series(y), r->zero(), ring_mul));
}

std::vector<BiSeries> witt_add(const std::vector<BiSeries>& x, const std::vector<BiSeries>& y) {
    if (x.size() != y.size()) fail(ErrorCode::IndexMismatch, "Witt vectors of different lengths");
    RingPtr r = nullptr;
    for (const auto* v : {&x, &y})
        for (const BiSeries& s : *v)
            if (!r) r = s.ring();
    if (!r) return x;
    BiSeries zero = BiSeries::from_terms(r, {}), one = BiSeries::constant(r->one());
    auto fix = [&](std::vector<BiSeries> v) {
        for (BiSeries& s : v)
            if (!s.ring()) s = zero;
        return v;
    };
    auto px = to_series(fix(x), zero, one, series_mul), py = to_series(fix(y), zero, one, series_mul);
    return peel(truncated_product(px, py, zero, series_mul), zero, one, series_mul);
}

WittVector witt_symbol(const UnitExpr& g1, const UnitExpr& g2, const std::vector<BiSeries>& y) {
    RingPtr k = common_ring(g1, g2, y);
    int n = static_cast<int>(y.size());
    if (n == 0) return WittVector::zero_big(k, 0);
    RingPtr r = adjoin_nilpotent(k, "s", n + 1);
    RingValue s = r->generator("s");
    UnitExpr f(r);
    for (int i = 1; i <= n; ++i) {
        const BiSeries& yi = y[static_cast<std::size_t>(i - 1)];
        if (yi.is_zero()) continue;
        if (!yi.is_exact()) fail(ErrorCode::InsufficientWindow, "Witt components must be exact");
        f = f * UnitExpr(BiSeries::constant(r->one()) - scale(lift(yi, r), s.pow(i)));
    }
    auto map = [&](const BiSeries& p) { return lift(p, r); };
    SymbolResult v = cc2(f, lift(g1, r, map), lift(g2, r, map));
    // coefficients of s^0 .. s^n
    std::vector<RingValue> coeffs;
    std::size_t block = k->dim();
    for (int e = 0; e <= n; ++e) {
        auto first = v.value.coords().begin() + static_cast<std::ptrdiff_t>(block * static_cast<std::size_t>(e));
        coeffs.emplace_back(k, std::vector<Num>(first, first + static_cast<std::ptrdiff_t>(block)));
    }
    return series_to_witt(coeffs);
}

WittVector witt_symbol_ghost(const UnitExpr& g1, const UnitExpr& g2, const std::vector<BiSeries>& y) {
    RingPtr k = common_ring(g1, g2, y);
    if (k->is_rational() || !k->is_field() || k->field_levels() != 0)
        fail(ErrorCode::DomainViolation, "the ghost formula is implemented over prime fields only");
    std::int64_t p = k->characteristic();
    int m = static_cast<int>(y.size());
    if (m == 0) return WittVector::p_typical(k, p, {});

    for (int M = 2 * m, attempt = 0; attempt < 4; M *= 2, ++attempt) {
        mpz_class mod;
        mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(M));
        if (mod > mpz_class(1) << 40) break;
        RingPtr L = make_ring(RingDescriptor::integers_mod(p, M));
        auto map = [&](const BiSeries& f) {
            std::vector<std::pair<Exp, RingValue>> terms;
            for (std::size_t n = 0; n < f.size(); ++n) terms.emplace_back(f.exp(n), L->from_int(f.coef(n)[0].n));
            return BiSeries::from_terms(L, std::move(terms));
        };
        UnitExpr h1 = lift(g1, L, map), h2 = lift(g2, L, map);
        std::vector<BiSeries> ly;
        for (const BiSeries& s : y) ly.push_back(s.ring() ? map(s) : BiSeries::from_terms(L, {}));

        auto series_pow = [](BiSeries b, std::int64_t e) {
            BiSeries acc = BiSeries::constant(b.ring()->one());
            for (; e > 0; e >>= 1) {
                if (e & 1) acc = mul(acc, b);
                if (e > 1) b = mul(b, b);
            }
            return acc;
        };

        std::vector<mpz_class> x;
        std::vector<mpz_class> ppow(static_cast<std::size_t>(m) + 1, 1);
        for (int a = 1; a <= m; ++a) ppow[static_cast<std::size_t>(a)] = ppow[static_cast<std::size_t>(a) - 1] * p;
        bool ok = true;
        for (int a = 0; a < m && ok; ++a) {
            // ghost component of the lifted y at p^a
            BiSeries yg = BiSeries::from_terms(L, {});
            for (int b = 0; b <= a; ++b) {
                mpz_class e = ppow[static_cast<std::size_t>(a - b)];
                yg = yg + scale(series_pow(ly[static_cast<std::size_t>(b)], e.get_si()), L->from_int(ppow[static_cast<std::size_t>(b)].get_si()));
            }
            mpz_class v = log_residue(h1, h2, yg).coords()[0].n;
            for (int b = 0; b < a; ++b) {
                mpz_class t;
                mpz_powm(t.get_mpz_t(), x[static_cast<std::size_t>(b)].get_mpz_t(), ppow[static_cast<std::size_t>(a - b)].get_mpz_t(), mod.get_mpz_t());
                v -= ppow[static_cast<std::size_t>(b)] * t;
            }
            v %= mod;
            if (v < 0) v += mod;
            if (v % ppow[static_cast<std::size_t>(a)] != 0) {
                ok = false;
                break;
            }
            x.push_back(v / ppow[static_cast<std::size_t>(a)]);
        }
        if (!ok) continue;
        std::vector<RingValue> comps;
        for (const mpz_class& v : x) comps.push_back(k->from_int(mpz_class(v % p).get_si()));
        return WittVector::p_typical(k, p, std::move(comps));
    }
    fail(ErrorCode::PrecisionFailure, "ghost components not divisible within the precision budget");
}

WittVector p_typical_projection(const WittVector& x, std::int64_t p, int m) {
    if (!x.is_big()) fail(ErrorCode::IndexMismatch, "projection needs a big Witt vector");
    if (p < 2 || m < 1) fail(ErrorCode::IndexMismatch, "projection needs p >= 2 and m >= 1");
    std::vector<RingValue> comps;
    std::int64_t i = 1;
    for (int a = 0; a < m; ++a, i *= p) {
        if (i > static_cast<std::int64_t>(x.size()))
            fail(ErrorCode::IndexMismatch, "index " + std::to_string(i) + " missing from a vector of length " + std::to_string(x.size()));
        comps.push_back(x.comps[static_cast<std::size_t>(i - 1)]);
    }
    return WittVector::p_typical(x.ring, p, std::move(comps));
}

}  // namespace ccs
