#include "ccsym/parse.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include <gmpxx.h>

namespace ccs {

namespace {

[[noreturn]] void parse_fail(const std::string& what, std::size_t at) { throw Error(ErrorCode::ParseError, what, at); }

class Scanner {
public:
    Scanner(const std::string& s, std::size_t begin, std::size_t end) : s_(s), pos_(begin), end_(end) {}

    void skip() {
        while (pos_ < end_ && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    std::size_t pos() {
        skip();
        return pos_;
    }
    bool done() { return pos() >= end_; }
    char peek() { return done() ? '\0' : s_[pos_]; }
    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    void expect(char c) {
        if (!accept(c)) parse_fail(std::string("expected '") + c + "'" + (done() ? " at end of input" : std::string(", found '") + s_[pos_] + "'"), pos_);
    }
    bool at_ident() {
        char c = peek();
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    std::string ident() {
        if (!at_ident()) parse_fail("expected a name", pos());
        std::size_t b = pos_;
        while (pos_ < end_ && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        return s_.substr(b, pos_ - b);
    }
    bool at_digit() { return std::isdigit(static_cast<unsigned char>(peek())) != 0; }
    std::string digits() {
        if (!at_digit()) parse_fail("expected a number", pos());
        std::size_t b = pos_;
        while (pos_ < end_ && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return s_.substr(b, pos_ - b);
    }
    std::int64_t small_int(std::int64_t limit = (std::int64_t{1} << 40)) {
        std::size_t at = pos();
        std::string d = digits();
        mpz_class v(d);
        if (v > limit) parse_fail("number too large", at);
        return v.get_si();
    }
    // up to the matching close bracket at depth 0
    std::size_t find_close(char open, char close) {
        int depth = 0;
        for (std::size_t k = pos_; k < end_; ++k) {
            if (s_[k] == open) ++depth;
            if (s_[k] == close) {
                if (depth == 0) return k;
                --depth;
            }
        }
        parse_fail(std::string("missing '") + close + "'", end_);
    }
    std::size_t end() const { return end_; }
    void jump(std::size_t p) { pos_ = p; }
    const std::string& text() const { return s_; }

private:
    const std::string& s_;
    std::size_t pos_;
    std::size_t end_;
};

// ---------------------------------------------------------------- expressions

class ExprParser {
public:
    explicit ExprParser(Scanner& sc) : sc_(sc) {}

    Expr sum() {
        Expr a = product();
        for (;;) {
            std::size_t at = sc_.pos();
            if (sc_.accept('+'))
                a = binary(Expr::Kind::Add, std::move(a), product(), at);
            else if (sc_.accept('-'))
                a = binary(Expr::Kind::Sub, std::move(a), product(), at);
            else
                return a;
        }
    }

private:
    static Expr binary(Expr::Kind k, Expr a, Expr b, std::size_t at) {
        Expr e;
        e.kind = k;
        e.offset = at;
        e.kids.push_back(std::move(a));
        e.kids.push_back(std::move(b));
        return e;
    }

    Expr product() {
        Expr a = unary();
        for (;;) {
            std::size_t at = sc_.pos();
            if (sc_.accept('*'))
                a = binary(Expr::Kind::Mul, std::move(a), unary(), at);
            else if (sc_.accept('/'))
                a = binary(Expr::Kind::Div, std::move(a), unary(), at);
            else
                return a;
        }
    }

    Expr unary() {
        std::size_t at = sc_.pos();
        if (sc_.accept('-')) {
            Expr e;
            e.kind = Expr::Kind::Neg;
            e.offset = at;
            e.kids.push_back(unary());
            return e;
        }
        return power();
    }

    Expr power() {
        Expr base = atom();
        std::size_t at = sc_.pos();
        if (!sc_.accept('^')) return base;
        bool neg = false;
        bool paren = sc_.accept('(');
        if (sc_.accept('-'))
            neg = true;
        else
            sc_.accept('+');
        std::int64_t n = sc_.small_int(1 << 20);
        if (paren) sc_.expect(')');
        Expr e;
        e.kind = Expr::Kind::Pow;
        e.offset = at;
        e.power = neg ? -n : n;
        e.kids.push_back(std::move(base));
        if (sc_.peek() == '^') parse_fail("chained powers need parentheses", sc_.pos());
        return e;
    }

    Expr atom() {
        Expr e;
        e.offset = sc_.pos();
        if (sc_.accept('(')) {
            e = sum();
            sc_.expect(')');
            return e;
        }
        if (sc_.at_digit()) {
            e.kind = Expr::Kind::Number;
            e.text = sc_.digits();
            if (sc_.at_ident()) parse_fail("missing '*' between a number and a name", sc_.pos());
            return e;
        }
        if (sc_.at_ident()) {
            e.kind = Expr::Kind::Var;
            e.text = sc_.ident();
            return e;
        }
        if (sc_.done()) parse_fail("unexpected end of input", sc_.pos());
        parse_fail(std::string("unexpected '") + sc_.peek() + "'", sc_.pos());
    }

    Scanner& sc_;
};

Expr parse_range(const std::string& text, std::size_t b, std::size_t e) {
    Scanner sc(text, b, e);
    if (sc.done()) parse_fail("empty expression", sc.pos());
    ExprParser p(sc);
    Expr out = p.sum();
    if (!sc.done()) parse_fail(std::string("unexpected '") + sc.peek() + "'", sc.pos());
    return out;
}

int precedence(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    default: return 5;
    }
}

std::string wrap(const Expr& e, int min_prec) {
    std::string s = to_string(e);
    return precedence(e) < min_prec ? "(" + s + ")" : s;
}

// ---------------------------------------------------------------- ring descriptors

// integer polynomial in x, low degree first
std::vector<mpz_class> int_poly(const Expr& e) {
    using K = Expr::Kind;
    auto add = [](std::vector<mpz_class> a, const std::vector<mpz_class>& b, int sign) {
        if (a.size() < b.size()) a.resize(b.size());
        for (std::size_t k = 0; k < b.size(); ++k) a[k] += sign * b[k];
        return a;
    };
    auto mul = [](const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
        std::vector<mpz_class> c(a.size() + b.size() - 1);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
        return c;
    };
    switch (e.kind) {
    case K::Number: return {mpz_class(e.text)};
    case K::Var:
        if (e.text != "x") parse_fail("the modulus is a polynomial in x, found '" + e.text + "'", e.offset);
        return {0, 1};
    case K::Add: return add(int_poly(e.kids[0]), int_poly(e.kids[1]), 1);
    case K::Sub: return add(int_poly(e.kids[0]), int_poly(e.kids[1]), -1);
    case K::Neg: return add({0}, int_poly(e.kids[0]), -1);
    case K::Mul: return mul(int_poly(e.kids[0]), int_poly(e.kids[1]));
    case K::Pow: {
        if (e.power < 0 || e.power > 64) parse_fail("bad exponent in the modulus", e.offset);
        std::vector<mpz_class> b = int_poly(e.kids[0]), acc{1};
        for (std::int64_t k = 0; k < e.power; ++k) acc = mul(acc, b);
        return acc;
    }
    case K::Div: parse_fail("division in the modulus", e.offset);
    }
    return {};
}

// q = p^k with p prime
bool prime_power(std::int64_t q, std::int64_t& p, int& k) {
    if (q < 2) return false;
    p = 0;
    for (std::int64_t d = 2; d * d <= q; ++d)
        if (q % d == 0) {
            p = d;
            break;
        }
    if (p == 0) p = q;
    k = 0;
    while (q % p == 0) {
        q /= p;
        ++k;
    }
    return q == 1;
}

// p or p^k as written; returns (p, k) for the literal base and exponent
void base_and_exponent(Scanner& sc, std::int64_t& base, int& k, std::size_t& at) {
    at = sc.pos();
    base = sc.small_int();
    k = 1;
    if (sc.accept('^')) {
        std::size_t eat = sc.pos();
        std::int64_t e = sc.small_int(64);
        if (e < 1) parse_fail("exponent must be positive", eat);
        k = static_cast<int>(e);
    }
}

RingDescriptor parse_base(Scanner& sc) {
    std::size_t at = sc.pos();
    std::string name = sc.ident();
    if (name == "Q") return RingDescriptor::rationals();
    if (name == "GF") {
        sc.expect('(');
        std::int64_t b = 0;
        int k = 1;
        std::size_t qat = 0;
        base_and_exponent(sc, b, k, qat);
        std::int64_t p = 0;
        int kk = 0;
        if (k == 1) {
            if (!prime_power(b, p, kk)) throw Error(ErrorCode::MalformedDescriptor, "GF(q) needs a prime power q, got " + std::to_string(b), qat);
        } else {
            p = b;
            kk = k;
        }
        if (sc.accept(';')) {
            std::size_t mat = sc.pos();
            if (sc.ident() != "mod") parse_fail("expected 'mod='", mat);
            sc.expect('=');
            std::size_t b0 = sc.pos(), b1 = sc.find_close('(', ')');
            std::vector<mpz_class> m = int_poly(parse_range(sc.text(), b0, b1));
            sc.jump(b1);
            sc.expect(')');
            std::vector<std::int64_t> c;
            for (mpz_class x : m) {
                mpz_class r = x % p;
                if (r < 0) r += p;
                c.push_back(r.get_si());
            }
            while (!c.empty() && c.back() == 0) c.pop_back();
            if (static_cast<int>(c.size()) != kk + 1)
                throw Error(ErrorCode::MalformedDescriptor, "modulus degree must be " + std::to_string(kk), b0);
            try {
                RingDescriptor d = RingDescriptor::finite_field(p, kk, c);
                make_ring(d);  // irreducibility
                return d;
            } catch (const Error& e) {
                throw Error(e.code(), e.what(), b0);
            }
        }
        sc.expect(')');
        if (kk != 1) throw Error(ErrorCode::MalformedDescriptor, "GF(" + std::to_string(p) + "^" + std::to_string(kk) + ") needs '; mod=<poly in x>'", qat);
        return RingDescriptor::prime_field(p);
    }
    if (name == "Z") {
        sc.expect('/');
        sc.expect('(');
        std::int64_t b = 0;
        int k = 1;
        std::size_t qat = 0;
        base_and_exponent(sc, b, k, qat);
        sc.expect(')');
        std::int64_t p = b;
        int kk = k;
        if (k == 1 && !prime_power(b, p, kk)) throw Error(ErrorCode::MalformedDescriptor, "Z/(q) needs a prime power q, got " + std::to_string(b), qat);
        return RingDescriptor::integers_mod(p, kk);
    }
    throw Error(ErrorCode::MalformedDescriptor, "unknown ring '" + name + "'", at);
}

// ---------------------------------------------------------------- evaluation

using FactorList = std::vector<std::pair<BiSeries, std::int64_t>>;

bool is_unit(const BiSeries& f) {
    try {
        unit_lead(f);
        return true;
    } catch (const Error&) {
        return false;
    }
}

bool is_unit_monomial(const BiSeries& f) { return f.size() == 1 && f.coeff_at(0).is_unit(); }

BiSeries one(RingPtr r) { return BiSeries::constant(r->one()); }

BiSeries power_exact(const BiSeries& f, std::int64_t e) {
    if (e < 0) {
        // unit monomials only
        RingValue c = f.coeff_at(0).inverse().pow(-e);
        return BiSeries::monomial(c, Exp{static_cast<int>(f.exp(0).i * e), static_cast<int>(f.exp(0).j * e)});
    }
    BiSeries acc = one(f.ring()), b = f;
    while (e > 0) {
        if (e & 1) acc = mul(acc, b);
        e >>= 1;
        if (e) b = mul(b, b);
    }
    return acc;
}

// numerator (exact) and the non-monomial denominators with positive exponents
struct Split {
    BiSeries num;
    FactorList den;
};

Split split(const Fraction& f) {
    Split s{one(f.ring), {}};
    for (const auto& [p, e] : f.factors) {
        if (e >= 0 || is_unit_monomial(p))
            s.num = mul(s.num, power_exact(p, e));
        else
            s.den.emplace_back(p, -e);
    }
    return s;
}

std::int64_t exponent_in(const FactorList& l, const BiSeries& p) {
    for (const auto& [q, e] : l)
        if (q == p) return e;
    return 0;
}

Fraction add_fractions(const Fraction& a, const Fraction& b, bool subtract) {
    Split x = split(a), y = split(b);
    FactorList den = x.den;
    for (const auto& [p, e] : y.den) {
        bool found = false;
        for (auto& [q, f] : den)
            if (q == p) {
                f = std::max(f, e);
                found = true;
            }
        if (!found) den.emplace_back(p, e);
    }
    auto lift = [&](const Split& s) {
        BiSeries n = s.num;
        for (const auto& [p, e] : den) {
            std::int64_t extra = e - exponent_in(s.den, p);
            if (extra > 0) n = mul(n, power_exact(p, extra));
        }
        return n;
    };
    BiSeries n = subtract ? lift(x) - lift(y) : lift(x) + lift(y);
    Fraction out{a.ring, {{n, 1}}};
    if (!n.is_zero())
        for (const auto& [p, e] : den) out.factors.emplace_back(p, -e);
    return out;
}

Fraction power_fraction(const Fraction& a, std::int64_t n, std::size_t at) {
    Fraction out{a.ring, {}};
    if (n == 0) return out;
    for (const auto& [p, e] : a.factors) {
        if (n < 0 && !is_unit(p)) throw Error(ErrorCode::NotAUnit, "cannot invert " + p.to_string(), at);
        out.factors.emplace_back(p, e * n);
    }
    return out;
}

Fraction product(const Fraction& a, const Fraction& b) {
    Fraction out = a;
    for (const auto& f : b.factors) out.factors.push_back(f);
    return out;
}

RingValue literal(RingPtr r, const std::string& digits) { return r->from_mpq(mpq_class(mpz_class(digits))); }

void check_var(const Expr& e, RingPtr r, const VarSet& vars) {
    if (vars.names.count(e.text) || r->has_generator(e.text)) return;
    static const std::set<std::string> known{"u", "t", "z", "t_C", "s"};
    if (known.count(e.text)) parse_fail("variable '" + e.text + "' is not available here", e.offset);
    parse_fail("unknown name '" + e.text + "'", e.offset);
}

// ---------------------------------------------------------------- curve elements

struct RF {
    UPoly num, den;
};
using Curve = std::map<int, RF>;

bool residue_nonzero(const UPoly& p) {
    for (const RingValue& c : p.coeffs())
        if (!c.residue_image().is_zero()) return true;
    return false;
}

Curve curve_add(const Curve& a, const Curve& b, bool subtract) {
    Curve out = a;
    for (const auto& [k, f] : b) {
        UPoly n = subtract ? UPoly(f.num.ring()) - f.num : f.num;
        auto it = out.find(k);
        if (it == out.end()) {
            out.emplace(k, RF{n, f.den});
            continue;
        }
        RF& g = it->second;
        if (g.den == f.den)
            g.num = g.num + n;
        else {
            g.num = g.num * f.den + n * g.den;
            g.den = g.den * f.den;
        }
    }
    for (auto it = out.begin(); it != out.end();) it = it->second.num.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

Curve curve_mul(const Curve& a, const Curve& b) {
    Curve out;
    for (const auto& [i, f] : a)
        for (const auto& [j, g] : b) {
            Curve term{{i + j, RF{f.num * g.num, f.den * g.den}}};
            out = curve_add(out, term, false);
        }
    return out;
}

Curve curve_inverse(const Curve& a, std::size_t at) {
    if (a.size() != 1)
        throw Error(ErrorCode::UnsupportedShape, "only monomials in t_C can be inverted", at);
    const auto& [k, f] = *a.begin();
    if (!residue_nonzero(f.num)) throw Error(ErrorCode::NotAUnit, "numerator vanishes modulo the nilradical", at);
    return {{-k, RF{f.den, f.num}}};
}

Curve curve_pow(const Curve& a, std::int64_t n, RingPtr r, std::size_t at) {
    Curve b = n < 0 ? curve_inverse(a, at) : a;
    Curve acc{{0, RF{UPoly::constant(r->one()), UPoly::constant(r->one())}}};
    for (std::int64_t k = 0; k < std::abs(n); ++k) acc = curve_mul(acc, b);
    return acc;
}

Curve eval_curve(const Expr& e, RingPtr r) {
    using K = Expr::Kind;
    UPoly one1 = UPoly::constant(r->one());
    switch (e.kind) {
    case K::Number: return curve_add({}, {{0, RF{UPoly::constant(literal(r, e.text)), one1}}}, false);
    case K::Var:
        if (e.text == "z") return {{0, RF{UPoly::x(r), one1}}};
        if (e.text == "t_C") return {{1, RF{one1, one1}}};
        check_var(e, r, VarSet::curve());
        return curve_add({}, {{0, RF{UPoly::constant(r->generator(e.text)), one1}}}, false);
    case K::Add: return curve_add(eval_curve(e.kids[0], r), eval_curve(e.kids[1], r), false);
    case K::Sub: return curve_add(eval_curve(e.kids[0], r), eval_curve(e.kids[1], r), true);
    case K::Neg: return curve_add({}, eval_curve(e.kids[0], r), true);
    case K::Mul: return curve_mul(eval_curve(e.kids[0], r), eval_curve(e.kids[1], r));
    case K::Div: return curve_mul(eval_curve(e.kids[0], r), curve_inverse(eval_curve(e.kids[1], r), e.offset));
    case K::Pow: return curve_pow(eval_curve(e.kids[0], r), e.power, r, e.offset);
    }
    return {};
}

}  // namespace

// ---------------------------------------------------------------- public

RingDescriptor parse_ring_descriptor(const std::string& text) {
    Scanner sc(text, 0, text.size());
    RingDescriptor d = parse_base(sc);
    if (sc.accept('[')) {
        std::vector<std::string> gens;
        std::vector<std::size_t> gat;
        do {
            gat.push_back(sc.pos());
            gens.push_back(sc.ident());
        } while (sc.accept(','));
        sc.expect(']');
        sc.expect('/');
        sc.expect('(');
        std::vector<int> bounds(gens.size(), 0);
        do {
            std::size_t at = sc.pos();
            std::string g = sc.ident();
            auto it = std::find(gens.begin(), gens.end(), g);
            if (it == gens.end()) throw Error(ErrorCode::MalformedDescriptor, "relation for undeclared generator '" + g + "'", at);
            sc.expect('^');
            int& b = bounds[static_cast<std::size_t>(it - gens.begin())];
            if (b != 0) throw Error(ErrorCode::MalformedDescriptor, "second relation for '" + g + "'", at);
            std::size_t bat = sc.pos();
            b = static_cast<int>(sc.small_int(4096));
            if (b < 2) throw Error(ErrorCode::MalformedDescriptor, "exponent bound must be >= 2", bat);
        } while (sc.accept(','));
        sc.expect(')');
        for (std::size_t k = 0; k < gens.size(); ++k)
            if (bounds[k] == 0) throw Error(ErrorCode::MalformedDescriptor, "no relation for '" + gens[k] + "'", gat[k]);
        d = RingDescriptor::nilpotent(d, gens, bounds);
    }
    if (!sc.done()) parse_fail(std::string("unexpected '") + sc.peek() + "'", sc.pos());
    return d;
}

RingPtr parse_ring(const std::string& text) { return make_ring(parse_ring_descriptor(text)); }

bool Expr::same_shape(const Expr& o) const {
    if (kind != o.kind || text != o.text || power != o.power || kids.size() != o.kids.size()) return false;
    for (std::size_t k = 0; k < kids.size(); ++k)
        if (!kids[k].same_shape(o.kids[k])) return false;
    return true;
}

Expr parse_expression(const std::string& text) { return parse_range(text, 0, text.size()); }

std::string to_string(const Expr& e) {
    using K = Expr::Kind;
    switch (e.kind) {
    case K::Number:
    case K::Var: return e.text;
    case K::Add: return wrap(e.kids[0], 1) + "+" + wrap(e.kids[1], 2);
    case K::Sub: return wrap(e.kids[0], 1) + "-" + wrap(e.kids[1], 2);
    case K::Mul: return wrap(e.kids[0], 2) + "*" + wrap(e.kids[1], 3);
    case K::Div: return wrap(e.kids[0], 2) + "/" + wrap(e.kids[1], 3);
    case K::Neg: return "-" + wrap(e.kids[0], 3);
    case K::Pow: return wrap(e.kids[0], 5) + "^" + std::to_string(e.power);
    }
    return {};
}

Fraction eval_fraction(const Expr& e, RingPtr r, const VarSet& vars) {
    using K = Expr::Kind;
    switch (e.kind) {
    case K::Number: return {r, {{BiSeries::constant(literal(r, e.text)), 1}}};
    case K::Var:
        check_var(e, r, vars);
        if (e.text == "u") return {r, {{BiSeries::variable_u(r), 1}}};
        if (e.text == "t") return {r, {{BiSeries::variable_t(r), 1}}};
        if (!r->has_generator(e.text)) parse_fail("variable '" + e.text + "' is not available here", e.offset);
        return {r, {{BiSeries::constant(r->generator(e.text)), 1}}};
    case K::Add: return add_fractions(eval_fraction(e.kids[0], r, vars), eval_fraction(e.kids[1], r, vars), false);
    case K::Sub: return add_fractions(eval_fraction(e.kids[0], r, vars), eval_fraction(e.kids[1], r, vars), true);
    case K::Neg: return product({r, {{BiSeries::constant(-r->one()), 1}}}, eval_fraction(e.kids[0], r, vars));
    case K::Mul: return product(eval_fraction(e.kids[0], r, vars), eval_fraction(e.kids[1], r, vars));
    case K::Div: return product(eval_fraction(e.kids[0], r, vars), power_fraction(eval_fraction(e.kids[1], r, vars), -1, e.offset));
    case K::Pow: return power_fraction(eval_fraction(e.kids[0], r, vars), e.power, e.offset);
    }
    return {r, {}};
}

UnitExpr to_unit(const Fraction& f) {
    UnitExpr out(f.ring);
    for (const auto& [p, e] : f.factors) {
        if (p.is_zero()) fail(ErrorCode::NotAUnit, "the expression is zero");
        if (!is_unit(p)) fail(ErrorCode::NotAUnit, p.to_string() + " is not a unit of R((u))((t))");
        out = out * UnitExpr(p).pow(e);
    }
    return out;
}

std::optional<BiSeries> to_laurent(const Fraction& f) {
    Split s = split(f);
    if (!s.den.empty()) return std::nullopt;
    return s.num;
}

BiSeries materialize(const Fraction& f, const Window& w) {
    Split s = split(f);
    if (s.den.empty()) return s.num.truncated(w);
    UnitExpr d(f.ring);
    for (const auto& [p, e] : s.den) d = d * UnitExpr(p).pow(e);
    // the numerator shifts the window of the inverse
    Exp lo{0, 0};
    for (Exp e : s.num.exps()) lo = std::min(lo, e);
    Window wd = w.shifted(-lo);
    return mul(s.num, d.inverse().expand(wd), w);
}

UnitExpr parse_unit(const std::string& text, RingPtr r, const VarSet& vars) {
    return to_unit(eval_fraction(parse_expression(text), r, vars));
}

RationalFunctionElement parse_curve_element(const std::string& text, RingPtr r) {
    Curve c = eval_curve(parse_expression(text), r);
    std::map<int, RatFunc> terms;
    for (auto& [k, f] : c) terms.emplace(k, RatFunc{f.num, f.den});
    if (terms.empty()) fail(ErrorCode::NotAUnit, "the expression is zero");
    return RationalFunctionElement::from_terms(r, std::move(terms));
}

}  // namespace ccs
