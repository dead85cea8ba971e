#include "ccsym/poly.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace ccs {

UPoly::UPoly(RingPtr r, std::vector<RingValue> c) : ring_(r), c_(std::move(c)) {
    for (const RingValue& v : c_) check_same_ring(v.ring(), r);
    trim();
}

void UPoly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

UPoly UPoly::monomial(RingPtr r, const RingValue& c, int deg) {
    std::vector<RingValue> v(static_cast<std::size_t>(deg) + 1, r->zero());
    v.back() = c;
    return UPoly(r, std::move(v));
}

RingValue UPoly::coeff(int i) const {
    if (i < 0 || i > degree()) return ring_->zero();
    return c_[static_cast<std::size_t>(i)];
}

UPoly UPoly::operator+(const UPoly& b) const {
    check_same_ring(ring_, b.ring_);
    std::vector<RingValue> v(std::max(c_.size(), b.c_.size()), ring_->zero());
    for (std::size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
    return UPoly(ring_, std::move(v));
}

UPoly UPoly::operator-(const UPoly& b) const {
    check_same_ring(ring_, b.ring_);
    std::vector<RingValue> v(std::max(c_.size(), b.c_.size()), ring_->zero());
    for (std::size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] -= b.c_[i];
    return UPoly(ring_, std::move(v));
}

UPoly UPoly::operator*(const UPoly& b) const {
    check_same_ring(ring_, b.ring_);
    if (is_zero() || b.is_zero()) return UPoly(ring_);
    std::vector<RingValue> v(c_.size() + b.c_.size() - 1, ring_->zero());
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j)
            ring_->k_mul_add(v[i + j].mutable_coords().data(), c_[i].data(), b.c_[j].data());
    }
    return UPoly(ring_, std::move(v));
}

UPoly UPoly::operator*(const RingValue& s) const {
    std::vector<RingValue> v;
    for (const RingValue& c : c_) v.push_back(c * s);
    return UPoly(ring_, std::move(v));
}

bool UPoly::operator==(const UPoly& b) const {
    if (ring_ != b.ring_ || c_.size() != b.c_.size()) return false;
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != b.c_[i]) return false;
    return true;
}

UPoly UPoly::monic() const {
    if (is_zero()) return *this;
    return *this * lead().inverse();
}

UPoly UPoly::derivative() const {
    std::vector<RingValue> v;
    for (std::size_t i = 1; i < c_.size(); ++i) v.push_back(c_[i] * ring_->from_int(static_cast<std::int64_t>(i)));
    return UPoly(ring_, std::move(v));
}

RingValue UPoly::eval(const RingValue& x) const {
    RingPtr tr = x.ring();
    RingValue acc = tr->zero();
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + embed(*it, tr);
    return acc;
}

UPoly UPoly::shifted(const RingValue& a) const {
    RingPtr tr = a.ring();
    UPoly lin(tr, {a, tr->one()});
    UPoly acc(tr);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * lin + UPoly::constant(embed(*it, tr));
    return acc;
}

std::string UPoly::to_string(const std::string& var) const {
    std::string out;
    for (int i = degree(); i >= 0; --i) {
        const RingValue& c = c_[static_cast<std::size_t>(i)];
        if (c.is_zero()) continue;
        std::string cs = c.to_string();
        std::string term;
        if (i == 0) {
            term = cs;
        } else {
            std::string pw = var + (i > 1 ? "^" + std::to_string(i) : "");
            if (cs == "1") {
                term = pw;
            } else if (cs == "-1") {
                term = "-" + pw;
            } else {
                bool compound = cs.find_first_of("+-", 1) != std::string::npos;
                term = (compound ? "(" + cs + ")" : cs) + "*" + pw;
            }
        }
        if (!out.empty() && term[0] != '-') out += "+";
        out += term;
    }
    return out.empty() ? "0" : out;
}

void divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r) {
    check_same_ring(a.ring(), b.ring());
    if (b.is_zero()) fail(ErrorCode::NotAUnit, "polynomial division by zero");
    RingPtr R = a.ring();
    RingValue inv = b.lead().inverse();
    std::vector<RingValue> rem = a.coeffs();
    int db = b.degree();
    std::vector<RingValue> quo(static_cast<std::size_t>(std::max(0, a.degree() - db + 1)), R->zero());
    for (int i = a.degree(); i >= db; --i) {
        RingValue c = rem[static_cast<std::size_t>(i)] * inv;
        if (c.is_zero()) continue;
        quo[static_cast<std::size_t>(i - db)] = c;
        for (int j = 0; j <= db; ++j)
            R->k_mul_sub(rem[static_cast<std::size_t>(i - db + j)].mutable_coords().data(), c.data(),
                         b.coeffs()[static_cast<std::size_t>(j)].data());
    }
    q = UPoly(R, std::move(quo));
    if (static_cast<int>(rem.size()) > db) rem.resize(static_cast<std::size_t>(std::max(db, 0)));
    r = UPoly(R, std::move(rem));
}

UPoly poly_mod(const UPoly& a, const UPoly& m) {
    UPoly q, r;
    divmod(a, m, q, r);
    return r;
}

UPoly poly_div(const UPoly& a, const UPoly& m) {
    UPoly q, r;
    divmod(a, m, q, r);
    return q;
}

UPoly poly_gcd(const UPoly& a, const UPoly& b) {
    UPoly x = a, y = b;
    while (!y.is_zero()) {
        UPoly r = poly_mod(x, y);
        x = std::move(y);
        y = std::move(r);
    }
    return x.monic();
}

UPoly powmod(const UPoly& base, const mpz_class& e, const UPoly& m) {
    RingPtr R = base.ring();
    UPoly result = poly_mod(UPoly::constant(R->one()), m);
    UPoly b = poly_mod(base, m);
    std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        result = poly_mod(result * result, m);
        if (mpz_tstbit(e.get_mpz_t(), i)) result = poly_mod(result * b, m);
    }
    return result;
}

namespace {

void require_finite_field(RingPtr R) {
    if (R->is_rational() || R->prime_power() > 1 || R->mono_count() != 1)
        fail(ErrorCode::DomainViolation, "polynomial factoring needs finite field coefficients");
}

mpz_class field_size(RingPtr R) { return mpz_class(static_cast<long>(R->residue_field_size())); }

// x^(q^k) mod f
UPoly frobenius_power(const UPoly& f, int k) {
    RingPtr R = f.ring();
    mpz_class q = field_size(R);
    UPoly xp = UPoly::x(R);
    for (int i = 0; i < k; ++i) xp = powmod(xp, q, f);
    return xp;
}

std::vector<int> prime_divisors(int n) {
    std::vector<int> out;
    for (int d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        out.push_back(d);
        while (n % d == 0) n /= d;
    }
    if (n > 1) out.push_back(n);
    return out;
}

// f(x) = g(x^p): returns g with coefficients replaced by their p-th roots
UPoly pth_root(const UPoly& f) {
    RingPtr R = f.ring();
    std::int64_t p = R->residue_characteristic();
    std::int64_t root_exp = R->residue_field_size() / p;  // c^(q/p) is the p-th root of c
    std::vector<RingValue> v;
    for (int i = 0; i <= f.degree(); i += static_cast<int>(p))
        v.push_back(frobenius(f.coeff(i), root_exp));
    return UPoly(R, std::move(v));
}

RingValue random_element(RingPtr R, std::mt19937_64& rng) {
    std::vector<Num> c(R->dim());
    std::uniform_int_distribution<std::int64_t> dist(0, R->modulus() - 1);
    for (Num& x : c) x = R->s_from_int(dist(rng));
    return R->from_coords(std::move(c));
}

UPoly random_poly(RingPtr R, int deg, std::mt19937_64& rng) {
    std::vector<RingValue> v;
    for (int i = 0; i < deg; ++i) v.push_back(random_element(R, rng));
    return UPoly(R, std::move(v));
}

// f squarefree, monic, all irreducible factors of degree d
void equal_degree(const UPoly& f, int d, std::mt19937_64& rng, std::vector<UPoly>& out) {
    if (f.degree() == d) {
        out.push_back(f);
        return;
    }
    RingPtr R = f.ring();
    std::int64_t q = R->residue_field_size();
    mpz_class qd;
    mpz_pow_ui(qd.get_mpz_t(), mpz_class(static_cast<long>(q)).get_mpz_t(), static_cast<unsigned long>(d));
    for (;;) {
        UPoly a = random_poly(R, f.degree(), rng);
        if (a.degree() < 1) continue;
        UPoly b;
        if (q % 2 == 0) {
            // trace map to GF(2)
            std::size_t bits = mpz_sizeinbase(qd.get_mpz_t(), 2) - 1;
            UPoly acc = poly_mod(a, f), term = acc;
            for (std::size_t i = 1; i < bits; ++i) {
                term = poly_mod(term * term, f);
                acc = acc + term;
            }
            b = acc;
        } else {
            mpz_class e = (qd - 1) / 2;
            b = powmod(a, e, f) - UPoly::constant(R->one());
        }
        UPoly g = poly_gcd(f, b);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree(g, d, rng, out);
            equal_degree(poly_div(f, g).monic(), d, rng, out);
            return;
        }
    }
}

void factor_squarefree(const UPoly& f, std::vector<UPoly>& out) {
    RingPtr R = f.ring();
    std::mt19937_64 rng(0x5eed5eedULL);
    UPoly rest = f.monic();
    UPoly xq = UPoly::x(R);
    mpz_class q = field_size(R);
    for (int d = 1; 2 * d <= rest.degree(); ++d) {
        xq = powmod(xq, q, rest);
        UPoly g = poly_gcd(rest, xq - UPoly::x(R));
        if (g.degree() > 0) {
            equal_degree(g, d, rng, out);
            rest = poly_div(rest, g).monic();
            xq = poly_mod(xq, rest);
        }
    }
    if (rest.degree() > 0) out.push_back(rest);
}

void collect_factors(const UPoly& f, std::vector<UPoly>& out) {
    if (f.degree() < 1) return;
    UPoly df = f.derivative();
    if (df.is_zero()) {
        collect_factors(pth_root(f), out);
        return;
    }
    UPoly g = poly_gcd(f, df);
    factor_squarefree(poly_div(f, g), out);
    collect_factors(g, out);
}

bool poly_less(const UPoly& a, const UPoly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (int i = a.degree(); i >= 0; --i) {
        const auto& x = a.coeff(i).coords();
        const auto& y = b.coeff(i).coords();
        for (std::size_t k = x.size(); k-- > 0;)
            if (x[k].n != y[k].n) return x[k].n < y[k].n;
    }
    return false;
}

}  // namespace

bool is_irreducible(const UPoly& f) {
    RingPtr R = f.ring();
    require_finite_field(R);
    int n = f.degree();
    if (n < 1) return false;
    if (n == 1) return true;
    UPoly m = f.monic();
    UPoly x = UPoly::x(R);
    for (int r : prime_divisors(n)) {
        UPoly h = frobenius_power(m, n / r) - x;
        if (poly_gcd(m, poly_mod(h, m)).degree() != 0) return false;
    }
    return poly_mod(frobenius_power(m, n) - x, m).is_zero();
}

std::vector<UPoly> irreducible_factors(const UPoly& f) {
    require_finite_field(f.ring());
    std::vector<UPoly> all;
    collect_factors(f.monic(), all);
    std::sort(all.begin(), all.end(), poly_less);
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

}  // namespace ccs
