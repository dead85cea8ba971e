#include "ccsym/num.hpp"

#include <numeric>

namespace ccs::rat {

namespace {

using i128 = __int128;

constexpr i128 kMax = INT64_MAX;
constexpr i128 kMin = INT64_MIN;

bool fits(i128 v) { return v <= kMax && v >= kMin; }

std::uint64_t uabs(std::int64_t v) {
    return v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
}

mpz_class to_mpz(i128 v) {
    bool negative = v < 0;
    unsigned __int128 u = negative ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
    mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
    mpz_class r = (hi << 64) + lo;
    return negative ? mpz_class(-r) : r;
}

// num/den already reduced, den > 0
Num finish(i128 num, i128 den) {
    if (fits(num) && fits(den)) {
        Num r;
        r.n = static_cast<std::int64_t>(num);
        r.d = static_cast<std::int64_t>(den);
        return r;
    }
    mpq_class q(to_mpz(num), to_mpz(den));
    return from_mpq(q);
}

Num big_result(const mpq_class& q) { return from_mpq(q); }

}  // namespace

Num make(std::int64_t n, std::int64_t d) {
    std::uint64_t g = std::gcd(uabs(n), uabs(d));
    if (g == 0) g = 1;
    i128 nn = static_cast<i128>(n) / static_cast<i128>(g);
    i128 dd = static_cast<i128>(d) / static_cast<i128>(g);
    if (dd < 0) {
        nn = -nn;
        dd = -dd;
    }
    if (nn == 0) dd = 1;
    return finish(nn, dd);
}

Num from_mpq(const mpq_class& q) {
    if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p()) {
        Num r;
        r.n = q.get_num().get_si();
        r.d = q.get_den().get_si();
        return r;
    }
    Num r;
    r.n = 0;
    r.d = 0;
    r.big = std::make_shared<const mpq_class>(q);
    return r;
}

mpq_class to_mpq(const Num& a) {
    if (a.big) return *a.big;
    mpq_class q(mpz_class(static_cast<long>(a.n)), mpz_class(static_cast<long>(a.d)));
    return q;
}

Num add(const Num& a, const Num& b) {
    if (a.big || b.big) return big_result(to_mpq(a) + to_mpq(b));
    if (a.d == 1 && b.d == 1) return finish(static_cast<i128>(a.n) + b.n, 1);
    std::int64_t g = static_cast<std::int64_t>(std::gcd(static_cast<std::uint64_t>(a.d), static_cast<std::uint64_t>(b.d)));
    if (g == 1) {
        i128 num = static_cast<i128>(a.n) * b.d + static_cast<i128>(b.n) * a.d;
        i128 den = static_cast<i128>(a.d) * b.d;
        if (num == 0) return Num{};
        return finish(num, den);
    }
    i128 t = static_cast<i128>(a.n) * (b.d / g) + static_cast<i128>(b.n) * (a.d / g);
    if (t == 0) return Num{};
    i128 tm = t % g;
    if (tm < 0) tm = -tm;
    std::int64_t g2 = static_cast<std::int64_t>(std::gcd(static_cast<std::uint64_t>(tm), static_cast<std::uint64_t>(g)));
    i128 num = t / g2;
    i128 den = static_cast<i128>(a.d / g) * (b.d / g2);
    return finish(num, den);
}

Num neg(const Num& a) {
    if (a.big) return big_result(-*a.big);
    return finish(-static_cast<i128>(a.n), a.d);
}

Num sub(const Num& a, const Num& b) { return add(a, neg(b)); }

Num mul(const Num& a, const Num& b) {
    if (a.big || b.big) return big_result(to_mpq(a) * to_mpq(b));
    if (a.n == 0 || b.n == 0) return Num{};
    std::uint64_t g1 = std::gcd(uabs(a.n), static_cast<std::uint64_t>(b.d));
    std::uint64_t g2 = std::gcd(uabs(b.n), static_cast<std::uint64_t>(a.d));
    i128 num = static_cast<i128>(a.n / static_cast<std::int64_t>(g1)) * (b.n / static_cast<std::int64_t>(g2));
    i128 den = static_cast<i128>(a.d / static_cast<std::int64_t>(g2)) * (b.d / static_cast<std::int64_t>(g1));
    return finish(num, den);
}

Num inv(const Num& a) {
    if (a.big) return big_result(1 / *a.big);
    if (a.n < 0) return finish(-static_cast<i128>(a.d), -static_cast<i128>(a.n));
    return finish(a.d, a.n);
}

bool equal(const Num& a, const Num& b) {
    if (a.big || b.big) {
        if (!a.big || !b.big) return false;
        return *a.big == *b.big;
    }
    return a.n == b.n && a.d == b.d;
}

int sign(const Num& a) {
    if (a.big) return sgn(*a.big);
    return (a.n > 0) - (a.n < 0);
}

bool is_integer(const Num& a) {
    if (a.big) return a.big->get_den() == 1;
    return a.d == 1;
}

std::string str(const Num& a) {
    if (a.big) return a.big->get_str();
    if (a.d == 1) return std::to_string(a.n);
    return std::to_string(a.n) + "/" + std::to_string(a.d);
}

}  // namespace ccs::rat
