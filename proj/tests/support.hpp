#pragma once

#include <doctest.h>

#include <string>
#include <tuple>
#include <vector>

#include "ccsym/ring.hpp"
#include "ccsym/series.hpp"

namespace testing {

using namespace ccs;

inline RingPtr Q() { return make_ring(RingDescriptor::rationals()); }
inline RingPtr GF(std::int64_t p) { return make_ring(RingDescriptor::prime_field(p)); }
inline RingPtr GF4() { return make_ring(RingDescriptor::finite_field(2, 2, {1, 1, 1})); }
inline RingPtr Zmod(std::int64_t p, int k) { return make_ring(RingDescriptor::integers_mod(p, k)); }

inline RingDescriptor desc(RingPtr r) {
    if (r->is_rational()) return RingDescriptor::rationals();
    if (r->prime_power() > 1) return RingDescriptor::integers_mod(r->residue_characteristic(), r->prime_power());
    if (r == GF4()) return RingDescriptor::finite_field(2, 2, {1, 1, 1});
    return RingDescriptor::prime_field(r->modulus());
}

// base[g1,...]/(g1^b1,...)
inline RingPtr nil(RingPtr base, std::vector<std::string> g, std::vector<int> b) {
    return make_ring(RingDescriptor::nilpotent(desc(base), std::move(g), std::move(b)));
}

struct Term {
    int u;  // u-exponent
    int t;  // t-exponent
    RingValue c;
};

inline BiSeries poly(RingPtr r, std::vector<Term> terms) {
    std::vector<std::pair<Exp, RingValue>> v;
    for (auto& x : terms) v.emplace_back(Exp{x.t, x.u}, x.c);
    return BiSeries::from_terms(r, std::move(v));
}

inline RingValue num(RingPtr r, std::int64_t n, std::int64_t d = 1) { return r->from_rational(n, d); }

template <class F>
void expect_error(ErrorCode code, F&& f) {
    try {
        f();
        FAIL("expected " << error_name(code));
    } catch (const Error& e) {
        CHECK_MESSAGE(e.code() == code, e.what());
    }
}

}  // namespace testing
