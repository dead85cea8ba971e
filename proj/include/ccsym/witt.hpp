#pragma once

#include <cstdint>
#include <vector>

#include "ccsym/series.hpp"

namespace ccs {

// Truncated Witt vectors over a ring: big ones indexed by 1..n, p-typical ones by
// 1, p, ..., p^(m-1). comps[k] is the component at index(k).
struct WittVector {
    RingPtr ring = nullptr;
    std::int64_t p = 0;  // 0 for big vectors
    std::vector<RingValue> comps;

    static WittVector big(RingPtr r, std::vector<RingValue> comps);
    static WittVector p_typical(RingPtr r, std::int64_t p, std::vector<RingValue> comps);
    static WittVector zero_big(RingPtr r, int n);

    bool is_big() const { return p == 0; }
    std::size_t size() const { return comps.size(); }
    std::int64_t index(std::size_t k) const;
    bool is_zero() const;
    bool operator==(const WittVector& o) const;
    std::string to_string() const;
};

// prod (1 - x_i s^i) mod s^(n+1), as coefficients of 1, s, ..., s^n
std::vector<RingValue> witt_to_series(const WittVector& x);
// inverse of witt_to_series; p[0] must be 1
WittVector series_to_witt(const std::vector<RingValue>& p);
// ghost components x(i) = sum_{d | i} d x_d^{i/d}, i in the index set
std::vector<RingValue> ghost(const WittVector& x);

// sum in the additive group, through the product of the associated series
WittVector witt_add(const WittVector& x, const WittVector& y);
// the same for vectors with Laurent polynomial components
std::vector<BiSeries> witt_add(const std::vector<BiSeries>& x, const std::vector<BiSeries>& y);

// (g1, g2 | y_1, ..., y_n] over k, through the symbol over k[s]/s^(n+1). The y_i are exact
// Laurent polynomials over k (zero series allowed).
WittVector witt_symbol(const UnitExpr& g1, const UnitExpr& g2, const std::vector<BiSeries>& y);

// p-typical symbol over GF(p) from ghost components of lifts to Z/p^M; y holds the components
// at 1, p, ..., p^(m-1).
WittVector witt_symbol_ghost(const UnitExpr& g1, const UnitExpr& g2, const std::vector<BiSeries>& y);

WittVector p_typical_projection(const WittVector& x, std::int64_t p, int m);

}  // namespace ccs
