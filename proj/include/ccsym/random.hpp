#pragma once

#include <cstdint>
#include <random>

#include "ccsym/series.hpp"

namespace ccs::gen {

using Rng = std::mt19937_64;

int uniform_int(Rng& rng, int lo, int hi);
bool coin(Rng& rng, double p = 0.5);

// Small coordinates: integers in [-3, 3] (occasionally halves) over Q, uniform residues otherwise.
RingValue element(RingPtr r, Rng& rng);
RingValue unit(RingPtr r, Rng& rng);
// element of the maximal ideal; zero over fields
RingValue nilpotent(RingPtr r, Rng& rng);

struct Shape {
    int lo = -3;    // exponent box [lo, hi]^2
    int hi = 3;
    int terms = 3;  // extra terms besides the leading one (upper bound)
};

// Exact unit with support in the box: a unit-coefficient leading term, arbitrary coefficients
// above it in lex order, nilpotent ones below.
BiSeries unit_polynomial(RingPtr r, Rng& rng, const Shape& s = {});
// same with all u-exponents 0, t-exponents in [lo, hi]
BiSeries unit_polynomial1(RingPtr r, Rng& rng, const Shape& s = {});
// 1 + x with x supported in the box minus the origin, lex-negative terms nilpotent
BiSeries one_plus(RingPtr r, Rng& rng, const Shape& s = {});
// product of one or two unit polynomials, exponents in {-1, 1, 2}
UnitExpr unit_expr(RingPtr r, Rng& rng, const Shape& s = {});

}  // namespace ccs::gen
