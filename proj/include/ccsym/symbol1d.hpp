#pragma once

#include <vector>

#include "ccsym/series.hpp"

namespace ccs {

// Series in t alone: BiSeries whose terms all have u-exponent 0.

struct Factor1 {
    int i;
    RingValue c;  // 1 - c t^i
};

// f = prod(1 - d_i t^i) * r0 * t^nu * prod(1 - c_i t^i)
struct Decomposition1 {
    std::vector<Factor1> minus;  // i < 0, all of them
    RingValue r0;
    int nu = 0;
    std::vector<Factor1> plus;  // i > 0, complete for i <= plus_rows
    int plus_rows = kInf;
};

// f exact; plus factors are computed at least up to t^rows
Decomposition1 decompose1(const BiSeries& f, int rows);

RingValue cc1_product(const BiSeries& f, const BiSeries& g);
RingValue cc1_residue(const BiSeries& f, const BiSeries& g);
RingValue tame1(const BiSeries& f, const BiSeries& g);

// extended to products of polynomials by bimultiplicativity
RingValue cc1_product(const UnitExpr& f, const UnitExpr& g);
RingValue cc1_residue(const UnitExpr& f, const UnitExpr& g);

}  // namespace ccs
