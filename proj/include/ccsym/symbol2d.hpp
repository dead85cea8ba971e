#pragma once

#include <string>
#include <vector>

#include "ccsym/series.hpp"

namespace ccs {

enum class SymbolPath { Product, Residue, Tame };
const char* path_name(SymbolPath p);

struct SymbolFactor {
    std::string kind;       // "T", "S" or "Q"
    std::vector<Exp> exps;  // exponents of the elementary factors involved
    RingValue value;        // value of the primitive
    std::int64_t power = 1;  // exponent it enters the symbol with
};

struct SymbolResult {
    RingValue value;
    SymbolPath path = SymbolPath::Product;
    Window window;  // factor region of the final evaluation
    bool stabilized = false;
    std::vector<SymbolFactor> factors;  // product path only
};

// nu(f, g) = nu2(f) nu1(g) - nu2(g) nu1(f)
std::int64_t nu_pair(Exp nf, Exp ng);
std::int64_t nu_pair(const UnitExpr& f, const UnitExpr& g);
// parity of A
int sign_exponent(Exp nf, Exp ng, Exp nh);
int sign_exponent(const UnitExpr& f, const UnitExpr& g, const UnitExpr& h);

// Symbols of elementary factors 1 - a u^j t^i (exponents given as Exp{i, j}).
RingValue T(const RingValue& a, Exp ea, const RingValue& b, Exp eb, const RingValue& c, Exp ec);  // (f, g, h)
RingValue S(const RingValue& a, Exp ea, const RingValue& b, Exp eb);     // (f, g, t)
RingValue Qsym(const RingValue& a, Exp ea, const RingValue& b, Exp eb);  // (f, g, u)

SymbolResult cc2_product(const UnitExpr& f, const UnitExpr& g, const UnitExpr& h);
SymbolResult cc2_residue(const UnitExpr& f, const UnitExpr& g, const UnitExpr& h);
// residue path over Q-algebras, product path otherwise
SymbolResult cc2(const UnitExpr& f, const UnitExpr& g, const UnitExpr& h);
RingValue tame2(const UnitExpr& f, const UnitExpr& g, const UnitExpr& h);

// Res(df/f ^ dg/g) and Res(y df/f ^ dg/g), y an exact Laurent polynomial
RingValue log_residue(const UnitExpr& f, const UnitExpr& g);
RingValue log_residue(const UnitExpr& f, const UnitExpr& g, const BiSeries& y);

}  // namespace ccs
