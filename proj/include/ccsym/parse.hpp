#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ccsym/reciprocity.hpp"
#include "ccsym/ring.hpp"
#include "ccsym/series.hpp"

namespace ccs {

// Q | GF(p) | GF(p^k; mod=<poly in x>) | Z/(p^k) | <base>[e1,...]/(e1^a1,...)
RingDescriptor parse_ring_descriptor(const std::string& text);
RingPtr parse_ring(const std::string& text);

struct Expr {
    enum class Kind { Number, Var, Add, Sub, Mul, Div, Neg, Pow };
    Kind kind = Kind::Number;
    std::string text;        // digits or variable name
    std::int64_t power = 0;  // Pow only
    std::vector<Expr> kids;
    std::size_t offset = 0;  // byte offset of the node in the source

    bool same_shape(const Expr& o) const;  // ignores offsets
};

// precedence ^ > unary minus > * / > + -, whitespace-insensitive
Expr parse_expression(const std::string& text);
std::string to_string(const Expr& e);

// Variables an expression may use besides the ring's generators.
struct VarSet {
    std::set<std::string> names;
    static VarSet one_dim() { return {{"t"}}; }
    static VarSet two_dim() { return {{"u", "t"}}; }
    static VarSet curve() { return {{"z", "t_C"}}; }
};

// Exact value as a product of Laurent polynomials with integer exponents; only unit factors
// carry negative exponents.
struct Fraction {
    RingPtr ring = nullptr;
    std::vector<std::pair<BiSeries, std::int64_t>> factors;
};

Fraction eval_fraction(const Expr& e, RingPtr r, const VarSet& vars);
UnitExpr to_unit(const Fraction& f);  // NotAUnit
// the exact Laurent polynomial, when every denominator is a monomial
std::optional<BiSeries> to_laurent(const Fraction& f);
// expansion inside w; denominators go through invert
BiSeries materialize(const Fraction& f, const Window& w);

UnitExpr parse_unit(const std::string& text, RingPtr r, const VarSet& vars);
RationalFunctionElement parse_curve_element(const std::string& text, RingPtr r);

}  // namespace ccs
