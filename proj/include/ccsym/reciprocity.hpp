#pragma once

#include <map>
#include <string>
#include <vector>

#include "ccsym/poly.hpp"
#include "ccsym/series.hpp"

namespace ccs {

// ---------------------------------------------------------------- curve P^1 with coordinate z

struct RatFunc {
    UPoly num, den;  // den must have a nonzero residue image
};

// Element of (k(z) (x) R)((t_C)): t_C-exponent -> coefficient. A plain rational function
// has the single exponent 0.
struct RationalFunctionElement {
    RingPtr ring = nullptr;
    std::map<int, RatFunc> terms;

    static RationalFunctionElement function(const UPoly& num, const UPoly& den);
    static RationalFunctionElement function(const UPoly& num);
    static RationalFunctionElement from_terms(RingPtr r, std::map<int, RatFunc> terms);
    bool has_t_structure() const;
    std::string to_string() const;
};

struct ClosedPoint {
    bool infinite = false;
    UPoly pi;  // monic irreducible over the residue field, finite points only

    static ClosedPoint finite(const UPoly& pi);
    static ClosedPoint at_infinity() { return {true, {}}; }
    int degree() const { return infinite ? 1 : pi.degree(); }
    std::string name() const;
};

// Expansion in u = z - root (root in k(x)) or u = 1/z, with t_C as the outer variable; the
// result lives over k(x) (x) R.
BiSeries expand_at_point(const RationalFunctionElement& e, const ClosedPoint& x, const Window& w);
// the same as an exact product of Laurent polynomials
UnitExpr local_unit(const RationalFunctionElement& e, const ClosedPoint& x);

// finite points where some coefficient has a zero or a pole, then infinity
std::vector<ClosedPoint> candidate_points(const std::vector<RationalFunctionElement>& es);

// ---------------------------------------------------------------- branches through (0, 0)

struct Branch {
    enum class Kind { TAxis, UAxis, Graph };  // t_C = t, t_C = u, t_C = t - phi(u)
    Kind kind = Kind::TAxis;
    BiSeries phi;  // Graph only: polynomial in u with phi(0) = 0, exponents Exp{0, j}

    static Branch t_axis() { return {Kind::TAxis, {}}; }
    static Branch u_axis() { return {Kind::UAxis, {}}; }
    static Branch graph(const BiSeries& phi);
    std::string name() const;
};

BiSeries branch_expand(const BiSeries& e, const Branch& b, const Window& w);
UnitExpr branch_unit(const UnitExpr& e, const Branch& b);
// both axes and the graph branches of the factors
std::vector<Branch> candidate_branches(const std::vector<UnitExpr>& es);

// ---------------------------------------------------------------- reports

struct SiteValue {
    std::string site;
    int degree = 1;
    RingValue local_value;
    RingValue norm_value;
};

struct ReciprocityReport {
    std::string law;  // "curve1d", "curve2d" or "point2d"
    std::vector<SiteValue> sites;
    RingValue product;
    bool pass = false;
    std::vector<std::string> nontrivial;
};

// local symbols, normed down to R
SiteValue curve_symbol1_at(const RationalFunctionElement& f, const RationalFunctionElement& g, const ClosedPoint& x);
SiteValue curve_symbol2_at(const RationalFunctionElement& f, const RationalFunctionElement& g, const RationalFunctionElement& h,
                           const ClosedPoint& x);
SiteValue branch_symbol(const UnitExpr& f, const UnitExpr& g, const UnitExpr& h, const Branch& b);

ReciprocityReport check_curve_1d(const RationalFunctionElement& f, const RationalFunctionElement& g);
ReciprocityReport check_curve_2d(const RationalFunctionElement& f, const RationalFunctionElement& g, const RationalFunctionElement& h);
ReciprocityReport check_point_2d(const UnitExpr& f, const UnitExpr& g, const UnitExpr& h);

}  // namespace ccs
