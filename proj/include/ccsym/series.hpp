#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccsym/ring.hpp"

namespace ccs {

inline constexpr int kInf = 1 << 28;

// Exponent pair of u^j t^i; the order on pairs is lexicographic in (i, j).
struct Exp {
    int i = 0;  // t
    int j = 0;  // u
    friend bool operator==(Exp a, Exp b) { return a.i == b.i && a.j == b.j; }
    friend bool operator!=(Exp a, Exp b) { return !(a == b); }
    friend bool operator<(Exp a, Exp b) { return a.i != b.i ? a.i < b.i : a.j < b.j; }
    friend Exp operator+(Exp a, Exp b) { return {a.i + b.i, a.j + b.j}; }
    friend Exp operator-(Exp a, Exp b) { return {a.i - b.i, a.j - b.j}; }
    Exp operator-() const { return {-i, -j}; }
    bool is_zero() const { return i == 0 && j == 0; }
    bool lex_positive() const { return i > 0 || (i == 0 && j > 0); }
    bool lex_negative() const { return i < 0 || (i == 0 && j < 0); }
};

// Region of exactly known coefficients: t-exponent <= t_max and, in row r, u-exponent <= cap(r).
// Rows below the explicitly stored range use low_cap.
class Window {
public:
    Window() = default;
    static Window rows(int t_max, int cap = kInf);
    static Window everything() { return rows(kInf, kInf); }
    static Window nothing() { return rows(-kInf, -kInf); }
    // rows row0 .. row0+size-1 with the given caps, nothing elsewhere
    static Window explicit_rows(int row0, std::vector<int> caps);

    int t_max() const { return t_max_; }
    int cap(int row) const;
    bool contains(Exp e) const { return e.i <= t_max_ && e.j <= cap(e.i); }
    bool unbounded() const { return t_max_ >= kInf; }
    void set_cap(int row, int cap);
    void set_low_cap(int cap) { low_cap_ = cap; }
    void set_high_cap(int cap) { high_cap_ = cap; }
    int low_cap() const { return low_cap_; }
    int high_cap() const { return high_cap_; }
    int first_explicit_row() const { return row0_; }
    const std::vector<int>& explicit_caps() const { return caps_; }
    Window shifted(Exp d) const;  // {e + d : e in this}
    Window with_t_max(int t) const;
    bool subset_of(const Window& o, int from_row) const;  // rows >= from_row
    std::string to_string() const;
    friend bool operator==(const Window& a, const Window& b);

private:
    int t_max_ = -kInf;
    int low_cap_ = kInf;
    int row0_ = 0;
    std::vector<int> caps_;  // caps for rows row0_ .. row0_+size-1
    int high_cap_ = kInf;    // rows above the stored range
};

// Lower bound for the support of a series: no terms in rows below row_lo, and in row r no
// terms with u-exponent below min_u(r). Rows beyond the stored range are either empty or
// unconstrained.
class Profile {
public:
    Profile() = default;
    Profile(int row_lo, std::vector<int> lo, bool open_above) : row_lo_(row_lo), lo_(std::move(lo)), open_above_(open_above) {}
    int row_lo() const { return row_lo_; }
    int row_hi() const { return row_lo_ + static_cast<int>(lo_.size()) - 1; }
    // kInf: row empty; -kInf: unknown
    int min_u(int row) const;
    bool open_above() const { return open_above_; }
    Profile shifted(Exp d) const;
    static Profile empty() { return Profile(0, {}, false); }

private:
    int row_lo_ = 0;
    std::vector<int> lo_;
    bool open_above_ = false;
};

class BiSeries {
public:
    BiSeries() = default;
    explicit BiSeries(RingPtr r) : ring_(r) {}

    static BiSeries monomial(const RingValue& c, Exp e);
    static BiSeries constant(const RingValue& c) { return monomial(c, {0, 0}); }
    static BiSeries variable_t(RingPtr r) { return monomial(r->one(), {1, 0}); }
    static BiSeries variable_u(RingPtr r) { return monomial(r->one(), {0, 1}); }
    static BiSeries from_terms(RingPtr r, std::vector<std::pair<Exp, RingValue>> terms);
    // takes ownership of sorted, distinct, nonzero terms
    static BiSeries from_raw(RingPtr r, std::vector<Exp> exps, std::vector<Num> coefs);

    RingPtr ring() const { return ring_; }
    std::size_t size() const { return exps_.size(); }
    bool is_zero() const { return exps_.empty(); }
    Exp exp(std::size_t k) const { return exps_[k]; }
    const Num* coef(std::size_t k) const { return coefs_.data() + k * ring_->dim(); }
    RingValue coeff_at(std::size_t k) const;
    const std::vector<Exp>& exps() const { return exps_; }
    const std::vector<Num>& coefs() const { return coefs_; }
    // coefficient of u^j t^i; InsufficientWindow outside the known region
    RingValue coeff(Exp e) const;
    std::optional<std::size_t> find(Exp e) const;

    bool is_exact() const { return !window_; }
    const std::optional<Window>& window() const { return window_; }
    Window known() const { return window_ ? *window_ : Window::everything(); }
    Profile profile() const;
    bool has_profile() const { return is_exact() || profile_.has_value(); }
    // restricts to w and records w as the known region together with a support bound
    BiSeries windowed(const Window& w, const Profile& p) const;
    BiSeries truncated(const Window& w) const;  // drops terms outside w, keeps the known region
    bool depends_on_u() const;

    // agreement of all coefficients inside w (both must be known there)
    bool agrees_within(const BiSeries& o, const Window& w) const;
    bool operator==(const BiSeries& o) const;
    bool operator!=(const BiSeries& o) const { return !(*this == o); }

    std::string to_string() const;
    // terms as a polynomial in the given variable names (t-variable, u-variable)
    std::string to_string(const std::string& tvar, const std::string& uvar) const;

private:
    RingPtr ring_ = nullptr;
    std::vector<Exp> exps_;
    std::vector<Num> coefs_;
    std::optional<Window> window_;
    std::optional<Profile> profile_;
};

BiSeries operator+(const BiSeries& a, const BiSeries& b);
BiSeries operator-(const BiSeries& a, const BiSeries& b);
BiSeries operator-(const BiSeries& a);
BiSeries scale(const BiSeries& a, const RingValue& c);
BiSeries shift(const BiSeries& a, Exp d);  // multiplies by u^d.j t^d.i
BiSeries add(const BiSeries& a, const BiSeries& b);
// Product. Without w both factors must be exact. With w the result is exact inside w;
// InsufficientWindow / UnboundedDemand when the factors do not determine it.
BiSeries mul(const BiSeries& a, const BiSeries& b, const std::optional<Window>& w = std::nullopt);

// Leading data of a unit: the lex-smallest term with unit coefficient.
struct UnitLead {
    RingValue c;
    Exp nu;  // (nu1, nu2) = (t-exponent, u-exponent)
};
UnitLead unit_lead(const BiSeries& f);  // NotAUnit

BiSeries invert(const BiSeries& f, const Window& w);
BiSeries log_window(const BiSeries& f, const Window& w);
BiSeries exp_window(const BiSeries& a, const Window& w);
BiSeries partial_derivative(const BiSeries& f, char var);  // var 'u' or 't'
RingValue residue2(const BiSeries& f);
BiSeries substitute(const BiSeries& f, const BiSeries& t_new, const BiSeries& u_new, const Window& w);

struct ElementaryFactor {
    Exp e;
    RingValue c;  // the factor is 1 - c u^j t^i
};

struct UnitFactorization {
    BiSeries f_minus;
    RingValue f0;
    int nu2 = 0;
    int nu1 = 0;
    BiSeries f_plus;
    std::vector<ElementaryFactor> minus_factors;  // descending lex order
    std::vector<ElementaryFactor> plus_factors;   // ascending lex order
    // f_minus and f_plus are exact here, and so are the factors lying in it. The lists also
    // carry factors beyond it; the products over the lists are exact inside it.
    Window parts_window;
};
UnitFactorization decompose_unit(const BiSeries& f, const Window& w);
// f0, nu and the two factor lists only; f_minus and f_plus are left empty
UnitFactorization unit_factors(const BiSeries& f, const Window& w);

// Support bound of a factor for demand analysis.
struct FactorProfile {
    int row_lo;
    std::vector<int> min_u;  // per row from row_lo; later rows repeat the last entry, empty means no bound
};
// Windows W_k such that every coefficient of the product at a target exponent only involves
// coefficients of factor k inside W_k.
std::vector<Window> demand_window(const std::vector<Exp>& targets, const std::vector<FactorProfile>& factors);

// ---------------------------------------------------------------------------------------
// Monoid bounds used to truncate computations that are power series in a finite set of
// monomials ("atoms"). Products whose nilpotent weight reaches the nilradical exponent
// vanish, so only products of weight <= budget matter.

struct Atom {
    Exp e;
    int weight;  // nil order of the coefficient, 0 for units
};

class MonoidProfile {
public:
    MonoidProfile() = default;
    // least u-exponent per row over all products of atoms of total weight <= budget,
    // for rows in [row_lo(), row_hi]; row_lo() is the lowest reachable row.
    MonoidProfile(const std::vector<Atom>& atoms, int budget, int row_hi);
    int row_lo() const { return lo_; }
    int row_hi() const { return lo_ + static_cast<int>(min_.size()) - 1; }
    int min_u(int row) const;  // kInf when unreachable
    int max_u(int row) const;  // -kInf when unreachable, kInf when unbounded

private:
    int lo_ = 0;
    std::vector<int> min_, max_;
};

// support bound of a power series in the atoms
Profile profile_of(const MonoidProfile& mon);
// support bound of a product, rows up to row_cap
Profile sum_profile(const Profile& a, const Profile& b, int row_cap);

// {e : e + m in target for some m in the monoid}
Window keep_window(const Window& target, const MonoidProfile& mon, int row_min);

// Atoms of a unit: its terms after dividing by the leading term, without the leading 1.
std::vector<Atom> atoms_of(const BiSeries& x);

// ---------------------------------------------------------------------------------------
// Exact units given as finite products of Laurent polynomials with integer exponents.

class UnitExpr {
public:
    UnitExpr() = default;
    explicit UnitExpr(RingPtr r) : ring_(r) {}
    explicit UnitExpr(const BiSeries& f);  // exact f, must be a unit

    RingPtr ring() const { return ring_; }
    const std::vector<std::pair<BiSeries, std::int64_t>>& factors() const { return factors_; }
    bool is_one() const { return factors_.empty(); }

    UnitExpr operator*(const UnitExpr& o) const;
    UnitExpr inverse() const;
    UnitExpr pow(std::int64_t e) const;
    // expansion inside a window
    BiSeries expand(const Window& w) const;
    std::string to_string() const;

private:
    RingPtr ring_ = nullptr;
    std::vector<std::pair<BiSeries, std::int64_t>> factors_;
};

// image under t -> t_new, u -> u_new (exact parameters)
UnitExpr substitute(const UnitExpr& f, const BiSeries& t_new, const BiSeries& u_new);

// A unit split as c * u^nu.j t^nu.i * prod (1 + x_k)^{e_k} with each x_k an exact polynomial
// whose terms below (0,0) are nilpotent.
struct PreparedUnit {
    RingPtr ring;
    RingValue c;
    Exp nu;
    std::vector<std::pair<BiSeries, std::int64_t>> xs;
    std::vector<Atom> atoms;
};
PreparedUnit prepare_unit(const UnitExpr& f);


}  // namespace ccs
