#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ccsym/errors.hpp"
#include "ccsym/num.hpp"

namespace ccs {

struct RingDescriptor {
    enum class Kind { Rationals, PrimeField, FiniteField, IntegersMod, NilpotentExtension };

    Kind kind = Kind::Rationals;
    std::int64_t p = 0;
    int k = 1;                           // extension degree of GF(p^k), exponent of Z/(p^k)
    std::vector<std::int64_t> modulus;   // GF(p^k): k+1 coefficients over GF(p), low degree first, monic
    std::shared_ptr<const RingDescriptor> base;
    std::vector<std::string> gens;
    std::vector<int> bounds;

    static RingDescriptor rationals();
    static RingDescriptor prime_field(std::int64_t p);
    static RingDescriptor finite_field(std::int64_t p, int k, std::vector<std::int64_t> modulus);
    static RingDescriptor integers_mod(std::int64_t p, int k);
    static RingDescriptor nilpotent(const RingDescriptor& base, std::vector<std::string> gens, std::vector<int> bounds);

    std::string to_string() const;
};

class Ring;
class RingValue;
using RingPtr = const Ring*;

// Builds (or fetches the interned copy of) the ring a descriptor describes. Rings live for
// the whole process, so RingPtr handles can be copied freely.
RingPtr make_ring(const RingDescriptor& d);

// Adjoins a root of an irreducible monic polynomial over the field part of r. The
// coefficients are given low degree first, without the leading 1, as elements of
// r->scalar_ring(). Nilpotent generators of r are carried over.
RingPtr extend_field(RingPtr r, const std::vector<RingValue>& modulus, const std::string& gen);
// r[gen]/(gen^bound), reserved names allowed; the new generator comes last, so the coefficient of gen^e occupies the
// e-th block of r->dim() coordinates
RingPtr adjoin_nilpotent(RingPtr r, const std::string& gen, int bound);

class Ring {
public:
    enum class Base { Rational, Modular };

    struct Level {
        int degree = 0;
        std::vector<std::vector<Num>> modulus;  // low coefficients over the previous level
        std::string gen;
    };

    Base base() const { return base_; }
    bool is_rational() const { return base_ == Base::Rational; }
    std::int64_t modulus() const { return m_; }
    std::int64_t characteristic() const { return is_rational() ? 0 : m_; }
    std::int64_t residue_characteristic() const { return p_; }
    int prime_power() const { return pk_; }  // k for Z/(p^k), 1 otherwise
    int nilradical_exponent() const { return q_; }
    bool is_field() const { return q_ == 1; }
    bool has_finite_residue_field() const { return !is_rational(); }
    std::int64_t residue_field_size() const;  // p^(field dim), 0 for Q

    std::size_t dim() const { return dim_; }
    std::size_t field_dim() const { return fdim_; }
    std::size_t mono_count() const { return ndim_; }
    int field_levels() const { return static_cast<int>(levels_.size()); }
    std::size_t level_dim(int level) const { return level_dims_[static_cast<std::size_t>(level)]; }
    const Level& level(int i) const { return levels_[static_cast<std::size_t>(i)]; }

    const std::string& text() const { return text_; }
    const std::string& scalar_text() const { return field_text_; }
    const std::vector<std::string>& generators() const { return gens_; }
    const std::vector<int>& bounds() const { return bounds_; }
    const std::vector<int>& mono_exponents(std::size_t mono) const { return mono_exps_[mono]; }
    int mono_degree(std::size_t mono) const { return mono_deg_[mono]; }

    RingPtr residue_field() const;
    // same nilpotent generators, field tower cut to `level` levels
    RingPtr with_levels(int level) const;
    // prime ring plus the field tower cut to `level` levels, no nilpotent generators
    RingPtr scalar_ring(int level) const;
    RingPtr scalar_ring() const { return scalar_ring(field_levels()); }

    RingValue zero() const;
    RingValue one() const;
    RingValue from_int(std::int64_t v) const;
    RingValue from_rational(std::int64_t n, std::int64_t d) const;
    RingValue from_mpq(const mpq_class& q) const;
    RingValue generator(const std::string& name) const;  // nilpotent or field generator
    bool has_generator(const std::string& name) const;
    RingValue field_generator(int level) const;          // level >= 1
    RingValue from_coords(std::vector<Num> c) const;

    // raw coordinate kernels; arrays have dim() entries
    void k_add(const Num* a, const Num* b, Num* out) const;
    void k_sub(const Num* a, const Num* b, Num* out) const;
    void k_neg(const Num* a, Num* out) const;
    void k_mul(const Num* a, const Num* b, Num* out) const;      // out must not alias a or b
    void k_mul_add(Num* acc, const Num* a, const Num* b) const;  // acc += a*b
    void k_mul_sub(Num* acc, const Num* a, const Num* b) const;  // acc -= a*b
    bool k_is_zero(const Num* a) const;
    bool k_equal(const Num* a, const Num* b) const;
    void k_zero(Num* out) const;
    void k_scale_int(Num* a, std::int64_t v) const;

    // scalar arithmetic of the prime ring
    Num s_add(const Num& a, const Num& b) const;
    Num s_sub(const Num& a, const Num& b) const;
    Num s_mul(const Num& a, const Num& b) const;
    Num s_neg(const Num& a) const;
    Num s_from_int(std::int64_t v) const;
    bool s_is_zero(const Num& a) const { return is_rational() ? rat::is_zero(a) : a.n == 0; }
    std::string s_str(const Num& a) const;

    // field arithmetic on the top level (arrays of field_dim())
    void f_mul(int level, const Num* a, const Num* b, Num* out) const;
    bool f_is_zero(int level, const Num* a) const;

    ~Ring();

private:
    friend RingPtr make_ring(const RingDescriptor& d);
    friend RingPtr extend_field(RingPtr r, const std::vector<RingValue>& modulus, const std::string& gen);
    friend RingPtr adjoin_nilpotent(RingPtr r, const std::string& gen, int bound);
    friend RingPtr intern_ring(Ring&& proto);
    Ring() = default;

    void finalize();

    Base base_ = Base::Rational;
    std::int64_t m_ = 0;   // modulus of the prime ring
    std::int64_t p_ = 0;   // residue characteristic
    int pk_ = 1;
    std::vector<Level> levels_;
    std::vector<std::size_t> level_dims_;  // level_dims_[i] = dimension of level i field
    std::vector<std::string> gens_;
    std::vector<int> bounds_;
    std::vector<std::vector<int>> mono_exps_;
    std::vector<int> mono_deg_;
    struct MulEntry {
        std::uint32_t a, b, c;
    };
    std::vector<MulEntry> mul_table_;
    std::size_t fdim_ = 1, ndim_ = 1, dim_ = 1;
    int q_ = 1;
    std::string text_;
    std::string field_text_;
};

class RingValue {
public:
    RingValue() = default;
    RingValue(RingPtr r, std::vector<Num> c) : ring_(r), c_(std::move(c)) {}

    RingPtr ring() const { return ring_; }
    const std::vector<Num>& coords() const { return c_; }
    std::vector<Num>& mutable_coords() { return c_; }
    const Num* data() const { return c_.data(); }

    bool is_zero() const;
    bool is_one() const;
    bool is_unit() const;
    bool is_nilpotent() const { return !is_unit(); }
    bool is_field_constant() const;  // lies in the field part (no nilpotent generators involved)

    RingValue operator+(const RingValue& b) const;
    RingValue operator-(const RingValue& b) const;
    RingValue operator*(const RingValue& b) const;
    RingValue operator-() const;
    RingValue& operator+=(const RingValue& b);
    RingValue& operator-=(const RingValue& b);
    RingValue& operator*=(const RingValue& b);
    bool operator==(const RingValue& b) const;
    bool operator!=(const RingValue& b) const { return !(*this == b); }

    RingValue inverse() const;               // NotAUnit
    RingValue pow(std::int64_t e) const;     // negative e requires a unit
    RingValue residue_image() const;         // in ring()->residue_field()
    std::optional<int> nilpotency_index() const;  // nullopt for units
    // order of the element in the filtration by powers of the maximal ideal
    int nil_order() const;

    std::string to_string() const;
    // field coefficient of a nilpotent monomial as an element of scalar_ring()
    RingValue block(std::size_t mono) const;

private:
    RingPtr ring_ = nullptr;
    std::vector<Num> c_;
};

void check_same_ring(RingPtr a, RingPtr b);

// Product of all conjugates of a under the Frobenius of the top field level relative to the
// subfield given by `level` levels; the result lives in r->with_levels(level).
RingValue norm_to_subfield(const RingValue& a, int level);

// Applies x -> x^e to every field coefficient, e a power of the residue characteristic
// (nilpotent generators are fixed).
RingValue frobenius(const RingValue& a, std::int64_t e);

// Moves a value into a ring whose field tower extends (or equals) its own and whose
// generators contain its generators.
RingValue embed(const RingValue& a, RingPtr target);

// Drops all field coordinates above `level`; requires a to lie in that subfield.
RingValue restrict_to_level(const RingValue& a, int level);

// Integer binomial coefficient as a ring element.
RingValue binomial(RingPtr r, std::int64_t n, std::int64_t k);

}  // namespace ccs
