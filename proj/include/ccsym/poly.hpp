#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ccsym/ring.hpp"

namespace ccs {

// Dense univariate polynomial with coefficients in one ring, low degree first.
class UPoly {
public:
    UPoly() = default;
    explicit UPoly(RingPtr r) : ring_(r) {}
    UPoly(RingPtr r, std::vector<RingValue> c);

    static UPoly monomial(RingPtr r, const RingValue& c, int deg);
    static UPoly x(RingPtr r) { return monomial(r, r->one(), 1); }
    static UPoly constant(const RingValue& c) { return monomial(c.ring(), c, 0); }

    RingPtr ring() const { return ring_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    const std::vector<RingValue>& coeffs() const { return c_; }
    RingValue coeff(int i) const;
    RingValue lead() const { return c_.back(); }

    UPoly operator+(const UPoly& b) const;
    UPoly operator-(const UPoly& b) const;
    UPoly operator*(const UPoly& b) const;
    UPoly operator*(const RingValue& s) const;
    bool operator==(const UPoly& b) const;
    bool operator!=(const UPoly& b) const { return !(*this == b); }

    UPoly monic() const;  // lead must be a unit
    UPoly derivative() const;
    RingValue eval(const RingValue& x) const;
    // substitutes x -> a + x (Taylor shift); a may live in an extension ring of the coefficients
    UPoly shifted(const RingValue& a) const;

    std::string to_string(const std::string& var) const;

private:
    void trim();
    RingPtr ring_ = nullptr;
    std::vector<RingValue> c_;
};

void divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r);  // lead of b a unit
UPoly poly_mod(const UPoly& a, const UPoly& m);
UPoly poly_div(const UPoly& a, const UPoly& m);
UPoly poly_gcd(const UPoly& a, const UPoly& b);  // monic, field coefficients
UPoly powmod(const UPoly& base, const mpz_class& e, const UPoly& m);

// Over a finite field (scalar ring with a finite residue field and no nilpotents).
bool is_irreducible(const UPoly& f);
// Distinct monic irreducible factors, sorted by (degree, coefficients).
std::vector<UPoly> irreducible_factors(const UPoly& f);

}  // namespace ccs
