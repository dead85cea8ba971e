#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <gmpxx.h>

namespace ccs {

// One coordinate of a ring element. Modular rings keep the residue in n (d unused).
// Rationals keep a reduced fraction n/d with d > 0, spilling into big on overflow;
// big is only set when the value does not fit in 64 bits.
struct Num {
    std::int64_t n = 0;
    std::int64_t d = 1;
    std::shared_ptr<const mpq_class> big;
};

namespace rat {

Num make(std::int64_t n, std::int64_t d = 1);
Num from_mpq(const mpq_class& q);
mpq_class to_mpq(const Num& a);

inline bool is_zero(const Num& a) { return !a.big && a.n == 0; }
inline bool is_one(const Num& a) { return !a.big && a.n == 1 && a.d == 1; }

Num add(const Num& a, const Num& b);
Num sub(const Num& a, const Num& b);
Num mul(const Num& a, const Num& b);
Num neg(const Num& a);
Num inv(const Num& a);  // a != 0
bool equal(const Num& a, const Num& b);
int sign(const Num& a);
bool is_integer(const Num& a);
std::string str(const Num& a);

}  // namespace rat

}  // namespace ccs
