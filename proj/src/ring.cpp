#include "ccsym/ring.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "ccsym/poly.hpp"

namespace ccs {

RingPtr intern_ring(Ring&& proto);

namespace {

bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
    std::int64_t r0 = m, r1 = ((a % m) + m) % m, s0 = 0, s1 = 1;
    while (r1 != 0) {
        std::int64_t qt = r0 / r1;
        std::int64_t t = r0 - qt * r1;
        r0 = r1;
        r1 = t;
        t = s0 - qt * s1;
        s0 = s1;
        s1 = t;
    }
    if (r0 != 1) fail(ErrorCode::NotAUnit, "integer not invertible modulo " + std::to_string(m));
    s0 %= m;
    if (s0 < 0) s0 += m;
    return s0;
}

std::string int_poly_string(const std::vector<std::int64_t>& c, const std::string& var) {
    std::string out;
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
        std::int64_t v = c[static_cast<std::size_t>(i)];
        if (v == 0) continue;
        std::string term;
        if (i == 0) {
            term = std::to_string(v);
        } else {
            if (v != 1) term = std::to_string(v) + "*";
            term += var;
            if (i > 1) term += "^" + std::to_string(i);
        }
        if (!out.empty()) out += "+";
        out += term;
    }
    return out.empty() ? "0" : out;
}

std::string nil_suffix(const std::vector<std::string>& gens, const std::vector<int>& bounds) {
    if (gens.empty()) return "";
    std::string s = "[";
    for (std::size_t i = 0; i < gens.size(); ++i) s += (i ? "," : "") + gens[i];
    s += "]/(";
    for (std::size_t i = 0; i < gens.size(); ++i) s += (i ? "," : "") + gens[i] + "^" + std::to_string(bounds[i]);
    s += ")";
    return s;
}

bool reserved_name(const std::string& g) {
    static const char* reserved[] = {"u", "t", "z", "s", "x", "t_C", "Q", "GF", "Z", "mod"};
    for (const char* r : reserved)
        if (g == r) return true;
    return false;
}

}  // namespace

// ---------------------------------------------------------------- descriptors

RingDescriptor RingDescriptor::rationals() { return RingDescriptor{}; }

RingDescriptor RingDescriptor::prime_field(std::int64_t p) {
    RingDescriptor d;
    d.kind = Kind::PrimeField;
    d.p = p;
    return d;
}

RingDescriptor RingDescriptor::finite_field(std::int64_t p, int k, std::vector<std::int64_t> modulus) {
    RingDescriptor d;
    d.kind = Kind::FiniteField;
    d.p = p;
    d.k = k;
    d.modulus = std::move(modulus);
    return d;
}

RingDescriptor RingDescriptor::integers_mod(std::int64_t p, int k) {
    RingDescriptor d;
    d.kind = Kind::IntegersMod;
    d.p = p;
    d.k = k;
    return d;
}

RingDescriptor RingDescriptor::nilpotent(const RingDescriptor& base, std::vector<std::string> gens,
                                         std::vector<int> bounds) {
    RingDescriptor d;
    d.kind = Kind::NilpotentExtension;
    d.base = std::make_shared<const RingDescriptor>(base);
    d.gens = std::move(gens);
    d.bounds = std::move(bounds);
    return d;
}

std::string RingDescriptor::to_string() const {
    switch (kind) {
        case Kind::Rationals: return "Q";
        case Kind::PrimeField: return "GF(" + std::to_string(p) + ")";
        case Kind::FiniteField: {
            std::int64_t q = 1;
            for (int i = 0; i < k; ++i) q *= p;
            return "GF(" + std::to_string(q) + "; mod=" + int_poly_string(modulus, "x") + ")";
        }
        case Kind::IntegersMod: return "Z/(" + std::to_string(p) + "^" + std::to_string(k) + ")";
        case Kind::NilpotentExtension: return base->to_string() + nil_suffix(gens, bounds);
    }
    return "?";
}

// ---------------------------------------------------------------- registry

namespace {

std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

std::map<std::string, std::unique_ptr<Ring>>& registry() {
    static std::map<std::string, std::unique_ptr<Ring>> r;
    return r;
}

}  // namespace

Ring::~Ring() = default;

RingPtr intern_ring(Ring&& proto) {
    proto.finalize();
    std::lock_guard<std::mutex> lock(registry_mutex());
    auto& reg = registry();
    auto it = reg.find(proto.text_);
    if (it != reg.end()) return it->second.get();
    auto owned = std::unique_ptr<Ring>(new Ring(std::move(proto)));
    RingPtr out = owned.get();
    reg.emplace(out->text_, std::move(owned));
    return out;
}

void Ring::finalize() {
    level_dims_.assign(1, 1);
    for (const Level& l : levels_) level_dims_.push_back(level_dims_.back() * static_cast<std::size_t>(l.degree));
    fdim_ = level_dims_.back();
    ndim_ = 1;
    for (int b : bounds_) ndim_ *= static_cast<std::size_t>(b);
    dim_ = fdim_ * ndim_;
    q_ = pk_;
    for (int b : bounds_) q_ += b - 1;

    mono_exps_.assign(ndim_, std::vector<int>(bounds_.size(), 0));
    mono_deg_.assign(ndim_, 0);
    for (std::size_t idx = 0; idx < ndim_; ++idx) {
        std::size_t rest = idx;
        int deg = 0;
        for (std::size_t g = 0; g < bounds_.size(); ++g) {
            int e = static_cast<int>(rest % static_cast<std::size_t>(bounds_[g]));
            rest /= static_cast<std::size_t>(bounds_[g]);
            mono_exps_[idx][g] = e;
            deg += e;
        }
        mono_deg_[idx] = deg;
    }
    mul_table_.clear();
    for (std::size_t a = 0; a < ndim_; ++a) {
        for (std::size_t b = 0; b < ndim_; ++b) {
            std::size_t c = 0, stride = 1;
            bool ok = true;
            for (std::size_t g = 0; g < bounds_.size(); ++g) {
                int e = mono_exps_[a][g] + mono_exps_[b][g];
                if (e >= bounds_[g]) {
                    ok = false;
                    break;
                }
                c += static_cast<std::size_t>(e) * stride;
                stride *= static_cast<std::size_t>(bounds_[g]);
            }
            if (ok) mul_table_.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(c)});
        }
    }

    // text
    std::string ft;
    if (is_rational()) {
        ft = "Q";
    } else if (pk_ > 1) {
        ft = "Z/(" + std::to_string(p_) + "^" + std::to_string(pk_) + ")";
    } else {
        ft = "GF(" + std::to_string(p_) + ")";
    }
    for (std::size_t li = 0; li < levels_.size(); ++li) {
        const Level& l = levels_[li];
        if (li == 0) {
            std::vector<std::int64_t> c;
            for (const auto& v : l.modulus) c.push_back(v[0].n);
            c.push_back(1);
            std::int64_t q = 1;
            for (int i = 0; i < l.degree; ++i) q *= p_;
            ft = "GF(" + std::to_string(q) + "; mod=" + int_poly_string(c, l.gen) + ")";
        } else {
            // print the modulus over the previous level
            RingPtr sub = nullptr;
            {
                // the previous level ring is already interned when this one is built
                Ring proto;
                proto.base_ = base_;
                proto.m_ = m_;
                proto.p_ = p_;
                proto.pk_ = pk_;
                proto.levels_.assign(levels_.begin(), levels_.begin() + static_cast<std::ptrdiff_t>(li));
                sub = intern_ring(std::move(proto));
            }
            std::vector<RingValue> coeffs;
            for (const auto& v : l.modulus) coeffs.push_back(sub->from_coords(v));
            coeffs.push_back(sub->one());
            UPoly mp(sub, coeffs);
            ft += "{" + l.gen + ": " + mp.to_string(l.gen) + "}";
        }
    }
    field_text_ = ft;
    text_ = ft + nil_suffix(gens_, bounds_);
}

RingPtr make_ring(const RingDescriptor& d) {
    using Kind = RingDescriptor::Kind;
    Ring proto;
    switch (d.kind) {
        case Kind::Rationals:
            proto.base_ = Ring::Base::Rational;
            break;
        case Kind::PrimeField:
            if (!is_prime(d.p)) fail(ErrorCode::MalformedDescriptor, "GF(p) needs a prime p, got " + std::to_string(d.p));
            proto.base_ = Ring::Base::Modular;
            proto.m_ = proto.p_ = d.p;
            break;
        case Kind::IntegersMod: {
            if (!is_prime(d.p)) fail(ErrorCode::MalformedDescriptor, "Z/(p^k) needs a prime p, got " + std::to_string(d.p));
            if (d.k < 1) fail(ErrorCode::MalformedDescriptor, "Z/(p^k) needs k >= 1");
            std::int64_t m = 1;
            for (int i = 0; i < d.k; ++i) {
                if (m > (std::int64_t{1} << 40) / d.p) fail(ErrorCode::MalformedDescriptor, "Z/(p^k) modulus too large");
                m *= d.p;
            }
            proto.base_ = Ring::Base::Modular;
            proto.m_ = m;
            proto.p_ = d.p;
            proto.pk_ = d.k;
            break;
        }
        case Kind::FiniteField: {
            if (!is_prime(d.p)) fail(ErrorCode::MalformedDescriptor, "GF(p^k) needs a prime p, got " + std::to_string(d.p));
            if (d.k < 1) fail(ErrorCode::MalformedDescriptor, "GF(p^k) needs k >= 1");
            if (static_cast<int>(d.modulus.size()) != d.k + 1)
                fail(ErrorCode::MalformedDescriptor, "modulus degree must equal the extension degree");
            std::vector<std::int64_t> c;
            for (std::int64_t v : d.modulus) c.push_back(((v % d.p) + d.p) % d.p);
            if (c.back() != 1) fail(ErrorCode::MalformedDescriptor, "modulus must be monic");
            RingPtr fp = make_ring(RingDescriptor::prime_field(d.p));
            if (d.k == 1) return fp;
            std::vector<RingValue> coeffs;
            for (std::int64_t v : c) coeffs.push_back(fp->from_int(v));
            if (!is_irreducible(UPoly(fp, coeffs)))
                fail(ErrorCode::MalformedDescriptor, "modulus " + int_poly_string(c, "x") + " is reducible over GF(" + std::to_string(d.p) + ")");
            coeffs.pop_back();
            return extend_field(fp, coeffs, "x");
        }
        case Kind::NilpotentExtension: {
            if (!d.base) fail(ErrorCode::MalformedDescriptor, "nilpotent extension without a base");
            if (d.gens.empty() || d.gens.size() != d.bounds.size())
                fail(ErrorCode::MalformedDescriptor, "generator and bound lists must be nonempty and of equal length");
            RingPtr base = make_ring(*d.base);
            proto.base_ = base->base_;
            proto.m_ = base->m_;
            proto.p_ = base->p_;
            proto.pk_ = base->pk_;
            proto.levels_ = base->levels_;
            proto.gens_ = base->gens_;
            proto.bounds_ = base->bounds_;
            for (std::size_t i = 0; i < d.gens.size(); ++i) {
                const std::string& g = d.gens[i];
                if (g.empty() || reserved_name(g)) fail(ErrorCode::MalformedDescriptor, "bad generator name '" + g + "'");
                for (const Ring::Level& l : proto.levels_)
                    if (l.gen == g) fail(ErrorCode::MalformedDescriptor, "generator '" + g + "' clashes with a field generator");
                if (std::find(proto.gens_.begin(), proto.gens_.end(), g) != proto.gens_.end())
                    fail(ErrorCode::MalformedDescriptor, "duplicate generator '" + g + "'");
                if (d.bounds[i] < 2) fail(ErrorCode::MalformedDescriptor, "exponent bound of '" + g + "' must be >= 2");
                proto.gens_.push_back(g);
                proto.bounds_.push_back(d.bounds[i]);
            }
            std::size_t total = 1;
            for (int b : proto.bounds_) {
                total *= static_cast<std::size_t>(b);
                if (total > 4096) fail(ErrorCode::MalformedDescriptor, "nilpotent extension too large");
            }
            break;
        }
    }
    return intern_ring(std::move(proto));
}

RingPtr extend_field(RingPtr r, const std::vector<RingValue>& modulus, const std::string& gen) {
    if (r->is_rational() || r->prime_power() > 1)
        fail(ErrorCode::MalformedDescriptor, "field extensions are only supported over finite fields");
    RingPtr sc = r->scalar_ring();
    std::vector<RingValue> full;
    for (const RingValue& c : modulus) {
        check_same_ring(c.ring(), sc);
        full.push_back(c);
    }
    full.push_back(sc->one());
    if (!is_irreducible(UPoly(sc, full))) fail(ErrorCode::MalformedDescriptor, "extension modulus is reducible");
    for (const Ring::Level& l : r->levels_)
        if (l.gen == gen) fail(ErrorCode::MalformedDescriptor, "field generator '" + gen + "' already used");
    if (std::find(r->gens_.begin(), r->gens_.end(), gen) != r->gens_.end())
        fail(ErrorCode::MalformedDescriptor, "field generator '" + gen + "' clashes with a nilpotent generator");
    Ring proto;
    proto.base_ = r->base_;
    proto.m_ = r->m_;
    proto.p_ = r->p_;
    proto.pk_ = r->pk_;
    proto.levels_ = r->levels_;
    Ring::Level lvl;
    lvl.degree = static_cast<int>(modulus.size());
    lvl.gen = gen;
    for (const RingValue& c : modulus) lvl.modulus.push_back(c.coords());
    proto.levels_.push_back(lvl);
    proto.gens_ = r->gens_;
    proto.bounds_ = r->bounds_;
    return intern_ring(std::move(proto));
}

RingPtr adjoin_nilpotent(RingPtr r, const std::string& gen, int bound) {
    if (gen.empty()) fail(ErrorCode::MalformedDescriptor, "empty generator name");
    for (const Ring::Level& l : r->levels_)
        if (l.gen == gen) fail(ErrorCode::MalformedDescriptor, "generator '" + gen + "' clashes with a field generator");
    if (std::find(r->gens_.begin(), r->gens_.end(), gen) != r->gens_.end())
        fail(ErrorCode::MalformedDescriptor, "duplicate generator '" + gen + "'");
    if (bound < 2) fail(ErrorCode::MalformedDescriptor, "exponent bound of '" + gen + "' must be >= 2");
    std::size_t total = static_cast<std::size_t>(bound);
    for (int b : r->bounds_) total *= static_cast<std::size_t>(b);
    if (total > 4096) fail(ErrorCode::MalformedDescriptor, "nilpotent extension too large");
    Ring proto;
    proto.base_ = r->base_;
    proto.m_ = r->m_;
    proto.p_ = r->p_;
    proto.pk_ = r->pk_;
    proto.levels_ = r->levels_;
    proto.gens_ = r->gens_;
    proto.bounds_ = r->bounds_;
    proto.gens_.push_back(gen);
    proto.bounds_.push_back(bound);
    return intern_ring(std::move(proto));
}

RingPtr Ring::with_levels(int level) const {
    if (level == field_levels()) return this;
    Ring proto;
    proto.base_ = base_;
    proto.m_ = m_;
    proto.p_ = p_;
    proto.pk_ = pk_;
    proto.levels_.assign(levels_.begin(), levels_.begin() + level);
    proto.gens_ = gens_;
    proto.bounds_ = bounds_;
    return intern_ring(std::move(proto));
}

RingPtr Ring::scalar_ring(int level) const {
    if (level == field_levels() && gens_.empty()) return this;
    Ring proto;
    proto.base_ = base_;
    proto.m_ = m_;
    proto.p_ = p_;
    proto.pk_ = pk_;
    proto.levels_.assign(levels_.begin(), levels_.begin() + level);
    return intern_ring(std::move(proto));
}

RingPtr Ring::residue_field() const {
    if (pk_ > 1) return make_ring(RingDescriptor::prime_field(p_));
    return scalar_ring(field_levels());
}

std::int64_t Ring::residue_field_size() const {
    if (is_rational()) return 0;
    std::int64_t q = 1;
    for (std::size_t i = 0; i < fdim_; ++i) q *= p_;
    return q;
}

// ---------------------------------------------------------------- scalar kernels

Num Ring::s_add(const Num& a, const Num& b) const {
    if (is_rational()) return rat::add(a, b);
    Num r;
    r.n = a.n + b.n;
    if (r.n >= m_) r.n -= m_;
    return r;
}

Num Ring::s_sub(const Num& a, const Num& b) const {
    if (is_rational()) return rat::sub(a, b);
    Num r;
    r.n = a.n - b.n;
    if (r.n < 0) r.n += m_;
    return r;
}

Num Ring::s_mul(const Num& a, const Num& b) const {
    if (is_rational()) return rat::mul(a, b);
    Num r;
    r.n = static_cast<std::int64_t>((static_cast<__int128>(a.n) * b.n) % m_);
    return r;
}

Num Ring::s_neg(const Num& a) const {
    if (is_rational()) return rat::neg(a);
    Num r;
    r.n = a.n == 0 ? 0 : m_ - a.n;
    return r;
}

Num Ring::s_from_int(std::int64_t v) const {
    if (is_rational()) return rat::make(v);
    Num r;
    r.n = v % m_;
    if (r.n < 0) r.n += m_;
    return r;
}

std::string Ring::s_str(const Num& a) const {
    if (is_rational()) return rat::str(a);
    return std::to_string(a.n);
}

// ---------------------------------------------------------------- field kernels

bool Ring::f_is_zero(int level, const Num* a) const {
    std::size_t n = level_dims_[static_cast<std::size_t>(level)];
    for (std::size_t i = 0; i < n; ++i)
        if (!s_is_zero(a[i])) return false;
    return true;
}

void Ring::f_mul(int level, const Num* a, const Num* b, Num* out) const {
    if (level == 0) {
        out[0] = s_mul(a[0], b[0]);
        return;
    }
    const Level& lv = levels_[static_cast<std::size_t>(level - 1)];
    std::size_t sub = level_dims_[static_cast<std::size_t>(level - 1)];
    std::size_t d = static_cast<std::size_t>(lv.degree);
    std::vector<Num> tmp((2 * d - 1) * sub, s_from_int(0));
    std::vector<Num> prod(sub);
    for (std::size_t i = 0; i < d; ++i) {
        if (f_is_zero(level - 1, a + i * sub)) continue;
        for (std::size_t j = 0; j < d; ++j) {
            if (f_is_zero(level - 1, b + j * sub)) continue;
            f_mul(level - 1, a + i * sub, b + j * sub, prod.data());
            Num* dst = tmp.data() + (i + j) * sub;
            for (std::size_t s = 0; s < sub; ++s) dst[s] = s_add(dst[s], prod[s]);
        }
    }
    for (std::size_t kdeg = 2 * d - 2; kdeg >= d; --kdeg) {
        const Num* c = tmp.data() + kdeg * sub;
        if (f_is_zero(level - 1, c)) continue;
        std::vector<Num> cc(c, c + sub);
        for (std::size_t i = 0; i < d; ++i) {
            f_mul(level - 1, cc.data(), lv.modulus[i].data(), prod.data());
            Num* dst = tmp.data() + (kdeg - d + i) * sub;
            for (std::size_t s = 0; s < sub; ++s) dst[s] = s_sub(dst[s], prod[s]);
        }
        for (std::size_t s = 0; s < sub; ++s) tmp[kdeg * sub + s] = s_from_int(0);
    }
    for (std::size_t i = 0; i < d * sub; ++i) out[i] = tmp[i];
}

// ---------------------------------------------------------------- element kernels

void Ring::k_zero(Num* out) const {
    Num z = s_from_int(0);
    for (std::size_t i = 0; i < dim_; ++i) out[i] = z;
}

void Ring::k_add(const Num* a, const Num* b, Num* out) const {
    for (std::size_t i = 0; i < dim_; ++i) out[i] = s_add(a[i], b[i]);
}

void Ring::k_sub(const Num* a, const Num* b, Num* out) const {
    for (std::size_t i = 0; i < dim_; ++i) out[i] = s_sub(a[i], b[i]);
}

void Ring::k_neg(const Num* a, Num* out) const {
    for (std::size_t i = 0; i < dim_; ++i) out[i] = s_neg(a[i]);
}

bool Ring::k_is_zero(const Num* a) const {
    for (std::size_t i = 0; i < dim_; ++i)
        if (!s_is_zero(a[i])) return false;
    return true;
}

bool Ring::k_equal(const Num* a, const Num* b) const {
    for (std::size_t i = 0; i < dim_; ++i) {
        if (is_rational()) {
            if (!rat::equal(a[i], b[i])) return false;
        } else if (a[i].n != b[i].n) {
            return false;
        }
    }
    return true;
}

void Ring::k_scale_int(Num* a, std::int64_t v) const {
    Num s = s_from_int(v);
    for (std::size_t i = 0; i < dim_; ++i) a[i] = s_mul(a[i], s);
}

void Ring::k_mul_add(Num* acc, const Num* a, const Num* b) const {
    const int top = field_levels();
    if (fdim_ == 1) {
        if (ndim_ == 1) {
            acc[0] = s_add(acc[0], s_mul(a[0], b[0]));
            return;
        }
        for (const MulEntry& e : mul_table_) {
            const Num& x = a[e.a];
            if (s_is_zero(x)) continue;
            const Num& y = b[e.b];
            if (s_is_zero(y)) continue;
            acc[e.c] = s_add(acc[e.c], s_mul(x, y));
        }
        return;
    }
    std::vector<Num> prod(fdim_);
    std::vector<char> za(ndim_), zb(ndim_);
    for (std::size_t i = 0; i < ndim_; ++i) {
        za[i] = f_is_zero(top, a + i * fdim_);
        zb[i] = f_is_zero(top, b + i * fdim_);
    }
    for (const MulEntry& e : mul_table_) {
        if (za[e.a] || zb[e.b]) continue;
        f_mul(top, a + e.a * fdim_, b + e.b * fdim_, prod.data());
        Num* dst = acc + e.c * fdim_;
        for (std::size_t s = 0; s < fdim_; ++s) dst[s] = s_add(dst[s], prod[s]);
    }
}

void Ring::k_mul_sub(Num* acc, const Num* a, const Num* b) const {
    std::vector<Num> tmp(dim_);
    k_mul(a, b, tmp.data());
    for (std::size_t i = 0; i < dim_; ++i) acc[i] = s_sub(acc[i], tmp[i]);
}

void Ring::k_mul(const Num* a, const Num* b, Num* out) const {
    k_zero(out);
    k_mul_add(out, a, b);
}

// ---------------------------------------------------------------- constructors

RingValue Ring::zero() const { return RingValue(this, std::vector<Num>(dim_, s_from_int(0))); }

RingValue Ring::one() const { return from_int(1); }

RingValue Ring::from_int(std::int64_t v) const {
    std::vector<Num> c(dim_, s_from_int(0));
    c[0] = s_from_int(v);
    return RingValue(this, std::move(c));
}

RingValue Ring::from_rational(std::int64_t n, std::int64_t d) const {
    if (d == 0) fail(ErrorCode::NotAUnit, "division by zero");
    if (is_rational()) {
        std::vector<Num> c(dim_, s_from_int(0));
        c[0] = rat::make(n, d);
        return RingValue(this, std::move(c));
    }
    std::int64_t dm = d % m_;
    if (dm < 0) dm += m_;
    if (dm % p_ == 0) fail(ErrorCode::NotAUnit, std::to_string(d) + " is not invertible in " + text_);
    RingValue r = from_int(n);
    r.mutable_coords()[0] = s_mul(r.coords()[0], s_from_int(mod_inverse(dm, m_)));
    return r;
}

RingValue Ring::from_mpq(const mpq_class& q) const {
    if (is_rational()) {
        std::vector<Num> c(dim_, s_from_int(0));
        c[0] = rat::from_mpq(q);
        return RingValue(this, std::move(c));
    }
    mpz_class mm(static_cast<long>(m_));
    mpz_class num = q.get_num() % mm;
    mpz_class den = q.get_den() % mm;
    if (num < 0) num += mm;
    if (den % mpz_class(static_cast<long>(p_)) == 0) fail(ErrorCode::NotAUnit, "denominator not invertible in " + text_);
    return from_rational(num.get_si(), den.get_si());
}

RingValue Ring::from_coords(std::vector<Num> c) const {
    if (c.size() != dim_) fail(ErrorCode::RingMismatch, "coordinate count does not match " + text_);
    return RingValue(this, std::move(c));
}

bool Ring::has_generator(const std::string& name) const {
    if (std::find(gens_.begin(), gens_.end(), name) != gens_.end()) return true;
    for (const Level& l : levels_)
        if (l.gen == name) return true;
    return false;
}

RingValue Ring::generator(const std::string& name) const {
    for (std::size_t g = 0; g < gens_.size(); ++g) {
        if (gens_[g] != name) continue;
        std::size_t stride = 1;
        for (std::size_t h = 0; h < g; ++h) stride *= static_cast<std::size_t>(bounds_[h]);
        RingValue r = zero();
        r.mutable_coords()[stride * fdim_] = s_from_int(1);
        return r;
    }
    for (std::size_t l = 0; l < levels_.size(); ++l)
        if (levels_[l].gen == name) return field_generator(static_cast<int>(l) + 1);
    fail(ErrorCode::RingMismatch, "no generator '" + name + "' in " + text_);
}

RingValue Ring::field_generator(int level) const {
    if (level < 1 || level > field_levels()) fail(ErrorCode::RingMismatch, "no such field level");
    RingValue r = zero();
    r.mutable_coords()[level_dims_[static_cast<std::size_t>(level - 1)]] = s_from_int(1);
    return r;
}

// ---------------------------------------------------------------- RingValue

void check_same_ring(RingPtr a, RingPtr b) {
    if (a != b) {
        fail(ErrorCode::RingMismatch, "ring mismatch: " + std::string(a ? a->text() : "<none>") + " vs " +
                                          std::string(b ? b->text() : "<none>"));
    }
}

bool RingValue::is_zero() const { return ring_->k_is_zero(c_.data()); }

bool RingValue::is_one() const { return *this == ring_->one(); }

bool RingValue::is_unit() const {
    const Ring& r = *ring_;
    if (r.prime_power() > 1) return c_[0].n % r.residue_characteristic() != 0;
    return !r.f_is_zero(r.field_levels(), c_.data());
}

bool RingValue::is_field_constant() const {
    const Ring& r = *ring_;
    for (std::size_t i = r.field_dim(); i < r.dim(); ++i)
        if (!r.s_is_zero(c_[i])) return false;
    return true;
}

RingValue RingValue::operator+(const RingValue& b) const {
    check_same_ring(ring_, b.ring_);
    RingValue r(ring_, std::vector<Num>(c_.size()));
    ring_->k_add(c_.data(), b.c_.data(), r.c_.data());
    return r;
}

RingValue RingValue::operator-(const RingValue& b) const {
    check_same_ring(ring_, b.ring_);
    RingValue r(ring_, std::vector<Num>(c_.size()));
    ring_->k_sub(c_.data(), b.c_.data(), r.c_.data());
    return r;
}

RingValue RingValue::operator*(const RingValue& b) const {
    check_same_ring(ring_, b.ring_);
    RingValue r(ring_, std::vector<Num>(c_.size()));
    ring_->k_mul(c_.data(), b.c_.data(), r.c_.data());
    return r;
}

RingValue RingValue::operator-() const {
    RingValue r(ring_, std::vector<Num>(c_.size()));
    ring_->k_neg(c_.data(), r.c_.data());
    return r;
}

RingValue& RingValue::operator+=(const RingValue& b) {
    check_same_ring(ring_, b.ring_);
    ring_->k_add(c_.data(), b.c_.data(), c_.data());
    return *this;
}

RingValue& RingValue::operator-=(const RingValue& b) {
    check_same_ring(ring_, b.ring_);
    ring_->k_sub(c_.data(), b.c_.data(), c_.data());
    return *this;
}

RingValue& RingValue::operator*=(const RingValue& b) {
    *this = *this * b;
    return *this;
}

bool RingValue::operator==(const RingValue& b) const {
    if (ring_ != b.ring_) return false;
    return ring_->k_equal(c_.data(), b.c_.data());
}

namespace {

// inverse of a nonzero element of the top-level field part (or a unit of Z/(p^k))
std::vector<Num> field_inverse(const Ring& r, const Num* a) {
    std::size_t fd = r.field_dim();
    if (r.is_rational()) return {rat::inv(a[0])};
    if (r.prime_power() > 1 || fd == 1) {
        Num x;
        x.n = mod_inverse(a[0].n, r.modulus());
        return {x};
    }
    // a^(|F|-2) by square and multiply
    std::int64_t e = r.residue_field_size() - 2;
    std::vector<Num> result(fd, r.s_from_int(0)), base(a, a + fd), tmp(fd);
    result[0] = r.s_from_int(1);
    int top = r.field_levels();
    while (e > 0) {
        if (e & 1) {
            r.f_mul(top, result.data(), base.data(), tmp.data());
            result = tmp;
        }
        e >>= 1;
        if (e) {
            r.f_mul(top, base.data(), base.data(), tmp.data());
            base = tmp;
        }
    }
    return result;
}

}  // namespace

RingValue RingValue::inverse() const {
    if (!is_unit()) fail(ErrorCode::NotAUnit, to_string() + " is not a unit of " + ring_->text());
    const Ring& r = *ring_;
    std::vector<Num> inv0 = field_inverse(r, c_.data());
    RingValue b0 = r.zero();
    for (std::size_t i = 0; i < inv0.size(); ++i) b0.c_[i] = inv0[i];
    if (r.is_field()) return b0;
    // a*b0 = 1 - x with x nilpotent; a^{-1} = b0 (1 + x + x^2 + ...)
    RingValue x = r.one() - (*this) * b0;
    RingValue sum = r.one(), term = r.one();
    for (int i = 1; i < r.nilradical_exponent(); ++i) {
        term = term * x;
        if (term.is_zero()) break;
        sum += term;
    }
    return b0 * sum;
}

RingValue RingValue::pow(std::int64_t e) const {
    if (e < 0) return inverse().pow(-e);
    RingValue result = ring_->one(), base = *this;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

RingValue RingValue::residue_image() const {
    const Ring& r = *ring_;
    RingPtr res = r.residue_field();
    RingValue out = res->zero();
    if (r.prime_power() > 1) {
        out.c_[0] = res->s_from_int(c_[0].n % r.residue_characteristic());
        return out;
    }
    for (std::size_t i = 0; i < r.field_dim(); ++i) out.c_[i] = c_[i];
    return out;
}

std::optional<int> RingValue::nilpotency_index() const {
    if (is_unit()) return std::nullopt;
    if (is_zero()) return 1;
    RingValue pw = *this;
    int n = 1;
    while (!pw.is_zero()) {
        pw = pw * (*this);
        ++n;
    }
    return n;
}

int RingValue::nil_order() const {
    const Ring& r = *ring_;
    int best = r.nilradical_exponent();
    for (std::size_t mono = 0; mono < r.mono_count(); ++mono) {
        const Num* blk = c_.data() + mono * r.field_dim();
        if (r.f_is_zero(r.field_levels(), blk)) continue;
        int ord = r.mono_degree(mono);
        if (r.prime_power() > 1) {
            std::int64_t v = blk[0].n;
            while (v % r.residue_characteristic() == 0 && ord < best) {
                v /= r.residue_characteristic();
                ++ord;
            }
        }
        best = std::min(best, ord);
    }
    return best;
}

RingValue RingValue::block(std::size_t mono) const {
    const Ring& r = *ring_;
    RingPtr sc = r.scalar_ring();
    std::vector<Num> c(c_.begin() + static_cast<std::ptrdiff_t>(mono * r.field_dim()),
                       c_.begin() + static_cast<std::ptrdiff_t>((mono + 1) * r.field_dim()));
    return RingValue(sc, std::move(c));
}

namespace {

std::string field_string(const Ring& r, int level, const Num* a) {
    if (level == 0) return r.s_str(a[0]);
    std::size_t sub = r.level_dim(level - 1);
    const Ring::Level& lv = r.level(level - 1);
    std::string out;
    for (int i = lv.degree - 1; i >= 0; --i) {
        const Num* c = a + static_cast<std::size_t>(i) * sub;
        if (r.f_is_zero(level - 1, c)) continue;
        std::string cs = field_string(r, level - 1, c);
        std::string term;
        if (i == 0) {
            term = cs;
        } else {
            std::string pw = lv.gen + (i > 1 ? "^" + std::to_string(i) : "");
            if (cs == "1") {
                term = pw;
            } else {
                bool compound = cs.find_first_of("+-", 1) != std::string::npos;
                term = (compound ? "(" + cs + ")" : cs) + "*" + pw;
            }
        }
        if (!out.empty() && term[0] != '-') out += "+";
        out += term;
    }
    return out.empty() ? "0" : out;
}

}  // namespace

std::string RingValue::to_string() const {
    const Ring& r = *ring_;
    std::vector<std::size_t> order(r.mono_count());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return r.mono_degree(a) < r.mono_degree(b); });
    std::string out;
    for (std::size_t mono : order) {
        const Num* blk = c_.data() + mono * r.field_dim();
        if (r.f_is_zero(r.field_levels(), blk)) continue;
        std::string cs = field_string(r, r.field_levels(), blk);
        std::string ms;
        const auto& ex = r.mono_exponents(mono);
        for (std::size_t g = 0; g < ex.size(); ++g) {
            if (ex[g] == 0) continue;
            if (!ms.empty()) ms += "*";
            ms += r.generators()[g];
            if (ex[g] > 1) ms += "^" + std::to_string(ex[g]);
        }
        std::string term;
        if (ms.empty()) {
            term = cs;
        } else if (cs == "1") {
            term = ms;
        } else if (cs == "-1") {
            term = "-" + ms;
        } else {
            bool compound = cs.find_first_of("+-", 1) != std::string::npos;
            term = (compound ? "(" + cs + ")" : cs) + "*" + ms;
        }
        if (!out.empty() && term[0] != '-') out += "+";
        out += term;
    }
    return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------- maps

RingValue frobenius(const RingValue& a, std::int64_t e) {
    const Ring& r = *a.ring();
    if (r.is_rational()) fail(ErrorCode::DomainViolation, "Frobenius needs a finite residue field");
    RingValue out = a;
    std::size_t fd = r.field_dim();
    int top = r.field_levels();
    if (fd == 1) return out;  // prime field: x^p = x
    for (std::size_t mono = 0; mono < r.mono_count(); ++mono) {
        const Num* blk = a.data() + mono * fd;
        if (r.f_is_zero(top, blk)) continue;
        std::vector<Num> result(fd, r.s_from_int(0)), base(blk, blk + fd), tmp(fd);
        result[0] = r.s_from_int(1);
        std::int64_t k = e;
        while (k > 0) {
            if (k & 1) {
                r.f_mul(top, result.data(), base.data(), tmp.data());
                result = tmp;
            }
            k >>= 1;
            if (k) {
                r.f_mul(top, base.data(), base.data(), tmp.data());
                base = tmp;
            }
        }
        for (std::size_t s = 0; s < fd; ++s) out.mutable_coords()[mono * fd + s] = result[s];
    }
    return out;
}

RingValue restrict_to_level(const RingValue& a, int level) {
    const Ring& r = *a.ring();
    RingPtr target = r.with_levels(level);
    std::size_t fd = r.field_dim(), sd = r.level_dim(level);
    std::vector<Num> c(target->dim(), r.s_from_int(0));
    for (std::size_t mono = 0; mono < r.mono_count(); ++mono) {
        for (std::size_t s = 0; s < fd; ++s) {
            const Num& v = a.coords()[mono * fd + s];
            if (s < sd) {
                c[mono * sd + s] = v;
            } else if (!r.s_is_zero(v)) {
                fail(ErrorCode::DomainViolation, "value " + a.to_string() + " does not lie in the subfield");
            }
        }
    }
    return RingValue(target, std::move(c));
}

RingValue norm_to_subfield(const RingValue& a, int level) {
    const Ring& r = *a.ring();
    if (r.is_rational() || level < 0 || level > r.field_levels())
        fail(ErrorCode::DomainViolation, "norm needs a finite field extension");
    if (!a.is_unit()) fail(ErrorCode::NotAUnit, "norm of a non-unit");
    std::int64_t sub_size = 1;
    for (std::size_t i = 0; i < r.level_dim(level); ++i) sub_size *= r.residue_characteristic();
    std::size_t degree = r.field_dim() / r.level_dim(level);
    RingValue result = a, conj = a;
    for (std::size_t i = 1; i < degree; ++i) {
        conj = frobenius(conj, sub_size);
        result = result * conj;
    }
    return restrict_to_level(result, level);
}

RingValue embed(const RingValue& a, RingPtr target) {
    const Ring& r = *a.ring();
    const Ring& t = *target;
    if (&r == &t) return a;
    if (r.base() != t.base() || r.modulus() != t.modulus() || r.field_levels() > t.field_levels())
        fail(ErrorCode::RingMismatch, "cannot embed " + r.text() + " into " + t.text());
    for (int l = 0; l < r.field_levels(); ++l)
        if (r.level(l).gen != t.level(l).gen || r.level(l).degree != t.level(l).degree)
            fail(ErrorCode::RingMismatch, "cannot embed " + r.text() + " into " + t.text());
    std::vector<std::size_t> gmap;
    for (std::size_t g = 0; g < r.generators().size(); ++g) {
        auto it = std::find(t.generators().begin(), t.generators().end(), r.generators()[g]);
        if (it == t.generators().end() || t.bounds()[static_cast<std::size_t>(it - t.generators().begin())] != r.bounds()[g])
            fail(ErrorCode::RingMismatch, "cannot embed " + r.text() + " into " + t.text());
        gmap.push_back(static_cast<std::size_t>(it - t.generators().begin()));
    }
    std::vector<Num> c(t.dim(), t.s_from_int(0));
    std::size_t rfd = r.field_dim(), tfd = t.field_dim();
    for (std::size_t mono = 0; mono < r.mono_count(); ++mono) {
        const auto& ex = r.mono_exponents(mono);
        std::size_t idx = 0;
        for (std::size_t g = 0; g < ex.size(); ++g) {
            std::size_t stride = 1;
            for (std::size_t h = 0; h < gmap[g]; ++h) stride *= static_cast<std::size_t>(t.bounds()[h]);
            idx += static_cast<std::size_t>(ex[g]) * stride;
        }
        for (std::size_t s = 0; s < rfd; ++s) c[idx * tfd + s] = a.coords()[mono * rfd + s];
    }
    return RingValue(target, std::move(c));
}

RingValue binomial(RingPtr r, std::int64_t n, std::int64_t k) {
    if (k < 0) return r->zero();
    mpz_class num = 1, den = 1;
    for (std::int64_t i = 0; i < k; ++i) {
        num *= mpz_class(static_cast<long>(n - i));
        den *= mpz_class(static_cast<long>(i + 1));
    }
    mpz_class v = num / den;
    return r->from_mpq(mpq_class(v));
}

}  // namespace ccs
