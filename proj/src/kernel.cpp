#include "ccsym/kernel.hpp"

#include <algorithm>

namespace ccs {

Grid::Grid(const Window& keep, const MonoidProfile& support) {
    if (keep.t_max() > support.row_hi()) fail(ErrorCode::UnboundedDemand, "truncation region has more rows than the support bound");
    row_lo_ = support.row_lo();
    row_hi_ = keep.t_max();
    if (row_hi_ < row_lo_) row_hi_ = row_lo_ - 1;
    std::size_t n = static_cast<std::size_t>(row_hi_ - row_lo_ + 1);
    lo_.assign(n, 0);
    cap_.assign(n, -1);
    off_.assign(n, 0);
    std::vector<int> wcaps(n, -kInf);
    for (int r = row_lo_; r <= row_hi_; ++r) {
        std::size_t k = static_cast<std::size_t>(r - row_lo_);
        off_[k] = total_;
        int lo = support.min_u(r);
        if (lo >= kInf) continue;
        int hi = std::min(keep.cap(r), support.max_u(r));
        if (hi >= kInf) fail(ErrorCode::UnboundedDemand, "row " + std::to_string(r) + " of the truncation region is unbounded in u");
        if (hi < lo) continue;
        lo_[k] = lo;
        cap_[k] = hi;
        wcaps[k] = hi;
        total_ += static_cast<std::size_t>(hi - lo + 1);
    }
    exps_.reserve(total_);
    for (int r = row_lo_; r <= row_hi_; ++r) {
        std::size_t k = static_cast<std::size_t>(r - row_lo_);
        for (int j = lo_[k]; j <= cap_[k]; ++j) exps_.push_back({r, j});
    }
    window_ = Window::explicit_rows(row_lo_, wcaps);
}

std::size_t Grid::zero_index() const {
    long k = index({0, 0});
    if (k < 0) fail(ErrorCode::DomainViolation, "grid does not contain the origin");
    return static_cast<std::size_t>(k);
}

MonoidProfile make_monoid(const std::vector<Atom>& atoms, int budget, const Window& target) {
    if (target.unbounded()) fail(ErrorCode::UnboundedDemand, "truncation target has no t bound");
    MonoidProfile first(atoms, budget, target.t_max());
    return MonoidProfile(atoms, budget, target.t_max() - first.row_lo());
}

Grid make_grid(const std::vector<Atom>& atoms, int budget, const Window& target) {
    MonoidProfile mon = make_monoid(atoms, budget, target);
    return Grid(keep_window(target, mon, mon.row_lo()), mon);
}

// ---------------------------------------------------------------- GridSeries

GridSeries::GridSeries(RingPtr r, const Grid* g)
    : ring_(r), grid_(g), dim_(r->dim()), c_(g->cells() * r->dim(), r->s_from_int(0)), nz_(g->cells(), 0) {}

GridSeries GridSeries::one(RingPtr r, const Grid* g) {
    GridSeries s(r, g);
    s.set({0, 0}, r->one());
    return s;
}

GridSeries GridSeries::from(const BiSeries& src, const Grid* g) {
    GridSeries s(src.ring(), g);
    for (std::size_t k = 0; k < src.size(); ++k) {
        long idx = g->index(src.exp(k));
        if (idx < 0) continue;
        std::copy(src.coef(k), src.coef(k) + s.dim_, s.at(static_cast<std::size_t>(idx)));
        s.nz_[static_cast<std::size_t>(idx)] = 1;
    }
    return s;
}

BiSeries GridSeries::to_series() const {
    std::vector<Exp> exps;
    std::vector<Num> coefs;
    for (std::size_t k = 0; k < nz_.size(); ++k) {
        if (!nz_[k]) continue;
        exps.push_back(grid_->exp_of(k));
        coefs.insert(coefs.end(), at(k), at(k) + dim_);
    }
    return BiSeries::from_raw(ring_, std::move(exps), std::move(coefs));
}

void GridSeries::refresh(std::size_t idx) { nz_[idx] = ring_->k_is_zero(at(idx)) ? 0 : 1; }

void GridSeries::refresh_all() {
    for (std::size_t k = 0; k < nz_.size(); ++k) refresh(k);
}

std::vector<std::size_t> GridSeries::support() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < nz_.size(); ++k)
        if (nz_[k]) out.push_back(k);
    return out;
}

bool GridSeries::is_zero() const {
    return std::none_of(nz_.begin(), nz_.end(), [](std::uint8_t v) { return v != 0; });
}

RingValue GridSeries::value(std::size_t idx) const { return RingValue(ring_, std::vector<Num>(at(idx), at(idx) + dim_)); }

RingValue GridSeries::value(Exp e) const {
    long idx = grid_->index(e);
    if (idx < 0) return ring_->zero();
    return value(static_cast<std::size_t>(idx));
}

void GridSeries::set(Exp e, const RingValue& v) {
    long idx = grid_->index(e);
    if (idx < 0) fail(ErrorCode::InsufficientWindow, "exponent outside the grid");
    std::copy(v.data(), v.data() + dim_, at(static_cast<std::size_t>(idx)));
    refresh(static_cast<std::size_t>(idx));
}

GridSeries& GridSeries::operator+=(const GridSeries& o) {
    std::vector<Num> tmp(dim_);
    for (std::size_t k = 0; k < nz_.size(); ++k) {
        if (!o.nz_[k]) continue;
        ring_->k_add(at(k), o.at(k), tmp.data());
        std::copy(tmp.begin(), tmp.end(), at(k));
        refresh(k);
    }
    return *this;
}

GridSeries& GridSeries::operator-=(const GridSeries& o) {
    std::vector<Num> tmp(dim_);
    for (std::size_t k = 0; k < nz_.size(); ++k) {
        if (!o.nz_[k]) continue;
        ring_->k_sub(at(k), o.at(k), tmp.data());
        std::copy(tmp.begin(), tmp.end(), at(k));
        refresh(k);
    }
    return *this;
}

void GridSeries::scale(const RingValue& c) {
    std::vector<Num> tmp(dim_);
    for (std::size_t k = 0; k < nz_.size(); ++k) {
        if (!nz_[k]) continue;
        ring_->k_mul(at(k), c.data(), tmp.data());
        std::copy(tmp.begin(), tmp.end(), at(k));
        refresh(k);
    }
}

GridSeries GridSeries::operator*(const GridSeries& o) const {
    GridSeries out(ring_, grid_);
    std::vector<std::size_t> sa = support(), sb = o.support();
    for (std::size_t a : sa) {
        Exp ea = grid_->exp_of(a);
        for (std::size_t b : sb) {
            long idx = grid_->index(ea + grid_->exp_of(b));
            if (idx < 0) continue;
            ring_->k_mul_add(out.at(static_cast<std::size_t>(idx)), at(a), o.at(b));
            out.nz_[static_cast<std::size_t>(idx)] = 1;
        }
    }
    for (std::size_t k = 0; k < out.nz_.size(); ++k)
        if (out.nz_[k]) out.refresh(k);
    return out;
}

GridSeries GridSeries::part_negative() const {
    GridSeries out(ring_, grid_);
    for (std::size_t k = 0; k < nz_.size(); ++k) {
        if (!nz_[k] || !grid_->exp_of(k).lex_negative()) continue;
        std::copy(at(k), at(k) + dim_, out.at(k));
        out.nz_[k] = 1;
    }
    return out;
}

GridSeries GridSeries::part_positive() const {
    GridSeries out(ring_, grid_);
    for (std::size_t k = 0; k < nz_.size(); ++k) {
        if (!nz_[k] || !grid_->exp_of(k).lex_positive()) continue;
        std::copy(at(k), at(k) + dim_, out.at(k));
        out.nz_[k] = 1;
    }
    return out;
}

RingValue GridSeries::part_constant() const { return value(Exp{0, 0}); }

bool GridSeries::all_nilpotent() const {
    for (std::size_t k = 0; k < nz_.size(); ++k)
        if (nz_[k] && value(k).is_unit()) return false;
    return true;
}

namespace kernel {

namespace {

GridSeries plus_one(GridSeries x) {
    GridSeries one = GridSeries::one(x.ring(), x.grid());
    x += one;
    return x;
}

// everything but the lex-positive part; must be nilpotent
GridSeries nil_part(const GridSeries& x) {
    GridSeries n = x;
    n -= x.part_positive();
    if (!n.all_nilpotent()) fail(ErrorCode::DomainViolation, "terms at or below the origin must have nilpotent coefficients");
    return n;
}

// z / (1 + p) for lex-positive p, ascending recurrence
GridSeries div_one_plus(const GridSeries& z, const GridSeries& p) {
    RingPtr r = p.ring();
    const Grid* g = p.grid();
    GridSeries y = z;
    std::vector<std::size_t> sp = p.support();
    if (sp.empty()) return y;
    for (std::size_t k = 0; k < g->cells(); ++k) {
        Exp e = g->exp_of(k);
        Num* out = y.at(k);
        bool touched = false;
        for (std::size_t a : sp) {
            long src = g->index(e - g->exp_of(a));
            if (src < 0 || !y.nonzero(static_cast<std::size_t>(src))) continue;
            r->k_mul_sub(out, p.at(a), y.at(static_cast<std::size_t>(src)));
            touched = true;
        }
        if (touched) y.refresh(k);
    }
    return y;
}

GridSeries inv_positive(const GridSeries& p) { return div_one_plus(GridSeries::one(p.ring(), p.grid()), p); }

RingValue inverse_of_integer(RingPtr r, std::int64_t k) {
    RingValue v = r->from_int(k);
    if (!v.is_unit()) fail(ErrorCode::CharacteristicObstruction, "division by " + std::to_string(k) + " is impossible in " + r->text());
    return v.inverse();
}

// sum_{k>=1} (-1)^{k+1} w^k / k for w whose powers vanish
GridSeries log_terminating(const GridSeries& w) {
    RingPtr r = w.ring();
    GridSeries sum(r, w.grid()), term = w;
    for (std::int64_t k = 1; !term.is_zero(); ++k) {
        if (k > static_cast<std::int64_t>(w.grid()->cells()) + 64) fail(ErrorCode::DomainViolation, "logarithm series does not terminate");
        GridSeries t = term;
        RingValue c = inverse_of_integer(r, k);
        if (k % 2 == 0) c = -c;
        t.scale(c);
        sum += t;
        term = term * w;
    }
    return sum;
}

// sum_{k>=0} a^k / k! for a whose powers vanish
GridSeries exp_terminating(const GridSeries& a) {
    RingPtr r = a.ring();
    GridSeries sum = GridSeries::one(r, a.grid()), term = a;
    for (std::int64_t k = 1; !term.is_zero(); ++k) {
        if (k > static_cast<std::int64_t>(a.grid()->cells()) + 64) fail(ErrorCode::DomainViolation, "exponential series does not terminate");
        term.scale(inverse_of_integer(r, k));
        sum += term;
        term = term * a;
    }
    return sum;
}

// weight B*i + j, positive on lex-positive cells of the grid
std::int64_t derivation_base(const Grid& g) {
    std::int64_t b = 1;
    for (std::size_t k = 0; k < g.cells(); ++k) b = std::max<std::int64_t>(b, std::abs(g.exp_of(k).j) + 1);
    return b;
}

}  // namespace

GridSeries inv_one_plus(const GridSeries& x) {
    GridSeries p = x.part_positive();
    GridSeries n = nil_part(x);
    // sum_k (-n)^k / (1 + p)^{k+1}, finite since n is nilpotent
    GridSeries sum = inv_positive(p), term = sum;
    while (!n.is_zero()) {
        term = div_one_plus(term * n, p);
        term.scale(-x.ring()->one());
        if (term.is_zero()) break;
        sum += term;
    }
    return sum;
}

GridSeries pow_one_plus(const GridSeries& x, std::int64_t e) {
    GridSeries base = e < 0 ? inv_one_plus(x) : plus_one(x);
    std::uint64_t k = e < 0 ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
    GridSeries acc = GridSeries::one(x.ring(), x.grid());
    while (k) {
        if (k & 1) acc = acc * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return acc;
}

GridSeries log_one_plus(const GridSeries& x) {
    RingPtr r = x.ring();
    const Grid* g = x.grid();
    GridSeries n = nil_part(x);
    if (!r->is_rational()) return log_terminating(x);
    GridSeries p = x.part_positive();
    GridSeries out(r, g);
    if (!p.is_zero()) {
        std::int64_t base = derivation_base(*g);
        GridSeries dp = p;
        for (std::size_t k : p.support()) {
            Exp e = g->exp_of(k);
            r->k_scale_int(dp.at(k), base * e.i + e.j);
        }
        out = div_one_plus(dp, p);
        for (std::size_t k : out.support()) {
            Exp e = g->exp_of(k);
            RingValue v = out.value(k) * r->from_rational(1, base * e.i + e.j);
            std::copy(v.data(), v.data() + r->dim(), out.at(k));
            out.refresh(k);
        }
    }
    // log(1 + w) with w = n / (1 + p); w^k = n^k / (1 + p)^k
    GridSeries term = div_one_plus(n, p);
    for (std::int64_t k = 1; !term.is_zero(); ++k) {
        GridSeries t = term;
        RingValue c = inverse_of_integer(r, k);
        if (k % 2 == 0) c = -c;
        t.scale(c);
        out += t;
        term = div_one_plus(term * n, p);
    }
    return out;
}

GridSeries exp_series(const GridSeries& a) {
    RingPtr r = a.ring();
    const Grid* g = a.grid();
    GridSeries n = nil_part(a);
    if (!r->is_rational()) return exp_terminating(a);
    GridSeries p = a.part_positive();
    GridSeries e = GridSeries::one(r, g);
    if (!p.is_zero()) {
        std::int64_t base = derivation_base(*g);
        GridSeries dp = p;
        std::vector<std::size_t> sp = p.support();
        for (std::size_t k : sp) {
            Exp x = g->exp_of(k);
            r->k_scale_int(dp.at(k), base * x.i + x.j);
        }
        std::vector<Num> acc(r->dim());
        for (std::size_t k = g->zero_index() + 1; k < g->cells(); ++k) {
            Exp x = g->exp_of(k);
            r->k_zero(acc.data());
            bool any = false;
            for (std::size_t b : sp) {
                long src = g->index(x - g->exp_of(b));
                if (src < 0 || !e.nonzero(static_cast<std::size_t>(src))) continue;
                r->k_mul_add(acc.data(), dp.at(b), e.at(static_cast<std::size_t>(src)));
                any = true;
            }
            if (!any) continue;
            RingValue v = RingValue(r, acc) * r->from_rational(1, base * x.i + x.j);
            std::copy(v.data(), v.data() + r->dim(), e.at(k));
            e.refresh(k);
        }
    }
    if (!n.is_zero()) e = e * exp_terminating(n);
    return e;
}

GridSeries expand_prepared(const PreparedUnit& u, const Grid* g) {
    GridSeries acc = GridSeries::one(u.ring, g);
    for (const auto& [x, e] : u.xs) acc = acc * pow_one_plus(GridSeries::from(x, g), e);
    return acc;
}

void split_unit(const GridSeries& x, GridSeries& minus, RingValue& u0, GridSeries& plus) {
    RingPtr r = x.ring();
    const Grid* g = x.grid();
    GridSeries one = GridSeries::one(r, g);
    GridSeries p0 = x.part_positive();
    plus = plus_one(p0);
    GridSeries rest = div_one_plus(plus_one(x), p0);
    minus = one;
    u0 = r->one();
    for (int round = 0;; ++round) {
        if (round > 64) fail(ErrorCode::DomainViolation, "unit splitting does not converge");
        GridSeries y = rest;
        y -= one;
        if (y.is_zero()) break;
        if (!y.all_nilpotent()) fail(ErrorCode::DomainViolation, "terms at or below the origin must have nilpotent coefficients");
        GridSeries n = y.part_negative(), p = y.part_positive();
        RingValue c = y.part_constant();
        minus = minus * plus_one(n);
        plus = plus * plus_one(p);
        RingValue cu = r->one() + c;
        u0 *= cu;
        rest = div_one_plus(rest * inv_one_plus(n), p);
        rest.scale(cu.inverse());
    }
}

std::vector<ElementaryFactor> peel_plus(const GridSeries& plus) {
    RingPtr r = plus.ring();
    const Grid* g = plus.grid();
    GridSeries n = plus;
    std::vector<ElementaryFactor> out;
    std::size_t z = g->zero_index();
    for (std::size_t k = z + 1; k < g->cells(); ++k) {
        if (!n.nonzero(k)) continue;
        Exp e = g->exp_of(k);
        RingValue c = -n.value(k);
        out.push_back({e, c});
        // divide by (1 - c X^e), ascending
        for (std::size_t x = k; x < g->cells(); ++x) {
            long src = g->index(g->exp_of(x) - e);
            if (src < 0 || !n.nonzero(static_cast<std::size_t>(src))) continue;
            r->k_mul_add(n.at(x), c.data(), n.at(static_cast<std::size_t>(src)));
            n.refresh(x);
        }
    }
    return out;
}

std::vector<ElementaryFactor> peel_minus(const GridSeries& minus) {
    RingPtr r = minus.ring();
    const Grid* g = minus.grid();
    GridSeries n = minus;
    std::vector<ElementaryFactor> out;
    std::size_t z = g->zero_index();
    for (std::size_t k = z; k-- > 0;) {
        if (!n.nonzero(k)) continue;
        Exp e = g->exp_of(k);
        RingValue c = -n.value(k);
        out.push_back({e, c});
        // divide by (1 - c X^e), descending
        for (std::size_t x = k + 1; x-- > 0;) {
            long src = g->index(g->exp_of(x) - e);
            if (src < 0 || !n.nonzero(static_cast<std::size_t>(src))) continue;
            r->k_mul_add(n.at(x), c.data(), n.at(static_cast<std::size_t>(src)));
            n.refresh(x);
        }
    }
    return out;
}

std::vector<ElementaryFactor> peel_log(const GridSeries& log, bool positive) {
    RingPtr r = log.ring();
    const Grid* g = log.grid();
    GridSeries n = log;
    std::vector<ElementaryFactor> out;
    std::size_t z = g->zero_index();
    auto peel = [&](std::size_t k) {
        if (!n.nonzero(k)) return;
        Exp e = g->exp_of(k);
        RingValue c = -n.value(k);
        out.push_back({e, c});
        // log(1 - c X^e) = -sum c^m X^{me} / m
        RingValue cm = r->one();
        for (std::int64_t m = 1;; ++m) {
            cm *= c;
            Exp x{static_cast<int>(m * e.i), static_cast<int>(m * e.j)};
            if (cm.is_zero() || x.i > g->row_hi() || x.i < g->row_lo()) break;
            long idx = g->index(x);
            if (idx < 0) {
                if (e.i == 0) break;
                continue;
            }
            RingValue v = n.value(static_cast<std::size_t>(idx)) + cm * r->from_rational(1, m);
            std::copy(v.data(), v.data() + r->dim(), n.at(static_cast<std::size_t>(idx)));
            n.refresh(static_cast<std::size_t>(idx));
        }
    };
    if (positive)
        for (std::size_t k = z + 1; k < g->cells(); ++k) peel(k);
    else
        for (std::size_t k = z; k-- > 0;) peel(k);
    return out;
}

}  // namespace kernel

}  // namespace ccs
