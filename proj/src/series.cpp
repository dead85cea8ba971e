#include "ccsym/series.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "ccsym/kernel.hpp"

namespace ccs {

namespace {

int clamp_inf(long long v) {
    if (v >= kInf) return kInf;
    if (v <= -kInf) return -kInf;
    return static_cast<int>(v);
}

// cap - v with infinite caps kept infinite
int cap_minus(int cap, int v) {
    if (cap >= kInf || cap <= -kInf) return cap;
    return clamp_inf(static_cast<long long>(cap) - v);
}

std::uint64_t key_of(Exp e) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.i)) << 32) | static_cast<std::uint32_t>(e.j);
}

}  // namespace

// ---------------------------------------------------------------- Window

Window Window::rows(int t_max, int cap) {
    Window w;
    w.t_max_ = t_max;
    w.low_cap_ = cap;
    w.high_cap_ = cap;
    return w;
}

Window Window::explicit_rows(int row0, std::vector<int> caps) {
    Window w;
    w.low_cap_ = -kInf;
    w.high_cap_ = -kInf;
    w.row0_ = row0;
    w.t_max_ = caps.empty() ? -kInf : row0 + static_cast<int>(caps.size()) - 1;
    w.caps_ = std::move(caps);
    return w;
}

int Window::cap(int row) const {
    if (row > t_max_) return -kInf;
    if (row < row0_) return low_cap_;
    std::size_t k = static_cast<std::size_t>(row - row0_);
    return k < caps_.size() ? caps_[k] : high_cap_;
}

void Window::set_cap(int row, int cap) {
    if (caps_.empty()) {
        row0_ = row;
        caps_.push_back(cap);
        return;
    }
    if (row < row0_) {
        caps_.insert(caps_.begin(), static_cast<std::size_t>(row0_ - row), low_cap_);
        row0_ = row;
    }
    std::size_t k = static_cast<std::size_t>(row - row0_);
    if (k >= caps_.size()) caps_.resize(k + 1, high_cap_);
    caps_[k] = cap;
}

Window Window::shifted(Exp d) const {
    Window w = *this;
    w.t_max_ = cap_minus(t_max_, -d.i);
    w.row0_ = row0_ + d.i;
    for (int& c : w.caps_) c = cap_minus(c, -d.j);
    w.low_cap_ = cap_minus(low_cap_, -d.j);
    w.high_cap_ = cap_minus(high_cap_, -d.j);
    return w;
}

Window Window::with_t_max(int t) const {
    Window w = *this;
    w.t_max_ = t;
    return w;
}

bool Window::subset_of(const Window& o, int from_row) const {
    int lo_row = std::min(row0_, o.row0_) - 1;
    if (from_row < lo_row) {
        // uniform stretch below every explicit row
        if (low_cap_ > -kInf && (o.low_cap_ < low_cap_ || o.t_max_ < std::min(t_max_, lo_row))) return false;
        from_row = lo_row;
    }
    int hi_row = std::max(row0_ + static_cast<int>(caps_.size()), o.row0_ + static_cast<int>(o.caps_.size())) + 1;
    for (int r = from_row; r <= std::min(t_max_, hi_row); ++r) {
        int c = cap(r);
        if (c <= -kInf) continue;
        if (o.cap(r) < c) return false;
    }
    if (t_max_ > hi_row && high_cap_ > -kInf) {
        if (o.t_max_ < t_max_ || o.high_cap_ < high_cap_) return false;
    }
    return true;
}

std::string Window::to_string() const {
    auto num = [](int v) {
        if (v >= kInf) return std::string("inf");
        if (v <= -kInf) return std::string("-inf");
        return std::to_string(v);
    };
    std::string s = "t<=" + num(t_max_) + "; u caps";
    if (!caps_.empty()) {
        s += " {";
        for (std::size_t k = 0; k < caps_.size(); ++k) {
            if (row0_ + static_cast<int>(k) > t_max_) break;
            if (k) s += ", ";
            s += std::to_string(row0_ + static_cast<int>(k)) + ": " + num(caps_[k]);
        }
        s += "}";
    }
    s += " below " + num(low_cap_) + " above " + num(high_cap_);
    return s;
}

bool operator==(const Window& a, const Window& b) {
    return a.subset_of(b, -kInf + 1) && b.subset_of(a, -kInf + 1);
}

// ---------------------------------------------------------------- Profile

int Profile::min_u(int row) const {
    if (row < row_lo_) return kInf;
    std::size_t k = static_cast<std::size_t>(row - row_lo_);
    if (k < lo_.size()) return lo_[k];
    return open_above_ ? -kInf : kInf;
}

Profile Profile::shifted(Exp d) const {
    std::vector<int> lo = lo_;
    for (int& v : lo) v = cap_minus(v, -d.j);
    return Profile(row_lo_ + d.i, lo, open_above_);
}

Profile sum_profile(const Profile& a, const Profile& b, int row_cap) {
    int lo = a.row_lo() + b.row_lo();
    int full = a.row_hi() + b.row_hi();
    int hi = std::min(full, row_cap);
    bool open = a.open_above() || b.open_above() || hi < full;
    std::vector<int> rows;
    for (int r = lo; r <= hi; ++r) {
        int best = kInf;
        for (int ra = a.row_lo(); ra <= r - b.row_lo(); ++ra) {
            int x = a.min_u(ra), y = b.min_u(r - ra);
            if (x >= kInf || y >= kInf) continue;
            if (x <= -kInf || y <= -kInf) {
                best = -kInf;
                break;
            }
            best = std::min(best, x + y);
        }
        rows.push_back(best);
    }
    return Profile(lo, rows, open);
}

Profile profile_of(const MonoidProfile& mon) {
    std::vector<int> lo;
    for (int r = mon.row_lo(); r <= mon.row_hi(); ++r) lo.push_back(mon.min_u(r));
    return Profile(mon.row_lo(), lo, true);
}

// ---------------------------------------------------------------- BiSeries

BiSeries BiSeries::monomial(const RingValue& c, Exp e) {
    BiSeries s(c.ring());
    if (c.is_zero()) return s;
    s.exps_.push_back(e);
    s.coefs_ = c.coords();
    return s;
}

BiSeries BiSeries::from_terms(RingPtr r, std::vector<std::pair<Exp, RingValue>> terms) {
    std::map<Exp, RingValue> acc;
    for (auto& [e, v] : terms) {
        check_same_ring(r, v.ring());
        auto it = acc.find(e);
        if (it == acc.end())
            acc.emplace(e, v);
        else
            it->second += v;
    }
    BiSeries s(r);
    for (auto& [e, v] : acc) {
        if (v.is_zero()) continue;
        s.exps_.push_back(e);
        s.coefs_.insert(s.coefs_.end(), v.coords().begin(), v.coords().end());
    }
    return s;
}

BiSeries BiSeries::from_raw(RingPtr r, std::vector<Exp> exps, std::vector<Num> coefs) {
    BiSeries s(r);
    s.exps_ = std::move(exps);
    s.coefs_ = std::move(coefs);
    return s;
}

RingValue BiSeries::coeff_at(std::size_t k) const {
    return RingValue(ring_, std::vector<Num>(coef(k), coef(k) + ring_->dim()));
}

std::optional<std::size_t> BiSeries::find(Exp e) const {
    auto it = std::lower_bound(exps_.begin(), exps_.end(), e);
    if (it == exps_.end() || *it != e) return std::nullopt;
    return static_cast<std::size_t>(it - exps_.begin());
}

RingValue BiSeries::coeff(Exp e) const {
    if (window_ && !window_->contains(e))
        fail(ErrorCode::InsufficientWindow, "coefficient of u^" + std::to_string(e.j) + "*t^" + std::to_string(e.i) + " is outside the known window");
    auto k = find(e);
    return k ? coeff_at(*k) : ring_->zero();
}

Profile BiSeries::profile() const {
    if (profile_) return *profile_;
    if (exps_.empty()) return window_ ? Profile(-kInf + 1, {}, true) : Profile::empty();
    int lo = exps_.front().i, hi = exps_.back().i;
    std::vector<int> mins(static_cast<std::size_t>(hi - lo + 1), kInf);
    for (Exp e : exps_) {
        int& m = mins[static_cast<std::size_t>(e.i - lo)];
        m = std::min(m, e.j);
    }
    if (window_) {
        // without a recorded bound only the stored rows are described
        for (int& m : mins) m = -kInf;
        return Profile(lo, mins, true);
    }
    return Profile(lo, mins, false);
}

BiSeries BiSeries::windowed(const Window& w, const Profile& p) const {
    BiSeries s = truncated(w);
    s.window_ = w;
    s.profile_ = p;
    return s;
}

BiSeries BiSeries::truncated(const Window& w) const {
    BiSeries s(ring_);
    std::size_t d = ring_->dim();
    for (std::size_t k = 0; k < exps_.size(); ++k) {
        if (!w.contains(exps_[k])) continue;
        s.exps_.push_back(exps_[k]);
        s.coefs_.insert(s.coefs_.end(), coef(k), coef(k) + d);
    }
    s.window_ = window_;
    s.profile_ = profile_;
    return s;
}

bool BiSeries::depends_on_u() const {
    return std::any_of(exps_.begin(), exps_.end(), [](Exp e) { return e.j != 0; });
}

bool BiSeries::agrees_within(const BiSeries& o, const Window& w) const {
    check_same_ring(ring_, o.ring_);
    int from = std::min(profile().row_lo(), o.profile().row_lo());
    if (!w.subset_of(known(), from) || !w.subset_of(o.known(), from))
        fail(ErrorCode::InsufficientWindow, "comparison window exceeds the known region");
    BiSeries a = truncated(w), b = o.truncated(w);
    if (a.exps_ != b.exps_) return false;
    for (std::size_t k = 0; k < a.exps_.size(); ++k)
        if (!ring_->k_equal(a.coef(k), b.coef(k))) return false;
    return true;
}

bool BiSeries::operator==(const BiSeries& o) const {
    if (ring_ != o.ring_ || exps_ != o.exps_ || window_.has_value() != o.window_.has_value()) return false;
    if (window_ && !(*window_ == *o.window_)) return false;
    for (std::size_t k = 0; k < exps_.size(); ++k)
        if (!ring_->k_equal(coef(k), o.coef(k))) return false;
    return true;
}

std::string BiSeries::to_string() const { return to_string("t", "u"); }

std::string BiSeries::to_string(const std::string& tvar, const std::string& uvar) const {
    std::string out;
    for (std::size_t k = 0; k < exps_.size(); ++k) {
        Exp e = exps_[k];
        std::string mono;
        auto var = [&](const std::string& v, int p) {
            if (p == 0) return;
            if (!mono.empty()) mono += "*";
            mono += v;
            if (p != 1) mono += "^" + std::to_string(p);
        };
        var(uvar, e.j);
        var(tvar, e.i);
        std::string cs = coeff_at(k).to_string();
        std::string term;
        if (mono.empty())
            term = cs;
        else if (cs == "1")
            term = mono;
        else if (cs == "-1")
            term = "-" + mono;
        else {
            bool compound = cs.find_first_of("+-", 1) != std::string::npos;
            term = (compound ? "(" + cs + ")" : cs) + "*" + mono;
        }
        if (!out.empty() && term[0] != '-') out += "+";
        out += term;
    }
    return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------- arithmetic

namespace {

Window intersect(const Window& a, const Window& b) {
    Window w = Window::rows(std::min(a.t_max(), b.t_max()), std::min(a.high_cap(), b.high_cap()));
    w.set_low_cap(std::min(a.low_cap(), b.low_cap()));
    int lo = std::min(a.first_explicit_row(), b.first_explicit_row());
    int hi = std::max(a.first_explicit_row() + static_cast<int>(a.explicit_caps().size()),
                      b.first_explicit_row() + static_cast<int>(b.explicit_caps().size()));
    if (!a.explicit_caps().empty() || !b.explicit_caps().empty())
        for (int r = lo; r <= hi; ++r) w.set_cap(r, std::min(a.cap(r), b.cap(r)));
    return w;
}

Profile union_profile(const Profile& a, const Profile& b) {
    int lo = std::min(a.row_lo(), b.row_lo());
    int hi = std::max(a.row_hi(), b.row_hi());
    std::vector<int> rows;
    for (int r = lo; r <= hi; ++r) rows.push_back(std::min(a.min_u(r), b.min_u(r)));
    return Profile(lo, rows, a.open_above() || b.open_above());
}

BiSeries combine(const BiSeries& a, const BiSeries& b, bool subtract) {
    check_same_ring(a.ring(), b.ring());
    RingPtr r = a.ring();
    std::size_t d = r->dim();
    std::vector<Exp> exps;
    std::vector<Num> coefs;
    std::vector<Num> tmp(d);
    std::size_t i = 0, j = 0;
    auto push = [&](Exp e, const Num* c) {
        if (r->k_is_zero(c)) return;
        exps.push_back(e);
        coefs.insert(coefs.end(), c, c + d);
    };
    while (i < a.size() || j < b.size()) {
        if (j >= b.size() || (i < a.size() && a.exp(i) < b.exp(j))) {
            push(a.exp(i), a.coef(i));
            ++i;
        } else if (i >= a.size() || b.exp(j) < a.exp(i)) {
            if (subtract) {
                r->k_neg(b.coef(j), tmp.data());
                push(b.exp(j), tmp.data());
            } else {
                push(b.exp(j), b.coef(j));
            }
            ++j;
        } else {
            if (subtract)
                r->k_sub(a.coef(i), b.coef(j), tmp.data());
            else
                r->k_add(a.coef(i), b.coef(j), tmp.data());
            push(a.exp(i), tmp.data());
            ++i;
            ++j;
        }
    }
    BiSeries s = BiSeries::from_raw(r, std::move(exps), std::move(coefs));
    if (a.is_exact() && b.is_exact()) return s;
    return s.windowed(intersect(a.known(), b.known()), union_profile(a.profile(), b.profile()));
}

// product of the stored terms, keeping only exponents inside `keep` when given
BiSeries raw_product(const BiSeries& a, const BiSeries& b, const Window* keep) {
    RingPtr r = a.ring();
    std::size_t d = r->dim();
    std::unordered_map<std::uint64_t, std::size_t> slot;
    std::vector<Exp> exps;
    std::vector<Num> acc;
    for (std::size_t x = 0; x < a.size(); ++x) {
        for (std::size_t y = 0; y < b.size(); ++y) {
            Exp e = a.exp(x) + b.exp(y);
            if (keep && !keep->contains(e)) continue;
            auto [it, fresh] = slot.emplace(key_of(e), exps.size());
            if (fresh) {
                exps.push_back(e);
                acc.resize(acc.size() + d, r->s_from_int(0));
            }
            r->k_mul_add(acc.data() + it->second * d, a.coef(x), b.coef(y));
        }
    }
    std::vector<std::size_t> order(exps.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) { return exps[p] < exps[q]; });
    std::vector<Exp> oe;
    std::vector<Num> oc;
    for (std::size_t k : order) {
        const Num* c = acc.data() + k * d;
        if (r->k_is_zero(c)) continue;
        oe.push_back(exps[k]);
        oc.insert(oc.end(), c, c + d);
    }
    return BiSeries::from_raw(r, std::move(oe), std::move(oc));
}

void check_demand(const BiSeries& a, const BiSeries& b, const Window& w) {
    if (a.is_exact() && b.is_exact()) return;
    Profile pa = a.profile(), pb = b.profile();
    Window ka = a.known(), kb = b.known();
    if (w.unbounded() && w.high_cap() > -kInf) fail(ErrorCode::UnboundedDemand, "product window has no t bound");
    for (int i = pa.row_lo() + pb.row_lo(); i <= w.t_max(); ++i) {
        int cw = w.cap(i);
        if (cw <= -kInf) continue;
        for (int ra = pa.row_lo(); ra <= i - pb.row_lo(); ++ra) {
            int rb = i - ra;
            int la = pa.min_u(ra), lb = pb.min_u(rb);
            if (la >= kInf || lb >= kInf) continue;
            int need_a = (cw >= kInf || lb <= -kInf) ? kInf : cw - lb;
            int need_b = (cw >= kInf || la <= -kInf) ? kInf : cw - la;
            if (!a.is_exact() && (la <= -kInf || la <= need_a) && (ra > ka.t_max() || ka.cap(ra) < need_a))
                fail(ErrorCode::InsufficientWindow, "first factor is not known far enough in row " + std::to_string(ra));
            if (!b.is_exact() && (lb <= -kInf || lb <= need_b) && (rb > kb.t_max() || kb.cap(rb) < need_b))
                fail(ErrorCode::InsufficientWindow, "second factor is not known far enough in row " + std::to_string(rb));
        }
    }
}

}  // namespace

BiSeries operator+(const BiSeries& a, const BiSeries& b) { return combine(a, b, false); }
BiSeries operator-(const BiSeries& a, const BiSeries& b) { return combine(a, b, true); }
BiSeries add(const BiSeries& a, const BiSeries& b) { return combine(a, b, false); }

BiSeries operator-(const BiSeries& a) { return scale(a, -a.ring()->one()); }

BiSeries scale(const BiSeries& a, const RingValue& c) {
    check_same_ring(a.ring(), c.ring());
    RingPtr r = a.ring();
    std::size_t d = r->dim();
    std::vector<Exp> exps;
    std::vector<Num> coefs;
    std::vector<Num> tmp(d);
    for (std::size_t k = 0; k < a.size(); ++k) {
        r->k_mul(a.coef(k), c.data(), tmp.data());
        if (r->k_is_zero(tmp.data())) continue;
        exps.push_back(a.exp(k));
        coefs.insert(coefs.end(), tmp.begin(), tmp.end());
    }
    BiSeries s = BiSeries::from_raw(r, std::move(exps), std::move(coefs));
    return a.is_exact() ? s : s.windowed(*a.window(), a.profile());
}

BiSeries shift(const BiSeries& a, Exp d) {
    std::vector<Exp> exps = a.exps();
    for (Exp& e : exps) e = e + d;
    BiSeries s = BiSeries::from_raw(a.ring(), std::move(exps), a.coefs());
    return a.is_exact() ? s : s.windowed(a.window()->shifted(d), a.profile().shifted(d));
}

BiSeries mul(const BiSeries& a, const BiSeries& b, const std::optional<Window>& w) {
    check_same_ring(a.ring(), b.ring());
    if (!w) {
        if (!a.is_exact() || !b.is_exact())
            fail(ErrorCode::InsufficientWindow, "product of truncated series needs a target window");
        return raw_product(a, b, nullptr);
    }
    check_demand(a, b, *w);
    BiSeries p = raw_product(a, b, &*w);
    return p.windowed(*w, sum_profile(a.profile(), b.profile(), w->t_max()));
}

// ---------------------------------------------------------------- unit data

UnitLead unit_lead(const BiSeries& f) {
    for (std::size_t k = 0; k < f.size(); ++k) {
        RingValue c = f.coeff_at(k);
        if (!c.is_unit()) continue;
        Exp e = f.exp(k);
        if (!f.is_exact()) {
            Profile p = f.profile();
            Window kw = f.known();
            for (int r = p.row_lo(); r < e.i; ++r)
                if (p.min_u(r) < kInf && kw.cap(r) < kInf)
                    fail(ErrorCode::InsufficientWindow, "rows below the leading term are not fully known");
        }
        return {c, e};
    }
    if (!f.is_exact() && f.size() > 0) fail(ErrorCode::InsufficientWindow, "no unit coefficient inside the known window");
    fail(ErrorCode::NotAUnit, "series " + f.to_string() + " is not a unit");
}

namespace {

void require_exact(const BiSeries& f, const char* what) {
    if (!f.is_exact()) fail(ErrorCode::InsufficientWindow, std::string(what) + " needs an exactly known argument");
}

// f / (c u^nu.j t^nu.i) - 1
BiSeries normalized_tail(const BiSeries& f, const UnitLead& lead) {
    BiSeries n = shift(scale(f, lead.c.inverse()), -lead.nu);
    return n - BiSeries::constant(f.ring()->one());
}

bool all_nilpotent(const std::vector<Atom>& atoms) {
    return std::all_of(atoms.begin(), atoms.end(), [](const Atom& a) { return a.weight > 0; });
}

int budget_of(RingPtr r) { return r->nilradical_exponent() - 1; }

// window covering the whole (finite) monoid of nilpotent atoms
Window finite_monoid_window(const std::vector<Atom>& atoms, int budget) {
    int hi = 0;
    for (const Atom& a : atoms) hi = std::max(hi, a.e.i);
    return Window::rows(hi * budget, kInf);
}

// sum_k coef_k x^k of an exact nilpotent-coefficient polynomial; coef(k) may throw
template <class Coef>
BiSeries terminating_sum(const BiSeries& x, Coef coef, bool with_one) {
    RingPtr r = x.ring();
    BiSeries sum(r), term = x;
    if (with_one) sum = BiSeries::constant(r->one());
    for (std::int64_t k = 1; !term.is_zero(); ++k) {
        sum = sum + scale(term, coef(k));
        term = mul(term, x);
    }
    return sum;
}

RingValue inverse_of_integer(RingPtr r, std::int64_t k) {
    RingValue v = r->from_int(k);
    if (!v.is_unit()) fail(ErrorCode::CharacteristicObstruction, "division by " + std::to_string(k) + " is impossible in " + r->text());
    return v.inverse();
}

struct GridBox {
    MonoidProfile mon;
    Window target;  // values on the grid are exact here
    Window keep;
    Grid grid;
};

GridBox grid_for(const std::vector<Atom>& atoms, int budget, Window target) {
    // the kernels start from 1
    if (int t = target.t_max(); t < 0) {
        target = target.with_t_max(0);
        for (int r = t + 1; r <= 0; ++r) target.set_cap(r, -kInf);
    }
    if (target.cap(0) < 0) target.set_cap(0, 0);
    GridBox b;
    b.target = target;
    b.mon = make_monoid(atoms, budget, target);
    b.keep = keep_window(target, b.mon, b.mon.row_lo());
    b.grid = Grid(b.keep, b.mon);
    return b;
}

}  // namespace

BiSeries invert(const BiSeries& f, const Window& w) {
    require_exact(f, "invert");
    UnitLead lead = unit_lead(f);
    RingPtr r = f.ring();
    BiSeries x = normalized_tail(f, lead);
    std::vector<Atom> atoms = atoms_of(x);
    RingValue ci = lead.c.inverse();
    if (all_nilpotent(atoms)) {
        BiSeries y = terminating_sum(x, [&](std::int64_t k) { return k % 2 ? -r->one() : r->one(); }, true);
        return shift(scale(y, ci), -lead.nu);
    }
    GridBox box = grid_for(atoms, budget_of(r), w.shifted(lead.nu));
    GridSeries y = kernel::inv_one_plus(GridSeries::from(x, &box.grid));
    BiSeries s = shift(scale(y.to_series(), ci), -lead.nu);
    return s.windowed(w, profile_of(box.mon).shifted(-lead.nu));
}

BiSeries log_window(const BiSeries& f, const Window& w) {
    require_exact(f, "log");
    UnitLead lead = unit_lead(f);
    if (!lead.nu.is_zero()) fail(ErrorCode::DomainViolation, "logarithm needs a series without monomial part");
    RingPtr r = f.ring();
    BiSeries x = f - BiSeries::constant(r->one());
    std::vector<Atom> atoms = atoms_of(x);
    if (all_nilpotent(atoms)) {
        return terminating_sum(x, [&](std::int64_t k) { return k % 2 ? inverse_of_integer(r, k) : -inverse_of_integer(r, k); }, false);
    }
    GridBox box = grid_for(atoms, budget_of(r), w);
    GridSeries l = kernel::log_one_plus(GridSeries::from(x, &box.grid));
    return l.to_series().windowed(w, profile_of(box.mon));
}

BiSeries exp_window(const BiSeries& a, const Window& w) {
    require_exact(a, "exp");
    RingPtr r = a.ring();
    for (std::size_t k = 0; k < a.size(); ++k)
        if (!a.exp(k).lex_positive() && a.coeff_at(k).is_unit())
            fail(ErrorCode::DomainViolation, "exponential needs nilpotent coefficients at and below the origin");
    std::vector<Atom> atoms = atoms_of(a);
    if (all_nilpotent(atoms)) {
        RingValue fact = r->one();
        return terminating_sum(a, [&](std::int64_t k) {
            fact *= inverse_of_integer(r, k);
            return fact;
        }, true);
    }
    GridBox box = grid_for(atoms, budget_of(r), w);
    GridSeries e = kernel::exp_series(GridSeries::from(a, &box.grid));
    return e.to_series().windowed(w, profile_of(box.mon));
}

BiSeries partial_derivative(const BiSeries& f, char var) {
    if (var != 'u' && var != 't') fail(ErrorCode::Usage, "derivative variable must be u or t");
    RingPtr r = f.ring();
    std::size_t d = r->dim();
    Exp step = var == 'u' ? Exp{0, -1} : Exp{-1, 0};
    std::vector<Exp> exps;
    std::vector<Num> coefs;
    for (std::size_t k = 0; k < f.size(); ++k) {
        Exp e = f.exp(k);
        int m = var == 'u' ? e.j : e.i;
        std::vector<Num> c(f.coef(k), f.coef(k) + d);
        r->k_scale_int(c.data(), m);
        if (r->k_is_zero(c.data())) continue;
        exps.push_back(e + step);
        coefs.insert(coefs.end(), c.begin(), c.end());
    }
    BiSeries s = BiSeries::from_raw(r, std::move(exps), std::move(coefs));
    return f.is_exact() ? s : s.windowed(f.window()->shifted(step), f.profile().shifted(step));
}

RingValue residue2(const BiSeries& f) { return f.coeff({-1, -1}); }

namespace {

std::pair<UnitLead, UnitLead> check_parameters(const BiSeries& t_new, const BiSeries& u_new) {
    if (!t_new.is_exact() || !u_new.is_exact())
        fail(ErrorCode::InsufficientWindow, "substitution needs exactly known parameters");
    UnitLead lt = unit_lead(t_new), lu = unit_lead(u_new);
    if (lt.nu.i != 1) fail(ErrorCode::InvalidParameterChange, "new t must have t-valuation 1");
    if (lu.nu != Exp{0, 1}) fail(ErrorCode::InvalidParameterChange, "new u must have valuations (0,1)");
    for (Exp e : u_new.exps())
        if (e.i < 0) fail(ErrorCode::InvalidParameterChange, "new u must not contain negative powers of t");
    return {lt, lu};
}

}  // namespace

BiSeries substitute(const BiSeries& f, const BiSeries& t_new, const BiSeries& u_new, const Window& w) {
    RingPtr r = f.ring();
    check_same_ring(r, t_new.ring());
    check_same_ring(r, u_new.ring());
    auto [lt, lu] = check_parameters(t_new, u_new);
    int k = lt.nu.j;
    BiSeries yt = normalized_tail(t_new, lt), yu = normalized_tail(u_new, lu);
    std::vector<Atom> atoms = atoms_of(yt);
    for (const Atom& a : atoms_of(yu)) atoms.push_back(a);
    int budget = budget_of(r);
    if (w.unbounded()) fail(ErrorCode::UnboundedDemand, "substitution window has no t bound");

    Profile pf = f.profile();
    auto image = [&](Exp e) { return Exp{e.i, e.j + k * e.i}; };
    MonoidProfile first(atoms, budget, w.t_max());
    int row_min = std::min(first.row_lo(), pf.row_lo());
    MonoidProfile mon(atoms, budget, w.t_max() - row_min);
    Window keep = keep_window(w, mon, row_min);
    if (!f.is_exact()) {
        Window kf = f.known();
        for (int i = pf.row_lo(); i <= keep.t_max(); ++i) {
            int c = keep.cap(i);
            if (c <= -kInf || pf.min_u(i) >= kInf) continue;
            if (i > kf.t_max() || kf.cap(i) < cap_minus(c, k * i))
                fail(ErrorCode::InsufficientWindow, "series is not known far enough for the substitution in row " + std::to_string(i));
        }
    }
    // terms whose image can reach the window, and the region their cofactors must cover
    std::vector<std::size_t> live;
    int dt = -kInf;
    std::map<int, int> dcaps;
    for (std::size_t n = 0; n < f.size(); ++n) {
        Exp L = image(f.exp(n));
        if (!keep.contains(L)) continue;
        live.push_back(n);
        dt = std::max(dt, w.t_max() - L.i);
    }
    BiSeries out(r);
    if (!live.empty()) {
        std::vector<int> caps;
        int row0 = row_min;
        for (int row = row0; row <= dt; ++row) {
            int c = -kInf;
            for (std::size_t n : live) {
                Exp L = image(f.exp(n));
                c = std::max(c, cap_minus(w.cap(row + L.i), L.j));
            }
            caps.push_back(c);
        }
        Window need = Window::explicit_rows(row0, caps);
        GridBox box = grid_for(atoms, budget, need);
        const Grid* g = &box.grid;
        GridSeries gt = GridSeries::from(yt, g), gu = GridSeries::from(yu, g);
        std::map<int, GridSeries> pt, pu;
        std::vector<std::pair<Exp, RingValue>> terms;
        for (std::size_t n : live) {
            Exp e = f.exp(n);
            auto it = pt.find(e.i);
            if (it == pt.end()) it = pt.emplace(e.i, kernel::pow_one_plus(gt, e.i)).first;
            auto ju = pu.find(e.j);
            if (ju == pu.end()) ju = pu.emplace(e.j, kernel::pow_one_plus(gu, e.j)).first;
            GridSeries y = it->second * ju->second;
            RingValue c = f.coeff_at(n) * lt.c.pow(e.i) * lu.c.pow(e.j);
            Exp L = image(e);
            for (std::size_t cell : y.support()) {
                Exp x = g->exp_of(cell) + L;
                if (!w.contains(x)) continue;
                terms.emplace_back(x, y.value(cell) * c);
            }
        }
        out = BiSeries::from_terms(r, std::move(terms));
    }
    std::vector<int> lo;
    for (int i = pf.row_lo(); i <= std::min(pf.row_hi(), w.t_max()); ++i) lo.push_back(cap_minus(pf.min_u(i), -k * i));
    Profile moved(pf.row_lo(), lo, pf.open_above() || pf.row_hi() > w.t_max());
    return out.windowed(w, sum_profile(moved, profile_of(mon), w.t_max()));
}

UnitFactorization decompose_unit(const BiSeries& f, const Window& w) {
    require_exact(f, "decompose_unit");
    UnitLead lead = unit_lead(f);
    RingPtr r = f.ring();
    BiSeries x = normalized_tail(f, lead);
    std::vector<Atom> atoms = atoms_of(x);
    int budget = budget_of(r);
    bool finite = all_nilpotent(atoms);
    GridBox box = grid_for(atoms, budget, finite ? finite_monoid_window(atoms, budget) : w.shifted(-lead.nu));
    GridSeries minus(r, &box.grid), plus(r, &box.grid);
    RingValue u0;
    kernel::split_unit(GridSeries::from(x, &box.grid), minus, u0, plus);
    UnitFactorization out;
    out.f0 = lead.c * u0;
    out.nu1 = lead.nu.i;
    out.nu2 = lead.nu.j;
    out.minus_factors = kernel::peel_minus(minus);
    out.plus_factors = kernel::peel_plus(plus);
    out.f_minus = minus.to_series();
    out.f_plus = plus.to_series();
    if (finite) {
        out.parts_window = Window::everything();
    } else {
        // nothing lives below the monoid's lowest row
        std::vector<int> caps;
        for (int r = box.mon.row_lo(); r <= box.target.t_max(); ++r) caps.push_back(box.target.cap(r));
        Window known = Window::explicit_rows(box.mon.row_lo(), caps);
        known.set_low_cap(kInf);
        Profile p = profile_of(box.mon);
        out.f_minus = out.f_minus.windowed(known, p);
        out.f_plus = out.f_plus.windowed(known, p);
        out.parts_window = known;
    }
    return out;
}

UnitFactorization unit_factors(const BiSeries& f, const Window& w) {
    require_exact(f, "unit_factors");
    UnitLead lead = unit_lead(f);
    RingPtr r = f.ring();
    BiSeries x = normalized_tail(f, lead);
    std::vector<Atom> atoms = atoms_of(x);
    if (!r->is_rational() || all_nilpotent(atoms)) {
        UnitFactorization d = decompose_unit(f, w);
        d.f_minus = BiSeries();
        d.f_plus = BiSeries();
        return d;
    }
    // over Q the factors come straight off the logarithm, which is much cheaper than splitting
    GridBox box = grid_for(atoms, budget_of(r), w.shifted(-lead.nu));
    GridSeries l = kernel::log_one_plus(GridSeries::from(x, &box.grid));
    RingValue l0 = l.part_constant();
    UnitFactorization out;
    out.f0 = lead.c * (l0.is_zero() ? r->one() : exp_window(BiSeries::constant(l0), Window::rows(0)).coeff({0, 0}));
    out.nu1 = lead.nu.i;
    out.nu2 = lead.nu.j;
    out.minus_factors = kernel::peel_log(l.part_negative(), false);
    out.plus_factors = kernel::peel_log(l.part_positive(), true);
    out.parts_window = Window::nothing();
    return out;
}

// ---------------------------------------------------------------- demand analysis

std::vector<Window> demand_window(const std::vector<Exp>& targets, const std::vector<FactorProfile>& factors) {
    auto fmin = [](const FactorProfile& f, int row) {
        if (row < f.row_lo) return kInf;
        if (f.min_u.empty()) return -kInf;
        std::size_t k = static_cast<std::size_t>(row - f.row_lo);
        return k < f.min_u.size() ? f.min_u[k] : f.min_u.back();
    };
    std::vector<Window> out;
    if (targets.empty()) {
        out.assign(factors.size(), Window::nothing());
        return out;
    }
    int tmax = targets.front().i;
    for (Exp e : targets) tmax = std::max(tmax, e.i);
    for (std::size_t k = 0; k < factors.size(); ++k) {
        // bound for the product of the other factors, rows [s_lo, s_hi]
        int s_lo = 0;
        for (std::size_t m = 0; m < factors.size(); ++m)
            if (m != k) s_lo += factors[m].row_lo;
        int s_hi = tmax - factors[k].row_lo;
        std::vector<int> cur{0};  // the empty product: only (0,0)
        int cur_lo = 0;
        for (std::size_t m = 0; m < factors.size(); ++m) {
            if (m == k) continue;
            int nlo = cur_lo + factors[m].row_lo;
            std::vector<int> next;
            for (int d = nlo; d <= std::max(s_hi, nlo); ++d) {
                int best = kInf;
                for (int a = cur_lo; a < cur_lo + static_cast<int>(cur.size()) && a <= d - factors[m].row_lo; ++a) {
                    int x = cur[static_cast<std::size_t>(a - cur_lo)], y = fmin(factors[m], d - a);
                    if (x >= kInf || y >= kInf) continue;
                    if (x <= -kInf || y <= -kInf) {
                        best = -kInf;
                        break;
                    }
                    best = std::min(best, x + y);
                }
                next.push_back(best);
            }
            cur = next;
            cur_lo = nlo;
        }
        std::vector<int> caps;
        for (int row = factors[k].row_lo; row <= tmax - s_lo; ++row) {
            int c = -kInf;
            for (Exp t : targets) {
                int d = t.i - row;
                if (d < cur_lo || d >= cur_lo + static_cast<int>(cur.size())) continue;
                int s = cur[static_cast<std::size_t>(d - cur_lo)];
                if (s >= kInf) continue;
                if (s <= -kInf) fail(ErrorCode::UnboundedDemand, "a factor has no lower bound on its u-exponents");
                c = std::max(c, t.j - s);
            }
            // nothing of this factor lives there anyway
            if (c < fmin(factors[k], row)) c = -kInf;
            caps.push_back(c);
        }
        out.push_back(Window::explicit_rows(factors[k].row_lo, caps));
    }
    return out;
}

// ---------------------------------------------------------------- monoid bounds

MonoidProfile::MonoidProfile(const std::vector<Atom>& atoms, int budget, int row_hi) {
    std::vector<Atom> nil, pos;
    bool row0_pos = false;
    int nmin = 0, nmax = 0;
    for (const Atom& a : atoms) {
        if (a.weight > 0) {
            if (a.weight > budget) continue;
            nil.push_back(a);
            nmin = std::min(nmin, a.e.i);
            nmax = std::max(nmax, a.e.i);
        } else {
            if (!a.e.lex_positive()) fail(ErrorCode::DomainViolation, "unit term at or below the origin");
            if (a.e.i == 0)
                row0_pos = true;
            else
                pos.push_back(a);
        }
    }
    int nlo = budget * nmin, nhi = budget * nmax;
    std::size_t span = static_cast<std::size_t>(nhi - nlo + 1);
    std::vector<std::vector<int>> dmin(static_cast<std::size_t>(budget + 1), std::vector<int>(span, kInf));
    std::vector<std::vector<int>> dmax(static_cast<std::size_t>(budget + 1), std::vector<int>(span, -kInf));
    dmin[0][static_cast<std::size_t>(-nlo)] = 0;
    dmax[0][static_cast<std::size_t>(-nlo)] = 0;
    for (int w = 0; w <= budget; ++w) {
        for (std::size_t ri = 0; ri < span; ++ri) {
            if (dmin[static_cast<std::size_t>(w)][ri] >= kInf) continue;
            for (const Atom& a : nil) {
                int w2 = w + a.weight;
                if (w2 > budget) continue;
                std::size_t r2 = static_cast<std::size_t>(static_cast<int>(ri) + a.e.i);
                int& mn = dmin[static_cast<std::size_t>(w2)][r2];
                int& mx = dmax[static_cast<std::size_t>(w2)][r2];
                mn = std::min(mn, dmin[static_cast<std::size_t>(w)][ri] + a.e.j);
                mx = std::max(mx, dmax[static_cast<std::size_t>(w)][ri] + a.e.j);
            }
        }
    }
    std::vector<int> nil_min(span, kInf), nil_max(span, -kInf);
    for (int w = 0; w <= budget; ++w)
        for (std::size_t ri = 0; ri < span; ++ri) {
            nil_min[ri] = std::min(nil_min[ri], dmin[static_cast<std::size_t>(w)][ri]);
            nil_max[ri] = std::max(nil_max[ri], dmax[static_cast<std::size_t>(w)][ri]);
        }
    lo_ = 0;
    for (std::size_t ri = 0; ri < span; ++ri)
        if (nil_min[ri] < kInf) {
            lo_ = nlo + static_cast<int>(ri);
            break;
        }
    row_hi = std::max(row_hi, lo_);
    for (int row = lo_; row <= row_hi; ++row) {
        int mn = kInf, mx = -kInf;
        if (row >= nlo && row <= nhi) {
            mn = nil_min[static_cast<std::size_t>(row - nlo)];
            mx = nil_max[static_cast<std::size_t>(row - nlo)];
        }
        for (const Atom& a : pos) {
            int prev = row - a.e.i;
            if (prev < lo_) continue;
            int pm = min_[static_cast<std::size_t>(prev - lo_)], px = max_[static_cast<std::size_t>(prev - lo_)];
            if (pm < kInf) mn = std::min(mn, pm + a.e.j);
            if (px >= kInf)
                mx = kInf;
            else if (px > -kInf)
                mx = std::max(mx, px + a.e.j);
        }
        if (row0_pos && mn < kInf) mx = kInf;
        min_.push_back(mn);
        max_.push_back(mx);
    }
}

int MonoidProfile::min_u(int row) const {
    if (row < lo_) return kInf;
    if (row > row_hi()) return -kInf;
    return min_[static_cast<std::size_t>(row - lo_)];
}

int MonoidProfile::max_u(int row) const {
    if (row < lo_) return -kInf;
    if (row > row_hi()) return kInf;
    return max_[static_cast<std::size_t>(row - lo_)];
}

Window keep_window(const Window& target, const MonoidProfile& mon, int row_min) {
    if (target.unbounded()) fail(ErrorCode::UnboundedDemand, "truncation target has no t bound");
    int top = target.t_max() - mon.row_lo();
    if (target.t_max() - row_min > mon.row_hi()) fail(ErrorCode::UnboundedDemand, "monoid bound does not reach the target rows");
    std::vector<int> caps;
    for (int r = row_min; r <= top; ++r) {
        int c = -kInf;
        for (int s = r + mon.row_lo(); s <= std::min(target.t_max(), r + mon.row_hi()); ++s) {
            int m = mon.min_u(s - r);
            int tc = target.cap(s);
            if (m >= kInf || tc <= -kInf) continue;
            c = std::max(c, cap_minus(tc, m));
        }
        caps.push_back(c);
    }
    return Window::explicit_rows(row_min, caps);
}

std::vector<Atom> atoms_of(const BiSeries& x) {
    std::vector<Atom> out;
    for (std::size_t k = 0; k < x.size(); ++k) {
        RingValue c = x.coeff_at(k);
        out.push_back({x.exp(k), c.is_unit() ? 0 : c.nil_order()});
    }
    return out;
}

// ---------------------------------------------------------------- UnitExpr

UnitExpr::UnitExpr(const BiSeries& f) : ring_(f.ring()) {
    require_exact(f, "a unit expression");
    unit_lead(f);
    if (!(f.size() == 1 && f.exp(0).is_zero() && f.coeff_at(0).is_one())) factors_.emplace_back(f, 1);
}

UnitExpr UnitExpr::operator*(const UnitExpr& o) const {
    if (!ring_) return o;
    if (!o.ring_) return *this;
    check_same_ring(ring_, o.ring_);
    UnitExpr out = *this;
    for (const auto& [p, e] : o.factors_) {
        auto it = std::find_if(out.factors_.begin(), out.factors_.end(), [&](const auto& f) { return f.first == p; });
        if (it == out.factors_.end())
            out.factors_.emplace_back(p, e);
        else
            it->second += e;
    }
    out.factors_.erase(std::remove_if(out.factors_.begin(), out.factors_.end(), [](const auto& f) { return f.second == 0; }),
                       out.factors_.end());
    return out;
}

UnitExpr substitute(const UnitExpr& f, const BiSeries& t_new, const BiSeries& u_new) {
    check_same_ring(f.ring(), t_new.ring());
    check_same_ring(f.ring(), u_new.ring());
    check_parameters(t_new, u_new);
    RingPtr r = f.ring();
    // P(t', u') = t'^I u'^J Q(t', u') with Q a polynomial
    std::vector<BiSeries> tp{BiSeries::constant(r->one())}, up{BiSeries::constant(r->one())};
    auto power = [](std::vector<BiSeries>& tab, const BiSeries& x, int k) -> const BiSeries& {
        while (static_cast<int>(tab.size()) <= k) tab.push_back(mul(tab.back(), x));
        return tab[static_cast<std::size_t>(k)];
    };
    UnitExpr out(r);
    for (const auto& [p, e] : f.factors()) {
        int I = 0, J = 0;
        for (Exp x : p.exps()) {
            I = std::min(I, x.i);
            J = std::min(J, x.j);
        }
        BiSeries q(r);
        for (std::size_t k = 0; k < p.size(); ++k) {
            Exp x = p.exp(k);
            q = q + scale(mul(power(tp, t_new, x.i - I), power(up, u_new, x.j - J)), p.coeff_at(k));
        }
        out = out * UnitExpr(q).pow(e) * UnitExpr(t_new).pow(static_cast<std::int64_t>(I) * e) *
              UnitExpr(u_new).pow(static_cast<std::int64_t>(J) * e);
    }
    return out;
}

UnitExpr UnitExpr::inverse() const { return pow(-1); }

UnitExpr UnitExpr::pow(std::int64_t e) const {
    UnitExpr out(ring_);
    if (e == 0) return out;
    out.factors_ = factors_;
    for (auto& f : out.factors_) f.second *= e;
    return out;
}

BiSeries UnitExpr::expand(const Window& w) const {
    PreparedUnit p = prepare_unit(*this);
    int budget = budget_of(ring_);
    bool finite = all_nilpotent(p.atoms);
    GridBox box = grid_for(p.atoms, budget, finite ? finite_monoid_window(p.atoms, budget) : w.shifted(-p.nu));
    BiSeries s = shift(scale(kernel::expand_prepared(p, &box.grid).to_series(), p.c), p.nu);
    if (finite) return s;
    return s.windowed(w, profile_of(box.mon).shifted(p.nu));
}

std::string UnitExpr::to_string() const {
    if (factors_.empty()) return "1";
    std::string out;
    for (const auto& [p, e] : factors_) {
        if (!out.empty()) out += "*";
        std::string ps = p.to_string();
        bool simple = p.size() == 1 && ps.find_first_of("+-*", 1) == std::string::npos;
        out += simple && e == 1 ? ps : "(" + ps + ")";
        if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
}

PreparedUnit prepare_unit(const UnitExpr& f) {
    PreparedUnit p;
    p.ring = f.ring();
    p.c = p.ring->one();
    std::map<Exp, int> weights;
    for (const auto& [poly, e] : f.factors()) {
        UnitLead lead = unit_lead(poly);
        p.c *= lead.c.pow(e);
        p.nu = p.nu + Exp{static_cast<int>(lead.nu.i * e), static_cast<int>(lead.nu.j * e)};
        BiSeries x = normalized_tail(poly, lead);
        for (const Atom& a : atoms_of(x)) {
            auto it = weights.find(a.e);
            if (it == weights.end())
                weights.emplace(a.e, a.weight);
            else
                it->second = std::min(it->second, a.weight);
        }
        if (!x.is_zero()) p.xs.emplace_back(x, e);
    }
    for (const auto& [e, w] : weights) p.atoms.push_back({e, w});
    return p;
}

}  // namespace ccs
