#pragma once

#include <cstdint>
#include <vector>

#include "ccsym/series.hpp"

namespace ccs {

// Finite truncation region for the dense kernels: rows [row_lo, row_hi] and, in row r, the
// u-exponents [lo(r), cap(r)]. Cells are numbered in lex order.
class Grid {
public:
    Grid() = default;
    // cells of `keep` that the monoid can reach; UnboundedDemand if a row is infinite
    Grid(const Window& keep, const MonoidProfile& support);

    long index(Exp e) const {
        if (e.i < row_lo_ || e.i > row_hi_) return -1;
        std::size_t r = static_cast<std::size_t>(e.i - row_lo_);
        if (e.j < lo_[r] || e.j > cap_[r]) return -1;
        return static_cast<long>(off_[r] + static_cast<std::size_t>(e.j - lo_[r]));
    }
    bool contains(Exp e) const { return index(e) >= 0; }
    std::size_t cells() const { return total_; }
    int row_lo() const { return row_lo_; }
    int row_hi() const { return row_hi_; }
    int lo(int row) const { return lo_[static_cast<std::size_t>(row - row_lo_)]; }
    int cap(int row) const { return cap_[static_cast<std::size_t>(row - row_lo_)]; }
    Exp exp_of(std::size_t idx) const { return exps_[idx]; }
    std::size_t zero_index() const;
    const Window& window() const { return window_; }

private:
    int row_lo_ = 0, row_hi_ = -1;
    std::vector<int> lo_, cap_;
    std::vector<std::size_t> off_;
    std::vector<Exp> exps_;
    std::size_t total_ = 0;
    Window window_;
};

// Grid for power series in `atoms` (weight budget) whose coefficients are wanted on `target`.
// The grid is closed under taking factors, so products computed on it are exact there.
Grid make_grid(const std::vector<Atom>& atoms, int budget, const Window& target);
MonoidProfile make_monoid(const std::vector<Atom>& atoms, int budget, const Window& target);

// Dense series on a grid. Coefficients outside the grid are dropped by every operation.
class GridSeries {
public:
    GridSeries(RingPtr r, const Grid* g);
    static GridSeries one(RingPtr r, const Grid* g);
    static GridSeries from(const BiSeries& s, const Grid* g);
    BiSeries to_series() const;

    RingPtr ring() const { return ring_; }
    const Grid* grid() const { return grid_; }
    const Num* at(std::size_t idx) const { return c_.data() + idx * dim_; }
    Num* at(std::size_t idx) { return c_.data() + idx * dim_; }
    bool nonzero(std::size_t idx) const { return nz_[idx] != 0; }
    void refresh(std::size_t idx);
    void refresh_all();
    std::vector<std::size_t> support() const;
    bool is_zero() const;
    RingValue value(std::size_t idx) const;
    RingValue value(Exp e) const;
    void set(Exp e, const RingValue& v);

    GridSeries& operator+=(const GridSeries& o);
    GridSeries& operator-=(const GridSeries& o);
    void scale(const RingValue& c);
    GridSeries operator*(const GridSeries& o) const;

    // pieces by position relative to (0,0)
    GridSeries part_negative() const;
    GridSeries part_positive() const;
    RingValue part_constant() const;
    bool all_nilpotent() const;

private:
    RingPtr ring_;
    const Grid* grid_;
    std::size_t dim_;
    std::vector<Num> c_;
    std::vector<std::uint8_t> nz_;
};

namespace kernel {

// (1 + x)^{-1}, log(1 + x), exp(a), (1 + x)^e on the grid. The lex-negative and constant
// terms of x must be nilpotent. log/exp divide by integers (CharacteristicObstruction when
// that is impossible).
GridSeries inv_one_plus(const GridSeries& x);
GridSeries pow_one_plus(const GridSeries& x, std::int64_t e);
GridSeries log_one_plus(const GridSeries& x);
GridSeries exp_series(const GridSeries& a);
// prod (1 + x_k)^{e_k}
GridSeries expand_prepared(const PreparedUnit& u, const Grid* g);
// 1 + x = minus * u0 * plus with minus - 1 lex-negative (nilpotent) and plus - 1 lex-positive
void split_unit(const GridSeries& x, GridSeries& minus, RingValue& u0, GridSeries& plus);
// plus = prod (1 - c X^e) over lex-positive e in the grid, ascending
std::vector<ElementaryFactor> peel_plus(const GridSeries& plus);
// minus = prod (1 - c X^e) over lex-negative e in the grid, descending
std::vector<ElementaryFactor> peel_minus(const GridSeries& minus);

// the same factors read off log(plus) or log(minus) over a Q-algebra
std::vector<ElementaryFactor> peel_log(const GridSeries& log, bool positive);

}  // namespace kernel

}  // namespace ccs
