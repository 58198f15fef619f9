#pragma once

#include <cstddef>
#include <vector>

#include "nvol/errors.hpp"
#include "nvol/linalg.hpp"
#include "nvol/rational.hpp"

namespace nvol {

/** One linear constraint ⟨normal, x⟩ >= offset. */
struct LpConstraint {
    VecQ normal;
    Rat offset;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Rat value = 0;
    VecQ witness;  // optimal point, exact
    VecQ dual;     // one multiplier per constraint; filled only on the phase-2-only path
};

namespace detail {

/**
 * Dense tableau simplex with Bland's rule (anti-cycling), exact rational
 * arithmetic throughout. Solves max c·x s.t. A x <= b, x >= 0.
 *
 * Dual multipliers are reported only when every b_i >= 0 (no phase 1); that is
 * the only form the library needs duals for.
 */
class SimplexTableau {
public:
    SimplexTableau(const Mat& a, const VecQ& b, const VecQ& c)
        : m_(a.size()), n_(c.size()), cost_(c) {
        bool need_phase1 = false;
        for (const Rat& bi : b)
            if (bi < 0) need_phase1 = true;
        // columns: n structural, m slack, [artificials], rhs
        num_art_ = 0;
        std::vector<int> art_row;
        if (need_phase1) {
            for (std::size_t i = 0; i < m_; ++i)
                if (b[i] < 0) ++num_art_;
        }
        const std::size_t width = n_ + m_ + num_art_ + 1;
        rows_.assign(m_, VecQ(width, Rat(0)));
        basis_.assign(m_, -1);
        std::size_t art = 0;
        for (std::size_t i = 0; i < m_; ++i) {
            const bool flip = b[i] < 0;
            for (std::size_t j = 0; j < n_; ++j) rows_[i][j] = flip ? -a[i][j] : a[i][j];
            rows_[i][n_ + i] = flip ? Rat(-1) : Rat(1);
            rows_[i][width - 1] = flip ? -b[i] : b[i];
            if (flip) {
                rows_[i][n_ + m_ + art] = 1;
                basis_[i] = static_cast<int>(n_ + m_ + art);
                ++art;
            } else {
                basis_[i] = static_cast<int>(n_ + i);
            }
        }
        phase1_needed_ = need_phase1;
    }

    LpResult solve() {
        LpResult res;
        if (phase1_needed_) {
            // minimize sum of artificials == maximize -(sum)
            VecQ c1(n_ + m_ + num_art_, Rat(0));
            for (std::size_t j = n_ + m_; j < n_ + m_ + num_art_; ++j) c1[j] = -1;
            build_cost_row(c1);
            if (!iterate()) throw Error("phase-1 objective unbounded");  // cannot happen
            if (objective_value() != 0) {
                res.status = LpStatus::Infeasible;
                return res;
            }
            purge_artificials();
        }
        VecQ c2(n_ + m_ + num_art_, Rat(0));
        for (std::size_t j = 0; j < n_; ++j) c2[j] = cost_[j];
        build_cost_row(c2);
        if (!iterate()) {
            res.status = LpStatus::Unbounded;
            return res;
        }
        res.status = LpStatus::Optimal;
        res.value = objective_value();
        res.witness.assign(n_, Rat(0));
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (basis_[i] >= 0 && basis_[i] < static_cast<int>(n_))
                res.witness[basis_[i]] = rhs(i);
        if (!phase1_needed_) {
            res.dual.assign(m_, Rat(0));
            for (std::size_t i = 0; i < m_; ++i) res.dual[i] = zrow_[n_ + i];
        }
        return res;
    }

private:
    Rat rhs(std::size_t i) const { return rows_[i].back(); }
    Rat objective_value() const { return zrow_.back(); }

    // zrow_[j] = c_B B^-1 A_j - c_j ; optimal when all >= 0
    void build_cost_row(const VecQ& c) {
        const std::size_t width = rows_.empty() ? c.size() + 1 : rows_[0].size();
        zrow_.assign(width, Rat(0));
        for (std::size_t j = 0; j + 1 < width; ++j) zrow_[j] = -c[j];
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const int bi = basis_[i];
            if (bi >= 0 && c[bi] != 0) {
                const Rat cb = c[bi];
                for (std::size_t j = 0; j < width; ++j) zrow_[j] += cb * rows_[i][j];
            }
        }
    }

    void pivot(std::size_t r, std::size_t s) {
        const std::size_t width = rows_[r].size();
        const Rat piv = rows_[r][s];
        for (std::size_t j = 0; j < width; ++j) rows_[r][j] /= piv;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (i == r || rows_[i][s] == 0) continue;
            const Rat f = rows_[i][s];
            for (std::size_t j = 0; j < width; ++j) rows_[i][j] -= f * rows_[r][j];
        }
        if (zrow_[s] != 0) {
            const Rat f = zrow_[s];
            for (std::size_t j = 0; j < width; ++j) zrow_[j] -= f * rows_[r][j];
        }
        basis_[r] = static_cast<int>(s);
    }

    /** Bland: entering = lowest-index column with negative zrow entry. */
    bool iterate() {
        const std::size_t width = rows_.empty() ? zrow_.size() : rows_[0].size();
        for (;;) {
            std::size_t enter = width;
            for (std::size_t j = 0; j + 1 < width; ++j) {
                if (zrow_[j] < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == width) return true;  // optimal
            std::size_t leave = rows_.size();
            Rat best_ratio = 0;
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                if (rows_[i][enter] <= 0) continue;
                const Rat ratio = rhs(i) / rows_[i][enter];
                if (leave == rows_.size() || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == rows_.size()) return false;  // unbounded
            pivot(leave, enter);
        }
    }

    /** After phase 1: pivot artificial variables out of the basis, drop dead rows. */
    void purge_artificials() {
        const std::size_t art_begin = n_ + m_;
        for (std::size_t i = 0; i < rows_.size();) {
            if (basis_[i] < static_cast<int>(art_begin)) {
                ++i;
                continue;
            }
            std::size_t col = art_begin;
            for (std::size_t j = 0; j < art_begin; ++j) {
                if (rows_[i][j] != 0) {
                    col = j;
                    break;
                }
            }
            if (col < art_begin) {
                zrow_.assign(rows_[i].size(), Rat(0));  // neutral cost row for this pivot
                pivot(i, col);
                ++i;
            } else {
                rows_.erase(rows_.begin() + static_cast<long>(i));
                basis_.erase(basis_.begin() + static_cast<long>(i));
            }
        }
        // artificial columns are dead from here on: truncate
        for (VecQ& row : rows_) {
            const Rat r = row.back();
            row.resize(art_begin + 1);
            row.back() = r;
        }
    }

    std::size_t m_, n_, num_art_ = 0;
    VecQ cost_;
    Mat rows_;
    VecQ zrow_;
    std::vector<int> basis_;
    bool phase1_needed_ = false;
};

}  // namespace detail

/** max c·x s.t. A x <= b, x >= 0, exact. */
inline LpResult simplex_standard(const Mat& a, const VecQ& b, const VecQ& c) {
    return detail::SimplexTableau(a, b, c).solve();
}

/**
 * max objective·x over {x : ⟨normal_i, x⟩ >= offset_i}, x free.
 * Free variables are split x = x+ - x-. Throws nothing; inspect status.
 */
inline LpResult lp_maximize(const VecQ& objective,
                            const std::vector<LpConstraint>& constraints) {
    const std::size_t n = objective.size();
    const std::size_t m = constraints.size();
    Mat a(m, VecQ(2 * n, Rat(0)));
    VecQ b(m), c(2 * n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a[i][j] = -constraints[i].normal[j];
            a[i][n + j] = constraints[i].normal[j];
        }
        b[i] = -constraints[i].offset;
    }
    for (std::size_t j = 0; j < n; ++j) {
        c[j] = objective[j];
        c[n + j] = -objective[j];
    }
    LpResult split = simplex_standard(a, b, c);
    LpResult res;
    res.status = split.status;
    if (split.status == LpStatus::Optimal) {
        res.value = split.value;
        res.witness.assign(n, Rat(0));
        for (std::size_t j = 0; j < n; ++j) res.witness[j] = split.witness[j] - split.witness[n + j];
    }
    return res;
}

/** Feasibility of a system of >= constraints. */
inline bool lp_feasible(const std::vector<LpConstraint>& constraints, std::size_t dim) {
    return lp_maximize(VecQ(dim, Rat(0)), constraints).status == LpStatus::Optimal;
}

}  // namespace nvol
