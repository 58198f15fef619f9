#pragma once

#include <optional>
#include <vector>

#include "nvol/rational.hpp"

namespace nvol {

/** Dense rational matrix, row major. */
using Mat = std::vector<VecQ>;

inline Mat to_mat(const std::vector<VecZ>& rows) {
    Mat out;
    out.reserve(rows.size());
    for (const VecZ& r : rows) out.push_back(to_vecq(r));
    return out;
}

/** Row echelon reduction in place; returns pivot column per pivot row. */
inline std::vector<int> row_echelon(Mat& a) {
    std::vector<int> pivots;
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        const Rat inv = a[r][c];
        for (std::size_t j = c; j < cols; ++j) a[r][j] /= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            const Rat f = a[i][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    return pivots;
}

inline int rank(Mat a) { return static_cast<int>(row_echelon(a).size()); }

inline int rank_of_rows(const std::vector<VecZ>& rows) { return rank(to_mat(rows)); }

inline Rat det(Mat a) {
    const std::size_t n = a.size();
    Rat d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return Rat(0);
        if (p != c) {
            std::swap(a[p], a[c]);
            d = -d;
        }
        d *= a[c][c];
        const Rat inv = a[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a[i][c] == 0) continue;
            const Rat f = a[i][c] / inv;
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    return d;
}

inline Int det_int(const std::vector<VecZ>& rows) {
    const Rat d = det(to_mat(rows));
    return num(d);  // determinant of an integer matrix is an integer
}

/**
 * Solves A x = b exactly. Returns one solution (free variables set to 0) or
 * nullopt when the system is inconsistent. A need not be square.
 */
inline std::optional<VecQ> solve_system(const Mat& a, const VecQ& b) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    Mat aug(rows, VecQ(cols + 1));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) aug[i][j] = a[i][j];
        aug[i][cols] = b[i];
    }
    const std::vector<int> pivots = row_echelon(aug);
    for (std::size_t i = pivots.size(); i < rows; ++i)
        if (aug[i][cols] != 0) return std::nullopt;
    // also inconsistent if a pivot landed in the augmented column
    if (!pivots.empty() && pivots.back() == static_cast<int>(cols)) return std::nullopt;
    VecQ x(cols, Rat(0));
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug[i][cols];
    return x;
}

/** Basis of the null space {x : A x = 0}. */
inline std::vector<VecQ> null_space(Mat a) {
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    const std::vector<int> pivots = row_echelon(a);
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<VecQ> basis;
    for (std::size_t freec = 0; freec < cols; ++freec) {
        if (is_pivot[freec]) continue;
        VecQ v(cols, Rat(0));
        v[freec] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
            v[pivots[i]] = -a[i][freec];
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace nvol
