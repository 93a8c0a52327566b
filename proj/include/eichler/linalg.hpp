#pragma once

// Tiny exact linear algebra used for order lattices: rational 4x4
// solve/determinant and integer row HNF.  Nothing here is performance
// sensitive; all matrices are 4 columns wide.

#include <array>
#include <vector>

#include "eichler/arith.hpp"

namespace eichler {

using Vec4 = std::array<Rational, 4>;
using Mat4 = std::array<Vec4, 4>;

inline Rational det4(Mat4 m) {
    Rational det(1);
    for (int col = 0; col < 4; ++col) {
        int piv = -1;
        for (int r = col; r < 4; ++r)
            if (m[r][col] != Rational(0)) { piv = r; break; }
        if (piv < 0) return Rational(0);
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (int r = col + 1; r < 4; ++r) {
            if (m[r][col] == Rational(0)) continue;
            Rational f = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return det;
}

// Solve x * M = rhs for a row vector x (i.e. express rhs in the basis given
// by the rows of M).  Throws on singular M.
inline Vec4 solve_row(const Mat4& M, const Vec4& rhs) {
    // augmented transpose: columns become equations
    std::array<std::array<Rational, 5>, 4> a;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) a[i][j] = M[j][i];
        a[i][4] = rhs[i];
    }
    for (int col = 0; col < 4; ++col) {
        int piv = -1;
        for (int r = col; r < 4; ++r)
            if (a[r][col] != Rational(0)) { piv = r; break; }
        if (piv < 0) throw std::runtime_error("solve_row: singular matrix");
        std::swap(a[piv], a[col]);
        Rational d = a[col][col];
        for (int c = col; c <= 4; ++c) a[col][c] /= d;
        for (int r = 0; r < 4; ++r) {
            if (r == col || a[r][col] == Rational(0)) continue;
            Rational f = a[r][col];
            for (int c = col; c <= 4; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return {a[0][4], a[1][4], a[2][4], a[3][4]};
}

inline bool all_integral(const Vec4& v) {
    for (const auto& x : v)
        if (!x.is_integer()) return false;
    return true;
}

using IntRow4 = std::array<Int, 4>;

// Row Hermite normal form of the lattice spanned by the given rows:
// returns 4 rows, upper triangular with positive diagonal and entries above
// each pivot reduced into [0, pivot).  Throws if the rows do not span a
// rank-4 lattice.
inline std::array<IntRow4, 4> hnf_rows(std::vector<IntRow4> rows) {
    int r = 0;
    for (int col = 0; col < 4; ++col) {
        // gcd-eliminate everything in this column below row r
        while (true) {
            int piv = -1;
            for (int i = r; i < static_cast<int>(rows.size()); ++i)
                if (rows[i][col] != 0 && (piv < 0 || abs(rows[i][col]) < abs(rows[piv][col]))) piv = i;
            if (piv < 0) throw std::runtime_error("hnf_rows: rank deficient");
            std::swap(rows[r], rows[piv]);
            bool clean = true;
            for (int i = r + 1; i < static_cast<int>(rows.size()); ++i) {
                if (rows[i][col] == 0) continue;
                Int q = rows[i][col] / rows[r][col]; // truncated is fine, we iterate
                for (int c = 0; c < 4; ++c) rows[i][c] -= q * rows[r][c];
                if (rows[i][col] != 0) clean = false;
            }
            if (clean) break;
        }
        if (rows[r][col] < 0)
            for (int c = 0; c < 4; ++c) rows[r][c] = -rows[r][c];
        // reduce entries above the pivot
        for (int i = 0; i < r; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), rows[i][col].get_mpz_t(), rows[r][col].get_mpz_t());
            if (q != 0)
                for (int c = 0; c < 4; ++c) rows[i][c] -= q * rows[r][c];
        }
        ++r;
    }
    return {rows[0], rows[1], rows[2], rows[3]};
}

} // namespace eichler
