#pragma once

#include <utility>
#include <vector>

#include "confal/errors.hpp"
#include "confal/poly.hpp"
#include "confal/rational.hpp"

namespace confal::linalg {

using Row = std::vector<Rational>;
using Matrix = std::vector<Row>;

// Nullspace basis (as rows of length ncols) of the homogeneous system M x = 0,
// by exact Gauss-Jordan elimination over the rationals.
inline Matrix nullspace(Matrix M, size_t ncols)
{
    for (auto& row : M)
        row.resize(ncols, Rational(0));
    size_t r = 0;
    std::vector<size_t> pivot_cols;
    for (size_t c = 0; c < ncols && r < M.size(); ++c) {
        size_t p = r;
        while (p < M.size() && M[p][c].is_zero())
            ++p;
        if (p == M.size())
            continue;
        std::swap(M[r], M[p]);
        Rational inv = Rational(1) / M[r][c];
        for (size_t k = c; k < ncols; ++k)
            M[r][k] *= inv;
        for (size_t i = 0; i < M.size(); ++i) {
            if (i == r || M[i][c].is_zero())
                continue;
            Rational f = M[i][c];
            for (size_t k = c; k < ncols; ++k)
                M[i][k] -= f * M[r][k];
        }
        pivot_cols.push_back(c);
        ++r;
    }
    std::vector<bool> is_pivot(ncols, false);
    for (size_t c : pivot_cols)
        is_pivot[c] = true;
    Matrix basis;
    for (size_t c = 0; c < ncols; ++c) {
        if (is_pivot[c])
            continue;
        Row v(ncols, Rational(0));
        v[c] = Rational(1);
        for (size_t i = 0; i < pivot_cols.size(); ++i)
            v[pivot_cols[i]] = -M[i][c];
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solves the square system A x = rhs exactly, where A is rational and the
// right-hand side carries polynomial entries. Throws on a singular matrix.
inline std::vector<MultiPoly> solve_poly_rhs(Matrix A, std::vector<MultiPoly> rhs)
{
    size_t n = A.size();
    for (auto& row : A)
        if (row.size() != n)
            throw Error("solve_poly_rhs: matrix must be square");
    if (rhs.size() != n)
        throw Error("solve_poly_rhs: size mismatch");
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && A[p][c].is_zero())
            ++p;
        if (p == n)
            throw Error("solve_poly_rhs: singular matrix");
        std::swap(A[c], A[p]);
        std::swap(rhs[c], rhs[p]);
        for (size_t i = c + 1; i < n; ++i) {
            if (A[i][c].is_zero())
                continue;
            Rational f = A[i][c] / A[c][c];
            for (size_t k = c; k < n; ++k)
                A[i][k] -= f * A[c][k];
            rhs[i] -= MultiPoly(f) * rhs[c];
        }
    }
    std::vector<MultiPoly> x(n);
    for (size_t i = n; i-- > 0;) {
        MultiPoly acc = rhs[i];
        for (size_t k = i + 1; k < n; ++k)
            acc -= MultiPoly(A[i][k]) * x[k];
        x[i] = acc * MultiPoly(Rational(1) / A[i][i]);
    }
    return x;
}

} // namespace confal::linalg
