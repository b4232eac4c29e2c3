// Dense exact linear algebra over Q(i): rank, kernel, solving, and
// characteristic polynomials of multiplication matrices.
#pragma once

#include <stdexcept>
#include <vector>

#include "poly.hpp"
#include "rational.hpp"

namespace qsing {

using GQMat = std::vector<std::vector<GQ>>;

inline GQMat gq_identity(std::size_t n) {
    GQMat m(n, std::vector<GQ>(n));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = GQ(1);
    return m;
}

inline GQMat gq_mul(const GQMat& a, const GQMat& b) {
    std::size_t n = a.size(), k = b.size(), p = b.empty() ? 0 : b[0].size();
    GQMat r(n, std::vector<GQ>(p));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            if (a[i][j].is_zero()) continue;
            for (std::size_t l = 0; l < p; ++l) r[i][l] += a[i][j] * b[j][l];
        }
    return r;
}

// Reduced row echelon form in place; returns pivot column indices.
inline std::vector<std::size_t> gq_rref(GQMat& m) {
    std::vector<std::size_t> pivots;
    std::size_t rows = m.size(), cols = rows ? m[0].size() : 0, r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t sel = rows;
        for (std::size_t i = r; i < rows; ++i)
            if (!m[i][c].is_zero()) { sel = i; break; }
        if (sel == rows) continue;
        std::swap(m[r], m[sel]);
        GQ inv = m[r][c].inverse();
        for (auto& x : m[r]) x = x * inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            GQ f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::size_t gq_rank(GQMat m) { return gq_rref(m).size(); }

// Basis of the right kernel, one column vector per free variable.
inline std::vector<std::vector<GQ>> gq_kernel(GQMat m) {
    std::size_t cols = m.empty() ? 0 : m[0].size();
    auto pivots = gq_rref(m);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<GQ>> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<GQ> v(cols);
        v[free] = GQ(1);
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solve M x = b; throws when inconsistent, free variables set to zero.
inline std::vector<GQ> gq_solve(GQMat m, std::vector<GQ> b) {
    std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    for (std::size_t i = 0; i < rows; ++i) m[i].push_back(b[i]);
    auto pivots = gq_rref(m);
    if (!pivots.empty() && pivots.back() == cols)
        throw std::domain_error("gq_solve: inconsistent system");
    std::vector<GQ> x(cols);
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = m[r][cols];
    return x;
}

inline GQMat gq_inverse(const GQMat& m) {
    std::size_t n = m.size();
    GQMat aug = m;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug[i].push_back(i == j ? GQ(1) : GQ());
    }
    auto pivots = gq_rref(aug);
    if (pivots.size() != n || pivots.back() != n - 1)
        throw std::domain_error("gq_inverse: singular matrix");
    GQMat inv(n, std::vector<GQ>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

// Characteristic polynomial det(t I - M) by Faddeev-LeVerrier; returns the
// monic coefficient vector c[0] + c[1] t + ... + c[n] t^n.
inline std::vector<GQ> gq_char_poly(const GQMat& m) {
    std::size_t n = m.size();
    std::vector<GQ> c(n + 1);
    c[n] = GQ(1);
    GQMat ak = gq_identity(n); // M^0 adjusted iterate
    for (std::size_t k = 1; k <= n; ++k) {
        ak = gq_mul(m, ak);
        GQ tr;
        for (std::size_t i = 0; i < n; ++i) tr += ak[i][i];
        GQ ck = -(tr / GQ(long(k)));
        c[n - k] = ck;
        for (std::size_t i = 0; i < n; ++i) ak[i][i] += ck;
    }
    return c;
}

inline Poly<GQ> char_poly_as_poly(const GQMat& m, const VarListPtr& tvar) {
    auto c = gq_char_poly(m);
    Poly<GQ> p(tvar);
    for (std::size_t k = 0; k < c.size(); ++k) {
        Monomial mono(1);
        mono.e[0] = int(k);
        p.add_term(mono, c[k]);
    }
    return p;
}

} // namespace qsing
