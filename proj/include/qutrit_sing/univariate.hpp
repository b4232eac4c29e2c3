// Exact univariate helpers over Q(i): Euclidean division, gcd, and Yun's
// square-free decomposition.  Coefficient vectors are dense, c[k] ~ t^k.
#pragma once

#include <utility>
#include <vector>

#include "poly.hpp"
#include "rational.hpp"

namespace qsing {

using UCoeffs = std::vector<GQ>;

inline UCoeffs uni_from_poly(const Poly<GQ>& p) {
    if (p.nvars() != 1) throw std::invalid_argument("expected a univariate polynomial");
    UCoeffs c(std::size_t(std::max(0, p.total_degree())) + 1);
    for (auto& [m, k] : p.terms()) c[std::size_t(m.e[0])] = k;
    return c;
}

inline void uni_trim(UCoeffs& c) {
    while (c.size() > 1 && c.back().is_zero()) c.pop_back();
}

inline int uni_degree(const UCoeffs& c) {
    for (std::size_t i = c.size(); i-- > 0;)
        if (!c[i].is_zero()) return int(i);
    return -1;
}

inline UCoeffs uni_derivative(const UCoeffs& c) {
    if (c.size() <= 1) return {GQ()};
    UCoeffs d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * GQ(long(i));
    uni_trim(d);
    return d;
}

inline UCoeffs uni_monic(UCoeffs c) {
    uni_trim(c);
    int d = uni_degree(c);
    if (d < 0) return c;
    GQ inv = c[std::size_t(d)].inverse();
    for (auto& x : c) x *= inv;
    return c;
}

// quotient, remainder of a / b
inline std::pair<UCoeffs, UCoeffs> uni_divmod(UCoeffs a, const UCoeffs& b) {
    int db = uni_degree(b);
    if (db < 0) throw std::domain_error("division by zero polynomial");
    uni_trim(a);
    int da = uni_degree(a);
    if (da < db) return {{GQ()}, a};
    UCoeffs q(std::size_t(da - db) + 1);
    GQ lead_inv = b[std::size_t(db)].inverse();
    for (int k = da - db; k >= 0; --k) {
        GQ f = a[std::size_t(k + db)] * lead_inv;
        q[std::size_t(k)] = f;
        if (f.is_zero()) continue;
        for (int i = 0; i <= db; ++i) a[std::size_t(k + i)] -= f * b[std::size_t(i)];
    }
    uni_trim(a);
    uni_trim(q);
    return {q, a};
}

inline UCoeffs uni_gcd(UCoeffs a, UCoeffs b) {
    a = uni_monic(std::move(a));
    b = uni_monic(std::move(b));
    while (uni_degree(b) >= 0) {
        auto [q, r] = uni_divmod(a, b);
        a = std::move(b);
        b = uni_monic(std::move(r));
    }
    if (uni_degree(a) < 0) return {GQ(1)}; // gcd(0,0) treated as 1
    return a;
}

// Yun's algorithm: p (monic-ized) = prod fac[i]^(i+1), fac square-free,
// pairwise coprime.  fac[i] may be the constant 1.
inline std::vector<UCoeffs> uni_squarefree(const UCoeffs& p) {
    UCoeffs a = uni_monic(p);
    if (uni_degree(a) <= 0) return {};
    UCoeffs d = uni_derivative(a);
    UCoeffs g = uni_gcd(a, d);
    std::vector<UCoeffs> out;
    if (uni_degree(g) == 0) {
        out.push_back(a);
        return out;
    }
    UCoeffs w = uni_divmod(a, g).first;
    UCoeffs y = uni_divmod(d, g).first;
    while (true) {
        UCoeffs wp = uni_derivative(w);
        UCoeffs z(std::max(y.size(), wp.size()), GQ());
        for (std::size_t i = 0; i < y.size(); ++i) z[i] += y[i];
        for (std::size_t i = 0; i < wp.size(); ++i) z[i] -= wp[i];
        uni_trim(z);
        if (uni_degree(z) < 0) { // w is the last (highest-multiplicity) factor
            out.push_back(uni_monic(w));
            break;
        }
        UCoeffs f = uni_gcd(w, z);
        out.push_back(f);
        w = uni_divmod(w, f).first;
        y = uni_divmod(z, f).first;
        if (uni_degree(w) <= 0) break;
    }
    return out;
}

} // namespace qsing
