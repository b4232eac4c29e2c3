// State tensors, the Segre embedding, hyperplane-section polynomials, the
// 27 affine charts, tangency tests, and the SLOCC group action.
#pragma once

#include <array>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "numeric.hpp"
#include "poly.hpp"
#include "rational.hpp"

namespace qsing {

// 3x3x3 grid of Gaussian-rational coefficients h_ijk, flat position 9i+3j+k.
struct StateTensor {
    std::array<GQ, 27> h{};

    static std::size_t flat(int i, int j, int k) {
        return std::size_t(9 * i + 3 * j + k);
    }
    GQ& at(int i, int j, int k) { return h[flat(i, j, k)]; }
    const GQ& at(int i, int j, int k) const { return h[flat(i, j, k)]; }

    bool is_zero() const {
        for (auto& c : h)
            if (!c.is_zero()) return false;
        return true;
    }
    void validate() const {
        if (is_zero()) throw std::invalid_argument("zero state tensor rejected");
    }

    // Projective normalization: divide by the first nonzero coefficient in
    // base-3 order, making classification literally scale invariant.
    StateTensor scale_normalized() const {
        validate();
        for (auto& c : h)
            if (!c.is_zero()) {
                StateTensor out;
                GQ inv = c.inverse();
                for (std::size_t p = 0; p < 27; ++p) out.h[p] = h[p] * inv;
                return out;
            }
        return *this;
    }

    friend bool operator==(const StateTensor& a, const StateTensor& b) { return a.h == b.h; }
};

inline const VarListPtr& segre_vars() {
    static VarListPtr v = make_vars(
        {"x0", "x1", "x2", "y0", "y1", "y2", "z0", "z1", "z2"});
    return v;
}

// Affine chart of P2 x P2 x P2: x_i = y_j = z_k = 1, six remaining
// coordinates ordered (remaining x's, remaining y's, remaining z's).
struct Chart {
    int i = 0, j = 0, k = 0;

    int base3() const { return 9 * i + 3 * j + k; }
    std::string name() const {
        return "[" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + "]";
    }
    // global indices (into segre_vars) of the 6 chart variables
    std::array<int, 6> global_indices() const {
        std::array<int, 6> g{};
        int n = 0;
        for (int a = 0; a < 3; ++a) if (a != i) g[n++] = a;
        for (int b = 0; b < 3; ++b) if (b != j) g[n++] = 3 + b;
        for (int c = 0; c < 3; ++c) if (c != k) g[n++] = 6 + c;
        return g;
    }
    VarListPtr vars() const {
        std::vector<std::string> names;
        for (int g : global_indices()) names.push_back((*segre_vars())[std::size_t(g)]);
        return make_vars(std::move(names));
    }
};

inline std::vector<Chart> all_charts() {
    std::vector<Chart> out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) out.push_back({i, j, k});
    return out;
}

// The trilinear form sum h_ijk x_i y_j z_k in the 9 homogeneous variables.
inline Poly<GQ> section_polynomial(const StateTensor& state) {
    state.validate();
    Poly<GQ> f(segre_vars());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                const GQ& c = state.at(i, j, k);
                if (c.is_zero()) continue;
                Monomial m(9);
                m.e[std::size_t(i)] = 1;
                m.e[std::size_t(3 + j)] = 1;
                m.e[std::size_t(6 + k)] = 1;
                f.add_term(m, c);
            }
    return f;
}

// Pivot variables set to 1; result lives in the chart's own 6-variable list.
inline Poly<GQ> restrict_to_chart(const Poly<GQ>& full, const Chart& chart) {
    VarListPtr cv = chart.vars();
    auto g = chart.global_indices();
    std::array<int, 9> slot_of_global;
    slot_of_global.fill(-1);
    for (int s = 0; s < 6; ++s) slot_of_global[std::size_t(g[std::size_t(s)])] = s;
    Poly<GQ> out(cv);
    for (auto& [m, c] : full.terms()) {
        Monomial cm(6);
        for (std::size_t v = 0; v < 9; ++v) {
            if (m.e[v] == 0) continue;
            int s = slot_of_global[v];
            // pivot variables contribute a factor of 1
            if (s >= 0) cm.e[std::size_t(s)] = m.e[v];
        }
        out.add_term(cm, c);
    }
    return out;
}

template <class S>
inline std::array<S, 27> segre_embed(const std::array<S, 3>& x, const std::array<S, 3>& y,
                                     const std::array<S, 3>& z) {
    std::array<S, 27> w{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) w[StateTensor::flat(i, j, k)] = x[std::size_t(i)] * y[std::size_t(j)] * z[std::size_t(k)];
    return w;
}

// A point of P2 x P2 x P2 given by its three factor vectors, each normalized
// so the largest-modulus entry is exactly 1.
struct ProjectivePoint {
    bool exact = false;
    std::array<std::array<GQ, 3>, 3> q{};  // valid when exact
    std::array<std::array<CD, 3>, 3> c{};  // always valid

    static int argmax_exact(const std::array<GQ, 3>& v) {
        int best = -1;
        Rat best_norm(0);
        for (int a = 0; a < 3; ++a) {
            Rat n = v[std::size_t(a)].norm2();
            if (best < 0 || n > best_norm) { best = a; best_norm = n; }
        }
        return best;
    }
    static int argmax_numeric(const std::array<CD, 3>& v) {
        int best = 0;
        for (int a = 1; a < 3; ++a)
            if (std::abs(v[std::size_t(a)]) > std::abs(v[std::size_t(best)]) + 1e-15) best = a;
        return best;
    }

    static ProjectivePoint from_exact(std::array<std::array<GQ, 3>, 3> factors) {
        ProjectivePoint p;
        p.exact = true;
        for (int f = 0; f < 3; ++f) {
            int a = argmax_exact(factors[std::size_t(f)]);
            if (factors[std::size_t(f)][std::size_t(a)].is_zero())
                throw std::invalid_argument("zero factor vector in projective point");
            GQ inv = factors[std::size_t(f)][std::size_t(a)].inverse();
            for (int b = 0; b < 3; ++b) p.q[std::size_t(f)][std::size_t(b)] = factors[std::size_t(f)][std::size_t(b)] * inv;
        }
        for (int f = 0; f < 3; ++f)
            for (int b = 0; b < 3; ++b) p.c[std::size_t(f)][std::size_t(b)] = p.q[std::size_t(f)][std::size_t(b)].to_complex();
        return p;
    }
    static ProjectivePoint from_numeric(std::array<std::array<CD, 3>, 3> factors) {
        ProjectivePoint p;
        p.exact = false;
        for (int f = 0; f < 3; ++f) {
            int a = argmax_numeric(factors[std::size_t(f)]);
            CD m = factors[std::size_t(f)][std::size_t(a)];
            if (m == CD(0)) throw std::invalid_argument("zero factor vector in projective point");
            for (int b = 0; b < 3; ++b) p.c[std::size_t(f)][std::size_t(b)] = factors[std::size_t(f)][std::size_t(b)] / m;
        }
        return p;
    }

    // chart whose pivot picks the largest-modulus coordinate in each factor
    Chart home_chart() const {
        auto argmax_tie_low = [](const std::array<CD, 3>& v) {
            int best = 0;
            for (int a = 1; a < 3; ++a)
                if (std::abs(v[std::size_t(a)]) > std::abs(v[std::size_t(best)]) + 1e-12) best = a;
            return best;
        };
        return Chart{argmax_tie_low(c[0]), argmax_tie_low(c[1]), argmax_tie_low(c[2])};
    }

    double distance(const ProjectivePoint& o) const {
        double d = 0.0;
        for (int f = 0; f < 3; ++f)
            for (int b = 0; b < 3; ++b)
                d = std::max(d, std::abs(c[std::size_t(f)][std::size_t(b)] - o.c[std::size_t(f)][std::size_t(b)]));
        return d;
    }
};

struct TangencyReport {
    bool on_hyperplane = false;
    bool tangent = false;
    GQ point_pairing;
    std::array<GQ, 6> direction_pairings{};
};

// True iff the embedded point and all 6 one-factor-at-a-time tangent
// directions pair to zero against <phi|, i.e. T_p X lies inside H_phi.
inline TangencyReport tangent_membership(const StateTensor& state, const ProjectivePoint& p) {
    if (!p.exact) throw std::invalid_argument("tangent_membership expects an exact point");
    TangencyReport rep;
    auto pair_with = [&](const std::array<GQ, 3>& x, const std::array<GQ, 3>& y,
                         const std::array<GQ, 3>& z) {
        GQ acc;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    acc += state.at(i, j, k) * x[std::size_t(i)] * y[std::size_t(j)] * z[std::size_t(k)];
        return acc;
    };
    rep.point_pairing = pair_with(p.q[0], p.q[1], p.q[2]);
    rep.on_hyperplane = rep.point_pairing.is_zero();
    int n = 0;
    bool all_zero = rep.on_hyperplane;
    for (int f = 0; f < 3; ++f) {
        int pivot = ProjectivePoint::argmax_exact(p.q[std::size_t(f)]);
        for (int b = 0; b < 3; ++b) {
            if (b == pivot) continue;
            std::array<GQ, 3> e{};
            e[std::size_t(b)] = GQ(1);
            auto x = (f == 0) ? e : p.q[0];
            auto y = (f == 1) ? e : p.q[1];
            auto z = (f == 2) ? e : p.q[2];
            rep.direction_pairings[std::size_t(n)] = pair_with(x, y, z);
            if (!rep.direction_pairings[std::size_t(n)].is_zero()) all_zero = false;
            ++n;
        }
    }
    rep.tangent = all_zero;
    return rep;
}

using SL3 = std::array<std::array<GQ, 3>, 3>;
using SL3Triple = std::array<SL3, 3>;

inline GQ sl3_det(const SL3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline SL3 sl3_identity() {
    SL3 m{};
    for (int i = 0; i < 3; ++i) m[std::size_t(i)][std::size_t(i)] = GQ(1);
    return m;
}

inline SL3 sl3_mul(const SL3& a, const SL3& b) {
    SL3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) r[std::size_t(i)][std::size_t(j)] += a[std::size_t(i)][std::size_t(k)] * b[std::size_t(k)][std::size_t(j)];
    return r;
}

// Factor-wise left action of SL3 x SL3 x SL3 on the coefficient tensor.
inline StateTensor slocc_act(const StateTensor& state, const SL3Triple& g) {
    for (auto& m : g)
        if (!(sl3_det(m) == GQ(1)))
            throw std::invalid_argument("slocc_act: matrix determinant is not 1");
    StateTensor out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                GQ acc;
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b)
                        for (int c = 0; c < 3; ++c)
                            acc += g[0][std::size_t(i)][std::size_t(a)] * g[1][std::size_t(j)][std::size_t(b)] *
                                   g[2][std::size_t(k)][std::size_t(c)] * state.at(a, b, c);
                out.at(i, j, k) = acc;
            }
    return out;
}

inline SL3Triple slocc_compose(const SL3Triple& g, const SL3Triple& h) {
    return {sl3_mul(g[0], h[0]), sl3_mul(g[1], h[1]), sl3_mul(g[2], h[2])};
}

// Products of elementary shears with small random rational offsets; the
// determinant is exactly 1 by construction.
inline SL3Triple random_sl3_triple(std::uint64_t seed, int shear_count) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pos(0, 2);
    std::uniform_int_distribution<int> num(-3, 3);
    std::uniform_int_distribution<int> den(1, 4);
    SL3Triple g{sl3_identity(), sl3_identity(), sl3_identity()};
    for (int f = 0; f < 3; ++f)
        for (int s = 0; s < shear_count; ++s) {
            int r = pos(rng), c = pos(rng);
            while (c == r) c = pos(rng);
            int n = num(rng);
            if (n == 0) n = 1;
            SL3 shear = sl3_identity();
            Rat offset(n, den(rng));
            offset.canonicalize();
            shear[std::size_t(r)][std::size_t(c)] = GQ(offset);
            g[std::size_t(f)] = sl3_mul(g[std::size_t(f)], shear);
        }
    return g;
}

} // namespace qsing
