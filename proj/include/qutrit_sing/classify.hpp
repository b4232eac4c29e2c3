// Local singularity classification of hyperplane sections: splitting-lemma
// reduction of a critical germ, ADE recognition, chart-by-chart solving of
// the critical locus, and the full section pipeline with its exact
// cross-checks.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "groebner.hpp"
#include "numeric.hpp"
#include "parallel.hpp"
#include "segre.hpp"

namespace qsing {

enum class LocalKind { A, D4, BeyondD4, NotSimple };
enum class CubicShape { NonDegenerate, DoubleRoot, PerfectCube, Zero };

struct LocalType {
    LocalKind kind = LocalKind::A;
    int index = 1;   // the k of A(k)
    int corank = 0;
    CubicShape cubic = CubicShape::NonDegenerate;
    int milnor = -1; // -1 when not determined by the normal form
    // residual vanished to the truncation order, so the type is only a
    // lower bound (A case) or the cubic part was unreadable
    bool truncated = false;

    bool admissible() const {
        return (kind == LocalKind::A && !truncated && index >= 1 && index <= 3) ||
               kind == LocalKind::D4;
    }
    std::string label() const {
        switch (kind) {
        case LocalKind::A:
            return (truncated ? "A>=" : "A") + std::to_string(index);
        case LocalKind::D4:
            return "D4";
        case LocalKind::BeyondD4:
            switch (cubic) {
            case CubicShape::DoubleRoot: return "BeyondD4[doubleRoot]";
            case CubicShape::PerfectCube: return "BeyondD4[perfectCube]";
            case CubicShape::Zero: return "BeyondD4[zeroCubic]";
            default: return "BeyondD4";
            }
        case LocalKind::NotSimple:
            return "NotSimple(corank=" + std::to_string(corank) + ")";
        }
        return "?";
    }
};

namespace detail {

template <class K>
K k_from_long(long v) {
    if constexpr (std::is_same_v<K, GQ>) return GQ(v);
    else return CD(double(v), 0.0);
}

template <class K>
double k_abs(const K& v) {
    if constexpr (std::is_same_v<K, GQ>) return std::abs(v.to_complex());
    else return std::abs(v);
}

// Pivot rows of the (n x c) kernel-basis matrix: the row set S with
// kernel[S] invertible.  Unit vectors at the complementary indices then
// complete the kernel to a basis of the ambient space.
inline std::vector<int> numeric_pivot_rows(const CMat& kernel) {
    int n = int(kernel.rows()), c = int(kernel.cols());
    CMat kt = kernel.transpose(); // c x n, columns ~ rows of kernel
    std::vector<int> rows;
    std::vector<bool> used(std::size_t(n), false);
    for (int step = 0; step < c; ++step) {
        int best = -1;
        double best_abs = 0.0;
        for (int j = 0; j < n; ++j) {
            if (used[std::size_t(j)]) continue;
            double a = kt.col(j).norm();
            if (a > best_abs) { best = j; best_abs = a; }
        }
        if (best < 0 || best_abs < 1e-12)
            throw NumericFailure("kernel basis is numerically rank deficient");
        used[std::size_t(best)] = true;
        rows.push_back(best);
        // eliminate the chosen direction from the remaining columns
        CVec pivot = kt.col(best) / kt.col(best).norm();
        for (int j = 0; j < n; ++j) {
            if (used[std::size_t(j)]) continue;
            kt.col(j) -= pivot.dot(kt.col(j)) * pivot;
        }
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

inline void chop_below(Poly<CD>& p, double thresh) {
    Poly<CD> r(p.vars(), p.order());
    for (auto& [m, c] : p.terms())
        if (std::abs(c) > thresh) r.add_term(m, c);
    p = std::move(r);
}

template <class K>
std::vector<std::vector<K>> invert_small(const std::vector<std::vector<K>>& m) {
    if constexpr (std::is_same_v<K, GQ>) {
        return gq_inverse(m);
    } else {
        int n = int(m.size());
        CMat em(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) em(i, j) = m[std::size_t(i)][std::size_t(j)];
        Eigen::JacobiSVD<CMat> svd(em, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        if (n > 0 && (sv(n - 1) <= 1e-10 * sv(0) || sv(0) == 0.0))
            throw NumericFailure("restricted Hessian is numerically singular");
        CMat inv = em.inverse();
        std::vector<std::vector<K>> out(static_cast<std::size_t>(n),
                                        std::vector<K>(static_cast<std::size_t>(n)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out[std::size_t(i)][std::size_t(j)] = inv(i, j);
        return out;
    }
}

} // namespace detail

// Splitting-lemma data of a critical germ with vanishing 1-jet: Hessian
// corank and the residual series f(u, w(u)) on the kernel, truncated at
// total degree `trunc`.  The residual lives in variables u0..u_{c-1}.
template <class K>
struct SplitResult {
    int corank = 0;
    Series<K> residual; // zero polynomial when corank == 0
};

template <class K>
SplitResult<K> splitting_reduce(const Poly<K>& germ, int trunc,
                                const NumericTolerances& tol = {}) {
    constexpr bool exact = std::is_same_v<K, GQ>;
    const std::size_t n = germ.nvars();

    Poly<K> f = germ;
    if constexpr (!exact) f.chop(1e-14);
    for (auto& [m, c] : f.terms())
        if (m.degree() <= 1) {
            if constexpr (exact)
                throw std::invalid_argument("splitting_reduce: germ has a nonzero 1-jet");
            else
                throw NumericFailure("splitting_reduce: germ has a nonzero 1-jet");
        }

    // Hessian at the origin
    std::vector<std::vector<K>> hess(n, std::vector<K>(n));
    for (std::size_t i = 0; i < n; ++i) {
        Poly<K> fi = f.differentiate(i);
        for (std::size_t j = i; j < n; ++j)
            hess[i][j] = hess[j][i] = fi.differentiate(j).constant_term();
    }

    std::vector<std::vector<K>> kernel;  // basis vectors, length n each
    std::vector<std::size_t> complement; // indices of completing unit vectors
    if constexpr (exact) {
        GQMat hc = hess;
        auto pivots = gq_rref(hc);
        complement.assign(pivots.begin(), pivots.end());
        kernel = gq_kernel(hess);
    } else {
        CMat hm(static_cast<long>(n), static_cast<long>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) hm(long(i), long(j)) = hess[i][j];
        RankResult rr = numeric_rank(hm, tol);
        for (int j = 0; j < rr.kernel.cols(); ++j) {
            std::vector<K> v(n);
            for (std::size_t i = 0; i < n; ++i) v[i] = rr.kernel(long(i), j);
            kernel.push_back(std::move(v));
        }
        if (rr.rank > 0) {
            std::vector<int> pr = detail::numeric_pivot_rows(rr.kernel.cols()
                                                                 ? rr.kernel
                                                                 : CMat::Zero(long(n), 0));
            std::vector<bool> in_kernel_rows(n, false);
            for (int r : pr) in_kernel_rows[std::size_t(r)] = true;
            for (std::size_t i = 0; i < n; ++i)
                if (!in_kernel_rows[i]) complement.push_back(i);
        }
    }

    const std::size_t c = kernel.size();
    const std::size_t r = n - c;
    if (complement.size() != r)
        throw std::logic_error("splitting_reduce: complement does not match rank");

    SplitResult<K> out;
    out.corank = int(c);
    if (c == 0) {
        out.residual = Series<K>(Poly<K>(make_vars({}), f.order()), trunc);
        return out;
    }

    // new coordinates: x = sum_j u_j kernel_j + sum_a w_a e_{complement[a]}
    std::vector<std::string> names;
    for (std::size_t j = 0; j < c; ++j) names.push_back("u" + std::to_string(j));
    for (std::size_t a = 0; a < r; ++a) names.push_back("w" + std::to_string(a));
    VarListPtr cw = make_vars(std::move(names));

    std::vector<Poly<K>> values;
    for (std::size_t v = 0; v < n; ++v) {
        Poly<K> pv(cw, f.order());
        for (std::size_t j = 0; j < c; ++j) {
            Monomial m(c + r);
            m.e[j] = 1;
            pv.add_term(m, kernel[j][v]);
        }
        for (std::size_t a = 0; a < r; ++a)
            if (complement[a] == v) {
                Monomial m(c + r);
                m.e[c + a] = 1;
                pv.add_term(m, detail::k_from_long<K>(1));
            }
        values.push_back(std::move(pv));
    }
    Poly<K> g = f.substitute_polys(values);
    double gscale = 0.0;
    if constexpr (!exact) {
        for (auto& [m, c] : g.terms()) gscale = std::max(gscale, detail::k_abs(c));
        detail::chop_below(g, 1e-11 * gscale);
    }

    if (r == 0) {
        out.residual = Series<K>(g, trunc);
        return out;
    }

    // nondegenerate block of the transformed Hessian
    std::vector<std::vector<K>> hww(r, std::vector<K>(r));
    for (std::size_t a = 0; a < r; ++a) {
        Poly<K> ga = g.differentiate(c + a);
        for (std::size_t b = 0; b < r; ++b)
            hww[a][b] = ga.differentiate(c + b).constant_term();
    }
    auto hinv = detail::invert_small<K>(hww);

    std::vector<Poly<K>> gw;
    for (std::size_t b = 0; b < r; ++b) gw.push_back(g.differentiate(c + b));

    // implicit w(u) by Newton iteration; each pass gains at least one order
    std::vector<Series<K>> w(r, Series<K>(Poly<K>(cw, g.order()), trunc));
    for (int iter = 0; iter <= trunc + 2; ++iter) {
        std::vector<std::optional<Series<K>>> bind(c + r);
        for (std::size_t b = 0; b < r; ++b) bind[c + b] = w[b];
        bool done = true;
        std::vector<Series<K>> gv;
        for (std::size_t b = 0; b < r; ++b) {
            Series<K> s = substitute(gw[b], bind);
            if constexpr (!exact) detail::chop_below(s.body, 1e-10 * gscale);
            if (!s.body.is_zero()) done = false;
            gv.push_back(std::move(s));
        }
        if (done) break;
        if (iter == trunc + 2) {
            if constexpr (exact)
                throw std::logic_error("splitting_reduce: elimination failed to converge");
            else
                throw NumericFailure("splitting_reduce: elimination failed to converge");
        }
        for (std::size_t a = 0; a < r; ++a) {
            Poly<K> body = w[a].body;
            for (std::size_t b = 0; b < r; ++b)
                body -= gv[b].body.scaled(hinv[a][b]);
            w[a] = Series<K>(std::move(body), trunc);
        }
    }

    std::vector<std::optional<Series<K>>> bind(c + r);
    for (std::size_t b = 0; b < r; ++b) bind[c + b] = w[b];
    out.residual = substitute(g, bind);
    if constexpr (!exact) detail::chop_below(out.residual.body, 1e-10 * gscale);
    return out;
}

// Arnold type of a critical germ (vanishing 1-jet) from its splitting
// residual.  `trunc` bounds the readable A index at corank 1.
template <class K>
LocalType classify_germ(const Poly<K>& germ, int trunc, const NumericTolerances& tol = {}) {
    constexpr bool exact = std::is_same_v<K, GQ>;
    SplitResult<K> sp = splitting_reduce(germ, trunc, tol);

    LocalType out;
    out.corank = sp.corank;
    if (sp.corank == 0) {
        out.kind = LocalKind::A;
        out.index = 1;
        out.milnor = 1;
        return out;
    }
    if (sp.corank >= 3) {
        out.kind = LocalKind::NotSimple;
        return out;
    }

    if (sp.corank == 1) {
        int m = sp.residual.order_of_vanishing();
        out.kind = LocalKind::A;
        if (m < 0) {
            out.index = trunc;
            out.truncated = true;
            return out;
        }
        if (m < 3) {
            if constexpr (exact)
                throw std::logic_error("corank-1 residual of order < 3");
            else
                throw NumericFailure("corank-1 residual of order < 3 (rank threshold?)");
        }
        out.index = m - 1;
        out.milnor = m - 1;
        return out;
    }

    // corank 2: read the binary cubic a u^3 + b u^2 v + c u v^2 + d v^3
    std::size_t nv = sp.residual.body.nvars();
    auto cub = [&](int eu, int ev) {
        Monomial m(nv);
        m.e[0] = eu;
        m.e[1] = ev;
        return sp.residual.body.coeff(m);
    };
    K a = cub(3, 0), b = cub(2, 1), cc = cub(1, 2), d = cub(0, 3);
    double s = std::max({detail::k_abs(a), detail::k_abs(b), detail::k_abs(cc), detail::k_abs(d)});
    auto negligible = [&](const K& v, double scale) {
        if constexpr (exact) { (void)scale; return v.is_zero(); }
        else return detail::k_abs(v) <= 1e-8 * std::max(scale, 1e-290);
    };

    if (negligible(a, s) && negligible(b, s) && negligible(cc, s) && negligible(d, s)) {
        out.kind = LocalKind::BeyondD4;
        out.cubic = CubicShape::Zero;
        out.truncated = sp.residual.body.is_zero();
        return out;
    }

    K disc = detail::k_from_long<K>(18) * a * b * cc * d
           - detail::k_from_long<K>(4) * b * b * b * d
           + b * b * cc * cc
           - detail::k_from_long<K>(4) * a * cc * cc * cc
           - detail::k_from_long<K>(27) * a * a * d * d;
    if (!negligible(disc, s * s * s * s)) {
        out.kind = LocalKind::D4;
        out.milnor = 4;
        return out;
    }

    // degenerate cubic: triple root iff the Hessian covariant vanishes
    VarListPtr uv = make_vars({"u", "v"});
    Poly<K> cubic(uv, sp.residual.body.order());
    auto put = [&](int eu, int ev, const K& k) {
        Monomial m(2);
        m.e[0] = eu;
        m.e[1] = ev;
        cubic.add_term(m, k);
    };
    put(3, 0, a); put(2, 1, b); put(1, 2, cc); put(0, 3, d);
    Poly<K> hcov = cubic.differentiate(0).differentiate(0) * cubic.differentiate(1).differentiate(1)
                 - cubic.differentiate(0).differentiate(1) * cubic.differentiate(0).differentiate(1);
    bool triple = true;
    for (auto& [m, k] : hcov.terms())
        if (!negligible(k, s * s)) { triple = false; break; }

    out.kind = LocalKind::BeyondD4;
    out.cubic = triple ? CubicShape::PerfectCube : CubicShape::DoubleRoot;
    return out;
}

// Classification at a critical point of a chart polynomial.  Exact overload:
// the point must be exactly critical.
inline LocalType classify_point(const Poly<GQ>& f_chart, const std::vector<GQ>& p,
                                int trunc = 8) {
    std::vector<Poly<GQ>> values;
    for (std::size_t i = 0; i < f_chart.nvars(); ++i)
        values.push_back(Poly<GQ>::variable(f_chart.vars(), i, f_chart.order()) +
                         Poly<GQ>::constant(f_chart.vars(), p[i], f_chart.order()));
    Poly<GQ> germ = f_chart.substitute_polys(values);
    if (!germ.constant_term().is_zero())
        throw std::invalid_argument("classify_point: point is not on the section");
    for (std::size_t i = 0; i < germ.nvars(); ++i) {
        Monomial m(germ.nvars());
        m.e[i] = 1;
        if (!germ.coeff(m).is_zero())
            throw std::invalid_argument("classify_point: point is not critical");
    }
    LocalType t = classify_germ(germ, trunc);
    if (t.truncated && t.kind == LocalKind::A) t = classify_germ(germ, trunc + 6);
    return t;
}

inline LocalType classify_point(const Poly<GQ>& f_chart, const std::vector<CD>& p,
                                const NumericTolerances& tol, int trunc = 8) {
    Poly<CD> fn = to_numeric(f_chart);
    std::vector<Poly<CD>> values;
    for (std::size_t i = 0; i < fn.nvars(); ++i)
        values.push_back(Poly<CD>::variable(fn.vars(), i, fn.order()) +
                         Poly<CD>::constant(fn.vars(), p[i], fn.order()));
    Poly<CD> germ = fn.substitute_polys(values);
    double scale = 0.0;
    for (auto& [m, c] : germ.terms()) scale = std::max(scale, std::abs(c));
    Poly<CD> cleaned(germ.vars(), germ.order());
    for (auto& [m, c] : germ.terms()) {
        if (m.degree() <= 1) {
            if (std::abs(c) > 1e-6 * scale)
                throw NotOnSection("classify_point: 1-jet does not vanish at the given point");
            continue;
        }
        cleaned.add_term(m, c);
    }
    LocalType t = classify_germ(cleaned, trunc, tol);
    if (t.truncated && t.kind == LocalKind::A) t = classify_germ(cleaned, trunc + 6, tol);
    return t;
}

// Independent Milnor number: dim of the local algebra of the gradient ideal
// at the (exactly critical) point, via m-adic stabilization.
inline std::optional<int> milnor_oracle(const Poly<GQ>& f_chart, const std::vector<GQ>& p,
                                        int max_degree) {
    std::vector<Poly<GQ>> values;
    for (std::size_t i = 0; i < f_chart.nvars(); ++i)
        values.push_back(Poly<GQ>::variable(f_chart.vars(), i, f_chart.order()) +
                         Poly<GQ>::constant(f_chart.vars(), p[i], f_chart.order()));
    Poly<GQ> germ = f_chart.substitute_polys(values);
    std::vector<Poly<GQ>> grads;
    for (std::size_t i = 0; i < germ.nvars(); ++i) grads.push_back(germ.differentiate(i));
    return local_algebra_dim(grads, max_degree);
}

// ---------------------------------------------------------------------------
// Whole-section pipeline.

enum class Verdict { Smooth, Isolated, NonIsolated };
enum class StratumKind { NotOnDual, DualSmooth, Node, Cusp };

struct Stratum {
    StratumKind kind = StratumKind::NotOnDual;
    int multiplicity = 0;

    std::string label() const {
        switch (kind) {
        case StratumKind::NotOnDual: return "NotOnDual";
        case StratumKind::DualSmooth: return "DualSmooth";
        case StratumKind::Node: return "Node(" + std::to_string(multiplicity) + ")";
        case StratumKind::Cusp: return "Cusp(" + std::to_string(multiplicity) + ")";
        }
        return "?";
    }
};

struct SingularPoint {
    ProjectivePoint location;
    Chart chart;                 // chart the local type was computed in
    std::vector<CD> coords;      // chart coordinates
    std::vector<GQ> exact_coords; // valid when exact
    bool exact = false;
    LocalType type;
};

struct ChartReport {
    Chart chart;
    int dim = -1;        // -1: no critical points in this chart
    int quotient_dim = 0; // total local multiplicity when dim == 0
};

struct SectionClassification {
    Verdict verdict = Verdict::Smooth;
    std::vector<SingularPoint> points;
    int milnor_sum = 0;
    bool milnor_complete = true;
    Stratum stratum;
    Chart nonisolated_witness{};
    int nonisolated_dim = 0;
    std::vector<ChartReport> charts;
    std::vector<std::string> warnings;
    NumericTolerances tolerances;
};

struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ClassifyOptions {
    NumericTolerances tol{};
    int series_trunc = 8;
    int max_attempts = 4;
    std::uint64_t seed = 1;
};

// Small-denominator rational snap for one floating value.
inline std::optional<Rat> rat_reconstruct(double x, double rel_tol = 1e-5,
                                          long long max_den = 1000000) {
    if (!std::isfinite(x)) return std::nullopt;
    long long p0 = 1, q0 = 0;
    long long p1 = (long long)std::llround(std::floor(x)), q1 = 1;
    double frac = x - std::floor(x), cur = x;
    for (int it = 0; it < 48; ++it) {
        if (std::abs(double(p1) / double(q1) - x) <= rel_tol * std::max(1.0, std::abs(x))) {
            Rat r(long(p1), (unsigned long)(q1));
            r.canonicalize();
            return r;
        }
        if (frac < 1e-13) break;
        cur = 1.0 / frac;
        long long a = (long long)std::floor(cur);
        frac = cur - std::floor(cur);
        long long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den || q2 <= 0) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    }
    if (std::abs(double(p1) / double(q1) - x) <= rel_tol * std::max(1.0, std::abs(x))) {
        Rat r(long(p1), (unsigned long)(q1));
        r.canonicalize();
        return r;
    }
    return std::nullopt;
}

struct ChartAnalysis {
    Chart chart;
    Poly<GQ> f;
    std::vector<Poly<GQ>> grad;
    IdealBasis gb;
    int dim = -1;
    Staircase sc; // valid when dim == 0
};

inline std::vector<ChartAnalysis> analyze_charts(const Poly<GQ>& full_section) {
    auto charts = all_charts();
    std::vector<ChartAnalysis> out(charts.size());
    parallel_for(charts.size(), [&](std::size_t idx) {
        ChartAnalysis ca;
        ca.chart = charts[idx];
        ca.f = restrict_to_chart(full_section, ca.chart);
        std::vector<QPoly> gens{ca.f};
        for (std::size_t v = 0; v < 6; ++v) {
            ca.grad.push_back(ca.f.differentiate(v));
            gens.push_back(ca.grad.back());
        }
        ca.gb = buchberger(gens);
        ca.dim = krull_dimension(ca.gb);
        if (ca.dim == 0) ca.sc = quotient_basis(ca.gb);
        out[idx] = std::move(ca);
    });
    return out;
}

namespace detail {

struct SolveRetry : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline ProjectivePoint lift_exact_point(const Chart& ch, const std::vector<GQ>& c6) {
    std::array<std::array<GQ, 3>, 3> fac{};
    std::array<int, 3> piv{ch.i, ch.j, ch.k};
    std::size_t s = 0;
    for (int f = 0; f < 3; ++f) {
        fac[std::size_t(f)][std::size_t(piv[std::size_t(f)])] = GQ(1);
        for (int a = 0; a < 3; ++a)
            if (a != piv[std::size_t(f)]) fac[std::size_t(f)][std::size_t(a)] = c6[s++];
    }
    return ProjectivePoint::from_exact(fac);
}

inline ProjectivePoint lift_numeric_point(const Chart& ch, const std::vector<CD>& c6) {
    std::array<std::array<CD, 3>, 3> fac{};
    std::array<int, 3> piv{ch.i, ch.j, ch.k};
    std::size_t s = 0;
    for (int f = 0; f < 3; ++f) {
        fac[std::size_t(f)][std::size_t(piv[std::size_t(f)])] = CD(1);
        for (int a = 0; a < 3; ++a)
            if (a != piv[std::size_t(f)]) fac[std::size_t(f)][std::size_t(a)] = c6[s++];
    }
    return ProjectivePoint::from_numeric(fac);
}

// Chart coordinates of a projective point in the given chart; requires all
// three pivot coordinates nonzero.
inline std::vector<GQ> chart_coords_exact(const ProjectivePoint& p, const Chart& ch) {
    std::array<int, 3> piv{ch.i, ch.j, ch.k};
    std::vector<GQ> out;
    for (int f = 0; f < 3; ++f) {
        GQ pv = p.q[std::size_t(f)][std::size_t(piv[std::size_t(f)])];
        GQ inv = pv.inverse();
        for (int a = 0; a < 3; ++a)
            if (a != piv[std::size_t(f)]) out.push_back(p.q[std::size_t(f)][std::size_t(a)] * inv);
    }
    return out;
}

inline std::vector<CD> chart_coords_numeric(const ProjectivePoint& p, const Chart& ch) {
    std::array<int, 3> piv{ch.i, ch.j, ch.k};
    std::vector<CD> out;
    for (int f = 0; f < 3; ++f) {
        CD pv = p.c[std::size_t(f)][std::size_t(piv[std::size_t(f)])];
        for (int a = 0; a < 3; ++a)
            if (a != piv[std::size_t(f)]) out.push_back(p.c[std::size_t(f)][std::size_t(a)] / pv);
    }
    return out;
}

inline bool point_in_chart(const SingularPoint& p, const Chart& ch, double eps) {
    std::array<int, 3> piv{ch.i, ch.j, ch.k};
    for (int f = 0; f < 3; ++f) {
        if (p.exact) {
            if (p.location.q[std::size_t(f)][std::size_t(piv[std::size_t(f)])].is_zero()) return false;
        } else {
            if (std::abs(p.location.c[std::size_t(f)][std::size_t(piv[std::size_t(f)])]) <= eps)
                return false;
        }
    }
    return true;
}

// Candidate critical points of one zero-dimensional chart via eigenvectors
// of the (transposed) multiplication matrix of a random separating form.
inline std::vector<SingularPoint> solve_chart(const ChartAnalysis& ca, std::uint64_t useed,
                                              const NumericTolerances& tol,
                                              std::vector<std::string>& warnings) {
    std::size_t d = ca.sc.dimension();
    VarListPtr vars = ca.f.vars();

    std::mt19937_64 rng(useed);
    std::uniform_int_distribution<int> coeff(1, 19);
    QPoly u(vars);
    for (std::size_t v = 0; v < 6; ++v) {
        Monomial m(6);
        m.e[v] = 1;
        u.add_term(m, GQ(long(coeff(rng))));
    }

    GQMat mm = mult_matrix(ca.gb, ca.sc, u);
    auto roots = univariate_roots(char_poly_as_poly(mm, make_vars({"t"})), tol);

    CMat bt(static_cast<long>(d), static_cast<long>(d)); // transpose: acts on evaluation vectors
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) bt(long(i), long(j)) = mm[j][i].to_complex();

    auto one_idx = ca.sc.index_of(Monomial(6));
    if (!one_idx) throw std::logic_error("staircase without the constant monomial");

    // normal-form coordinates of each chart variable on the staircase
    std::vector<std::vector<CD>> var_rows(6, std::vector<CD>(d));
    for (std::size_t v = 0; v < 6; ++v) {
        QPoly nf = normal_form(QPoly::variable(vars, v), ca.gb);
        for (auto& [m, c] : nf.terms()) {
            auto idx = ca.sc.index_of(m);
            if (!idx) throw std::logic_error("normal form leaves the staircase");
            var_rows[v][*idx] = c.to_complex();
        }
    }

    std::vector<SingularPoint> out;
    for (auto& root : roots) {
        RankResult rr = numeric_rank(bt - root.value * CMat::Identity(long(d), long(d)), tol);
        if (rr.kernel.cols() == 0)
            throw SolveRetry("no eigenvector for an eigenvalue of the multiplication matrix");
        for (int kcol = 0; kcol < rr.kernel.cols(); ++kcol) {
            CVec w = rr.kernel.col(kcol);
            CD w1 = w(long(*one_idx));
            if (std::abs(w1) < 1e-8 * w.norm()) {
                warnings.push_back("chart " + ca.chart.name() +
                                   ": eigenvector with vanishing constant coordinate skipped");
                continue;
            }
            w /= w1;
            std::vector<CD> coords(6);
            for (std::size_t v = 0; v < 6; ++v) {
                CD acc(0);
                for (std::size_t i = 0; i < d; ++i) acc += var_rows[v][i] * w(long(i));
                coords[v] = acc;
            }
            try {
                coords = newton_refine(ca.grad, ca.f, coords, tol);
            } catch (const NumericFailure&) {
                warnings.push_back("chart " + ca.chart.name() +
                                   ": newton refinement failed for one candidate");
                continue;
            } catch (const NotOnSection&) {
                warnings.push_back("chart " + ca.chart.name() +
                                   ": refined candidate left the section");
                continue;
            }

            // try to snap to exact coordinates; an exact residual check gates it
            std::vector<GQ> pe(6);
            bool all_exact = true;
            for (std::size_t v = 0; v < 6 && all_exact; ++v) {
                auto re = rat_reconstruct(coords[v].real());
                auto im = rat_reconstruct(coords[v].imag());
                if (re && im) pe[v] = GQ(*re, *im);
                else all_exact = false;
            }
            if (all_exact) {
                if (!ca.f.evaluate<GQ>(pe).is_zero()) all_exact = false;
                for (auto& g : ca.grad)
                    if (all_exact && !g.evaluate<GQ>(pe).is_zero()) all_exact = false;
            }

            SingularPoint sp;
            sp.exact = all_exact;
            if (all_exact) {
                sp.location = lift_exact_point(ca.chart, pe);
            } else {
                sp.location = lift_numeric_point(ca.chart, coords);
            }
            out.push_back(std::move(sp));
        }
    }
    return out;
}

inline bool point_less(const SingularPoint& a, const SingularPoint& b) {
    for (int f = 0; f < 3; ++f)
        for (int x = 0; x < 3; ++x) {
            CD ca = a.location.c[std::size_t(f)][std::size_t(x)];
            CD cb = b.location.c[std::size_t(f)][std::size_t(x)];
            if (std::abs(ca.real() - cb.real()) > 1e-9) return ca.real() < cb.real();
            if (std::abs(ca.imag() - cb.imag()) > 1e-9) return ca.imag() < cb.imag();
        }
    return false;
}

} // namespace detail

inline SectionClassification classify_state(const StateTensor& raw_state,
                                            const ClassifyOptions& opt = {}) {
    StateTensor state = raw_state.scale_normalized();
    Poly<GQ> full = section_polynomial(state);
    std::vector<ChartAnalysis> analyses = analyze_charts(full);

    SectionClassification res;
    res.tolerances = opt.tol;
    for (auto& ca : analyses) {
        ChartReport cr;
        cr.chart = ca.chart;
        cr.dim = ca.dim;
        cr.quotient_dim = (ca.dim == 0) ? int(ca.sc.dimension()) : 0;
        res.charts.push_back(cr);
    }

    for (auto& ca : analyses)
        if (ca.dim >= 1) {
            res.verdict = Verdict::NonIsolated;
            res.nonisolated_witness = ca.chart;
            res.nonisolated_dim = ca.dim;
            res.milnor_complete = false;
            res.stratum = {StratumKind::Cusp, 0};
            res.warnings.push_back("non-isolated singular locus (dim " +
                                   std::to_string(ca.dim) + " in chart " + ca.chart.name() +
                                   "): Milnor data not finite");
            return res;
        }

    bool any_singular = false;
    for (auto& ca : analyses)
        if (ca.dim == 0) any_singular = true;
    if (!any_singular) {
        res.verdict = Verdict::Smooth;
        res.stratum = {StratumKind::NotOnDual, 0};
        return res;
    }

    std::string last_error;
    for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
        std::vector<std::string> warnings;
        std::vector<SingularPoint> points;
        try {
            // gather candidates chart by chart and merge projectively
            for (auto& ca : analyses) {
                if (ca.dim != 0) continue;
                std::uint64_t useed =
                    opt.seed * 1000003u + std::uint64_t(attempt) * 10007u + std::uint64_t(ca.chart.base3());
                for (auto& cand : detail::solve_chart(ca, useed, opt.tol, warnings)) {
                    bool merged = false;
                    for (auto& known : points) {
                        double dist = known.location.distance(cand.location);
                        if (dist < opt.tol.dedupe_tolerance) {
                            if (cand.exact && !known.exact) known = cand;
                            merged = true;
                            break;
                        }
                        if (dist < 10.0 * opt.tol.dedupe_tolerance)
                            warnings.push_back("near-collision between distinct singular points");
                    }
                    if (!merged) points.push_back(cand);
                }
            }

            // local type of each point, computed in its home chart
            for (auto& sp : points) {
                sp.chart = sp.location.home_chart();
                const ChartAnalysis& ha = analyses[std::size_t(sp.chart.base3())];
                if (sp.exact) {
                    sp.exact_coords = detail::chart_coords_exact(sp.location, sp.chart);
                    sp.coords.clear();
                    for (auto& q : sp.exact_coords) sp.coords.push_back(q.to_complex());
                    sp.type = classify_point(ha.f, sp.exact_coords, opt.series_trunc);
                    if (sp.type.milnor < 0 && ha.dim == 0) {
                        auto mu = milnor_oracle(ha.f, sp.exact_coords,
                                                int(ha.sc.dimension()) + 2);
                        if (mu) sp.type.milnor = *mu;
                    }
                } else {
                    sp.coords = detail::chart_coords_numeric(sp.location, sp.chart);
                    sp.type = classify_point(ha.f, sp.coords, opt.tol, opt.series_trunc);
                }
            }

            // every chart must account for its full local multiplicity
            for (auto& ca : analyses) {
                if (ca.dim != 0) continue;
                int expected = int(ca.sc.dimension());
                int sum = 0;
                bool known = true;
                for (auto& sp : points) {
                    if (!detail::point_in_chart(sp, ca.chart, 1e-8)) continue;
                    if (sp.type.milnor < 0) { known = false; break; }
                    sum += sp.type.milnor;
                }
                if (!known) {
                    warnings.push_back("chart " + ca.chart.name() +
                                       ": multiplicity check skipped (unknown Milnor number)");
                    continue;
                }
                if (sum != expected)
                    throw detail::SolveRetry("chart " + ca.chart.name() + ": Milnor sum " +
                                             std::to_string(sum) + " != local multiplicity " +
                                             std::to_string(expected));
            }
        } catch (const detail::SolveRetry& e) {
            last_error = e.what();
            continue;
        } catch (const NumericFailure& e) {
            last_error = e.what();
            continue;
        }

        std::sort(points.begin(), points.end(), detail::point_less);
        res.points = std::move(points);
        res.warnings.insert(res.warnings.end(), warnings.begin(), warnings.end());
        res.verdict = Verdict::Isolated;
        res.milnor_sum = 0;
        bool all_a1 = true;
        for (auto& sp : res.points) {
            if (sp.type.milnor < 0) res.milnor_complete = false;
            else res.milnor_sum += sp.type.milnor;
            if (!(sp.type.kind == LocalKind::A && sp.type.index == 1 && !sp.type.truncated))
                all_a1 = false;
        }
        if (res.points.size() == 1 && all_a1)
            res.stratum = {StratumKind::DualSmooth, 1};
        else if (all_a1)
            res.stratum = {StratumKind::Node, res.milnor_sum};
        else
            res.stratum = {StratumKind::Cusp, res.milnor_sum};
        return res;
    }

    throw ConsistencyError("classification did not stabilize after " +
                           std::to_string(opt.max_attempts) + " attempts: " + last_error);
}

} // namespace qsing
