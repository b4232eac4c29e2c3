// Floating-point kernel: Aberth-Ehrlich univariate roots, SVD rank and
// nullspace extraction, Newton refinement of chart singular points.
#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "poly.hpp"
#include "univariate.hpp"

namespace qsing {

using CD = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

struct NumericTolerances {
    double rank_threshold = 1e-8;   // relative to the largest singular value
    double root_tolerance = 1e-13;
    double newton_tolerance = 1e-12;
    double dedupe_tolerance = 1e-7;
    int max_newton_iters = 100;
};

struct NumericFailure : std::runtime_error {
    explicit NumericFailure(const std::string& what) : std::runtime_error(what) {}
};
struct NotOnSection : std::runtime_error {
    explicit NotOnSection(const std::string& what) : std::runtime_error(what) {}
};

struct RootWithMultiplicity {
    CD value;
    int multiplicity = 1;
};

namespace detail {

inline CD horner(const std::vector<CD>& c, CD t) {
    if (c.empty()) return CD(0);
    CD acc = c.back();
    for (std::size_t i = c.size() - 1; i-- > 0;) acc = acc * t + c[i];
    return acc;
}

// Aberth-Ehrlich simultaneous iteration on a square-free polynomial.
inline std::vector<CD> aberth_roots(const std::vector<CD>& coeffs, double tol, int max_iters = 400) {
    int deg = int(coeffs.size()) - 1;
    if (deg < 1) return {};
    std::vector<CD> dcoeffs(static_cast<std::size_t>(deg));
    for (int i = 1; i <= deg; ++i) dcoeffs[std::size_t(i - 1)] = coeffs[std::size_t(i)] * double(i);

    double scale = 0.0;
    for (auto& c : coeffs) scale = std::max(scale, std::abs(c));
    // Cauchy-style radius bound
    double radius = 0.0;
    double lead = std::abs(coeffs.back());
    for (int i = 0; i < deg; ++i)
        radius = std::max(radius, std::pow(std::abs(coeffs[std::size_t(i)]) / lead, 1.0 / (deg - i)));
    radius = 2.0 * std::max(radius, 0.5);

    std::vector<CD> z(static_cast<std::size_t>(deg));
    for (int k = 0; k < deg; ++k) {
        double angle = 2.0 * M_PI * k / deg + 0.4; // offset avoids real-axis symmetry traps
        z[std::size_t(k)] = radius * CD(std::cos(angle), std::sin(angle));
    }

    for (int iter = 0; iter < max_iters; ++iter) {
        double max_step = 0.0;
        for (int k = 0; k < deg; ++k) {
            CD pk = horner(coeffs, z[std::size_t(k)]);
            CD dk = horner(dcoeffs, z[std::size_t(k)]);
            CD ratio = (dk == CD(0)) ? CD(0) : pk / dk;
            CD rep(0);
            for (int j = 0; j < deg; ++j)
                if (j != k) rep += 1.0 / (z[std::size_t(k)] - z[std::size_t(j)]);
            CD denom = 1.0 - ratio * rep;
            CD step = (denom == CD(0)) ? ratio : ratio / denom;
            z[std::size_t(k)] -= step;
            max_step = std::max(max_step, std::abs(step));
        }
        if (max_step < tol) break;
    }
    for (auto& r : z) {
        double res = std::abs(horner(coeffs, r));
        if (!(res <= 1e-6 * std::max(1.0, scale)))
            throw NumericFailure("aberth: residual " + std::to_string(res) + " after iteration cap");
    }
    return z;
}

} // namespace detail

// All complex roots with multiplicities of an exact univariate polynomial.
// Multiplicities come from the exact square-free decomposition; the numeric
// iteration only ever sees square-free factors.
inline std::vector<RootWithMultiplicity> univariate_roots(const Poly<GQ>& p,
                                                          const NumericTolerances& tol = {}) {
    UCoeffs c = uni_from_poly(p);
    if (uni_degree(c) < 1) throw std::invalid_argument("univariate_roots: degree < 1");
    auto factors = uni_squarefree(c);
    std::vector<RootWithMultiplicity> out;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (uni_degree(factors[i]) < 1) continue;
        std::vector<CD> fc;
        for (auto& k : factors[i]) fc.push_back(k.to_complex());
        for (auto& r : detail::aberth_roots(fc, tol.root_tolerance))
            out.push_back({r, int(i) + 1});
    }
    // residual soundness on the original polynomial's square-free part
    double scale = 0.0;
    std::vector<CD> pc;
    for (auto& k : c) pc.push_back(k.to_complex());
    for (auto& k : pc) scale = std::max(scale, std::abs(k));
    for (auto& r : out) {
        double res = std::abs(detail::horner(pc, r.value));
        // multiple roots are only first-order accurate in the residual
        double budget = std::pow(1e-6, 1.0 / r.multiplicity) * std::max(1.0, scale);
        if (!(res <= budget))
            throw NumericFailure("univariate_roots: residual check failed");
    }
    return out;
}

struct RankResult {
    int rank = 0;
    CMat kernel; // orthonormal columns spanning the numeric nullspace
    double sigma_gap = 0.0; // ratio of smallest accepted to largest rejected sv
    bool borderline = false;
};

inline RankResult numeric_rank(const CMat& m, const NumericTolerances& tol = {}) {
    Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv(0) : 0.0;
    RankResult out;
    if (smax == 0.0) {
        out.rank = 0;
        out.kernel = CMat::Identity(m.cols(), m.cols());
        return out;
    }
    double thresh = tol.rank_threshold * smax;
    int r = 0;
    while (r < sv.size() && sv(r) > thresh) ++r;
    out.rank = r;
    out.kernel = svd.matrixV().rightCols(m.cols() - r);
    if (r > 0 && r < sv.size() && sv(r) > 0.0) {
        out.sigma_gap = sv(r - 1) / sv(r);
        out.borderline = out.sigma_gap < 10.0;
    }
    return out;
}

// Newton iteration on the 6 gradient equations; f itself is checked at the
// end, not iterated on.  Falls back to damped least-squares steps when the
// Hessian is singular at the iterate.
inline std::vector<CD> newton_refine(const std::vector<Poly<GQ>>& grad, const Poly<GQ>& f,
                                     std::vector<CD> x, const NumericTolerances& tol = {}) {
    const std::size_t n = x.size();
    std::vector<Poly<GQ>> hess;
    hess.reserve(n * n);
    for (auto& g : grad)
        for (std::size_t j = 0; j < n; ++j) hess.push_back(g.differentiate(j));

    auto residual = [&](const std::vector<CD>& pt) {
        CVec r(long(grad.size()));
        for (std::size_t i = 0; i < grad.size(); ++i) r(long(i)) = grad[i].evaluate<CD>(pt);
        return r;
    };

    CVec r = residual(x);
    // Iterate past the residual tolerance until the step itself collapses:
    // at degenerate (singular-Hessian) targets the residual underestimates
    // the remaining distance.
    double step_norm = 1.0;
    for (int iter = 0;
         iter < tol.max_newton_iters && (r.norm() > tol.newton_tolerance || step_norm > 1e-13);
         ++iter) {
        CMat jac(long(grad.size()), long(n));
        for (std::size_t i = 0; i < grad.size(); ++i)
            for (std::size_t j = 0; j < n; ++j)
                jac(long(i), long(j)) = hess[i * n + j].evaluate<CD>(x);
        Eigen::JacobiSVD<CMat> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
        CVec step;
        double smax = svd.singularValues()(0);
        if (smax == 0.0) throw NumericFailure("newton_refine: zero Jacobian");
        if (svd.singularValues()(svd.singularValues().size() - 1) > 1e-10 * smax) {
            step = svd.solve(r);
        } else {
            // damped least squares near a singular Hessian
            double lambda = 1e-8 * smax;
            CMat a = jac.adjoint() * jac + lambda * CMat::Identity(long(n), long(n));
            step = a.ldlt().solve(jac.adjoint() * r);
        }
        for (std::size_t j = 0; j < n; ++j) x[j] -= step(long(j));
        step_norm = step.norm();
        CVec rn = residual(x);
        if (rn.norm() > 10.0 * r.norm() + 1.0)
            throw NumericFailure("newton_refine: divergent iteration");
        r = rn;
        if (step_norm < 1e-15) break;
    }
    if (r.norm() > tol.newton_tolerance)
        throw NumericFailure("newton_refine: no convergence after iteration cap");
    CD fval = f.evaluate<CD>(x);
    if (std::abs(fval) > tol.newton_tolerance * 10.0)
        throw NotOnSection("refined critical point violates |f| tolerance");
    return x;
}

} // namespace qsing
