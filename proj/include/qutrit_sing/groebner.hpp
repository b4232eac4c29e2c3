// Buchberger's algorithm over Q(i) with the classic pair-elimination
// criteria, plus the derived ideal data used by the classifier: Krull
// dimension, quotient staircases, multiplication matrices and local
// algebra dimensions.
#pragma once

#include <deque>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "exact_linalg.hpp"
#include "poly.hpp"

namespace qsing {

using QPoly = Poly<GQ>;

struct NotZeroDimensional : std::runtime_error {
    NotZeroDimensional() : std::runtime_error("ideal is not zero-dimensional") {}
};

struct IdealBasis {
    std::vector<QPoly> generators;
    OrderKind order = OrderKind::Degrevlex;
    bool reduced = false;

    bool contains_unit() const {
        for (auto& g : generators)
            if (!g.is_zero() && g.leading().first.is_one()) return true;
        return false;
    }
};

// Remainder of p on division by the basis; no term of the result is
// divisible by a leading term of the basis.
inline QPoly normal_form_by(QPoly p, const std::vector<QPoly>& basis, OrderKind order) {
    QPoly r(p.vars(), order);
    p = p.with_order(order);
    while (!p.is_zero()) {
        auto& [lm, lc] = p.leading();
        bool reduced_step = false;
        for (auto& g : basis) {
            if (g.is_zero()) continue;
            auto& [glm, glc] = g.leading();
            if (glm.divides(lm)) {
                p -= g.mul_term(lm / glm, lc / glc);
                reduced_step = true;
                break;
            }
        }
        if (!reduced_step) {
            r.add_term(lm, lc);
            QPoly t(p.vars(), order);
            t.add_term(lm, lc);
            p -= t;
        }
    }
    return r;
}

inline QPoly normal_form(QPoly p, const IdealBasis& basis) {
    return normal_form_by(std::move(p), basis.generators, basis.order);
}

namespace detail {

inline QPoly s_poly(const QPoly& f, const QPoly& g) {
    auto& [lf, cf] = f.leading();
    auto& [lg, cg] = g.leading();
    Monomial l = Monomial::lcm(lf, lg);
    return f.mul_term(l / lf, cf.inverse()) - g.mul_term(l / lg, cg.inverse());
}

} // namespace detail

// Reduced Groebner basis.  Pairs among the first `skip_prefix_pairs`
// generators are assumed to reduce to zero (used when extending a basis that
// is already a GB, or a set of monomials).
inline IdealBasis buchberger(std::vector<QPoly> gens, OrderKind order = OrderKind::Degrevlex,
                             std::size_t skip_prefix_pairs = 0) {
    if (gens.empty()) throw std::invalid_argument("buchberger: empty generator list");
    auto unit_basis = [&](const VarListPtr& vars) {
        QPoly one(vars, order);
        one.add_term(Monomial(vars->size()), GQ(1));
        return IdealBasis{{one}, order, true};
    };
    std::vector<QPoly> g;
    for (auto& p : gens) {
        auto q = p.with_order(order);
        if (!q.is_zero()) g.push_back(q.monic());
    }
    for (auto& q : g)
        if (q.leading().first.degree() == 0) return unit_basis(q.vars());
    std::size_t skip = std::min(skip_prefix_pairs, g.size());

    auto lcm_of = [&](std::size_t i, std::size_t j) {
        return Monomial::lcm(g[i].leading().first, g[j].leading().first);
    };
    // normal selection: smallest lcm degree first
    std::multimap<int, std::pair<std::size_t, std::size_t>> pending;
    std::set<std::pair<std::size_t, std::size_t>> in_queue;
    auto push_pair = [&](std::size_t i, std::size_t j) {
        pending.emplace(lcm_of(i, j).degree(), std::make_pair(i, j));
        in_queue.insert({i, j});
    };
    for (std::size_t j = 1; j < g.size(); ++j)
        for (std::size_t i = 0; i < j; ++i)
            if (j >= skip) push_pair(i, j);

    while (!pending.empty()) {
        auto [i, j] = pending.begin()->second;
        pending.erase(pending.begin());
        in_queue.erase({i, j});

        const Monomial& li = g[i].leading().first;
        const Monomial& lj = g[j].leading().first;
        Monomial l = Monomial::lcm(li, lj);
        // product criterion
        if (l == li * lj) continue;
        // chain criterion
        bool chained = false;
        for (std::size_t k = 0; k < g.size() && !chained; ++k) {
            if (k == i || k == j) continue;
            if (!g[k].leading().first.divides(l)) continue;
            auto key1 = std::minmax(i, k);
            auto key2 = std::minmax(j, k);
            if (!in_queue.count({key1.first, key1.second}) &&
                !in_queue.count({key2.first, key2.second}))
                chained = true;
        }
        if (chained) continue;

        QPoly r = normal_form_by(detail::s_poly(g[i], g[j]), g, order);
        if (!r.is_zero()) {
            // a unit settles the whole computation
            if (r.leading().first.degree() == 0) return unit_basis(r.vars());
            g.push_back(r.monic());
            for (std::size_t k = 0; k + 1 < g.size(); ++k) push_pair(k, g.size() - 1);
        }
    }

    // minimalize: drop elements whose leading term is divisible by another's
    std::vector<QPoly> minimal;
    for (std::size_t i = 0; i < g.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < g.size() && !redundant; ++j) {
            if (i == j) continue;
            auto& li = g[i].leading().first;
            auto& lj = g[j].leading().first;
            if (lj.divides(li) && (li != lj || j < i)) redundant = true;
        }
        if (!redundant) minimal.push_back(g[i]);
    }
    // interreduce tails
    IdealBasis result{{}, order, true};
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        IdealBasis others{{}, order, false};
        for (std::size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.generators.push_back(minimal[j]);
        QPoly r = others.generators.empty() ? minimal[i] : normal_form(minimal[i], others);
        result.generators.push_back(r.monic());
    }
    std::sort(result.generators.begin(), result.generators.end(),
              [&](const QPoly& a, const QPoly& b) {
                  return MonoLess{order}(a.leading().first, b.leading().first);
              });
    return result;
}

// Dimension of the affine variety: the largest cardinality of a variable
// subset meeting no leading-term support; -1 when the ideal is the unit ideal.
inline int krull_dimension(const IdealBasis& basis) {
    if (!basis.reduced) throw std::invalid_argument("krull_dimension: basis not reduced");
    if (basis.contains_unit()) return -1;
    std::size_t n = basis.generators.empty() ? 0 : basis.generators.front().nvars();
    std::vector<Monomial> lts;
    for (auto& g : basis.generators)
        if (!g.is_zero()) lts.push_back(g.leading().first);
    if (lts.empty()) return int(n);
    int best = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        int size = 0;
        for (std::size_t v = 0; v < n; ++v)
            if (mask & (1u << v)) ++size;
        if (size <= best) continue;
        bool independent = true;
        for (auto& lt : lts) {
            bool inside = true;
            for (std::size_t v = 0; v < n && inside; ++v)
                if (lt.e[v] > 0 && !(mask & (1u << v))) inside = false;
            if (inside) { independent = false; break; }
        }
        if (independent) best = size;
    }
    return best;
}

struct Staircase {
    std::vector<Monomial> standard_monomials; // sorted ascending (degrevlex)

    std::size_t dimension() const { return standard_monomials.size(); }
    std::optional<std::size_t> index_of(const Monomial& m) const {
        for (std::size_t i = 0; i < standard_monomials.size(); ++i)
            if (standard_monomials[i] == m) return i;
        return std::nullopt;
    }
};

// Monomials outside the leading-term ideal; finite iff dim <= 0.
inline Staircase quotient_basis(const IdealBasis& basis) {
    if (krull_dimension(basis) > 0) throw NotZeroDimensional();
    Staircase sc;
    if (basis.contains_unit()) return sc;
    std::size_t n = basis.generators.front().nvars();
    std::vector<Monomial> lts;
    for (auto& g : basis.generators) lts.push_back(g.leading().first);
    auto in_lt_ideal = [&](const Monomial& m) {
        for (auto& lt : lts)
            if (lt.divides(m)) return true;
        return false;
    };
    std::set<std::vector<int>> seen;
    std::deque<Monomial> queue;
    queue.emplace_back(n);
    seen.insert(queue.front().e);
    while (!queue.empty()) {
        Monomial m = queue.front();
        queue.pop_front();
        if (in_lt_ideal(m)) continue;
        sc.standard_monomials.push_back(m);
        for (std::size_t v = 0; v < n; ++v) {
            Monomial c = m;
            ++c.e[v];
            if (seen.insert(c.e).second) queue.push_back(c);
        }
    }
    std::sort(sc.standard_monomials.begin(), sc.standard_monomials.end(),
              [&](const Monomial& a, const Monomial& b) { return MonoLess{basis.order}(a, b); });
    return sc;
}

// Matrix of multiplication by u on the quotient algebra, staircase basis.
inline GQMat mult_matrix(const IdealBasis& basis, const Staircase& sc, const QPoly& u) {
    std::size_t d = sc.dimension();
    GQMat m(d, std::vector<GQ>(d));
    VarListPtr vars = basis.generators.front().vars();
    for (std::size_t j = 0; j < d; ++j) {
        QPoly mj(vars, basis.order);
        mj.add_term(sc.standard_monomials[j], GQ(1));
        QPoly nf = normal_form(u.with_order(basis.order) * mj, basis);
        for (auto& [mono, c] : nf.terms()) {
            auto idx = sc.index_of(mono);
            if (!idx) throw std::logic_error("mult_matrix: normal form leaves the staircase");
            m[*idx][j] = c;
        }
    }
    return m;
}

// dim K[x]/(gens + m^N) for increasing N; the value on first stabilization,
// nullopt when no two consecutive N agree up to maxDegree.
inline std::optional<int> local_algebra_dim(const std::vector<QPoly>& gens, int max_degree) {
    if (gens.empty()) throw std::invalid_argument("local_algebra_dim: empty generators");
    VarListPtr vars = gens.front().vars();
    std::size_t n = vars->size();
    IdealBasis base = buchberger(gens);
    if (base.contains_unit()) return 0;

    auto monomials_of_degree = [&](int deg) {
        std::vector<Monomial> out;
        Monomial m(n);
        // iterate compositions of deg into n parts
        std::vector<int> comp(n, 0);
        comp[0] = deg;
        while (true) {
            out.emplace_back(std::vector<int>(comp));
            // next composition
            if (comp[n - 1] == deg) break;
            int i = int(n) - 2;
            while (i >= 0 && comp[i] == 0) --i;
            if (i < 0) break;
            --comp[i];
            int rest = 0;
            for (std::size_t k = i + 1; k < n; ++k) { rest += comp[k]; comp[k] = 0; }
            comp[i + 1] = rest + 1;
        }
        return out;
    };

    std::optional<int> prev;
    for (int N = 1; N <= max_degree; ++N) {
        std::vector<QPoly> ext = base.generators;
        std::size_t prefix = ext.size();
        for (auto& mono : monomials_of_degree(N)) {
            QPoly p(vars, base.order);
            p.add_term(mono, GQ(1));
            ext.push_back(std::move(p));
        }
        IdealBasis gb = buchberger(ext, base.order, prefix);
        int dim = int(quotient_basis(gb).dimension());
        if (prev && *prev == dim) return dim;
        prev = dim;
    }
    return std::nullopt;
}

} // namespace qsing
