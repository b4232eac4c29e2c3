// Sparse multivariate polynomials and truncated power series over an exact
// or floating scalar field.
#pragma once

#include <algorithm>
#include <cassert>
#include <complex>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"

namespace qsing {

using VarList = std::vector<std::string>;
using VarListPtr = std::shared_ptr<const VarList>;

inline VarListPtr make_vars(std::vector<std::string> names) {
    return std::make_shared<const VarList>(std::move(names));
}

struct Monomial {
    std::vector<int> e;

    Monomial() = default;
    explicit Monomial(std::size_t nvars) : e(nvars, 0) {}
    explicit Monomial(std::vector<int> exps) : e(std::move(exps)) {}

    int degree() const { return std::accumulate(e.begin(), e.end(), 0); }
    bool is_one() const { return degree() == 0; }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        assert(a.e.size() == b.e.size());
        Monomial m(a.e.size());
        for (std::size_t i = 0; i < a.e.size(); ++i) m.e[i] = a.e[i] + b.e[i];
        return m;
    }
    bool divides(const Monomial& b) const {
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > b.e[i]) return false;
        return true;
    }
    // b / a, requires divisibility
    friend Monomial operator/(const Monomial& b, const Monomial& a) {
        Monomial m(a.e.size());
        for (std::size_t i = 0; i < a.e.size(); ++i) m.e[i] = b.e[i] - a.e[i];
        return m;
    }
    static Monomial lcm(const Monomial& a, const Monomial& b) {
        Monomial m(a.e.size());
        for (std::size_t i = 0; i < a.e.size(); ++i) m.e[i] = std::max(a.e[i], b.e[i]);
        return m;
    }
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }
};

enum class OrderKind { Degrevlex, Lex };

// Strict "less" on monomials; larger means closer to the leading term.
struct MonoLess {
    OrderKind kind = OrderKind::Degrevlex;

    bool operator()(const Monomial& a, const Monomial& b) const {
        if (kind == OrderKind::Lex) {
            for (std::size_t i = 0; i < a.e.size(); ++i)
                if (a.e[i] != b.e[i]) return a.e[i] < b.e[i];
            return false;
        }
        int da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        // rightmost nonzero entry of a-b positive  =>  a smaller
        for (std::size_t i = a.e.size(); i-- > 0;) {
            int d = a.e[i] - b.e[i];
            if (d != 0) return d > 0;
        }
        return false;
    }
};

namespace detail {
template <class K> struct FieldOps;

template <> struct FieldOps<GQ> {
    static GQ zero() { return GQ(); }
    static GQ one() { return GQ(1); }
    static bool is_zero(const GQ& a) { return a.is_zero(); }
    static GQ inv(const GQ& a) { return a.inverse(); }
    static std::string str(const GQ& a) { return a.str(); }
};

template <> struct FieldOps<std::complex<double>> {
    using C = std::complex<double>;
    static C zero() { return {0.0, 0.0}; }
    static C one() { return {1.0, 0.0}; }
    static bool is_zero(const C& a) { return a.real() == 0.0 && a.imag() == 0.0; }
    static C inv(const C& a) { return 1.0 / a; }
    static std::string str(const C& a) {
        std::ostringstream os;
        os << a.real() << (a.imag() < 0 ? "" : "+") << a.imag() << "i";
        return os.str();
    }
};
} // namespace detail

template <class K>
class Poly {
public:
    using TermMap = std::map<Monomial, K, MonoLess>;
    using Ops = detail::FieldOps<K>;

    Poly() = default;
    explicit Poly(VarListPtr vars, OrderKind kind = OrderKind::Degrevlex)
        : vars_(std::move(vars)), terms_(MonoLess{kind}) {}

    static Poly constant(VarListPtr vars, K c, OrderKind kind = OrderKind::Degrevlex) {
        Poly p(std::move(vars), kind);
        if (!Ops::is_zero(c)) p.terms_.emplace(Monomial(p.nvars()), std::move(c));
        return p;
    }
    static Poly variable(VarListPtr vars, std::size_t i, OrderKind kind = OrderKind::Degrevlex) {
        Poly p(vars, kind);
        Monomial m(p.nvars());
        m.e.at(i) = 1;
        p.terms_.emplace(std::move(m), Ops::one());
        return p;
    }

    const VarListPtr& vars() const { return vars_; }
    std::size_t nvars() const { return vars_ ? vars_->size() : 0; }
    OrderKind order() const { return terms_.key_comp().kind; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int total_degree() const {
        int d = -1;
        for (auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }
    int degree_in(std::size_t var) const {
        int d = 0;
        for (auto& [m, c] : terms_) d = std::max(d, m.e[var]);
        return d;
    }

    void add_term(const Monomial& m, const K& c) {
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (!Ops::is_zero(c)) terms_.emplace(m, c);
        } else {
            it->second += c;
            if (Ops::is_zero(it->second)) terms_.erase(it);
        }
    }

    K coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Ops::zero() : it->second;
    }
    K constant_term() const { return coeff(Monomial(nvars())); }

    const std::pair<const Monomial, K>& leading() const {
        if (terms_.empty()) throw std::logic_error("leading term of zero polynomial");
        return *terms_.rbegin();
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        a.check_compatible(b);
        Poly r = a;
        for (auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        a.check_compatible(b);
        Poly r = a;
        for (auto& [m, c] : b.terms_) r.add_term(m, -c);
        return r;
    }
    friend Poly operator-(const Poly& a) {
        Poly r = a;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        a.check_compatible(b);
        Poly r(a.vars_, a.order());
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }
    Poly& operator+=(const Poly& b) { *this = *this + b; return *this; }
    Poly& operator-=(const Poly& b) { *this = *this - b; return *this; }
    Poly& operator*=(const Poly& b) { *this = *this * b; return *this; }

    Poly scaled(const K& s) const {
        Poly r(vars_, order());
        if (Ops::is_zero(s)) return r;
        for (auto& [m, c] : terms_) r.terms_.emplace(m, c * s);
        return r;
    }
    // coeff * monomial * this
    Poly mul_term(const Monomial& m, const K& c) const {
        Poly r(vars_, order());
        if (Ops::is_zero(c)) return r;
        for (auto& [tm, tc] : terms_) r.terms_.emplace(tm * m, tc * c);
        return r;
    }
    Poly monic() const {
        if (is_zero()) return *this;
        return scaled(Ops::inv(leading().second));
    }

    Poly with_order(OrderKind kind) const {
        if (kind == order()) return *this;
        Poly r(vars_, kind);
        for (auto& [m, c] : terms_) r.terms_.emplace(m, c);
        return r;
    }

    Poly differentiate(std::size_t var) const {
        if (var >= nvars()) throw std::invalid_argument("differentiate: unknown variable");
        Poly r(vars_, order());
        for (auto& [m, c] : terms_) {
            if (m.e[var] == 0) continue;
            Monomial n = m;
            int k = n.e[var]--;
            K ck = c;
            for (int i = 1; i < k; ++i) ck += c; // c * k without assuming int conversion
            r.add_term(n, ck);
        }
        return r;
    }

    template <class S>
    S evaluate(const std::vector<S>& point) const {
        if (point.size() != nvars())
            throw std::invalid_argument("evaluate: point length mismatch");
        S acc = detail::FieldOps<S>::zero();
        for (auto& [m, c] : terms_) {
            S t = convert_scalar<S>(c);
            for (std::size_t i = 0; i < point.size(); ++i)
                for (int k = 0; k < m.e[i]; ++k) t *= point[i];
            acc += t;
        }
        return acc;
    }

    // Full polynomial substitution: variable i -> values[i].
    Poly substitute_polys(const std::vector<Poly>& values) const {
        if (values.size() != nvars())
            throw std::invalid_argument("substitute: arity mismatch");
        Poly acc;
        bool first = true;
        for (auto& [m, c] : terms_) {
            Poly t = Poly::constant(values.empty() ? vars_ : values[0].vars(), c,
                                    values.empty() ? order() : values[0].order());
            for (std::size_t i = 0; i < values.size(); ++i)
                for (int k = 0; k < m.e[i]; ++k) t = t * values[i];
            if (first) { acc = t; first = false; }
            else acc += t;
        }
        if (first) {
            VarListPtr tv = values.empty() ? vars_ : values[0].vars();
            acc = Poly(tv, values.empty() ? order() : values[0].order());
        }
        return acc;
    }

    // Drop terms whose coefficient magnitude is negligible (floating K only).
    void chop(double eps);

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            if (!first) os << " + ";
            first = false;
            os << Ops::str(it->second);
            for (std::size_t i = 0; i < it->first.e.size(); ++i) {
                if (it->first.e[i] == 0) continue;
                os << "*" << (*vars_)[i];
                if (it->first.e[i] > 1) os << "^" << it->first.e[i];
            }
        }
        return os.str();
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (auto& [m, c] : a.terms_) {
            auto it = b.terms_.find(m);
            if (it == b.terms_.end() || !(it->second == c)) return false;
        }
        return true;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

private:
    template <class S>
    static S convert_scalar(const K& c);

    void check_compatible(const Poly& b) const {
        if (!vars_ || !b.vars_ || (vars_ != b.vars_ && *vars_ != *b.vars_))
            throw std::invalid_argument("polynomial variable lists differ");
    }

    VarListPtr vars_;
    TermMap terms_;
};

template <>
template <class S>
S Poly<GQ>::convert_scalar(const GQ& c) {
    if constexpr (std::is_same_v<S, GQ>) return c;
    else return c.to_complex();
}

template <>
template <class S>
S Poly<std::complex<double>>::convert_scalar(const std::complex<double>& c) {
    static_assert(std::is_same_v<S, std::complex<double>>);
    return c;
}

template <>
inline void Poly<std::complex<double>>::chop(double eps) {
    double scale = 0.0;
    for (auto& [m, c] : terms_) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) return;
    for (auto it = terms_.begin(); it != terms_.end();)
        it = (std::abs(it->second) <= eps * scale) ? terms_.erase(it) : std::next(it);
}

template <>
inline void Poly<GQ>::chop(double) {}

inline Poly<std::complex<double>> to_numeric(const Poly<GQ>& p) {
    Poly<std::complex<double>> r(p.vars(), p.order());
    for (auto& [m, c] : p.terms()) r.add_term(m, c.to_complex());
    return r;
}

// ---------------------------------------------------------------------------
// Truncated power series: a polynomial body plus a truncation degree N.
// All arithmetic drops terms of total degree > N.
template <class K>
struct Series {
    Poly<K> body;
    int trunc = 0;

    Series() = default;
    Series(Poly<K> b, int n) : body(std::move(b)), trunc(n) { truncate(); }

    void truncate() {
        Poly<K> r(body.vars(), body.order());
        for (auto& [m, c] : body.terms())
            if (m.degree() <= trunc) r.add_term(m, c);
        body = std::move(r);
    }

    // Lowest total degree with a nonzero term, or -1 when identically zero.
    int order_of_vanishing() const {
        int best = -1;
        for (auto& [m, c] : body.terms()) {
            int d = m.degree();
            if (best < 0 || d < best) best = d;
        }
        return best;
    }

    friend Series operator+(const Series& a, const Series& b) {
        return Series(a.body + b.body, std::min(a.trunc, b.trunc));
    }
    friend Series operator-(const Series& a, const Series& b) {
        return Series(a.body - b.body, std::min(a.trunc, b.trunc));
    }
    friend Series operator*(const Series& a, const Series& b) {
        int n = std::min(a.trunc, b.trunc);
        Poly<K> r(a.body.vars(), a.body.order());
        for (auto& [ma, ca] : a.body.terms()) {
            if (ma.degree() > n) continue;
            for (auto& [mb, cb] : b.body.terms()) {
                Monomial m = ma * mb;
                if (m.degree() <= n) r.add_term(m, ca * cb);
            }
        }
        return Series(std::move(r), n);
    }
};

// Substitute series for (some) variables of p.  bindings[i], when present,
// replaces variable i; unbound variables pass through as themselves.  All
// bound series must share one target variable list and truncation degree.
template <class K>
Series<K> substitute(const Poly<K>& p, const std::vector<std::optional<Series<K>>>& bindings) {
    if (bindings.size() != p.nvars())
        throw std::invalid_argument("substitute: bindings arity mismatch");
    VarListPtr tv;
    int trunc = -1;
    for (auto& b : bindings)
        if (b) {
            tv = b->body.vars();
            trunc = (trunc < 0) ? b->trunc : std::min(trunc, b->trunc);
        }
    if (!tv) { tv = p.vars(); trunc = p.total_degree() < 0 ? 0 : p.total_degree(); }

    std::vector<Series<K>> values;
    values.reserve(bindings.size());
    for (std::size_t i = 0; i < bindings.size(); ++i) {
        if (bindings[i]) values.push_back(*bindings[i]);
        else {
            // pass-through: requires the target list to contain the same name
            auto& name = (*p.vars())[i];
            auto it = std::find(tv->begin(), tv->end(), name);
            if (it == tv->end())
                throw std::invalid_argument("substitute: unbound variable " + name +
                                            " missing from target variable list");
            values.emplace_back(Poly<K>::variable(tv, std::size_t(it - tv->begin()), p.order()),
                                trunc);
        }
    }

    Series<K> acc(Poly<K>(tv, p.order()), trunc);
    for (auto& [m, c] : p.terms()) {
        Series<K> t(Poly<K>::constant(tv, c, p.order()), trunc);
        for (std::size_t i = 0; i < values.size(); ++i)
            for (int k = 0; k < m.e[i]; ++k) t = t * values[i];
        acc = acc + t;
    }
    return acc;
}

} // namespace qsing
