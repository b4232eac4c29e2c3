// Nurmiev normal forms: the 24 nullcone representatives and the 19
// parameter families, their constraints, generic sampling, expected section
// types, and the regression runner.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "classify.hpp"

namespace qsing {

struct ConstraintViolated : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Expectation {
    Verdict verdict = Verdict::Isolated;
    std::vector<std::string> labels; // sorted point-type labels, empty unless isolated
};

struct NormalForm {
    std::string id;   // "N1".."N24" or "F1,1".."F4,6"
    int family = 0;   // 0 for nullcone rows, 1..4 otherwise
    std::vector<std::string> kets; // unit-coefficient basis terms "ijk"
    bool x1 = false, x2 = false, x3 = false; // a X1 / b X2 / c X3 parts
    Expectation generic;
    std::optional<Expectation> a_zero; // printed special regime of family 2

    bool parametric() const { return family != 0; }
};

namespace detail {

inline Expectation morse(int n) {
    Expectation e;
    e.labels.assign(std::size_t(n), "A1");
    return e;
}
inline Expectation single(const char* label) {
    Expectation e;
    e.labels = {label};
    return e;
}
inline Expectation nonisolated() {
    Expectation e;
    e.verdict = Verdict::NonIsolated;
    return e;
}
inline Expectation smooth() {
    Expectation e;
    e.verdict = Verdict::Smooth;
    return e;
}

} // namespace detail

inline const std::vector<NormalForm>& nurmiev_catalog() {
    static const std::vector<NormalForm> rows = [] {
        std::vector<NormalForm> r;
        auto nrow = [&](const char* id, std::vector<std::string> kets, Expectation e) {
            NormalForm nf;
            nf.id = id;
            nf.kets = std::move(kets);
            nf.generic = std::move(e);
            r.push_back(std::move(nf));
        };
        auto frow = [&](const char* id, int family, bool x1, bool x2, bool x3,
                        std::vector<std::string> kets, Expectation e,
                        std::optional<Expectation> a0 = std::nullopt) {
            NormalForm nf;
            nf.id = id;
            nf.family = family;
            nf.kets = std::move(kets);
            nf.x1 = x1;
            nf.x2 = x2;
            nf.x3 = x3;
            nf.generic = std::move(e);
            nf.a_zero = std::move(a0);
            r.push_back(std::move(nf));
        };
        using namespace detail;

        nrow("N1", {"012", "021", "102", "111", "120", "200"}, single("A3"));
        nrow("N2", {"012", "021", "102", "110", "111", "200"}, single("D4"));
        nrow("N3", {"002", "011", "020", "101", "112", "200"}, nonisolated());
        nrow("N4", {"002", "011", "101", "110", "220"}, nonisolated());
        nrow("N5", {"002", "020", "021", "110", "201"}, nonisolated());
        nrow("N6", {"002", "011", "101", "120", "210"}, nonisolated());
        nrow("N7", {"002", "011", "020", "101", "210"}, nonisolated());
        nrow("N8", {"002", "020", "111", "200"}, nonisolated());
        nrow("N9", {"000", "011", "111", "122"}, nonisolated());
        nrow("N10", {"002", "011", "020", "101", "110", "200"}, nonisolated());
        nrow("N11", {"002", "020", "101", "210"}, nonisolated());
        nrow("N12", {"002", "020", "100", "111"}, nonisolated());
        nrow("N13", {"002", "011", "020", "101", "110"}, nonisolated());
        nrow("N14", {"002", "010", "021", "100", "201"}, nonisolated());
        nrow("N15", {"011", "022", "100"}, nonisolated());
        nrow("N16", {"002", "011", "020", "100"}, nonisolated());
        nrow("N17", {"001", "010", "102", "120"}, nonisolated());
        nrow("N18", {"000", "011", "101", "112"}, nonisolated());
        nrow("N19", {"002", "010", "101"}, nonisolated());
        nrow("N20", {"000", "111"}, nonisolated());
        nrow("N21", {"001", "010", "100"}, nonisolated());
        nrow("N22", {"000", "011", "022"}, nonisolated());
        nrow("N23", {"000", "011"}, nonisolated());
        nrow("N24", {"000"}, nonisolated());

        frow("F1,1", 1, true, true, true, {}, smooth());
        // the a=0 sections carry extra tangencies: the cyclic relabeling
        // taking X2 to X1 identifies them with the corresponding third-family
        // rows, so the counts continue the 4A1 / 5A1 / 6A1 ladder
        frow("F2,1", 2, true, true, false, {"021", "102"}, single("A1"), morse(4));
        frow("F2,2", 2, true, true, false, {"021"}, morse(2), morse(5));
        frow("F2,3", 2, true, true, false, {"201"}, morse(3), morse(6));
        frow("F3,1", 3, true, false, false, {"012", "021", "102", "120"}, morse(2));
        frow("F3,2", 3, true, false, false, {"012", "021", "102"}, morse(3));
        frow("F3,3", 3, true, false, false, {"012", "021", "120"}, morse(3));
        frow("F3,4", 3, true, false, false, {"012", "021"}, morse(4));
        frow("F3,5", 3, true, false, false, {"012", "120"}, morse(4));
        frow("F3,6", 3, true, false, false, {"021", "102"}, morse(4));
        frow("F3,7", 3, true, false, false, {"012"}, morse(5));
        frow("F3,8", 3, true, false, false, {"021"}, morse(5));
        frow("F3,9", 3, true, false, false, {}, morse(6));
        frow("F4,1", 4, false, true, true, {"002", "020", "111", "200"}, single("A2"));
        frow("F4,2", 4, false, true, true, {"002", "011", "020", "101", "110", "200"},
             single("A3"));
        frow("F4,3", 4, false, true, true, {"000", "111"}, single("D4"));
        frow("F4,4", 4, false, true, true, {"001", "010", "100", "200"}, nonisolated());
        frow("F4,5", 4, false, true, true, {"000"}, nonisolated());
        frow("F4,6", 4, false, true, true, {}, nonisolated());
        return r;
    }();
    return rows;
}

inline const NormalForm& catalog_row(const std::string& id) {
    for (auto& nf : nurmiev_catalog())
        if (nf.id == id) return nf;
    throw std::invalid_argument("unknown catalog row: " + id);
}

inline void check_constraints(const NormalForm& nf, const GQ& a, const GQ& b, const GQ& c) {
    auto cube = [](const GQ& x) { return x * x * x; };
    switch (nf.family) {
    case 0:
        return; // parameter-free
    case 1: {
        if ((a * b * c).is_zero())
            throw ConstraintViolated(nf.id + ": abc must be nonzero");
        GQ s = cube(a) + cube(b) + cube(c);
        GQ t = GQ(3) * a * b * c;
        if ((cube(s) - cube(t)).is_zero())
            throw ConstraintViolated(nf.id + ": (a^3+b^3+c^3)^3 - (3abc)^3 must be nonzero");
        return;
    }
    case 2:
        if (!c.is_zero()) throw ConstraintViolated(nf.id + ": c must be zero");
        if ((b * (cube(a) + cube(b))).is_zero())
            throw ConstraintViolated(nf.id + ": b(a^3+b^3) must be nonzero");
        return;
    case 3:
        if (a.is_zero()) throw ConstraintViolated(nf.id + ": a must be nonzero");
        if (!b.is_zero() || !c.is_zero())
            throw ConstraintViolated(nf.id + ": b and c must be zero");
        return;
    case 4:
        if (!a.is_zero()) throw ConstraintViolated(nf.id + ": a must be zero");
        if (b.is_zero() || !(c == -b))
            throw ConstraintViolated(nf.id + ": needs c = -b != 0");
        return;
    default:
        throw std::logic_error("bad family index");
    }
}

inline StateTensor build_state(const NormalForm& nf, const GQ& a = GQ(), const GQ& b = GQ(),
                               const GQ& c = GQ()) {
    check_constraints(nf, a, b, c);
    StateTensor st;
    auto add = [&](const char* s, const GQ& coeff) {
        st.at(s[0] - '0', s[1] - '0', s[2] - '0') += coeff;
    };
    if (nf.x1) { add("000", a); add("111", a); add("222", a); }
    if (nf.x2) { add("012", b); add("120", b); add("201", b); }
    if (nf.x3) { add("021", c); add("102", c); add("210", c); }
    for (auto& k : nf.kets) add(k.c_str(), GQ(1));
    st.validate();
    return st;
}

struct ParamSample {
    GQ a, b, c;
};

// Random small-rational parameters satisfying the row's constraints; the
// a=0 regime pins a (and c) and samples only b.
inline ParamSample sample_params(const NormalForm& nf, std::mt19937_64& rng,
                                 bool a_zero_regime = false) {
    std::uniform_int_distribution<int> num(-7, 7);
    std::uniform_int_distribution<int> den(1, 7);
    auto rnd = [&]() {
        int n = num(rng);
        while (n == 0) n = num(rng);
        Rat q(n, (unsigned long)den(rng));
        q.canonicalize();
        return GQ(q);
    };
    for (int tries = 0; tries < 1000; ++tries) {
        ParamSample p;
        switch (nf.family) {
        case 0: return p;
        case 1: p.a = rnd(); p.b = rnd(); p.c = rnd(); break;
        case 2: p.a = a_zero_regime ? GQ() : rnd(); p.b = rnd(); break;
        case 3: p.a = rnd(); break;
        case 4: p.b = rnd(); p.c = -p.b; break;
        default: throw std::logic_error("bad family index");
        }
        try {
            check_constraints(nf, p.a, p.b, p.c);
            return p;
        } catch (const ConstraintViolated&) {
            continue;
        }
    }
    throw std::logic_error("parameter sampling did not terminate");
}

inline Expectation expected(const std::string& id, const std::string& regime = "") {
    const NormalForm& nf = catalog_row(id);
    if (regime.empty()) return nf.generic;
    if (regime == "a=0" && nf.a_zero) return *nf.a_zero;
    throw std::invalid_argument("row " + id + " has no regime '" + regime + "'");
}

inline std::vector<std::string> observed_labels(const SectionClassification& res) {
    std::vector<std::string> out;
    for (auto& sp : res.points) out.push_back(sp.type.label());
    std::sort(out.begin(), out.end());
    return out;
}

struct RowOutcome {
    std::string id;
    std::string regime; // "" or "a=0"
    Expectation expect;
    std::vector<Verdict> sample_verdicts;
    std::vector<std::vector<std::string>> sample_labels;
    std::vector<int> sample_milnor_sums;
    bool samples_agree = true;
    bool matches_expectation = true;
    std::vector<std::string> warnings;
};

struct CatalogReport {
    std::vector<RowOutcome> rows;
    bool all_match = true;
};

inline RowOutcome run_row(const NormalForm& nf, const std::string& regime, int samples,
                          std::uint64_t seed, const ClassifyOptions& opt = {}) {
    RowOutcome out;
    out.id = nf.id;
    out.regime = regime;
    out.expect = expected(nf.id, regime);
    int n = nf.parametric() ? samples : 1;
    std::mt19937_64 rng(seed);
    for (int s = 0; s < n; ++s) {
        ParamSample p = sample_params(nf, rng, regime == "a=0");
        SectionClassification res = classify_state(build_state(nf, p.a, p.b, p.c), opt);
        out.sample_verdicts.push_back(res.verdict);
        out.sample_labels.push_back(observed_labels(res));
        out.sample_milnor_sums.push_back(res.milnor_sum);
        for (auto& w : res.warnings) out.warnings.push_back(nf.id + ": " + w);
    }
    for (int s = 1; s < n; ++s)
        if (out.sample_verdicts[std::size_t(s)] != out.sample_verdicts[0] ||
            out.sample_labels[std::size_t(s)] != out.sample_labels[0]) {
            out.samples_agree = false;
            out.warnings.push_back(nf.id + ": samples disagree (genericity suspect)");
        }
    for (int s = 0; s < n; ++s)
        if (out.sample_verdicts[std::size_t(s)] != out.expect.verdict ||
            out.sample_labels[std::size_t(s)] != out.expect.labels)
            out.matches_expectation = false;
    return out;
}

inline CatalogReport run_catalog(int samples_per_row = 2, std::uint64_t seed = 9001,
                                 const std::vector<std::string>& only = {},
                                 const ClassifyOptions& opt = {}) {
    if (samples_per_row < 2)
        throw std::invalid_argument("run_catalog: need at least 2 samples per row");
    CatalogReport rep;
    for (auto& nf : nurmiev_catalog()) {
        if (!only.empty() &&
            std::find(only.begin(), only.end(), nf.id) == only.end())
            continue;
        std::uint64_t rowseed = seed + std::hash<std::string>{}(nf.id);
        rep.rows.push_back(run_row(nf, "", samples_per_row, rowseed, opt));
        if (nf.a_zero)
            rep.rows.push_back(run_row(nf, "a=0", samples_per_row, rowseed ^ 0x5a5au, opt));
    }
    for (auto& row : rep.rows)
        if (!row.matches_expectation) rep.all_match = false;
    return rep;
}

} // namespace qsing
