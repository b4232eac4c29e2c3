// Semicontinuity experiments: exact rational jitters of a state, verdict
// tallies against the adjacency order A1 < A2 < A3 < D4, and directed scans
// along chosen deformation directions.
#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "classify.hpp"
#include "report.hpp"

namespace qsing {

// Adjacency closure of a point type: everything a small perturbation may
// produce locally.  Only the four admissible labels appear as keys.
inline const std::vector<std::string>& adjacency_closure(const std::string& label) {
    static const std::map<std::string, std::vector<std::string>> table = {
        {"A1", {"A1"}},
        {"A2", {"A1", "A2"}},
        {"A3", {"A1", "A2", "A3"}},
        {"D4", {"A1", "A2", "A3", "D4"}},
    };
    auto it = table.find(label);
    if (it == table.end())
        throw std::invalid_argument("no adjacency data for type " + label);
    return it->second;
}

// Exact rational jitter: a random subset of coefficients moves by eps * k/16
// with k uniform in [-16, 16] in both components, so perturbed states keep
// exact certificates.  The jitter is sparse (each coefficient is left alone
// with probability 3/4) so that a visible fraction of trials preserves the
// tangency and the on-dual outcomes show up alongside the smooth ones.
inline StateTensor rational_jitter(const StateTensor& base, const Rat& eps,
                                   std::mt19937_64& rng) {
    std::uniform_int_distribution<int> grid(-16, 16);
    std::uniform_int_distribution<int> touch(0, 3);
    StateTensor out = base;
    for (auto& c : out.h) {
        if (touch(rng) != 0) continue;
        Rat dre = eps * grid(rng);
        Rat dim = eps * grid(rng);
        dre /= 16;
        dim /= 16;
        dre.canonicalize();
        dim.canonicalize();
        c += GQ(dre, dim);
    }
    return out;
}

struct PerturbTrial {
    Verdict verdict = Verdict::Smooth;
    std::vector<std::string> labels;
    int milnor_sum = 0;
    std::string summary;
};

struct PerturbReport {
    PerturbTrial base;
    int trials = 0;
    std::map<std::string, int> tally; // summary -> count over perturbed states
    bool semicontinuity_ok = true;
    std::vector<std::string> violations;
    std::optional<StateTensor> violator;
};

namespace detail {

inline PerturbTrial trial_of(const SectionClassification& res) {
    PerturbTrial t;
    t.verdict = res.verdict;
    t.labels = observed_labels(res);
    t.milnor_sum = res.milnor_sum;
    t.summary = outcome_summary(res.verdict, t.labels);
    return t;
}

inline void check_trial(const PerturbTrial& base, const PerturbTrial& got,
                        const std::vector<std::string>& closure, PerturbReport& rep,
                        const StateTensor& witness, const std::string& who) {
    auto fail = [&](const std::string& msg) {
        rep.semicontinuity_ok = false;
        rep.violations.push_back(who + ": " + msg);
        if (!rep.violator) rep.violator = witness;
    };
    if (got.verdict == Verdict::NonIsolated) {
        fail("perturbation became non-isolated");
        return;
    }
    if (got.milnor_sum > base.milnor_sum)
        fail("milnor sum rose from " + std::to_string(base.milnor_sum) + " to " +
             std::to_string(got.milnor_sum));
    for (auto& l : got.labels)
        if (std::find(closure.begin(), closure.end(), l) == closure.end())
            fail("type " + l + " outside the adjacency closure");
}

} // namespace detail

inline PerturbReport run_perturb(const StateTensor& base, const Rat& eps, int trials,
                                 std::uint64_t seed, const ClassifyOptions& opt = {}) {
    PerturbReport rep;
    SectionClassification base_res = classify_state(base, opt);
    if (base_res.verdict != Verdict::Isolated)
        throw std::invalid_argument("perturbation base must have isolated singularities");
    rep.base = detail::trial_of(base_res);
    // union of the closures of every base point type
    std::vector<std::string> closure;
    for (auto& l : rep.base.labels)
        for (auto& m : adjacency_closure(l))
            if (std::find(closure.begin(), closure.end(), m) == closure.end())
                closure.push_back(m);
    std::mt19937_64 rng(seed);
    rep.trials = trials;
    for (int t = 0; t < trials; ++t) {
        StateTensor pert = rational_jitter(base, eps, rng);
        PerturbTrial got = detail::trial_of(classify_state(pert, opt));
        ++rep.tally[got.summary];
        detail::check_trial(rep.base, got, closure, rep, pert, "trial " + std::to_string(t));
    }
    return rep;
}

struct ScanDirection {
    std::string name;
    StateTensor delta; // added as eps * delta; need not be a valid state alone
};

struct ScanOutcome {
    std::string direction;
    PerturbTrial trial;
};

struct ScanReport {
    PerturbTrial base;
    std::vector<ScanOutcome> outcomes;
    bool semicontinuity_ok = true;
    std::vector<std::string> violations;
    std::optional<StateTensor> violator;
};

inline ScanReport run_scan(const StateTensor& base, const Rat& eps,
                           const std::vector<ScanDirection>& directions,
                           const ClassifyOptions& opt = {}) {
    ScanReport rep;
    SectionClassification base_res = classify_state(base, opt);
    if (base_res.verdict != Verdict::Isolated)
        throw std::invalid_argument("scan base must have isolated singularities");
    rep.base = detail::trial_of(base_res);
    std::vector<std::string> closure;
    for (auto& l : rep.base.labels)
        for (auto& m : adjacency_closure(l))
            if (std::find(closure.begin(), closure.end(), m) == closure.end())
                closure.push_back(m);
    PerturbReport proxy; // reuse the per-trial checker
    proxy.base = rep.base;
    proxy.semicontinuity_ok = true;
    for (auto& dir : directions) {
        StateTensor pert = base;
        for (std::size_t p = 0; p < 27; ++p) pert.h[p] += GQ(eps) * dir.delta.h[p];
        PerturbTrial got = detail::trial_of(classify_state(pert, opt));
        detail::check_trial(rep.base, got, closure, proxy, pert, dir.name);
        rep.outcomes.push_back({dir.name, std::move(got)});
    }
    rep.semicontinuity_ok = proxy.semicontinuity_ok;
    rep.violations = std::move(proxy.violations);
    rep.violator = std::move(proxy.violator);
    return rep;
}

// Deformation directions for a state whose singular point sits at the origin
// of `chart`: each entry adds one monomial of the local model, so the scan
// walks the versal family of the germ along coordinate directions.
inline ScanDirection ket_direction(const std::string& name, std::vector<std::string> kets,
                                   std::vector<long> signs = {}) {
    ScanDirection d;
    d.name = name;
    for (std::size_t t = 0; t < kets.size(); ++t) {
        long s = t < signs.size() ? signs[t] : 1;
        d.delta.at(kets[t][0] - '0', kets[t][1] - '0', kets[t][2] - '0') += GQ(s);
    }
    return d;
}

// Coarse direction grid for a base whose D4 point sits at the origin of
// chart [2,2,2] with Hessian kernel spanned by (1,0,1,0,1,0) and
// (0,1,0,1,0,1), residual cubic s^3 + t^3 (the F4,3 representative).  The
// kets below restrict to (s+t)^2 (a square of a factor line), s^2 (a square
// off the factor lines), st (hyperbolic), a constant, and a generic linear
// term, walking the versal family toward A3, A2, A1 and Smooth.
inline std::vector<ScanDirection> default_scan_directions() {
    return {
        ket_direction("factor-square", {"002", "012", "102", "112"}),
        ket_direction("offline-square", {"002"}),
        ket_direction("hyperbolic", {"012"}),
        ket_direction("constant", {"222"}),
        ket_direction("linear", {"022"}),
    };
}

inline OJson perturb_report_json(const PerturbReport& rep) {
    OJson out;
    out["base"] = {{"outcome", rep.base.summary}, {"milnorSum", rep.base.milnor_sum}};
    out["trials"] = rep.trials;
    OJson tally = OJson::object();
    for (auto& [k, v] : rep.tally) tally[k] = v;
    out["tally"] = std::move(tally);
    out["semicontinuityOk"] = rep.semicontinuity_ok;
    out["violations"] = rep.violations;
    if (rep.violator) out["violator"] = state_to_json(*rep.violator);
    return out;
}

inline OJson scan_report_json(const ScanReport& rep) {
    OJson out;
    out["base"] = {{"outcome", rep.base.summary}, {"milnorSum", rep.base.milnor_sum}};
    OJson outcomes = OJson::array();
    for (auto& o : rep.outcomes)
        outcomes.push_back({{"direction", o.direction},
                            {"outcome", o.trial.summary},
                            {"milnorSum", o.trial.milnor_sum}});
    out["outcomes"] = std::move(outcomes);
    out["semicontinuityOk"] = rep.semicontinuity_ok;
    out["violations"] = rep.violations;
    if (rep.violator) out["violator"] = state_to_json(*rep.violator);
    return out;
}

} // namespace qsing
