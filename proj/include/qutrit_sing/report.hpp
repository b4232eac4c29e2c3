// Deterministic JSON / text / markdown rendering of classification results,
// the onion stratification view, and catalog runs.
#pragma once

#include <map>
#include <sstream>
#include <string>

#include "catalog.hpp"
#include "io.hpp"

namespace qsing {

inline std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Smooth: return "Smooth";
    case Verdict::Isolated: return "Isolated";
    case Verdict::NonIsolated: return "NonIsolated";
    }
    return "?";
}

// Compact multiset form: {} -> "-", {A1,A1,A2} -> "2A1+A2".
inline std::string labels_summary(const std::vector<std::string>& labels) {
    if (labels.empty()) return "-";
    std::map<std::string, int> counts;
    for (auto& l : labels) ++counts[l];
    std::string out;
    for (auto& [label, n] : counts) {
        if (!out.empty()) out += "+";
        if (n > 1) out += std::to_string(n);
        out += label;
    }
    return out;
}

inline std::string outcome_summary(Verdict v, const std::vector<std::string>& labels) {
    if (v == Verdict::Smooth) return "Smooth";
    if (v == Verdict::NonIsolated) return "NonIsolated";
    return labels_summary(labels);
}

namespace detail {

inline OJson cd_to_json(const CD& z) {
    return OJson::array({z.real(), z.imag()});
}

inline OJson point_to_json(const SingularPoint& sp) {
    OJson out;
    out["chart"] = sp.chart.name();
    out["chartBase3"] = sp.chart.base3();
    out["exact"] = sp.exact;
    OJson coords = OJson::array();
    if (sp.exact) {
        for (auto& c : sp.exact_coords) coords.push_back(c.str());
    } else {
        for (auto& c : sp.coords) coords.push_back(cd_to_json(c));
    }
    out["coordinates"] = std::move(coords);
    OJson factors = OJson::array();
    for (int f = 0; f < 3; ++f) {
        OJson fac = OJson::array();
        for (int a = 0; a < 3; ++a) {
            if (sp.location.exact)
                fac.push_back(sp.location.q[std::size_t(f)][std::size_t(a)].str());
            else
                fac.push_back(cd_to_json(sp.location.c[std::size_t(f)][std::size_t(a)]));
        }
        factors.push_back(std::move(fac));
    }
    out["factors"] = std::move(factors);
    out["type"] = sp.type.label();
    out["corank"] = sp.type.corank;
    out["milnor"] = sp.type.milnor;
    return out;
}

} // namespace detail

inline OJson classification_report(const StateTensor& state, const SectionClassification& res,
                                   const ClassifyOptions& opt) {
    OJson out;
    out["input"] = state_to_json(state.scale_normalized());
    out["seed"] = opt.seed;
    out["tolerances"] = {
        {"rankThreshold", res.tolerances.rank_threshold},
        {"rootTolerance", res.tolerances.root_tolerance},
        {"newtonTolerance", res.tolerances.newton_tolerance},
        {"dedupeTolerance", res.tolerances.dedupe_tolerance},
    };
    out["seriesTruncation"] = opt.series_trunc;
    out["verdict"] = verdict_name(res.verdict);
    out["stratum"] = res.stratum.label();
    out["milnorSum"] = res.milnor_sum;
    out["milnorComplete"] = res.milnor_complete;
    OJson pts = OJson::array();
    for (auto& sp : res.points) pts.push_back(detail::point_to_json(sp));
    out["points"] = std::move(pts);
    OJson charts = OJson::array();
    for (auto& cr : res.charts) {
        if (cr.dim < 0) continue; // charts without critical points add noise
        charts.push_back({{"chart", cr.chart.name()},
                          {"dim", cr.dim},
                          {"quotientDim", cr.quotient_dim}});
    }
    out["charts"] = std::move(charts);
    if (res.verdict == Verdict::NonIsolated)
        out["nonIsolatedWitness"] = {{"chart", res.nonisolated_witness.name()},
                                     {"dim", res.nonisolated_dim}};
    out["warnings"] = res.warnings;
    return out;
}

// The nested-stratum view: each layer strictly contains the next, ordered by
// increasing multiplicity, with the classified state's layer flagged.
inline OJson onion_report(const SectionClassification& res) {
    OJson layers = OJson::array();
    auto layer = [&](const std::string& label, int mult, bool current) {
        layers.push_back({{"stratum", label}, {"milnorSum", mult}, {"current", current}});
    };
    const Stratum& s = res.stratum;
    bool non_iso = res.verdict == Verdict::NonIsolated;
    layer("NotOnDual", 0, s.kind == StratumKind::NotOnDual);
    layer("DualSmooth", 1, s.kind == StratumKind::DualSmooth);
    int depth = non_iso ? 2 : s.multiplicity;
    for (int m = 2; m <= depth; ++m) {
        bool here = !non_iso && m == s.multiplicity;
        if (s.kind == StratumKind::Node) {
            layer("Node(" + std::to_string(m) + ")", m, here);
        } else if (s.kind == StratumKind::Cusp) {
            layer("Node(" + std::to_string(m) + ")", m, false);
            layer("Cusp(" + std::to_string(m) + ")", m, here && m == s.multiplicity);
        }
    }
    if (non_iso)
        layer("NonIsolated", 0, true);
    OJson out;
    out["layers"] = std::move(layers);
    out["position"] = non_iso ? "NonIsolated" : s.label();
    return out;
}

inline std::string classification_text(const SectionClassification& res) {
    std::ostringstream os;
    os << "verdict: " << verdict_name(res.verdict) << "\n";
    os << "stratum: " << res.stratum.label() << "\n";
    os << "milnor sum: " << res.milnor_sum << "\n";
    if (res.verdict == Verdict::NonIsolated)
        os << "positive-dimensional singular locus in chart "
           << res.nonisolated_witness.name() << " (dim " << res.nonisolated_dim << ")\n";
    for (auto& sp : res.points) {
        os << "  " << sp.type.label() << " in chart " << sp.chart.name()
           << (sp.exact ? " (exact)" : " (numeric)") << " at";
        if (sp.exact)
            for (auto& c : sp.exact_coords) os << " " << c.str();
        else
            for (auto& c : sp.coords) os << " " << c;
        os << "\n";
    }
    for (auto& w : res.warnings) os << "warning: " << w << "\n";
    return os.str();
}

inline OJson catalog_report_json(const CatalogReport& rep) {
    OJson rows = OJson::array();
    for (auto& row : rep.rows) {
        OJson r;
        r["id"] = row.id;
        r["regime"] = row.regime;
        r["expected"] = outcome_summary(row.expect.verdict, row.expect.labels);
        OJson samples = OJson::array();
        for (std::size_t s = 0; s < row.sample_verdicts.size(); ++s)
            samples.push_back({{"outcome", outcome_summary(row.sample_verdicts[s],
                                                           row.sample_labels[s])},
                               {"milnorSum", row.sample_milnor_sums[s]}});
        r["samples"] = std::move(samples);
        r["samplesAgree"] = row.samples_agree;
        r["pass"] = row.matches_expectation;
        r["warnings"] = row.warnings;
        rows.push_back(std::move(r));
    }
    OJson out;
    out["rows"] = std::move(rows);
    out["allPass"] = rep.all_match;
    return out;
}

inline std::string catalog_markdown(const CatalogReport& rep) {
    std::ostringstream os;
    os << "| row | regime | expected | observed | status |\n";
    os << "|-----|--------|----------|----------|--------|\n";
    for (auto& row : rep.rows) {
        std::string obs = row.sample_verdicts.empty()
                              ? "-"
                              : outcome_summary(row.sample_verdicts[0], row.sample_labels[0]);
        if (!row.samples_agree) obs += " (samples disagree)";
        os << "| " << row.id << " | " << (row.regime.empty() ? "generic" : row.regime)
           << " | " << outcome_summary(row.expect.verdict, row.expect.labels) << " | " << obs
           << " | " << (row.matches_expectation ? "PASS" : "FAIL") << " |\n";
    }
    return os.str();
}

} // namespace qsing
