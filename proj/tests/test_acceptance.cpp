// End-to-end acceptance gate.  Each test case covers one numbered criterion
// and prints a single PASS/FAIL line, so the suite output doubles as the
// release checklist.
#include <catch2/catch_amalgamated.hpp>

#include <iostream>
#include <set>

#include <qutrit_sing/perturb.hpp>
#include <qutrit_sing/report.hpp>

using namespace qsing;

namespace {

struct Announce {
    int n;
    const char* what;
    bool done = false;
    ~Announce() {
        std::cout << "criterion " << n << " (" << what << "): " << (done ? "PASS" : "FAIL")
                  << std::endl;
    }
};

StateTensor rep_state(const NormalForm& nf, std::uint64_t seed, bool a_zero = false) {
    std::mt19937_64 rng(seed);
    ParamSample p = sample_params(nf, rng, a_zero);
    return build_state(nf, p.a, p.b, p.c);
}

} // namespace

TEST_CASE("nullcone table: 24 parameter-free rows") {
    Announce a{1, "nullcone rows N1-N24"};
    std::vector<std::string> rows;
    for (int n = 1; n <= 24; ++n) rows.push_back("N" + std::to_string(n));
    CatalogReport rep = run_catalog(2, 31, rows);
    REQUIRE(rep.rows.size() == 24);
    REQUIRE(rep.all_match);
    // the D4 of N2 sits at the basis point |222>
    SectionClassification n2 = classify_state(build_state(catalog_row("N2")));
    REQUIRE(n2.points.size() == 1);
    CHECK(n2.points[0].type.label() == "D4");
    CHECK(n2.points[0].chart.base3() == 26);
    REQUIRE(n2.points[0].exact);
    for (auto& c : n2.points[0].exact_coords) CHECK(c.is_zero());
    a.done = true;
}

TEST_CASE("parametric table: 19 families at two samples each plus special regimes") {
    Announce a{2, "parametric rows F1,1-F4,6"};
    std::vector<std::string> rows;
    for (auto& nf : nurmiev_catalog())
        if (nf.parametric()) rows.push_back(nf.id);
    CatalogReport rep = run_catalog(2, 87, rows);
    REQUIRE(rep.rows.size() == 19 + 3); // three printed a=0 regimes ride along
    for (auto& row : rep.rows) {
        INFO(row.id << " " << row.regime);
        CHECK(row.samples_agree);
        CHECK(row.matches_expectation);
    }
    REQUIRE(rep.all_match);
    // spot-check the multiplicity ladder verbatim
    CHECK(expected("F3,1").labels.size() == 2);
    CHECK(expected("F3,9").labels.size() == 6);
    CHECK(expected("F1,1").verdict == Verdict::Smooth);
    a.done = true;
}

TEST_CASE("worked tangency examples recompute exactly") {
    Announce a{3, "worked examples"};
    StateTensor x1;
    x1.at(0, 0, 0) = GQ(1);
    x1.at(1, 1, 1) = GQ(1);
    x1.at(2, 2, 2) = GQ(1);
    SectionClassification r1 = classify_state(x1);
    bool found = false;
    for (auto& sp : r1.points)
        if (sp.chart.i == 0 && sp.chart.j == 2 && sp.chart.k == 1) {
            found = true;
            CHECK(sp.type.label() == "A1");
            CHECK(sp.type.corank == 0); // Hessian rank 6
            CHECK(sp.type.milnor == 1);
            REQUIRE(sp.exact);
        }
    REQUIRE(found);

    SectionClassification r2 = classify_state(build_state(catalog_row("N2")));
    REQUIRE(r2.points.size() == 1);
    auto& d4 = r2.points[0];
    CHECK(d4.type.label() == "D4");
    CHECK(d4.type.corank == 2); // Hessian rank 4
    CHECK(d4.type.milnor == 4);
    REQUIRE(d4.exact);
    a.done = true;
}

TEST_CASE("no isolated type beyond D4 over the whole orbit sample", "[slow]") {
    Announce a{4, "only A1,A2,A3,D4 isolated types"};
    const std::set<std::string> allowed = {"A1", "A2", "A3", "D4"};
    for (auto& nf : nurmiev_catalog()) {
        std::vector<std::pair<std::string, StateTensor>> bases;
        bases.push_back({nf.id, rep_state(nf, 301)});
        if (nf.a_zero) bases.push_back({nf.id + "|a=0", rep_state(nf, 301, true)});
        for (auto& [who, base] : bases) {
            for (int t = 0; t <= 50; ++t) {
                StateTensor st =
                    t == 0 ? base
                           : slocc_act(base, random_sl3_triple(
                                                 std::hash<std::string>{}(who) + 7919u * std::uint64_t(t), 2));
                SectionClassification res = classify_state(st);
                INFO(who << " transform " << t);
                if (res.verdict == Verdict::Isolated) {
                    for (auto& sp : res.points) {
                        CHECK(allowed.count(sp.type.label()) == 1);
                        CHECK(sp.type.admissible());
                    }
                } else if (res.verdict == Verdict::NonIsolated) {
                    // only with an exact positive-dimension certificate
                    CHECK(res.nonisolated_dim >= 1);
                }
            }
        }
    }
    a.done = true;
}

TEST_CASE("per-chart quotient dimensions equal the Milnor sums") {
    Announce a{5, "exact/numeric coherence"};
    for (auto& nf : nurmiev_catalog()) {
        if (nf.generic.verdict != Verdict::Isolated) continue;
        std::vector<std::pair<std::string, StateTensor>> bases{{nf.id, rep_state(nf, 55)}};
        if (nf.a_zero) bases.push_back({nf.id + "|a=0", rep_state(nf, 55, true)});
        for (auto& [who, st] : bases) {
            SectionClassification res = classify_state(st); // ConsistencyError would throw
            INFO(who);
            REQUIRE(res.verdict == Verdict::Isolated);
            for (auto& cr : res.charts) {
                if (cr.dim != 0) continue;
                int mu = 0;
                for (auto& sp : res.points)
                    if (qsing::detail::point_in_chart(sp, cr.chart, 1e-8)) mu += sp.type.milnor;
                CHECK(mu == cr.quotient_dim);
            }
        }
    }
    a.done = true;
}

TEST_CASE("ADE normal forms are recovered, exceptional ones rejected") {
    Announce a{6, "ADE unit suite"};
    // a germ in `core` essential variables padded with nondegenerate
    // quadratics in `extra` further variables
    auto padded = [](int core, int extra, std::vector<std::pair<std::vector<int>, GQ>> terms) {
        std::vector<std::string> names;
        for (int v = 0; v < core + extra; ++v) names.push_back("v" + std::to_string(v));
        Poly<GQ> p(make_vars(std::move(names)));
        for (auto& [e, c] : terms) {
            std::vector<int> full = e;
            full.resize(std::size_t(core + extra), 0);
            p.add_term(Monomial(full), c);
        }
        for (int v = core; v < core + extra; ++v) {
            std::vector<int> e(std::size_t(core + extra), 0);
            e[std::size_t(v)] = 2;
            p.add_term(Monomial(e), GQ(1));
        }
        return p;
    };
    for (int k = 1; k <= 6; ++k) {
        for (int extra = 1; extra <= 4; ++extra) {
            LocalType t = classify_germ(padded(1, extra, {{{k + 1}, GQ(1)}}), 10, {});
            INFO("A" << k << " with " << extra << " quadratic directions");
            CHECK(t.label() == "A" + std::to_string(k));
            CHECK(t.milnor == k);
        }
    }
    LocalType d4 = classify_germ(padded(2, 4, {{{3, 0}, GQ(1)}, {{0, 3}, GQ(1)}}), 10, {});
    CHECK(d4.label() == "D4");
    CHECK(d4.milnor == 4);
    // E6: x^3 + y^4, E7: x^3 + x y^3, E8: x^3 + y^5
    for (auto& [name, g] : std::vector<std::pair<std::string, Poly<GQ>>>{
             {"E6", padded(2, 4, {{{3, 0}, GQ(1)}, {{0, 4}, GQ(1)}})},
             {"E7", padded(2, 4, {{{3, 0}, GQ(1)}, {{1, 3}, GQ(1)}})},
             {"E8", padded(2, 4, {{{3, 0}, GQ(1)}, {{0, 5}, GQ(1)}})}}) {
        LocalType t = classify_germ(g, 10, {});
        INFO(name);
        CHECK(t.kind == LocalKind::BeyondD4);
        CHECK(t.cubic == CubicShape::PerfectCube);
        CHECK_FALSE(t.admissible());
    }
    a.done = true;
}

TEST_CASE("dual-variety strata match the worked stratification examples") {
    Announce a{7, "stratification"};
    SectionClassification f23 = classify_state(rep_state(catalog_row("F2,3"), 91));
    CHECK(f23.stratum.label() == "Node(3)");
    SectionClassification f42 = classify_state(rep_state(catalog_row("F4,2"), 91));
    CHECK(f42.stratum.label() == "Cusp(3)");
    SectionClassification f21 = classify_state(rep_state(catalog_row("F2,1"), 91));
    CHECK(f21.stratum.label() == "DualSmooth");
    SectionClassification f11 = classify_state(rep_state(catalog_row("F1,1"), 91));
    CHECK(f11.stratum.label() == "NotOnDual");
    CHECK(f11.verdict == Verdict::Smooth);
    a.done = true;
}

TEST_CASE("perturbations are semicontinuous and the scan reaches each type", "[slow]") {
    Announce a{8, "perturbation semicontinuity"};
    StateTensor n2 = build_state(catalog_row("N2"));
    PerturbReport rep = run_perturb(n2, Rat(1, 100), 200, 1234);
    CHECK(rep.base.summary == "D4");
    CHECK(rep.semicontinuity_ok);
    CHECK(rep.violations.empty());
    bool smooth_seen = rep.tally.count("Smooth") > 0;
    bool a1_seen = false;
    for (auto& [summary, n] : rep.tally)
        if (summary.find("A1") != std::string::npos) a1_seen = true;
    CHECK(smooth_seen);
    CHECK(a1_seen);

    ScanReport scan =
        run_scan(build_state(catalog_row("F4,3"), GQ(), GQ(1), GQ(-1)), Rat(1, 100),
                 default_scan_directions());
    std::set<std::string> seen;
    for (auto& o : scan.outcomes)
        for (auto& l : o.trial.labels) seen.insert(l);
    for (auto& o : scan.outcomes)
        if (o.trial.verdict == Verdict::Smooth) seen.insert("Smooth");
    CHECK(seen.count("A3") == 1);
    CHECK(seen.count("A2") == 1);
    CHECK(seen.count("A1") == 1);
    CHECK(seen.count("Smooth") == 1);
    CHECK(scan.semicontinuity_ok);
    a.done = true;
}

TEST_CASE("engine-level randomized properties", "[property]") {
    Announce a{9, "engine properties"};
    std::mt19937_64 rng(20260826);

    // reduced GB is independent of generator order (100 cases)
    {
        VarListPtr vars = make_vars({"x", "y", "z"});
        std::uniform_int_distribution<int> coef(-4, 4);
        std::uniform_int_distribution<int> expo(0, 2);
        auto rand_poly = [&]() {
            Poly<GQ> p(vars);
            for (int t = 0; t < 4; ++t)
                p.add_term(Monomial(std::vector<int>{expo(rng), expo(rng), expo(rng)}),
                           GQ(coef(rng)));
            return p;
        };
        for (int c = 0; c < 100; ++c) {
            std::vector<Poly<GQ>> gens;
            for (int i = 0; i < 3; ++i) gens.push_back(rand_poly());
            bool all_zero = true;
            for (auto& g : gens) all_zero = all_zero && g.is_zero();
            if (all_zero) continue;
            IdealBasis b1 = buchberger(gens);
            std::shuffle(gens.begin(), gens.end(), rng);
            IdealBasis b2 = buchberger(gens);
            REQUIRE(b1.generators.size() == b2.generators.size());
            for (std::size_t i = 0; i < b1.generators.size(); ++i)
                REQUIRE((b1.generators[i] - b2.generators[i]).is_zero());
        }
    }

    // Leibniz rule (1000 cases)
    {
        VarListPtr vars = make_vars({"x", "y"});
        std::uniform_int_distribution<int> coef(-5, 5);
        std::uniform_int_distribution<int> expo(0, 3);
        std::uniform_int_distribution<int> which(0, 1);
        auto rand_poly = [&]() {
            Poly<GQ> p(vars);
            for (int t = 0; t < 3; ++t)
                p.add_term(Monomial(std::vector<int>{expo(rng), expo(rng)}), GQ(coef(rng)));
            return p;
        };
        for (int c = 0; c < 1000; ++c) {
            Poly<GQ> p = rand_poly(), q = rand_poly();
            std::size_t v = std::size_t(which(rng));
            Poly<GQ> lhs = (p * q).differentiate(v);
            Poly<GQ> rhs = p.differentiate(v) * q + p * q.differentiate(v);
            REQUIRE((lhs - rhs).is_zero());
        }
    }

    // root-residual soundness (1000 cases)
    {
        VarListPtr tvar = make_vars({"t"});
        std::uniform_int_distribution<int> coef(-6, 6);
        std::uniform_int_distribution<int> deg(1, 6);
        for (int c = 0; c < 1000; ++c) {
            int d = deg(rng);
            Poly<GQ> p(tvar);
            for (int e = 0; e < d; ++e)
                p.add_term(Monomial(std::vector<int>{e}), GQ(coef(rng)));
            int lead = coef(rng);
            if (lead == 0) lead = 1;
            p.add_term(Monomial(std::vector<int>{d}), GQ(lead));
            auto roots = univariate_roots(p, {});
            int mult_total = 0;
            double scale = 0;
            std::vector<CD> cd;
            for (int e = 0; e <= d; ++e) {
                cd.push_back(p.coeff(Monomial(std::vector<int>{e})).to_complex());
                scale = std::max(scale, std::abs(cd.back()));
            }
            for (auto& r : roots) {
                mult_total += r.multiplicity;
                CD val = 0;
                double mag = std::max(1.0, std::abs(r.value));
                for (int e = d; e >= 0; --e) val = val * r.value + cd[std::size_t(e)];
                REQUIRE(std::abs(val) <= 1e-6 * scale * std::pow(mag, d));
            }
            REQUIRE(mult_total == d);
        }
    }

    // the SLOCC action is a group action (1000 cases)
    {
        std::uniform_int_distribution<int> coef(-3, 3);
        for (int c = 0; c < 1000; ++c) {
            StateTensor st;
            for (auto& h : st.h) h = GQ(coef(rng), coef(rng));
            if (st.is_zero()) st.at(0, 0, 0) = GQ(1);
            SL3Triple g = random_sl3_triple(rng(), 2);
            SL3Triple h = random_sl3_triple(rng(), 2);
            StateTensor lhs = slocc_act(slocc_act(st, h), g);
            StateTensor rhs = slocc_act(st, slocc_compose(g, h));
            REQUIRE(lhs == rhs);
        }
    }
    a.done = true;
}
