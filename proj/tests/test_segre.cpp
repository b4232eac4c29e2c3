#include <catch2/catch_amalgamated.hpp>

#include <qutrit_sing/segre.hpp>

#include <random>

using namespace qsing;

namespace {

StateTensor x1_tensor() {
    StateTensor s;
    s.at(0, 0, 0) = GQ(1);
    s.at(1, 1, 1) = GQ(1);
    s.at(2, 2, 2) = GQ(1);
    return s;
}

StateTensor n2_tensor() {
    StateTensor s;
    for (auto [i, j, k] : {std::array<int, 3>{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 1, 0},
                           {1, 1, 1}, {2, 0, 0}})
        s.at(i, j, k) = GQ(1);
    return s;
}

GQ random_gq(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    Rat re(num(rng), den(rng)), im(num(rng), den(rng));
    re.canonicalize();
    im.canonicalize();
    return {re, im};
}

} // namespace

TEST_CASE("section_polynomial of the diagonal state") {
    auto f = section_polynomial(x1_tensor());
    REQUIRE(f.terms().size() == 3);
    auto v = segre_vars();
    auto X = [&](std::size_t i) { return Poly<GQ>::variable(v, i); };
    CHECK(f == X(0) * X(3) * X(6) + X(1) * X(4) * X(7) + X(2) * X(5) * X(8));
}

TEST_CASE("section_polynomial of the N2 state matches the displayed form") {
    auto f = section_polynomial(n2_tensor());
    auto v = segre_vars();
    auto X = [&](std::size_t i) { return Poly<GQ>::variable(v, i); };
    // x0y1z2 + x0y2z1 + x1y0z2 + x1y1z0 + x1y1z1 + x2y0z0
    CHECK(f == X(0) * X(4) * X(8) + X(0) * X(5) * X(7) + X(1) * X(3) * X(8) +
               X(1) * X(4) * X(6) + X(1) * X(4) * X(7) + X(2) * X(3) * X(6));
}

TEST_CASE("single-entry tensor gives a single monomial") {
    StateTensor s;
    s.at(0, 0, 0) = GQ(1);
    auto f = section_polynomial(s);
    CHECK(f.terms().size() == 1);
    CHECK(f.total_degree() == 3);
}

TEST_CASE("zero tensor is rejected") {
    StateTensor s;
    CHECK_THROWS_AS(section_polynomial(s), std::invalid_argument);
}

TEST_CASE("restrict_to_chart reproduces the worked examples") {
    SECTION("diagonal section in chart [0,2,1]") {
        auto f = restrict_to_chart(section_polynomial(x1_tensor()), Chart{0, 2, 1});
        auto cv = f.vars();
        REQUIRE(*cv == VarList({"x1", "x2", "y0", "y1", "z0", "z2"}));
        auto V = [&](std::size_t i) { return Poly<GQ>::variable(cv, i); };
        CHECK(f == V(2) * V(4) + V(0) * V(3) + V(1) * V(5)); // y0z0 + x1y1 + x2z2
    }
    SECTION("N2 section in chart [2,2,2]") {
        auto f = restrict_to_chart(section_polynomial(n2_tensor()), Chart{2, 2, 2});
        auto cv = f.vars();
        REQUIRE(*cv == VarList({"x0", "x1", "y0", "y1", "z0", "z1"}));
        auto V = [&](std::size_t i) { return Poly<GQ>::variable(cv, i); };
        CHECK(f == V(0) * V(3) + V(0) * V(5) + V(1) * V(2) + V(1) * V(3) * V(4) +
                   V(1) * V(3) * V(5) + V(2) * V(4));
    }
    SECTION("x0y0z0 in chart [0,0,0] is the constant 1") {
        StateTensor s;
        s.at(0, 0, 0) = GQ(1);
        auto f = restrict_to_chart(section_polynomial(s), Chart{0, 0, 0});
        CHECK(f == Poly<GQ>::constant(f.vars(), GQ(1)));
    }
}

TEST_CASE("multilinearity of chart restrictions") {
    std::mt19937_64 rng(555);
    for (int iter = 0; iter < 20; ++iter) {
        StateTensor s;
        for (auto& c : s.h) c = random_gq(rng);
        if (s.is_zero()) continue;
        auto full = section_polynomial(s);
        for (auto& chart : all_charts()) {
            auto f = restrict_to_chart(full, chart);
            for (std::size_t v = 0; v < 6; ++v) REQUIRE(f.degree_in(v) <= 1);
        }
    }
}

TEST_CASE("segre_embed") {
    std::array<GQ, 3> e0{GQ(1), GQ(), GQ()}, e1{GQ(), GQ(1), GQ()}, e2{GQ(), GQ(), GQ(1)};

    SECTION("basis point |000>") {
        auto w = segre_embed(e0, e0, e0);
        for (std::size_t p = 0; p < 27; ++p) CHECK(w[p] == (p == 0 ? GQ(1) : GQ()));
    }
    SECTION("basis point |021> sits at base-3 position 7") {
        auto w = segre_embed(e0, e2, e1);
        for (std::size_t p = 0; p < 27; ++p) CHECK(w[p] == (p == 7 ? GQ(1) : GQ()));
    }
    SECTION("(1,1,0) x e0 x e0 has ones at 0 and 9") {
        std::array<GQ, 3> v{GQ(1), GQ(1), GQ()};
        auto w = segre_embed(v, e0, e0);
        for (std::size_t p = 0; p < 27; ++p)
            CHECK(w[p] == ((p == 0 || p == 9) ? GQ(1) : GQ()));
    }
}

TEST_CASE("pairing identity: section at an embedded point") {
    std::mt19937_64 rng(808);
    for (int iter = 0; iter < 100; ++iter) {
        StateTensor s;
        for (auto& c : s.h) c = random_gq(rng);
        if (s.is_zero()) continue;
        std::array<GQ, 3> x, y, z;
        for (auto arr : {&x, &y, &z})
            for (auto& c : *arr) c = random_gq(rng);
        auto w = segre_embed(x, y, z);
        GQ direct;
        for (std::size_t p = 0; p < 27; ++p) direct += s.h[p] * w[p];
        std::vector<GQ> point;
        for (auto& c : x) point.push_back(c);
        for (auto& c : y) point.push_back(c);
        for (auto& c : z) point.push_back(c);
        REQUIRE(section_polynomial(s).evaluate<GQ>(point) == direct);
    }
}

TEST_CASE("tangent_membership on the worked examples") {
    std::array<GQ, 3> e0{GQ(1), GQ(), GQ()}, e1{GQ(), GQ(1), GQ()}, e2{GQ(), GQ(), GQ(1)};

    SECTION("diagonal section is tangent at |021>") {
        auto p = ProjectivePoint::from_exact({e0, e2, e1});
        auto rep = tangent_membership(x1_tensor(), p);
        CHECK(rep.tangent);
    }
    SECTION("N2 section is tangent at |222>") {
        auto p = ProjectivePoint::from_exact({e2, e2, e2});
        auto rep = tangent_membership(n2_tensor(), p);
        CHECK(rep.tangent);
    }
    SECTION("diagonal section is not tangent at |000>") {
        auto p = ProjectivePoint::from_exact({e0, e0, e0});
        auto rep = tangent_membership(x1_tensor(), p);
        CHECK_FALSE(rep.on_hyperplane);
        CHECK_FALSE(rep.tangent);
        CHECK(rep.point_pairing == GQ(1));
    }
}

TEST_CASE("slocc_act") {
    SECTION("identity triple acts trivially") {
        SL3Triple id{sl3_identity(), sl3_identity(), sl3_identity()};
        CHECK(slocc_act(n2_tensor(), id) == n2_tensor());
    }
    SECTION("simultaneous cyclic permutation fixes the diagonal state") {
        SL3 cyc{};
        cyc[0][1] = GQ(1);
        cyc[1][2] = GQ(1);
        cyc[2][0] = GQ(1);
        REQUIRE(sl3_det(cyc) == GQ(1));
        SL3Triple g{cyc, cyc, cyc};
        CHECK(slocc_act(x1_tensor(), g) == x1_tensor());
    }
    SECTION("non-unimodular matrix rejected") {
        SL3 m = sl3_identity();
        m[0][0] = GQ(2);
        SL3Triple g{m, sl3_identity(), sl3_identity()};
        CHECK_THROWS_AS(slocc_act(x1_tensor(), g), std::invalid_argument);
    }
}

TEST_CASE("random_sl3_triple") {
    SECTION("shear count zero gives the identity") {
        auto g = random_sl3_triple(42, 0);
        for (auto& m : g) CHECK(m == sl3_identity());
    }
    SECTION("fixed seed reproduces the triple") {
        auto g1 = random_sl3_triple(42, 3);
        auto g2 = random_sl3_triple(42, 3);
        for (int f = 0; f < 3; ++f) CHECK(g1[std::size_t(f)] == g2[std::size_t(f)]);
    }
    SECTION("determinants are exactly 1") {
        for (std::uint64_t seed : {1ull, 2ull, 99ull, 12345ull})
            for (auto& m : random_sl3_triple(seed, 4)) REQUIRE(sl3_det(m) == GQ(1));
    }
}

TEST_CASE("slocc action is a group action") {
    std::mt19937_64 seeds(13);
    for (int iter = 0; iter < 1000; ++iter) {
        auto g = random_sl3_triple(seeds(), 2);
        auto h = random_sl3_triple(seeds(), 2);
        auto s = n2_tensor();
        REQUIRE(slocc_act(s, slocc_compose(g, h)) == slocc_act(slocc_act(s, h), g));
    }
}

TEST_CASE("projective point normalization and home chart") {
    std::array<GQ, 3> v0{GQ(Rat(1, 2)), GQ(2), GQ(1)};
    std::array<GQ, 3> v1{GQ(), GQ(), GQ(Rat(-3))};
    std::array<GQ, 3> v2{GQ(1), GQ(), GQ()};
    auto p = ProjectivePoint::from_exact({v0, v1, v2});
    CHECK(p.q[0][1] == GQ(1)); // largest modulus scaled to exactly 1
    CHECK(p.q[1][2] == GQ(1));
    auto home = p.home_chart();
    CHECK(home.i == 1);
    CHECK(home.j == 2);
    CHECK(home.k == 0);

    SECTION("normalization is idempotent") {
        auto p2 = ProjectivePoint::from_exact(p.q);
        for (int f = 0; f < 3; ++f)
            for (int b = 0; b < 3; ++b)
                CHECK(p2.q[std::size_t(f)][std::size_t(b)] == p.q[std::size_t(f)][std::size_t(b)]);
    }
    SECTION("zero factor vector rejected") {
        std::array<GQ, 3> zero{};
        CHECK_THROWS_AS(ProjectivePoint::from_exact({v0, zero, v2}), std::invalid_argument);
    }
}
