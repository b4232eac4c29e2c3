#include <catch2/catch_amalgamated.hpp>

#include <qutrit_sing/poly.hpp>
#include <qutrit_sing/rational.hpp>

#include <random>

using namespace qsing;

namespace {

VarListPtr xy() { static VarListPtr v = make_vars({"x", "y"}); return v; }

Poly<GQ> var(const VarListPtr& vars, std::size_t i) { return Poly<GQ>::variable(vars, i); }

GQ random_gq(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-5, 5);
    std::uniform_int_distribution<int> den(1, 4);
    Rat re(num(rng), den(rng)), im(num(rng), den(rng));
    re.canonicalize();
    im.canonicalize();
    return {re, im};
}

Poly<GQ> random_poly(std::mt19937_64& rng, const VarListPtr& vars, int max_terms = 4,
                     int max_deg = 3) {
    std::uniform_int_distribution<int> nterms(0, max_terms);
    std::uniform_int_distribution<int> exp(0, max_deg);
    Poly<GQ> p(vars);
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
        Monomial m(vars->size());
        for (auto& e : m.e) e = exp(rng);
        p.add_term(m, random_gq(rng));
    }
    return p;
}

} // namespace

TEST_CASE("gaussian rational field arithmetic") {
    GQ a{Rat(2, 3), Rat(-1, 2)};
    GQ b{Rat(1), Rat(1)};
    CHECK(a * a.inverse() == GQ(1));
    CHECK((a * b) * a.inverse() == b);
    CHECK(a - a == GQ());
    CHECK_THROWS_AS(GQ().inverse(), std::domain_error);

    // i^2 = -1
    GQ i{Rat(0), Rat(1)};
    CHECK(i * i == GQ(-1));
}

TEST_CASE("rational string round trips") {
    CHECK(rat_to_string(rat_from_string("3/6")) == "1/2");
    CHECK(rat_to_string(rat_from_string("7")) == "7");
    CHECK(rat_to_string(rat_from_string("-4/2")) == "-2");
    CHECK_THROWS(rat_from_string("not-a-number"));
}

TEST_CASE("poly_arith basic identities") {
    auto x = var(xy(), 0), y = var(xy(), 1);

    SECTION("(x+y)(x-y) = x^2 - y^2") {
        CHECK((x + y) * (x - y) == x * x - y * y);
    }
    SECTION("p * 0 = 0") {
        auto p = x * x + y;
        CHECK((p * Poly<GQ>(xy())).is_zero());
    }
    SECTION("multiplication by 1 preserves the three-term section polynomial") {
        auto v6 = make_vars({"x1", "x2", "y0", "y1", "z0", "z2"});
        auto f = var(v6, 2) * var(v6, 4) + var(v6, 0) * var(v6, 3) + var(v6, 1) * var(v6, 5);
        auto one = Poly<GQ>::constant(v6, GQ(1));
        CHECK(f * one == f);
        CHECK(f.terms().size() == 3);
    }
    SECTION("mismatched variable lists rejected") {
        auto other = var(make_vars({"u"}), 0);
        CHECK_THROWS_AS(x + other, std::invalid_argument);
    }
}

TEST_CASE("differentiate") {
    auto v6 = make_vars({"x1", "x2", "y0", "y1", "z0", "z2"});
    auto f = var(v6, 2) * var(v6, 4) + var(v6, 0) * var(v6, 3) + var(v6, 1) * var(v6, 5);
    CHECK(f.differentiate(0) == var(v6, 3)); // d/dx1 = y1

    auto x = var(xy(), 0), y = var(xy(), 1);
    CHECK(Poly<GQ>::constant(xy(), GQ(5)).differentiate(0).is_zero());

    auto p = x * x * y + y * y * y;
    CHECK(p.differentiate(1) == x * x + (y * y).scaled(GQ(3)));

    CHECK_THROWS_AS(x.differentiate(7), std::invalid_argument);
}

TEST_CASE("evaluate") {
    auto x = var(xy(), 0), y = var(xy(), 1);
    auto p = x * x + (y * y).scaled(GQ(3));

    SECTION("constant term at the origin") {
        auto q = p + Poly<GQ>::constant(xy(), GQ{Rat(5), Rat(0)});
        CHECK(q.evaluate<GQ>({GQ(), GQ()}) == GQ(5));
    }
    SECTION("x^2 + 3y^2 at (1, i) = -2") {
        CHECK(p.evaluate<GQ>({GQ(1), GQ{Rat(0), Rat(1)}}) == GQ(-2));
    }
    SECTION("length mismatch") {
        CHECK_THROWS_AS(p.evaluate<GQ>({GQ(1)}), std::invalid_argument);
    }
}

TEST_CASE("series substitution") {
    auto x = var(xy(), 0), y = var(xy(), 1);

    SECTION("x -> -y^2 in x + y^2 cancels exactly") {
        auto target = make_vars({"y"});
        Series<GQ> minus_y2(-(Poly<GQ>::variable(target, 0) * Poly<GQ>::variable(target, 0)), 8);
        Series<GQ> yv(Poly<GQ>::variable(target, 0), 8);
        auto r = substitute(x + y * y, {minus_y2, yv});
        CHECK(r.body.is_zero());
    }
    SECTION("identity bindings leave p unchanged") {
        auto p = x * x * y + y;
        Series<GQ> xs(x, 10), ys(y, 10);
        auto r = substitute(p, {xs, ys});
        CHECK(r.body == p);
    }
    SECTION("x -> u+v, y -> u-v in xy gives u^2 - v^2") {
        auto uv = make_vars({"u", "v"});
        auto u = Poly<GQ>::variable(uv, 0), v = Poly<GQ>::variable(uv, 1);
        Series<GQ> su(u + v, 6), sv(u - v, 6);
        auto r = substitute(x * y, {su, sv});
        CHECK(r.body == u * u - v * v);
    }
    SECTION("truncation drops high-degree terms") {
        Series<GQ> sx(x, 2), sy(y, 2);
        auto r = substitute(x * x * y, {sx, sy});
        CHECK(r.body.is_zero()); // degree 3 > truncation 2
    }
}

TEST_CASE("ring axioms on random polynomials") {
    std::mt19937_64 rng(12345);
    for (int iter = 0; iter < 1000; ++iter) {
        auto p = random_poly(rng, xy()), q = random_poly(rng, xy()), r = random_poly(rng, xy());
        REQUIRE((p + q) + r == p + (q + r));
        REQUIRE(p * q == q * p);
        REQUIRE((p * q) * r == p * (q * r));
        REQUIRE(p * (q + r) == p * q + p * r);
    }
}

TEST_CASE("Leibniz rule on random polynomials") {
    std::mt19937_64 rng(777);
    for (int iter = 0; iter < 1000; ++iter) {
        auto p = random_poly(rng, xy()), q = random_poly(rng, xy());
        std::size_t v = iter % 2;
        REQUIRE((p * q).differentiate(v) ==
                p * q.differentiate(v) + q * p.differentiate(v));
    }
}

TEST_CASE("evaluate commutes with substitution at exact points") {
    std::mt19937_64 rng(4242);
    auto uv = make_vars({"u", "v"});
    for (int iter = 0; iter < 200; ++iter) {
        auto p = random_poly(rng, xy(), 3, 2);
        auto a = random_poly(rng, uv, 3, 2), b = random_poly(rng, uv, 3, 2);
        GQ pu = random_gq(rng), pv = random_gq(rng);
        // truncation large enough to hold everything exactly
        Series<GQ> sa(a, 60), sb(b, 60);
        auto composed = substitute(p, {sa, sb});
        GQ lhs = composed.body.evaluate<GQ>({pu, pv});
        GQ rhs = p.evaluate<GQ>({a.evaluate<GQ>({pu, pv}), b.evaluate<GQ>({pu, pv})});
        REQUIRE(lhs == rhs);
    }
}

TEST_CASE("nonzero gaussian rationals form a group") {
    std::mt19937_64 rng(99);
    for (int iter = 0; iter < 1000; ++iter) {
        GQ a = random_gq(rng), b = random_gq(rng);
        if (a.is_zero()) continue;
        REQUIRE((a * b) * a.inverse() == b);
    }
}
