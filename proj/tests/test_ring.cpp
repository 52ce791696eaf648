#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rk/ring.hpp"

#include <random>

using namespace rk;

namespace {

Polynomial random_poly(const Ctx& ctx, std::mt19937_64& rng, int nterms, int maxdeg) {
    std::uniform_int_distribution<int> exp(0, maxdeg);
    std::uniform_int_distribution<int> coef(-5, 5);
    std::vector<Term> ts;
    for (int t = 0; t < nterms; ++t) {
        Monomial m = Monomial::one(ctx->nvars());
        for (int v = 0; v < ctx->nvars(); ++v) {
            int e = exp(rng);
            m.e[v] = e;
            m.deg += e;
        }
        ts.push_back({m, mpq_class(coef(rng))});
    }
    return Polynomial(ctx, std::move(ts));
}

} // namespace

TEST_CASE("monomial arithmetic") {
    Monomial a{{2, 1, 0}, 3};
    Monomial b{{1, 0, 4}, 5};
    Monomial ab = mono_mul(a, b);
    CHECK(ab.e == std::vector<int>{3, 1, 4});
    CHECK(ab.deg == 8);
    CHECK(mono_divides(a, ab));
    CHECK(mono_divides(b, ab));
    CHECK(mono_div(ab, a) == b);
    CHECK(mono_lcm(a, b).e == std::vector<int>{2, 1, 4});
    CHECK(!mono_coprime(a, b));
    CHECK(mono_coprime(Monomial{{1, 0, 0}, 1}, Monomial{{0, 0, 2}, 2}));
}

TEST_CASE("degrevlex order on the pipeline ring") {
    Ctx ctx = make_pipeline_ring(5);
    auto m = [&](const std::string& v) {
        Monomial r = Monomial::one(ctx->nvars());
        r.e[ctx->var_checked(v)] = 1;
        r.deg = 1;
        return r;
    };
    const MonomialOrder& ord = ctx->order;
    CHECK(mono_cmp(m("x"), m("y"), ord) < 0);
    CHECK(mono_cmp(m("y"), m("z"), ord) < 0);
    CHECK(mono_cmp(m("z"), m("w0"), ord) < 0);
    CHECK(mono_cmp(m("w3"), m("w4"), ord) < 0);
    // degree dominates
    CHECK(mono_cmp(mono_mul(m("x"), m("x")), m("w4"), ord) > 0);
    // revlex tie-break: among degree 2, w4*x < w3*w0 is false since the
    // smallest variable with a positive exponent decides reversed
    Monomial xw4 = mono_mul(m("x"), m("w4"));
    Monomial w0w3 = mono_mul(m("w0"), m("w3"));
    CHECK(mono_cmp(xw4, w0w3, ord) < 0);
}

TEST_CASE("parse and print round trip") {
    Ctx ctx = make_pipeline_ring(5);
    std::vector<std::string> texts = {
        "x",
        "x + y",
        "x^2*y - 3*z*w0 + 7",
        "-w4^3 + 2*w3*w2*w1 - 1/2*x*y*z",
        "w0^2 + w0*w1 - w2^2 + w0*w3 + w1*w3",
    };
    for (auto& t : texts) {
        Polynomial f = parse_poly(t, ctx);
        CHECK(parse_poly(f.str(), ctx) == f);
    }
    CHECK(parse_poly("0", ctx).is_zero());
    CHECK_THROWS_AS(parse_poly("x + q", ctx), ParseError);
}

TEST_CASE("ring axioms on random polynomials") {
    Ctx ctx = make_pipeline_ring(5);
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        Polynomial f = random_poly(ctx, rng, 4, 2);
        Polynomial g = random_poly(ctx, rng, 4, 2);
        Polynomial h = random_poly(ctx, rng, 3, 2);
        CHECK(f + g == g + f);
        CHECK(f * g == g * f);
        CHECK((f + g) * h == f * h + g * h);
        CHECK((f * g) * h == f * (g * h));
        CHECK(f - f == Polynomial::zero(ctx));
        CHECK(f + Polynomial::zero(ctx) == f);
        CHECK(f * Polynomial::constant(ctx, 1) == f);
    }
}

TEST_CASE("leading term is multiplicative over QQ") {
    Ctx ctx = make_pipeline_ring(6);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        Polynomial f = random_poly(ctx, rng, 5, 3);
        Polynomial g = random_poly(ctx, rng, 5, 3);
        if (f.is_zero() || g.is_zero()) continue;
        Polynomial p = f * g;
        REQUIRE(!p.is_zero());
        CHECK(p.leading().m == mono_mul(f.leading().m, g.leading().m));
        CHECK(p.leading().c == f.leading().c * g.leading().c);
    }
}

TEST_CASE("monic and scaled") {
    Ctx ctx = make_pipeline_ring(5);
    Polynomial f = parse_poly("3*x^2 - 6*y", ctx);
    CHECK(f.monic() == parse_poly("x^2 - 2*y", ctx));
    CHECK(f.scaled(mpq_class(1, 3)) == parse_poly("x^2 - 2*y", ctx));
    CHECK((-f).monic() == f.monic());
}

TEST_CASE("bidegree of bihomogeneous polynomials") {
    Ctx ctx = make_pipeline_ring(5);
    Bidegree d = bidegree_of(parse_poly("x^2*w0 - y*z*w3", ctx));
    CHECK(d == Bidegree{2, 1});
    CHECK(bidegree_of(parse_poly("w0*w4 - w2*w3", ctx)) == Bidegree{0, 2});
    CHECK_THROWS(bidegree_of(parse_poly("x*w0 + w1", ctx)));
    CHECK_THROWS(bidegree_of(Polynomial::zero(ctx)));
}

TEST_CASE("map_poly and extend_top") {
    Ctx ctx = make_pipeline_ring(5);
    Polynomial f = parse_poly("x*w0 - y^2", ctx);
    Ctx big = extend_top(ctx, {"t"});
    Polynomial g = map_poly(f, big);
    CHECK(g.str() == map_poly(g, ctx).str());
    CHECK(map_poly(g, ctx) == f);
    // the elimination block puts t above everything
    Polynomial h = parse_poly("1 - t*x", big);
    Monomial tx = Monomial::one(big->nvars());
    tx.e[big->var_checked("t")] = 1;
    tx.e[big->var_checked("x")] = 1;
    tx.deg = 2;
    CHECK(h.leading().m == tx);
    Polynomial mixed = parse_poly("t - w4^5", big);
    CHECK(mixed.leading().m.e[big->var_checked("t")] == 1);
}

TEST_CASE("finite field coefficients") {
    Field gf7{7};
    CHECK(gf7.normalize(mpq_class(10)) == 3);
    CHECK(gf7.normalize(mpq_class(-1)) == 6);
    CHECK(gf7.mul(gf7.inv(3), 3) == 1);
    Ctx ctx = make_pipeline_ring(5, gf7);
    Polynomial f = parse_poly("8*x + 7*y", ctx);
    CHECK(f == parse_poly("x", ctx));
}

TEST_CASE("matrix minors") {
    Ctx ctx = make_pipeline_ring(5);
    PolyMatrix M = PolyMatrix::zero(ctx, 2, 2);
    M.at(0, 0) = parse_poly("x", ctx);
    M.at(0, 1) = parse_poly("y", ctx);
    M.at(1, 0) = parse_poly("z", ctx);
    M.at(1, 1) = parse_poly("w0", ctx);
    auto det = matrix_minors(M, 2);
    REQUIRE(det.size() == 1);
    CHECK(det[0] == parse_poly("x*w0 - y*z", ctx));
    CHECK(matrix_minors(M, 0) == std::vector<Polynomial>{Polynomial::constant(ctx, 1)});

    // duplicate rows kill the 2x2 minors using both
    PolyMatrix D = PolyMatrix::zero(ctx, 2, 3);
    for (int c = 0; c < 3; ++c) {
        D.at(0, c) = parse_poly(c == 0 ? "x" : c == 1 ? "y" : "z", ctx);
        D.at(1, c) = D.at(0, c);
    }
    for (auto& m : matrix_minors(D, 2)) CHECK(m.is_zero());
}

TEST_CASE("parallel and serial minors agree") {
    Ctx ctx = make_pipeline_ring(6);
    std::mt19937_64 rng(99);
    PolyMatrix M = PolyMatrix::zero(ctx, 5, 4);
    for (auto& e : M.entries) e = random_poly(ctx, rng, 3, 1);
    for (int k = 1; k <= 4; ++k)
        CHECK(matrix_minors(M, k) == matrix_minors_serial(M, k));
}
