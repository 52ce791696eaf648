#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rk/pencil.hpp"
#include "rk/rees.hpp"

#include "fixtures.hpp"

#include <random>

using namespace rk;

namespace {

// random invertible scalar matrix built from elementary row operations
std::vector<mpq_class> random_unit(int n, std::mt19937_64& rng) {
    std::vector<mpq_class> U((size_t)n * n, 0);
    for (int i = 0; i < n; ++i) U[(size_t)i * n + i] = 1;
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> scale(1, 3);
    for (int step = 0; step < 4 * n; ++step) {
        int i = pick(rng), j = pick(rng);
        if (i == j) {
            mpq_class s = scale(rng);
            for (int c = 0; c < n; ++c) U[(size_t)i * n + c] *= s;
        } else {
            mpq_class s = coef(rng);
            for (int c = 0; c < n; ++c) U[(size_t)i * n + c] += s * U[(size_t)j * n + c];
        }
    }
    return U;
}

PolyMatrix transform(const PolyMatrix& M, const std::vector<mpq_class>& P,
                     const std::vector<mpq_class>& Q) {
    PolyMatrix out = PolyMatrix::zero(M.ctx, M.rows, M.cols);
    for (int r = 0; r < M.rows; ++r)
        for (int c = 0; c < M.cols; ++c) {
            Polynomial acc = Polynomial::zero(M.ctx);
            for (int i = 0; i < M.rows; ++i)
                for (int j = 0; j < M.cols; ++j)
                    acc = acc + M.at(i, j).scaled(P[(size_t)r * M.rows + i] *
                                                  Q[(size_t)j * M.cols + c]);
            out.at(r, c) = acc;
        }
    return out;
}

std::string invariants_str(const PencilInvariants& inv) {
    std::string s = inv.summary_str() + "|rank=" + std::to_string(inv.normal_rank);
    for (auto& f : inv.invariant_factors) s += "|s:" + f.str();
    for (auto& [l, p] : inv.elementary_divisors)
        s += "|e:" + l.str() + "^" + std::to_string(p);
    for (int b : inv.m_block_sizes) s += "|m:" + std::to_string(b);
    return s;
}

} // namespace

TEST_CASE("pencil extraction") {
    Ctx ctx = make_pipeline_ring(5);
    PolyMatrix M = PolyMatrix::zero(ctx, 2, 2);
    M.at(0, 0) = parse_poly("x + 2*y", ctx);
    M.at(0, 1) = parse_poly("y", ctx);
    M.at(1, 1) = parse_poly("-x", ctx);
    Pencil P = pencil_from_matrix(M);
    CHECK(P.a(0, 0) == 1);
    CHECK(P.b(0, 0) == 2);
    CHECK(P.a(1, 1) == -1);
    CHECK(P.b(0, 1) == 1);
    CHECK(P.to_matrix().at(0, 0) == M.at(0, 0));

    M.at(1, 0) = parse_poly("z", ctx);
    CHECK_THROWS_AS(pencil_from_matrix(M), ValidationError);
    M.at(1, 0) = parse_poly("x^2", ctx);
    CHECK_THROWS_AS(pencil_from_matrix(M), ValidationError);
}

TEST_CASE("invariant factors of small pencils") {
    Ctx ctx = make_pipeline_ring(5);
    PolyMatrix D = PolyMatrix::zero(ctx, 2, 2);
    D.at(0, 0) = parse_poly("x", ctx);
    D.at(1, 1) = parse_poly("y", ctx);
    auto s = invariant_factors(pencil_from_matrix(D));
    REQUIRE(s.size() == 2);
    CHECK(s[0] == Polynomial::constant(ctx, 1));
    CHECK(s[1].monic() == parse_poly("x*y", ctx).monic());

    // a nilpotent square block x*I + y*N has a single invariant factor x^2
    PolyMatrix N = PolyMatrix::zero(ctx, 2, 2);
    N.at(0, 0) = parse_poly("x", ctx);
    N.at(0, 1) = parse_poly("y", ctx);
    N.at(1, 1) = parse_poly("x", ctx);
    auto t = invariant_factors(pencil_from_matrix(N));
    REQUIRE(t.size() == 2);
    CHECK(t[0] == Polynomial::constant(ctx, 1));
    CHECK(t[1] == parse_poly("x^2", ctx));
}

TEST_CASE("classification of the bundled phi primes") {
    for (auto phi : {fixtures::ex71(), fixtures::ex72(), fixtures::ex73()}) {
        PolyMatrix pp = phi_prime(normalize_shape(phi));
        PencilInvariants inv = classify_phi_prime(pencil_from_matrix(pp));
        CHECK(inv.summary == PencilSummary::SingleLPrime);
        CHECK(inv.normal_rank == 3);
        CHECK(inv.elementary_divisors.empty());
        CHECK(inv.m_block_sizes.empty());
    }
}

TEST_CASE("classification of generated branch instances") {
    PolyMatrix with_block = random_instance(Branch::I_N3, 5, 5);
    PencilInvariants a =
        classify_phi_prime(pencil_from_matrix(phi_prime(normalize_shape(with_block))));
    CHECK(a.summary == PencilSummary::LPrimeWithM);
    REQUIRE(!a.m_block_sizes.empty());
    CHECK(a.m_block_sizes.front() == 1);

    PolyMatrix big_block = random_instance(Branch::I_Rp2, 5, 6);
    PencilInvariants b =
        classify_phi_prime(pencil_from_matrix(phi_prime(normalize_shape(big_block))));
    CHECK(b.summary == PencilSummary::LPrimeWithM);
    int mx = 0;
    for (int s : b.m_block_sizes) mx = std::max(mx, s);
    CHECK(mx >= 2);
}

TEST_CASE("rank drop is rejected") {
    Ctx ctx = make_pipeline_ring(5);
    PolyMatrix M = PolyMatrix::zero(ctx, 3, 2);
    M.at(0, 0) = parse_poly("x", ctx);
    M.at(0, 1) = parse_poly("x", ctx);
    M.at(1, 0) = parse_poly("y", ctx);
    M.at(1, 1) = parse_poly("y", ctx);
    CHECK_THROWS_AS(classify_phi_prime(pencil_from_matrix(M)), ValidationError);
}

TEST_CASE("strict equivalence leaves the invariants alone") {
    std::mt19937_64 rng(314159);
    for (auto phi : {fixtures::ex71(), fixtures::ex73()}) {
        PolyMatrix pp = phi_prime(normalize_shape(phi));
        std::string base = invariants_str(classify_phi_prime(pencil_from_matrix(pp)));
        for (int trial = 0; trial < 20; ++trial) {
            PolyMatrix moved = transform(pp, random_unit(pp.rows, rng),
                                         random_unit(pp.cols, rng));
            CHECK(invariants_str(classify_phi_prime(pencil_from_matrix(moved))) == base);
        }
    }
}
