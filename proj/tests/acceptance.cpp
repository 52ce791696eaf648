#include "rk/io.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>
#include <random>

using namespace rk;

namespace {

struct Clock {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

bool all_pass = true;

void line(int num, bool ok, const std::string& what) {
    std::cout << "criterion " << num << ": " << (ok ? "PASS" : "FAIL") << " - " << what
              << "\n";
    if (!ok) all_pass = false;
}

Ideal with_extra(const Ideal& I, const std::vector<std::string>& extra) {
    std::vector<Polynomial> gens = I.gens;
    for (auto& t : extra) gens.push_back(parse_poly(t, I.ctx));
    return Ideal(I.ctx, std::move(gens));
}

bool shuffle_stable(const std::vector<Polynomial>& gens, std::mt19937_64& rng) {
    GroebnerBasis base = buchberger(gens);
    if (!gb_self_check(base)) return false;
    for (int s = 0; s < 10; ++s) {
        std::vector<Polynomial> copy = gens;
        std::shuffle(copy.begin(), copy.end(), rng);
        if (buchberger(copy).elements != base.elements) return false;
    }
    return true;
}

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

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <data-dir>\n";
        return 2;
    }
    std::string dir = argv[1];
    PolyMatrix ex71 = normalize_shape(load_instance(dir + "/ex71.json", {}, false).phi);
    PolyMatrix ex72 = normalize_shape(load_instance(dir + "/ex72.json", {}, false).phi);
    PolyMatrix ex73 = normalize_shape(load_instance(dir + "/ex73.json", {}, false).phi);

    // 1: the case I worked example, exact reproduction
    try {
        Clock clock;
        const Ctx& ctx = ex71.ctx;
        Ideal L = symmetric_ideal(ex71);
        Ideal J = ideal_J(ex71, classify_case(ex71));
        bool ok = ideal_equal(
            J, with_extra(Ideal(ctx, {L.gens[0], L.gens[1], L.gens[2]}),
                          {"w0^2 + w0*w1 - w2^2 + w0*w3 + w1*w3"}));
        AlphaSystem as = alpha_system(jacobian_dual(phi_double_prime(ex71), Frame::XYZW0));
        ok = ok && as.alpha[0].monic() ==
                       parse_poly("w0*w4 + w1*w4 - w2*w3", ctx).monic();
        ok = ok && as.alpha[1].monic() ==
                       parse_poly("w2*w4 - w0*w3 - w3^2", ctx).monic();
        Ideal K2 = symbolic_square_K(ex71, Method::formula);
        std::vector<Polynomial> k2 = J.gens;
        k2.push_back(parse_poly("z^2*w0^2", ctx));
        k2.push_back(parse_poly("w4", ctx) * as.alpha[0] -
                     parse_poly("w3", ctx) * as.alpha[1]);
        ok = ok && ideal_equal(K2, Ideal(ctx, std::move(k2)));
        ok = ok && ideal_equal(defining_ideal(ex71, DefiningMethod::formula),
                               defining_ideal(ex71, DefiningMethod::saturation));
        double t = clock.seconds();
        line(1, ok && t < 30.0,
             "example 7.1: J, symbolic square of K, defining ideal (" +
                 std::to_string(t) + " s)");
    } catch (const std::exception& e) {
        line(1, false, std::string("example 7.1: ") + e.what());
    }

    // 2: the case II worked example
    try {
        Clock clock;
        const Ctx& ctx = ex72.ctx;
        AlphaSystem as = alpha_system(jacobian_dual(phi_double_prime(ex72), Frame::XYZW0));
        Ideal J = ideal_J(ex72, classify_case(ex72));
        Polynomial z = parse_poly("z", ctx);
        std::vector<Polynomial> kp = J.gens;
        kp.push_back(parse_poly("z^2*w0", ctx));
        kp.push_back(z * as.alpha[0]);
        kp.push_back(z * as.alpha[1]);
        kp.push_back(parse_poly("w4", ctx) * as.alpha[0] -
                     parse_poly("w3", ctx) * as.alpha[1]);
        bool ok = ideal_equal(ideal_Kprime(ex72, Method::formula), Ideal(ctx, std::move(kp)));
        ok = ok && ideal_equal(defining_ideal(ex72, DefiningMethod::formula),
                               defining_ideal(ex72, DefiningMethod::saturation));
        double t = clock.seconds();
        line(2, ok && t < 30.0,
             "example 7.2: K prime and defining ideal (" + std::to_string(t) + " s)");
    } catch (const std::exception& e) {
        line(2, false, std::string("example 7.2: ") + e.what());
    }

    // 3: the case III worked example
    try {
        Clock clock;
        const Ctx& ctx = ex73.ctx;
        Ideal L = symmetric_ideal(ex73);
        JacobianDual jd = jacobian_dual(ex73, Frame::XYZ2W0);
        Ideal I3(ctx, matrix_minors(jd.B, 3));
        bool ok = ideal_equal(I3, make_ideal(ctx, std::vector<std::string>{
                                       "-w0*w2 - w2^2 + w0*w3 + w1*w3",
                                       "-w2*w3 + w0*w4 + w1*w4",
                                       "-w3^2 + w0*w4 + w2*w4"}));
        // L is pinned to the entries of [w] * phi; the frame identity ties the
        // dual back to the same generators column by column
        for (int c = 0; c < jd.B.cols && ok; ++c) {
            Polynomial lc = Polynomial::zero(ctx);
            for (int r = 0; r < jd.B.rows; ++r) lc = lc + jd.frame_gens[r] * jd.B.at(r, c);
            ok = lc == L.gens[c];
        }
        Ideal A = defining_ideal(ex73, DefiningMethod::formula);
        std::vector<Polynomial> direct = L.gens;
        for (auto& g : I3.gens) direct.push_back(g);
        ok = ok && ideal_equal(A, Ideal(ctx, std::move(direct)));
        ok = ok && ideal_equal(A, colon(L, make_ideal(ctx, std::vector<std::string>{"x", "y"})));
        ok = ok && ideal_equal(A, defining_ideal(ex73, DefiningMethod::saturation));
        ObsColonReport obs = verify_obs_colon(ex73);
        ok = ok && obs.equal && obs.exponent == 1;
        double t = clock.seconds();
        line(3, ok && t < 10.0,
             "example 7.3: L, 3-minors of the dual, exponent 1 (" + std::to_string(t) +
                 " s)");
    } catch (const std::exception& e) {
        line(3, false, std::string("example 7.3: ") + e.what());
    }

    // 4: G_s calibration
    try {
        bool ok = true;
        for (auto* phi : {&ex71, &ex72, &ex73}) {
            ok = ok && gs_check(*phi, 2) && !gs_check(*phi, 3);
            ok = ok && height(fitting_ideal(*phi, 2)) == 2 && min_prime_check(*phi);
        }
        line(4, ok, "G_2 holds, G_3 fails, ht I_3(phi) = 2 on all bundled instances");
    } catch (const std::exception& e) {
        line(4, false, std::string("G_s calibration: ") + e.what());
    }

    // 5: the colon observation at desk scale
    try {
        Clock clock;
        bool ok = true;
        for (auto* phi : {&ex71, &ex72}) {
            ObsColonReport obs = verify_obs_colon(*phi);
            ok = ok && obs.equal && obs.exponent >= 2;
        }
        double t = clock.seconds();
        line(5, ok && t < 120.0,
             "L : (x,y,zw0) = L + I_3(B(phi)) with exponent >= 2 (" + std::to_string(t) +
                 " s)");
    } catch (const std::exception& e) {
        line(5, false, std::string("colon observation: ") + e.what());
    }

    // 6: every theorem branch, n = 5 and n = 6, certified formula vs oracle
    std::vector<PolyMatrix> generated;
    try {
        Clock clock;
        bool ok = true;
        std::vector<Branch> branches = {Branch::I_N1,  Branch::I_N2,  Branch::I_Rp2,
                                        Branch::I_N3,  Branch::I_N4,  Branch::II_1a,
                                        Branch::II_1b, Branch::II_2,  Branch::II_3a,
                                        Branch::II_3b, Branch::III};
        int idx = 0;
        for (int n : {5, 6}) {
            for (Branch b : branches) {
                if (n == 5 && (b == Branch::I_Rp2 || b == Branch::II_2)) continue;
                PolyMatrix phi = normalize_shape(random_instance(b, 9000 + idx++, n));
                bool one = validate_setting(phi).ok() &&
                           ideal_equal(defining_ideal(phi, DefiningMethod::formula),
                                       defining_ideal(phi, DefiningMethod::saturation));
                if (!one)
                    std::cout << "  branch " << branch_name(b) << " n=" << n << " failed\n";
                ok = ok && one;
                generated.push_back(std::move(phi));
            }
        }
        double t = clock.seconds();
        line(6, ok && t < 1800.0,
             "all theorem branches certified at n = 5 and n = 6 (" + std::to_string(t) +
                 " s)");
    } catch (const std::exception& e) {
        line(6, false, std::string("branch coverage: ") + e.what());
    }

    // 7: engine self-checks on the bases behind criteria 1-6
    try {
        std::mt19937_64 rng(2718);
        bool ok = true;
        for (auto* phi : {&ex71, &ex72, &ex73}) {
            ok = ok && shuffle_stable(symmetric_ideal(*phi).gens, rng);
            ok = ok && shuffle_stable(ideal_J(*phi, classify_case(*phi)).gens, rng);
            ok = ok && shuffle_stable(defining_ideal(*phi, DefiningMethod::saturation).gens,
                                      rng);
        }
        int step = std::max<size_t>(1, generated.size() / 4);
        for (size_t i = 0; i < generated.size(); i += step)
            ok = ok && shuffle_stable(
                           defining_ideal(generated[i], DefiningMethod::saturation).gens,
                           rng);
        line(7, ok, "S-polynomial self-checks and 10 generator shuffles per basis");
    } catch (const std::exception& e) {
        line(7, false, std::string("engine self-checks: ") + e.what());
    }

    // 8: pencil invariance under strict equivalence
    try {
        std::mt19937_64 rng(1618);
        bool ok = true;
        for (auto* phi : {&ex71, &ex72, &ex73}) {
            PolyMatrix pp = phi_prime(*phi);
            std::string base = invariants_str(classify_phi_prime(pencil_from_matrix(pp)));
            for (int trial = 0; trial < 100 && ok; ++trial) {
                PolyMatrix moved =
                    transform(pp, random_unit(pp.rows, rng), random_unit(pp.cols, rng));
                ok = invariants_str(classify_phi_prime(pencil_from_matrix(moved))) == base;
            }
        }
        line(8, ok, "classification constant over 100 strict-equivalence transforms each");
    } catch (const std::exception& e) {
        line(8, false, std::string("pencil invariance: ") + e.what());
    }

    return all_pass ? 0 : 1;
}
