#include "ideals.hpp"

#include <algorithm>
#include <cstdint>

namespace rk {

namespace {

std::vector<Polynomial> nonzero(const std::vector<Polynomial>& v) {
    std::vector<Polynomial> out;
    for (auto& p : v)
        if (!p.is_zero()) out.push_back(p);
    return out;
}

Ideal as_reduced_gb(Ideal I) {
    if (I.is_zero_ideal()) return I;
    GroebnerBasis G = gb_of(I);
    Ideal out(I.ctx, G.elements);
    out.cached_gb = std::move(G);
    return out;
}

} // namespace

Polynomial exact_divide(const Polynomial& f, const Polynomial& g) {
    if (g.is_zero()) throw MathMismatch("division by zero polynomial");
    if (f.is_zero()) return f;
    auto res = reduce(f, {g}, f.ctx()->order);
    if (!res.remainder.is_zero())
        throw MathMismatch("exact division failed: " + g.str() + " does not divide " + f.str());
    return res.quotients[0];
}

Ideal intersect(const Ideal& I, const Ideal& J) {
    const Ctx& ctx = I.ctx;
    auto gi = nonzero(I.gens);
    auto gj = nonzero(J.gens);
    if (gi.empty() || gj.empty()) return Ideal(ctx, {});

    Ctx ext = extend_top(ctx, {"@t"});
    Polynomial t = Polynomial::variable(ext, ext->nvars() - 1);
    Polynomial omt = Polynomial::constant(ext, 1) - t;
    std::vector<Polynomial> gens;
    gens.reserve(gi.size() + gj.size());
    for (auto& f : gi) gens.push_back(t * map_poly(f, ext));
    for (auto& g : gj) gens.push_back(omt * map_poly(g, ext));
    Ideal raised(ext, std::move(gens));
    Ideal elim = eliminate(raised, {"@t"});
    std::vector<Polynomial> out;
    for (auto& g : elim.gens) out.push_back(map_poly(g, ctx));
    return Ideal(ctx, std::move(out));
}

Ideal colon(const Ideal& I, const Polynomial& g) {
    if (g.is_zero()) throw ValidationError("colon by zero polynomial");
    if (g.is_constant()) return as_reduced_gb(I);
    Ideal inter = intersect(I, Ideal(I.ctx, {g}));
    std::vector<Polynomial> out;
    for (auto& f : inter.gens) out.push_back(exact_divide(f, g));
    return as_reduced_gb(Ideal(I.ctx, std::move(out)));
}

Ideal colon(const Ideal& I, const Ideal& J) {
    auto gj = nonzero(J.gens);
    if (gj.empty()) throw ValidationError("colon by the zero ideal");
    std::optional<Ideal> acc;
    for (auto& g : gj) {
        Ideal c = colon(I, g);
        acc = acc ? intersect(*acc, c) : std::move(c);
    }
    return as_reduced_gb(std::move(*acc));
}

SaturationResult saturate(const Ideal& I, const Ideal& J) {
    SaturationResult res;
    res.ideal = as_reduced_gb(I);
    res.exponent = 0;
    for (;;) {
        Ideal next = colon(res.ideal, J);
        if (ideal_equal(next, res.ideal)) return res;
        res.ideal = std::move(next);
        ++res.exponent;
    }
}

bool radical_member(const Polynomial& f, const Ideal& I) {
    if (f.is_zero()) return true;
    Ctx ext = extend_top(I.ctx, {"@t"});
    Polynomial t = Polynomial::variable(ext, ext->nvars() - 1);
    std::vector<Polynomial> gens;
    for (auto& g : nonzero(I.gens)) gens.push_back(map_poly(g, ext));
    gens.push_back(Polynomial::constant(ext, 1) - t * map_poly(f, ext));
    return is_unit_ideal(Ideal(ext, std::move(gens)));
}

int dimension(const Ideal& I) {
    const Ctx& ctx = I.ctx;
    int nv = ctx->nvars();
    if (I.is_zero_ideal()) return nv;
    const auto& G = gb_of(I);
    std::vector<uint64_t> lms;
    for (auto& g : G.elements) {
        if (g.is_constant()) throw ValidationError("dimension of the unit ideal");
        uint64_t mask = 0;
        for (int i = 0; i < nv; ++i)
            if (g.leading().m.e[i] > 0) mask |= 1ull << i;
        lms.push_back(mask);
    }
    // Largest variable subset U meeting the support of no leading monomial.
    int best = 0;
    for (uint64_t u = 0; u < (1ull << nv); ++u) {
        bool independent = true;
        for (uint64_t m : lms)
            if ((m & ~u) == 0) { independent = false; break; }
        if (independent) best = std::max(best, __builtin_popcountll(u));
    }
    return best;
}

int height(const Ideal& I) { return I.ctx->nvars() - dimension(I); }

Ideal fitting_ideal(const PolyMatrix& phi, int i) {
    int n = phi.rows;
    if (phi.cols != n - 1) throw ValidationError("presentation matrix must be n x (n-1)");
    if (i < 0 || i > n) throw ValidationError("Fitting index out of range");
    int k = n - i;
    if (k <= 0) return Ideal(phi.ctx, {Polynomial::constant(phi.ctx, 1)});
    if (k > n - 1) return Ideal(phi.ctx, {});
    return Ideal(phi.ctx, matrix_minors(phi, k));
}

bool gs_check(const PolyMatrix& phi, int s) {
    int n = phi.rows;
    Ideal I = fitting_ideal(phi, 1);  // I_{n-1}(phi) = I
    if (I.is_zero_ideal() || height(I) != 2)
        throw ValidationError("gs_check requires a height-two I_{n-1}(phi)");
    for (int i = 2; i <= s - 1; ++i) {
        Ideal Fi = fitting_ideal(phi, i);
        if (Fi.is_zero_ideal()) return false;
        if (is_unit_ideal(Fi)) continue;  // empty locus, condition vacuous
        if (height(Fi) < i + 1) return false;
    }
    return true;
}

bool min_prime_check(const PolyMatrix& phi) {
    int n = phi.rows;
    Ideal In2(phi.ctx, matrix_minors(phi, n - 2));
    if (In2.is_zero_ideal() || is_unit_ideal(In2)) return false;
    const Ctx& ctx = phi.ctx;
    Ideal xy = make_ideal(ctx, std::vector<std::string>{"x", "y"});
    for (auto& g : In2.gens)
        if (!g.is_zero() && !ideal_member(g, xy)) return false;
    Polynomial x = parse_poly("x", ctx), y = parse_poly("y", ctx);
    return radical_member(x, In2) && radical_member(y, In2);
}

} // namespace rk
