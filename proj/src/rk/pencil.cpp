#include "pencil.hpp"

#include <algorithm>
#include <map>

namespace rk {

namespace {

// ---------------------------------------------------------------------
// Dense univariate polynomials over the coefficient field, ascending
// coefficients. Used for binary-form gcds after setting y = 1.
// ---------------------------------------------------------------------
using UPoly = std::vector<mpq_class>;

void utrim(UPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

int udeg(const UPoly& p) { return (int)p.size() - 1; }  // -1 for zero

UPoly umonic(const UPoly& p, const Field& F) {
    if (p.empty()) return p;
    UPoly r(p.size());
    mpq_class inv = F.inv(p.back());
    for (size_t i = 0; i < p.size(); ++i) r[i] = F.mul(p[i], inv);
    return r;
}

UPoly umul(const UPoly& a, const UPoly& b, const Field& F) {
    if (a.empty() || b.empty()) return {};
    UPoly r(a.size() + b.size() - 1, mpq_class(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    utrim(r);
    return r;
}

// a = q*b + r with deg r < deg b.
std::pair<UPoly, UPoly> udivmod(UPoly a, const UPoly& b, const Field& F) {
    if (b.empty()) throw MathMismatch("univariate division by zero");
    utrim(a);
    UPoly q;
    if (udeg(a) >= udeg(b)) q.assign(a.size() - b.size() + 1, mpq_class(0));
    mpq_class lead_inv = F.inv(b.back());
    while (udeg(a) >= udeg(b)) {
        int shift = udeg(a) - udeg(b);
        mpq_class c = F.mul(a.back(), lead_inv);
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i)
            a[shift + i] = F.sub(a[shift + i], F.mul(c, b[i]));
        utrim(a);
    }
    utrim(q);
    return {std::move(q), std::move(a)};
}

UPoly ugcd(UPoly a, UPoly b, const Field& F) {
    utrim(a);
    utrim(b);
    while (!b.empty()) {
        UPoly r = udivmod(a, b, F).second;
        a = std::move(b);
        b = std::move(r);
    }
    return umonic(a, F);
}

UPoly uexact_div(const UPoly& a, const UPoly& b, const Field& F) {
    auto [q, r] = udivmod(a, b, F);
    if (!r.empty()) throw MathMismatch("binary form division is not exact");
    return q;
}

mpq_class ueval(const UPoly& p, const mpq_class& v, const Field& F) {
    mpq_class acc = 0;
    for (size_t i = p.size(); i-- > 0;) acc = F.add(F.mul(acc, v), p[i]);
    return acc;
}

// (base^e) mod m in F[x].
UPoly upowmod(UPoly base, mpz_class e, const UPoly& m, const Field& F) {
    UPoly r = {mpq_class(1)};
    base = udivmod(std::move(base), m, F).second;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t()))
            r = udivmod(umul(r, base, F), m, F).second;
        e >>= 1;
        if (e > 0) base = udivmod(umul(base, base, F), m, F).second;
    }
    return r;
}

std::vector<mpz_class> divisors(mpz_class v) {
    v = abs(v);
    std::vector<mpz_class> out;
    for (mpz_class d = 1; d * d <= v; ++d)
        if (v % d == 0) {
            out.push_back(d);
            if (d * d != v) out.push_back(v / d);
        }
    return out;
}

// All roots in F with multiplicity; the residual cofactor stays behind.
std::map<mpq_class, int> find_roots(UPoly p, const Field& F, UPoly& residual) {
    std::map<mpq_class, int> roots;
    auto take_root = [&](const mpq_class& r) {
        while (udeg(p) >= 1 && ueval(p, r, F) == 0) {
            p = uexact_div(p, UPoly{F.neg(r), mpq_class(1)}, F);
            ++roots[r];
        }
    };
    if (F.rational()) {
        // Rational root test on the integer-cleared polynomial.
        mpz_class den(1);
        for (auto& c : p) den = lcm(den, c.get_den());
        std::vector<mpz_class> ip;
        for (auto& c : p) ip.push_back(mpz_class(c * den));
        size_t lo = 0;
        while (lo < ip.size() && ip[lo] == 0) ++lo;
        if (lo > 0) take_root(0);
        if (udeg(p) >= 1 && lo < ip.size()) {
            for (auto& num : divisors(ip[lo]))
                for (auto& dnm : divisors(ip.back())) {
                    mpq_class cand(num, dnm);
                    cand.canonicalize();
                    take_root(cand);
                    take_root(-cand);
                }
        }
    } else {
        mpz_class pm(F.p);
        if (F.p <= 1u << 16) {
            for (unsigned long v = 0; v < F.p && udeg(p) >= 1; ++v)
                take_root(mpq_class((long)v));
        } else {
            // Distinct-degree then equal-degree splitting for the linear part.
            UPoly work = umonic(p, F);
            UPoly xp = upowmod(UPoly{mpq_class(0), mpq_class(1)}, pm, work, F);
            UPoly xpmx = xp;
            if (xpmx.size() < 2) xpmx.resize(2, mpq_class(0));
            xpmx[1] = F.sub(xpmx[1], mpq_class(1));
            utrim(xpmx);
            UPoly split = ugcd(work, xpmx, F);
            std::vector<UPoly> stack;
            if (udeg(split) >= 1) stack.push_back(split);
            mpz_class half = (pm - 1) / 2;
            long salt = 0;
            while (!stack.empty()) {
                UPoly f = std::move(stack.back());
                stack.pop_back();
                if (udeg(f) == 1) {
                    take_root(F.neg(F.mul(f[0], F.inv(f[1]))));
                    continue;
                }
                UPoly shift = {F.normalize(mpq_class(salt++)), mpq_class(1)};
                UPoly w = upowmod(shift, half, f, F);
                if (!w.empty()) w[0] = F.sub(w[0], mpq_class(1));
                else w = {F.neg(mpq_class(1))};
                utrim(w);
                UPoly g = ugcd(f, w, F);
                if (udeg(g) <= 0 || udeg(g) == udeg(f)) {
                    stack.push_back(std::move(f));
                    continue;
                }
                stack.push_back(uexact_div(f, g, F));
                stack.push_back(std::move(g));
            }
        }
    }
    residual = std::move(p);
    return roots;
}

// ---------------------------------------------------------------------
// Binary forms f(x,y), stored as y^ypow * p(x,y) with p(x,1) = poly.
// ---------------------------------------------------------------------
struct BForm {
    int ypow = 0;
    UPoly poly;  // nonzero constant term unless the form is zero

    bool is_zero() const { return poly.empty(); }
    int degree() const { return ypow + udeg(poly); }
};

BForm bform_of(const Polynomial& f, int xv, int yv) {
    BForm b;
    if (f.is_zero()) return b;
    int d = -1;
    for (auto& t : f.terms()) {
        int dx = t.m.e[xv], dy = t.m.e[yv];
        if (dx + dy != t.m.deg)
            throw ValidationError("pencil minor involves a variable other than x, y");
        if (d < 0) d = t.m.deg;
        else if (d != t.m.deg)
            throw ValidationError("pencil minor is not homogeneous");
    }
    UPoly p(d + 1, mpq_class(0));
    for (auto& t : f.terms()) p[t.m.e[xv]] = t.c;
    utrim(p);
    b.ypow = d - udeg(p);
    b.poly = std::move(p);
    return b;
}

Polynomial bform_to_poly(const BForm& b, const Ctx& ctx, int xv, int yv) {
    if (b.is_zero()) return Polynomial::zero(ctx);
    std::vector<Term> terms;
    int dp = udeg(b.poly);
    for (int i = 0; i <= dp; ++i) {
        if (b.poly[i] == 0) continue;
        Monomial m = Monomial::one(ctx->nvars());
        m.e[xv] = i;
        m.e[yv] = b.ypow + dp - i;
        m.deg = b.ypow + dp;
        terms.push_back({std::move(m), b.poly[i]});
    }
    return Polynomial(ctx, std::move(terms));
}

BForm bgcd(const BForm& a, const BForm& b, const Field& F) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    return {std::min(a.ypow, b.ypow), ugcd(a.poly, b.poly, F)};
}

BForm bexact_div(const BForm& a, const BForm& b, const Field& F) {
    if (b.is_zero()) throw MathMismatch("binary form division by zero");
    if (a.is_zero()) return a;
    if (a.ypow < b.ypow) throw MathMismatch("binary form division is not exact");
    return {a.ypow - b.ypow, uexact_div(a.poly, b.poly, F)};
}

} // namespace

PolyMatrix Pencil::to_matrix() const {
    PolyMatrix M = PolyMatrix::zero(ctx, rows, cols);
    Polynomial x = Polynomial::variable(ctx, ctx->var_checked("x"));
    Polynomial y = Polynomial::variable(ctx, ctx->var_checked("y"));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            M.at(r, c) = x.scaled(a(r, c)) + y.scaled(b(r, c));
    return M;
}

Pencil pencil_from_matrix(const PolyMatrix& M) {
    Pencil P;
    P.rows = M.rows;
    P.cols = M.cols;
    P.ctx = M.ctx;
    P.A.assign((size_t)M.rows * M.cols, mpq_class(0));
    P.B.assign((size_t)M.rows * M.cols, mpq_class(0));
    int xv = M.ctx->var_checked("x"), yv = M.ctx->var_checked("y");
    for (int r = 0; r < M.rows; ++r)
        for (int c = 0; c < M.cols; ++c) {
            for (auto& t : M.at(r, c).terms()) {
                if (t.m.deg != 1 || t.m.e[xv] + t.m.e[yv] != 1)
                    throw ValidationError("pencil entry is not linear in x, y");
                (t.m.e[xv] == 1 ? P.A : P.B)[(size_t)r * M.cols + c] = t.c;
            }
        }
    return P;
}

std::vector<Polynomial> invariant_factors(const Pencil& P) {
    const Field& F = P.ctx->field;
    int xv = P.ctx->var_checked("x"), yv = P.ctx->var_checked("y");
    PolyMatrix M = P.to_matrix();
    int kmax = std::min(P.rows, P.cols);

    std::vector<BForm> d(kmax + 1);
    d[0] = {0, {mpq_class(1)}};
    int rank = 0;
    for (int k = 1; k <= kmax; ++k) {
        BForm g;
        for (auto& m : matrix_minors(M, k))
            g = bgcd(g, bform_of(m, xv, yv), F);
        d[k] = g;
        if (!g.is_zero()) rank = k;
    }
    std::vector<Polynomial> out;
    for (int k = 1; k <= rank; ++k)
        out.push_back(bform_to_poly(bexact_div(d[k], d[k - 1], F), P.ctx, xv, yv));
    return out;
}

PencilInvariants classify_phi_prime(const Pencil& P) {
    const Field& F = P.ctx->field;
    int xv = P.ctx->var_checked("x"), yv = P.ctx->var_checked("y");
    PencilInvariants inv;
    inv.invariant_factors = invariant_factors(P);
    inv.normal_rank = (int)inv.invariant_factors.size();
    inv.has_zero_block = inv.normal_rank < std::min(P.rows, P.cols);
    if (inv.has_zero_block)
        throw ValidationError("pencil drops normal column rank (unexpected zero block)");

    Polynomial x = Polynomial::variable(P.ctx, xv);
    Polynomial y = Polynomial::variable(P.ctx, yv);
    for (auto& s : inv.invariant_factors) {
        BForm b = bform_of(s, xv, yv);
        if (b.degree() == 0) continue;
        if (b.ypow > 0) inv.elementary_divisors.emplace_back(y, b.ypow);
        int vx = 0;
        UPoly p = b.poly;
        while (udeg(p) >= 1 && p[0] == 0) {
            p.erase(p.begin());
            ++vx;
        }
        if (vx > 0) inv.elementary_divisors.emplace_back(x, vx);
        UPoly residual;
        auto roots = find_roots(umonic(p, F), F, residual);
        for (auto& [r, mult] : roots)
            inv.elementary_divisors.emplace_back(x - y.scaled(r), mult);
        if (udeg(residual) >= 1)
            throw NeedsFieldExtension(
                "invariant factor does not split into linear forms over " + F.describe());
    }
    for (auto& [lf, pw] : inv.elementary_divisors) inv.m_block_sizes.push_back(pw);
    std::sort(inv.m_block_sizes.begin(), inv.m_block_sizes.end());
    inv.summary = inv.elementary_divisors.empty() ? PencilSummary::SingleLPrime
                                                  : PencilSummary::LPrimeWithM;
    return inv;
}

std::string PencilInvariants::summary_str() const {
    if (summary == PencilSummary::SingleLPrime) return "SingleLPrime";
    std::string s = "LPrimeWithM(";
    for (size_t i = 0; i < m_block_sizes.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(m_block_sizes[i]);
    }
    return s + ")";
}

} // namespace rk
