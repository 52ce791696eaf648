#include "rees.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace rk {

namespace {

Polynomial var_poly(const Ctx& ctx, const char* name) {
    return Polynomial::variable(ctx, ctx->var_checked(name));
}

Polynomial w_poly(const Ctx& ctx, int i) {
    return Polynomial::variable(ctx, ctx->var_checked("w" + std::to_string(i)));
}

Monomial mono_from(const Ctx& ctx, std::initializer_list<std::pair<const char*, int>> exps) {
    Monomial m = Monomial::one(ctx->nvars());
    for (auto& [name, e] : exps) {
        m.e[ctx->var_checked(name)] += e;
        m.deg += e;
    }
    return m;
}

mpq_class coeff_of(const Polynomial& f, const Monomial& m) {
    for (auto& t : f.terms())
        if (t.m == m) return t.c;
    return 0;
}

bool uses_var(const Polynomial& f, int v) {
    for (auto& t : f.terms())
        if (t.m.e[v] > 0) return true;
    return false;
}

bool w_free(const Polynomial& f) {
    for (auto& t : f.terms())
        for (size_t i = 3; i < t.m.e.size(); ++i)
            if (t.m.e[i] > 0) return false;
    return true;
}

bool homogeneous_of_degree(const Polynomial& f, int d) {
    for (auto& t : f.terms())
        if (t.m.deg != d) return false;
    return true;
}

// f with x and y set to zero.
Polynomial subst_xy_zero(const Polynomial& f) {
    std::vector<Term> keep;
    for (auto& t : f.terms())
        if (t.m.e[0] == 0 && t.m.e[1] == 0) keep.push_back(t);
    return Polynomial(f.ctx(), std::move(keep));
}

Polynomial column_form(const PolyMatrix& phi, int col) {
    Polynomial l = Polynomial::zero(phi.ctx);
    for (int r = 0; r < phi.rows; ++r)
        l = l + w_poly(phi.ctx, r) * phi.at(r, col);
    return l;
}

std::vector<Polynomial> first_columns(const PolyMatrix& phi, int count) {
    std::vector<Polynomial> ls;
    for (int i = 0; i < count; ++i) ls.push_back(column_form(phi, i));
    return ls;
}

Ideal xy_ideal(const Ctx& ctx) {
    return make_ideal(ctx, std::vector<std::string>{"x", "y"});
}

Ideal u_ideal(const Ctx& ctx) {
    return make_ideal(ctx, std::vector<std::string>{"x", "y", "z*w0"});
}

Ideal u2_ideal(const Ctx& ctx) {
    return make_ideal(ctx, std::vector<std::string>{"x^2", "x*y", "y^2", "x*z*w0",
                                                    "y*z*w0", "z^2*w0^2"});
}

Ideal reduced(Ideal I) {
    if (I.is_zero_ideal()) return I;
    GroebnerBasis G = gb_of(I);
    Ideal out(I.ctx, G.elements);
    out.cached_gb = std::move(G);
    return out;
}

std::vector<Polynomial> square_gens(const Ideal& I) {
    std::vector<Polynomial> out;
    for (size_t i = 0; i < I.gens.size(); ++i)
        for (size_t j = i; j < I.gens.size(); ++j)
            out.push_back(I.gens[i] * I.gens[j]);
    return out;
}

struct Abcd {
    Polynomial a, b, c, d;  // constants: l_{n-2} = zw0 + x(a w_{n-1} + c w_{n-2}) + ...
};

Abcd abcd_from(const PolyMatrix& phi) {
    const Ctx& ctx = phi.ctx;
    int n = phi.rows;
    Polynomial l = column_form(phi, n - 3);
    auto c_of = [&](const char* xv, int wi) {
        Monomial m = mono_from(ctx, {{xv, 1}});
        m.e[ctx->var_checked("w" + std::to_string(wi))] = 1;
        m.deg += 1;
        return Polynomial::constant(ctx, coeff_of(l, m));
    };
    return {c_of("x", n - 1), c_of("y", n - 1), c_of("x", n - 2), c_of("y", n - 2)};
}

// The shared a,b,c,d generator families of the square-block theorems.
std::vector<Polynomial> abcd_families(const PolyMatrix& phi, const AlphaSystem& as) {
    const Ctx& ctx = phi.ctx;
    int n = phi.rows;
    int na = (int)as.alpha.size();
    Abcd k = abcd_from(phi);
    Polynomial wn1 = w_poly(ctx, n - 1), wn2 = w_poly(ctx, n - 2);
    Polynomial u = k.c * wn2 + k.a * wn1;  // c w_{n-2} + a w_{n-1}
    Polynomial v = k.d * wn2 + k.b * wn1;  // d w_{n-2} + b w_{n-1}
    std::vector<Polynomial> out;
    if (na >= 2) out.push_back(v * as.alpha[0] - u * as.alpha[1]);
    for (int i = 3; i <= n - 5 && i < na; ++i)  // alpha_{i+1}, alpha_i, 1-based
        out.push_back(v * as.alpha[i] - u * as.alpha[i - 1]);
    return out;
}

bool w0_in_i2(const JacobianDual& Bpp) {
    Ideal I2(Bpp.B.ctx, matrix_minors(Bpp.B, 2));
    return ideal_member(var_poly(Bpp.B.ctx, "w0"), I2);
}

} // namespace

bool SettingReport::ok() const {
    for (auto& [name, v] : checks)
        if (!v) return false;
    return true;
}

bool SettingReport::check(const std::string& name) const {
    for (auto& [k, v] : checks)
        if (k == name) return v;
    throw Error("unknown setting check: " + name);
}

std::string CaseLabel::str() const {
    switch (kind) {
        case CaseKind::I: return "I";
        case CaseKind::II: return "II";
        default: return "III";
    }
}

std::string branch_name(Branch b) {
    switch (b) {
        case Branch::I_N1: return "I_N1";
        case Branch::I_N2: return "I_N2";
        case Branch::I_Rp2: return "I_Rp2";
        case Branch::I_N3: return "I_N3";
        case Branch::I_N4: return "I_N4";
        case Branch::II_1a: return "II_1a";
        case Branch::II_1b: return "II_1b";
        case Branch::II_2: return "II_2";
        case Branch::II_3a: return "II_3a";
        case Branch::II_3b: return "II_3b";
        default: return "III";
    }
}

PolyMatrix phi_double_prime(const PolyMatrix& phi) {
    PolyMatrix M = PolyMatrix::zero(phi.ctx, phi.rows, phi.cols - 1);
    for (int r = 0; r < phi.rows; ++r)
        for (int c = 0; c < phi.cols - 1; ++c) M.at(r, c) = phi.at(r, c);
    return M;
}

PolyMatrix phi_prime(const PolyMatrix& phi) {
    PolyMatrix M = PolyMatrix::zero(phi.ctx, phi.rows - 1, phi.cols - 1);
    for (int r = 1; r < phi.rows; ++r)
        for (int c = 0; c < phi.cols - 1; ++c) M.at(r - 1, c) = phi.at(r, c);
    return M;
}

SettingReport validate_setting(const PolyMatrix& phi) {
    const Ctx& ctx = phi.ctx;
    int n = phi.rows;
    SettingReport rep;
    auto fail = [&](const std::string& name, const std::string& why) {
        rep.checks.emplace_back(name, false);
        if (rep.witness.empty()) rep.witness = why;
    };
    auto pass = [&](const std::string& name) { rep.checks.emplace_back(name, true); };

    if (phi.cols != n - 1) {
        fail("almost_linear", "matrix is not n x (n-1)");
        return rep;
    }

    bool shape_ok = true;
    for (int r = 0; r < n && shape_ok; ++r)
        for (int c = 0; c < n - 1 && shape_ok; ++c) {
            const Polynomial& e = phi.at(r, c);
            int want = c == n - 2 ? 2 : 1;
            if (!w_free(e) || (!e.is_zero() && !homogeneous_of_degree(e, want))) {
                shape_ok = false;
                fail("almost_linear", "entry (" + std::to_string(r + 1) + "," +
                                          std::to_string(c + 1) + ") = " + e.str());
            }
        }
    if (shape_ok) pass("almost_linear");

    Ideal I1(ctx, phi.entries);
    bool i1ok = shape_ok;
    for (const char* v : {"x", "y", "z"}) {
        if (!i1ok) break;
        if (!radical_member(var_poly(ctx, v), I1)) {
            i1ok = false;
            fail("i1_is_m", std::string(v) + " not in the radical of I_1(phi)");
        }
    }
    if (i1ok) pass("i1_is_m");

    if (n > 4) pass("mu_gt_4");
    else fail("mu_gt_4", "n = " + std::to_string(n));

    bool ht2 = false;
    if (shape_ok) {
        Ideal In1(ctx, matrix_minors(phi, n - 1));
        ht2 = !In1.is_zero_ideal() && !is_unit_ideal(In1) && height(In1) == 2;
    }
    if (ht2) pass("height_two_perfect");
    else fail("height_two_perfect", "height of I_{n-1}(phi) is not 2");

    bool rank_ok = shape_ok;
    if (shape_ok) {
        PolyMatrix psi = PolyMatrix::zero(ctx, n, n - 1);
        for (size_t i = 0; i < phi.entries.size(); ++i)
            psi.entries[i] = subst_xy_zero(phi.entries[i]);
        for (auto& m : matrix_minors(psi, 2))
            if (!m.is_zero()) {
                rank_ok = false;
                fail("rank_mod_xy_le_1", "nonzero 2-minor mod (x,y): " + m.str());
                break;
            }
    } else {
        fail("rank_mod_xy_le_1", "skipped: shape invalid");
    }
    if (rank_ok && shape_ok) pass("rank_mod_xy_le_1");

    bool g2g3 = false;
    if (ht2) {
        g2g3 = gs_check(phi, 2) && !gs_check(phi, 3);
    }
    if (g2g3) pass("g2_not_g3");
    else fail("g2_not_g3", "I does not satisfy G_2-but-not-G_3");

    return rep;
}

PolyMatrix normalize_shape(const PolyMatrix& phi) {
    const Ctx& ctx = phi.ctx;
    const Field& F = ctx->field;
    int n = phi.rows, nc = phi.cols;
    PolyMatrix M = phi;
    Monomial z1 = mono_from(ctx, {{"z", 1}});
    Monomial z2 = mono_from(ctx, {{"z", 2}});

    auto zc = [&](int r, int c) { return coeff_of(M.at(r, c), z1); };
    auto col_op = [&](int dst, int src, const Polynomial& coef) {
        for (int r = 0; r < n; ++r) M.at(r, dst) = M.at(r, dst) - coef * M.at(r, src);
    };
    auto row_op = [&](int dst, int src, const mpq_class& coef) {
        Polynomial c = Polynomial::constant(ctx, coef);
        for (int j = 0; j < nc; ++j) M.at(dst, j) = M.at(dst, j) - c * M.at(src, j);
    };
    auto swap_cols = [&](int a, int b) {
        if (a != b)
            for (int r = 0; r < n; ++r) std::swap(M.at(r, a), M.at(r, b));
    };
    auto swap_rows = [&](int a, int b) {
        if (a != b)
            for (int j = 0; j < nc; ++j) std::swap(M.at(a, j), M.at(b, j));
    };

    // Concentrate z in the linear columns into entry (0, nc-2).
    int jp = -1, ip = -1;
    for (int j = 0; j < nc - 1 && jp < 0; ++j)
        for (int r = 0; r < n && jp < 0; ++r)
            if (zc(r, j) != 0) { jp = j; ip = r; }
    bool has_zcol = jp >= 0;
    if (has_zcol) {
        mpq_class piv = zc(ip, jp);
        for (int j = 0; j < nc - 1; ++j) {
            if (j == jp) continue;
            mpq_class lam = F.div(zc(ip, j), piv);
            if (lam != 0) col_op(j, jp, Polynomial::constant(ctx, lam));
            for (int r = 0; r < n; ++r)
                if (zc(r, j) != 0)
                    throw NormalizationFailed("z cannot be confined to a single column");
        }
        for (int r = 0; r < n; ++r) {
            if (r == ip) continue;
            mpq_class mu = F.div(zc(r, jp), piv);
            if (mu != 0) row_op(r, ip, mu);
            if (zc(r, jp) != 0)
                throw NormalizationFailed("z cannot be confined to a single entry");
        }
        Polynomial scale = Polynomial::constant(ctx, F.inv(piv));
        for (int r = 0; r < n; ++r) M.at(r, jp) = M.at(r, jp) * scale;
        swap_cols(jp, nc - 2);
        swap_rows(ip, 0);
    }

    auto z2c = [&](int r) { return coeff_of(M.at(r, nc - 1), z2); };
    if (has_zcol) {
        // Cancel the z^2 term of the top entry against the z column.
        mpq_class c0 = z2c(0);
        if (c0 != 0)
            col_op(nc - 1, nc - 2,
                   Polynomial::monomial(ctx, z1, c0));
        for (int r = 0; r < n; ++r)
            if (z2c(r) != 0)
                throw NormalizationFailed("z^2 in the last column is not cancellable");
    } else {
        int rp = -1;
        for (int r = 0; r < n; ++r)
            if (z2c(r) != 0) { rp = r; break; }
        if (rp < 0) throw NormalizationFailed("no z in the linear columns and no z^2");
        mpq_class piv = z2c(rp);
        for (int r = 0; r < n; ++r) {
            if (r == rp) continue;
            mpq_class mu = F.div(z2c(r), piv);
            if (mu != 0) row_op(r, rp, mu);
        }
        swap_rows(rp, 0);
        Polynomial scale = Polynomial::constant(ctx, F.inv(z2c(0)));
        for (int j = 0; j < nc; ++j) M.at(0, j) = M.at(0, j) * scale;
    }

    Ideal before(ctx, matrix_minors(phi, n - 1));
    Ideal after(ctx, matrix_minors(M, n - 1));
    if (!ideal_equal(before, after))
        throw NormalizationFailed("normalization changed I_{n-1}(phi)");
    return M;
}

CaseLabel classify_case(const PolyMatrix& phi) {
    const Ctx& ctx = phi.ctx;
    int n = phi.rows, nc = phi.cols;
    int zi = ctx->var_checked("z");
    Monomial z1 = mono_from(ctx, {{"z", 1}});
    Monomial z2 = mono_from(ctx, {{"z", 2}});

    for (int r = 0; r < n; ++r)
        for (int c = 0; c < nc - 1; ++c)
            if (uses_var(phi.at(r, c), zi) && !(r == 0 && c == nc - 2))
                throw NormalizationFailed("stray z in linear column (" +
                                          std::to_string(r + 1) + "," +
                                          std::to_string(c + 1) + ")");
    bool has_zcol = coeff_of(phi.at(0, nc - 2), z1) == 1;
    if (!has_zcol && uses_var(phi.at(0, nc - 2), zi))
        throw NormalizationFailed("z entry is not monic");

    for (int r = 1; r < n; ++r)
        if (coeff_of(phi.at(r, nc - 1), z2) != 0)
            throw NormalizationFailed("z^2 below the top row of the last column");
    bool has_z2 = coeff_of(phi.at(0, nc - 1), z2) != 0;

    CaseLabel label;
    if (!has_zcol) {
        if (!has_z2) throw NormalizationFailed("neither canonical z column nor z^2 entry");
        label.kind = CaseKind::III;
        label.evidence = "z^2 in entry (1," + std::to_string(nc) + "), linear columns z-free";
        return label;
    }
    if (has_z2)
        throw NormalizationFailed("z column and z^2 entry present simultaneously");
    Polynomial last = column_form(phi, nc - 1);
    label.last_in_U2 = ideal_member(last, u2_ideal(ctx));
    label.kind = label.last_in_U2 ? CaseKind::I : CaseKind::II;
    label.evidence = "l_" + std::to_string(nc) + (label.last_in_U2 ? " in " : " not in ") +
                     "(x,y,zw0)^2";
    return label;
}

Ideal symmetric_ideal(const PolyMatrix& phi) {
    std::vector<Polynomial> ls;
    for (int i = 0; i < phi.cols; ++i) {
        Polynomial l = column_form(phi, i);
        if (l.is_zero())
            throw ValidationError("zero column " + std::to_string(i + 1) +
                                  ": presentation is not minimal");
        ls.push_back(std::move(l));
    }
    return Ideal(phi.ctx, std::move(ls));
}

JacobianDual jacobian_dual(const PolyMatrix& phi, Frame frame) {
    const Ctx& ctx = phi.ctx;
    JacobianDual jd;
    jd.frame = frame;
    jd.source = phi;
    jd.frame_gens = {var_poly(ctx, "x"), var_poly(ctx, "y")};
    std::optional<Monomial> top;
    if (frame == Frame::XYZW0) {
        top = mono_from(ctx, {{"z", 1}, {"w0", 1}});
        jd.frame_gens.push_back(Polynomial::monomial(ctx, *top));
    } else if (frame == Frame::XYZ2W0) {
        top = mono_from(ctx, {{"z", 2}, {"w0", 1}});
        jd.frame_gens.push_back(Polynomial::monomial(ctx, *top));
    }
    int nrows = (int)jd.frame_gens.size();
    jd.B = PolyMatrix::zero(ctx, nrows, phi.cols);
    Monomial mx = mono_from(ctx, {{"x", 1}});
    Monomial my = mono_from(ctx, {{"y", 1}});
    for (int i = 0; i < phi.cols; ++i) {
        Polynomial l = column_form(phi, i);
        std::vector<Term> r0, r1, r2;
        for (auto& t : l.terms()) {
            if (top && mono_divides(*top, t.m))
                r2.push_back({mono_div(t.m, *top), t.c});
            else if (mono_divides(mx, t.m))
                r0.push_back({mono_div(t.m, mx), t.c});
            else if (mono_divides(my, t.m))
                r1.push_back({mono_div(t.m, my), t.c});
            else
                throw FrameMismatch("column " + std::to_string(i + 1) +
                                    " is not in the frame ideal: term " +
                                    Polynomial::monomial(ctx, t.m, t.c).str());
        }
        jd.B.at(0, i) = Polynomial(ctx, std::move(r0));
        jd.B.at(1, i) = Polynomial(ctx, std::move(r1));
        if (top) jd.B.at(2, i) = Polynomial(ctx, std::move(r2));
        Polynomial check = Polynomial::zero(ctx);
        for (int r = 0; r < nrows; ++r) check = check + jd.frame_gens[r] * jd.B.at(r, i);
        if (check != l) throw MathMismatch("Jacobian dual identity failed");
    }
    return jd;
}

AlphaSystem alpha_system(const JacobianDual& Bpp) {
    if (Bpp.frame != Frame::XYZW0)
        throw FrameMismatch("alpha system needs the (x,y,zw0) frame");
    const Ctx& ctx = Bpp.B.ctx;
    int m = Bpp.B.cols;  // n-2
    AlphaSystem as;
    as.A = PolyMatrix::zero(ctx, 2, m);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < m; ++c) as.A.at(r, c) = Bpp.B.at(r, c);
    auto det2 = [&](const Polynomial& p, const Polynomial& q, const Polynomial& r,
                    const Polynomial& s) { return p * s - q * r; };
    for (int i = 0; i < m - 1; ++i) {
        as.alpha.push_back(det2(as.A.at(0, i), as.A.at(0, m - 1), as.A.at(1, i),
                                as.A.at(1, m - 1)));
        as.alpha_x.push_back(-as.A.at(1, i));
        as.alpha_y.push_back(as.A.at(0, i));
    }
    for (int i = 0; i < m - 1; ++i)
        for (int j = i + 1; j < m - 1; ++j)
            as.cij.emplace_back(i + 1, j + 1,
                                det2(as.A.at(0, i), as.A.at(0, j), as.A.at(1, i),
                                     as.A.at(1, j)));
    return as;
}

Ideal ideal_J(const PolyMatrix& phi, const CaseLabel& label) {
    const Ctx& ctx = phi.ctx;
    int n = phi.rows;
    Ideal Jsmall(ctx, first_columns(phi, n - 2));
    if (label.kind != CaseKind::III) return colon(Jsmall, u_ideal(ctx));
    Ideal Jc = colon(Jsmall, xy_ideal(ctx));
    JacobianDual Bpp = jacobian_dual(phi_double_prime(phi), Frame::XY);
    std::vector<Polynomial> gens = Jsmall.gens;
    for (auto& m : matrix_minors(Bpp.B, 2)) gens.push_back(m);
    if (!ideal_equal(Jc, Ideal(ctx, gens)))
        throw MathMismatch("J:(x,y) != J + I_2(B(phi'')) in Case III");
    return Jc;
}

Ideal ideal_K(const PolyMatrix& phi) {
    const Ctx& ctx = phi.ctx;
    int n = phi.rows;
    std::vector<Polynomial> gens = first_columns(phi, n - 2);
    JacobianDual Bpp = jacobian_dual(phi_double_prime(phi), Frame::XYZW0);
    AlphaSystem as = alpha_system(Bpp);
    for (auto& m : matrix_minors(as.A, 2)) gens.push_back(m);
    gens.push_back(Polynomial::monomial(ctx, mono_from(ctx, {{"z", 1}, {"w0", 1}})));
    return Ideal(ctx, std::move(gens));
}

Ideal build_N(int kind, const AlphaSystem& data, const PencilInvariants& blocks,
              const Ideal& K) {
    const Ctx& ctx = data.A.ctx;
    int n = data.A.cols + 2;
    int na = (int)data.alpha.size();  // n-3
    Polynomial wn1 = w_poly(ctx, n - 1), wn2 = w_poly(ctx, n - 2);
    Polynomial zp = var_poly(ctx, "z");
    Polynomial z2w02 =
        Polynomial::monomial(ctx, mono_from(ctx, {{"z", 2}, {"w0", 2}}));
    const auto& a = data.alpha;

    Polynomial la = Polynomial::zero(ctx), lb = la;
    if (kind == 3 || kind == 4) {
        if (blocks.elementary_divisors.empty())
            throw ValidationError("N_" + std::to_string(kind) +
                                  " needs an M_1 block in the pencil");
        const Polynomial& lf = blocks.elementary_divisors.front().first;
        la = Polynomial::constant(ctx, coeff_of(lf, mono_from(ctx, {{"x", 1}})));
        lb = Polynomial::constant(ctx, coeff_of(lf, mono_from(ctx, {{"y", 1}})));
    }

    std::vector<Polynomial> gens;
    switch (kind) {
        case 1:
            for (int i = 0; i + 1 < na; ++i) gens.push_back(-wn2 * a[i + 1] + wn1 * a[i]);
            break;
        case 2:
            gens = square_gens(K);
            for (int i = 0; i + 1 < na; ++i)
                gens.push_back(zp * (-wn2 * a[i + 1] + wn1 * a[i]));
            // the undegenerated N_1-type generators survive at the indices
            // where the first-row chain is unbroken (i >= 2 in normal form)
            for (int i = 1; i + 1 < na; ++i)
                gens.push_back(-wn2 * a[i + 1] + wn1 * a[i]);
            break;
        case 3:
            gens.push_back(z2w02);
            for (int i = 0; i + 1 < na; ++i)
                gens.push_back(-la * wn1 * a[i + 1] + lb * wn1 * a[i]);
            break;
        case 4:
            gens.push_back(z2w02);
            for (int i = 0; i + 1 < na; ++i)
                gens.push_back(zp * (-la * wn1 * a[i + 1] + lb * wn1 * a[i]));
            for (int i = 1; i + 1 < na; ++i)
                gens.push_back(-la * wn1 * a[i + 1] + lb * wn1 * a[i]);
            break;
        default:
            throw ValidationError("N kind must be 1..4");
    }
    return Ideal(ctx, std::move(gens));
}

namespace {

struct CaseData {
    CaseLabel label;
    Ideal J;
    Ideal K;
    AlphaSystem as;
    PencilInvariants pinv;
    bool w0_in = false;
};

CaseData case_data(const PolyMatrix& phi) {
    CaseData d;
    d.label = classify_case(phi);
    d.J = ideal_J(phi, d.label);
    d.K = ideal_K(phi);
    JacobianDual Bpp = jacobian_dual(phi_double_prime(phi), Frame::XYZW0);
    d.as = alpha_system(Bpp);
    d.pinv = classify_phi_prime(pencil_from_matrix(phi_prime(phi)));
    d.w0_in = w0_in_i2(Bpp);
    return d;
}

int max_block(const PencilInvariants& p) {
    return p.m_block_sizes.empty() ? 0 : p.m_block_sizes.back();
}

} // namespace

Ideal symbolic_square_K(const PolyMatrix& phi, Method m) {
    const Ctx& ctx = phi.ctx;
    int n = phi.rows;
    CaseData d = case_data(phi);
    if (d.label.kind != CaseKind::I)
        throw ValidationError("symbolic square of K applies to Case I only");

    std::vector<Polynomial> og = d.J.gens;
    for (auto& g : square_gens(d.K)) og.push_back(g);
    Ideal oracle = saturate(Ideal(ctx, og), Ideal(ctx, {var_poly(ctx, "x")})).ideal;

    Polynomial z2w02 = Polynomial::monomial(ctx, mono_from(ctx, {{"z", 2}, {"w0", 2}}));
    std::vector<Polynomial> fg = d.J.gens;
    if (d.pinv.summary == PencilSummary::SingleLPrime) {
        if (!d.w0_in) {
            fg.push_back(z2w02);
            for (auto& g : build_N(1, d.as, d.pinv, d.K).gens) fg.push_back(g);
        } else {
            for (auto& g : build_N(2, d.as, d.pinv, d.K).gens) fg.push_back(g);
        }
    } else if (max_block(d.pinv) >= 2) {
        if (!d.w0_in)
            throw MathMismatch("square block of size >= 2 forces w0 in I_2(B(phi''))");
        for (auto& g : square_gens(d.K)) fg.push_back(g);
        fg.push_back(var_poly(ctx, "z") * w_poly(ctx, n - 2) * d.as.alpha.back());
        for (auto& g : abcd_families(phi, d.as)) fg.push_back(g);
    } else {
        for (auto& g : build_N(d.w0_in ? 4 : 3, d.as, d.pinv, d.K).gens) fg.push_back(g);
        if (d.w0_in)
            for (auto& g : square_gens(d.K)) fg.push_back(g);
    }
    Ideal formula(ctx, std::move(fg));
    if (!ideal_equal(formula, oracle))
        throw MathMismatch("symbolic square: closed form disagrees with the x-saturation");
    return m == Method::oracle ? reduced(std::move(oracle)) : reduced(std::move(formula));
}

Ideal ideal_Kprime(const PolyMatrix& phi, Method m) {
    const Ctx& ctx = phi.ctx;
    CaseData d = case_data(phi);
    if (d.label.kind != CaseKind::II)
        throw ValidationError("K' applies to Case II only");
    int na = (int)d.as.alpha.size();
    Polynomial z2w0 = Polynomial::monomial(ctx, mono_from(ctx, {{"z", 2}, {"w0", 1}}));
    Polynomial zp = var_poly(ctx, "z");
    Polynomial wn1 = w_poly(ctx, phi.rows - 1), wn2 = w_poly(ctx, phi.rows - 2);
    const auto& a = d.as.alpha;

    std::vector<Polynomial> og = d.J.gens;
    og.push_back(z2w0);
    Ideal oracle = colon(colon(Ideal(ctx, og), u_ideal(ctx)), u_ideal(ctx));

    std::vector<Polynomial> fg = d.J.gens;
    fg.push_back(z2w0);
    for (int i = 0; i < na; ++i) fg.push_back(zp * a[i]);
    auto add_products = [&] {
        for (int i = 0; i < na; ++i)
            for (int j = i; j < na; ++j) fg.push_back(a[i] * a[j]);
    };
    auto add_upper = [&](const Polynomial& u, const Polynomial& v) {
        // u*a_i - v*a_{i+1} at the chain-unbroken indices 2 <= i <= n-4
        for (int i = 1; i + 1 < na; ++i)
            fg.push_back(u * a[i] - v * a[i + 1]);
    };
    if (d.pinv.summary == PencilSummary::SingleLPrime) {
        if (!d.w0_in) {
            for (int j = 0; j + 1 < na; ++j) fg.push_back(-wn2 * a[j + 1] + wn1 * a[j]);
        } else {
            add_products();
            add_upper(wn1, wn2);
        }
    } else if (max_block(d.pinv) >= 2) {
        if (!d.w0_in)
            throw MathMismatch("square block of size >= 2 forces w0 in I_2(B(phi''))");
        add_products();
        for (auto& g : abcd_families(phi, d.as)) fg.push_back(g);
    } else {
        if (d.pinv.elementary_divisors.empty())
            throw ValidationError("pencil has no M block");
        const Polynomial& lf = d.pinv.elementary_divisors.front().first;
        Polynomial la = Polynomial::constant(ctx, coeff_of(lf, mono_from(ctx, {{"x", 1}})));
        Polynomial lb = Polynomial::constant(ctx, coeff_of(lf, mono_from(ctx, {{"y", 1}})));
        if (!d.w0_in) {
            for (int j = 0; j + 1 < na; ++j)
                fg.push_back(-la * wn1 * a[j + 1] + lb * wn1 * a[j]);
        } else {
            add_products();
            add_upper(lb * wn1, la * wn1);
        }
    }
    Ideal formula(ctx, std::move(fg));
    if (!ideal_equal(formula, oracle))
        throw MathMismatch("K': closed form disagrees with the colon oracle");
    return m == Method::oracle ? reduced(std::move(oracle)) : reduced(std::move(formula));
}

Ideal ideal_Kdoubleprime(const PolyMatrix& phi) {
    const Ctx& ctx = phi.ctx;
    CaseLabel label = classify_case(phi);
    if (label.kind != CaseKind::III)
        throw ValidationError("K'' applies to Case III only");
    Ideal J = ideal_J(phi, label);
    std::vector<Polynomial> gens = J.gens;
    gens.push_back(Polynomial::monomial(ctx, mono_from(ctx, {{"z", 2}, {"w0", 1}})));
    Ideal lift(ctx, std::move(gens));
    Ideal U = make_ideal(ctx, std::vector<std::string>{"x", "y", "z^2*w0"});
    if (!ideal_equal(colon(lift, U), lift))
        throw MathMismatch("(z^2 w0) : (x,y,z^2 w0) != (z^2 w0) in B");
    return reduced(std::move(lift));
}

Ideal defining_ideal(const PolyMatrix& phi, DefiningMethod m) {
    const Ctx& ctx = phi.ctx;
    int n = phi.rows;
    Ideal L = symmetric_ideal(phi);
    if (m == DefiningMethod::saturation)
        return saturate(L, xy_ideal(ctx)).ideal;

    CaseLabel label = classify_case(phi);
    Polynomial last = column_form(phi, n - 2);
    if (label.kind == CaseKind::I) {
        Ideal J = ideal_J(phi, label);
        Ideal K2 = symbolic_square_K(phi, Method::formula);
        std::vector<Polynomial> gens = J.gens;
        for (auto& g : K2.gens) gens.push_back(last * g);
        Polynomial den =
            Polynomial::monomial(ctx, mono_from(ctx, {{"z", 2}, {"w0", 2}}));
        // Saturation rather than a single colon: the quotient by the
        // denominator need not stabilize in one step (seen for n >= 6).
        return saturate(Ideal(ctx, std::move(gens)), Ideal(ctx, {den})).ideal;
    }
    if (label.kind == CaseKind::II) {
        Ideal J = ideal_J(phi, label);
        Ideal Kp = ideal_Kprime(phi, Method::formula);
        std::vector<Polynomial> gens = J.gens;
        for (auto& g : Kp.gens) gens.push_back(last * g);
        Polynomial den = Polynomial::monomial(ctx, mono_from(ctx, {{"z", 2}, {"w0", 1}}));
        return saturate(Ideal(ctx, std::move(gens)), Ideal(ctx, {den})).ideal;
    }
    JacobianDual B = jacobian_dual(phi, Frame::XYZ2W0);
    std::vector<Polynomial> gens = L.gens;
    for (auto& g : matrix_minors(B.B, 3)) gens.push_back(g);
    Ideal direct(ctx, std::move(gens));

    Ideal J = ideal_J(phi, label);
    Ideal Kpp = ideal_Kdoubleprime(phi);
    std::vector<Polynomial> cg = J.gens;
    for (auto& g : Kpp.gens) cg.push_back(last * g);
    Polynomial den = Polynomial::monomial(ctx, mono_from(ctx, {{"z", 2}, {"w0", 1}}));
    Ideal via_colon = saturate(Ideal(ctx, std::move(cg)), Ideal(ctx, {den})).ideal;
    if (!ideal_equal(direct, via_colon))
        throw MathMismatch("Case III: L + I_3(B(phi)) != the colon form");
    return reduced(std::move(direct));
}

ObsColonReport verify_obs_colon(const PolyMatrix& phi) {
    const Ctx& ctx = phi.ctx;
    Ideal L = symmetric_ideal(phi);
    CaseLabel label = classify_case(phi);
    bool case3 = label.kind == CaseKind::III;
    Ideal U = case3 ? xy_ideal(ctx) : u_ideal(ctx);
    JacobianDual B = jacobian_dual(phi, case3 ? Frame::XYZ2W0 : Frame::XYZW0);
    std::vector<Polynomial> gens = L.gens;
    for (auto& g : matrix_minors(B.B, 3)) gens.push_back(g);
    ObsColonReport rep;
    rep.equal = ideal_equal(colon(L, U), Ideal(ctx, std::move(gens)));
    rep.exponent = saturate(L, U).exponent;
    if (!case3 && rep.exponent < 2)
        throw MathMismatch("saturation exponent below 2 in Case " + label.str());
    return rep;
}

PolyMatrix random_instance(Branch branch, unsigned long seed, int n, Field field) {
    if (n < 5) throw ValidationError("random instance needs n >= 5");
    Ctx ctx = make_pipeline_ring(n, field);
    Polynomial x = var_poly(ctx, "x"), y = var_poly(ctx, "y"), z = var_poly(ctx, "z");
    std::mt19937_64 rng(seed);
    auto small = [&](int lo, int hi) {
        return (long)std::uniform_int_distribution<int>(lo, hi)(rng);
    };
    auto cpoly = [&](long v) { return Polynomial::constant(ctx, (long)v); };

    int m_size = 0;  // square block size
    switch (branch) {
        case Branch::I_N3:
        case Branch::I_N4:
        case Branch::II_3a:
        case Branch::II_3b: m_size = 1; break;
        case Branch::I_Rp2:
        case Branch::II_2: m_size = 2; break;
        default: break;
    }
    if (m_size == 2 && n < 6)
        throw ValidationError("square-block branches need n >= 6");
    bool want_w0_in = branch == Branch::I_N2 || branch == Branch::I_N4 ||
                      branch == Branch::I_Rp2 || branch == Branch::II_1b ||
                      branch == Branch::II_2 || branch == Branch::II_3b;
    bool case2 = branch == Branch::II_1a || branch == Branch::II_1b ||
                 branch == Branch::II_2 || branch == Branch::II_3a ||
                 branch == Branch::II_3b;
    bool case3 = branch == Branch::III;

    for (int attempt = 0; attempt < 400; ++attempt) {
        PolyMatrix M = PolyMatrix::zero(ctx, n, n - 1);
        int r = (n - 2) - m_size;  // staircase columns
        for (int j = 0; j < r; ++j) {
            M.at(1 + j, j) = M.at(1 + j, j) + x;
            M.at(2 + j, j) = M.at(2 + j, j) + y;
        }
        if (m_size > 0) {
            // the closed forms degenerate when the elementary divisor is
            // proportional to x or to y, so keep both coefficients nonzero
            long la = small(1, 2), lb = small(1, 2) * (small(0, 1) ? 1 : -1);
            Polynomial lf = cpoly(la) * x + cpoly(lb) * y;
            for (int t = 0; t < m_size; ++t) {
                M.at(1 + r + 1 + t, r + t) = lf;
                if (t + 1 < m_size) M.at(1 + r + 1 + t, r + t + 1) = y;
            }
        }
        // top-row linear entries, in the normal form of the theorems:
        // a_1 = 1, b_{n-3} = 1, all other coefficients zero; breaking the
        // chain with b_1 = 1 pushes w0 into I_2(B(phi''))
        M.at(0, 0) = want_w0_in && m_size < 2 ? x + y : x;
        M.at(0, n - 4) = M.at(0, n - 4) + y;
        if (!case3) M.at(0, n - 3) = z;
        // last column
        auto quad = [&] {
            return cpoly(small(-1, 2)) * x * x + cpoly(small(-1, 2)) * x * y +
                   cpoly(small(-1, 2)) * y * y;
        };
        for (int rr = 0; rr < n; ++rr) M.at(rr, n - 2) = quad();
        if (case3) {
            M.at(0, n - 2) = z * z;
        } else if (case2) {
            int iz = 1 + (int)small(0, n - 2);
            M.at(iz, n - 2) = M.at(iz, n - 2) + (small(0, 1) ? x : y) * z;
        } else {
            M.at(0, n - 2) = M.at(0, n - 2) + x * z;
        }

        try {
            if (!validate_setting(M).ok()) continue;
            PolyMatrix Mn = normalize_shape(M);
            CaseLabel label = classify_case(Mn);
            if (case3 != (label.kind == CaseKind::III)) continue;
            if (!case3 && case2 != (label.kind == CaseKind::II)) continue;
            PencilInvariants pinv = classify_phi_prime(pencil_from_matrix(phi_prime(Mn)));
            if (m_size == 0 && pinv.summary != PencilSummary::SingleLPrime) continue;
            if (m_size > 0 && (pinv.summary != PencilSummary::LPrimeWithM ||
                               max_block(pinv) != m_size))
                continue;
            if (!case3) {
                JacobianDual Bpp = jacobian_dual(phi_double_prime(Mn), Frame::XYZW0);
                if (w0_in_i2(Bpp) != want_w0_in) continue;
            }
            return Mn;
        } catch (const Error&) {
            continue;
        }
    }
    throw ValidationError("could not hit branch " + branch_name(branch) +
                          " from seed " + std::to_string(seed));
}

} // namespace rk
