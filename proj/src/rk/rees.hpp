#pragma once

#include "ideals.hpp"
#include "pencil.hpp"

namespace rk {

// Setting checks: height_two_perfect, almost_linear, i1_is_m, mu_gt_4,
// rank_mod_xy_le_1, g2_not_g3. All must hold before the pipeline runs.
struct SettingReport {
    std::vector<std::pair<std::string, bool>> checks;
    std::string witness;  // offending entry or minor for the first failure

    bool ok() const;
    bool check(const std::string& name) const;
};

enum class CaseKind { I, II, III };

struct CaseLabel {
    CaseKind kind = CaseKind::I;
    bool last_in_U2 = false;  // l_{n-1} in (x,y,zw0)^2, meaningful for I/II
    std::string evidence;

    std::string str() const;
};

enum class Frame { XYZW0, XYZ2W0, XY };

struct JacobianDual {
    Frame frame = Frame::XYZW0;
    std::vector<Polynomial> frame_gens;
    PolyMatrix B;
    PolyMatrix source;
};

// The 2 x (n-2) matrix A (top rows of B(phi'')) and its distinguished
// minors: alpha_i pairs column i with the last column, c_ij are the
// remaining 2x2 minors, alpha_x/alpha_y replace one row by [0 1].
struct AlphaSystem {
    PolyMatrix A;
    std::vector<Polynomial> alpha;    // alpha_1 .. alpha_{n-3}, index 0 based
    std::vector<Polynomial> alpha_x;  // alpha_{i_x} = -a_{2i}
    std::vector<Polynomial> alpha_y;  // alpha_{i_y} =  a_{1i}
    std::vector<std::tuple<int, int, Polynomial>> cij;  // (i, j, c_ij), 1-based
};

enum class Method { formula, oracle };
enum class DefiningMethod { formula, saturation };

SettingReport validate_setting(const PolyMatrix& phi);

// Elementary row/column operations over k (plus the z-multiple column move
// of the third shape) bringing phi to one of the three canonical shapes:
// z concentrated at entry (0, n-3) with coefficient 1, or z absent from
// the linear columns with z^2 in the top entry of the last column.
PolyMatrix normalize_shape(const PolyMatrix& phi);

// Expects a normalized matrix.
CaseLabel classify_case(const PolyMatrix& phi);

Ideal symmetric_ideal(const PolyMatrix& phi);

JacobianDual jacobian_dual(const PolyMatrix& phi, Frame frame);

AlphaSystem alpha_system(const JacobianDual& Bpp);

// Submatrices used throughout: phi'' drops the last column, phi' further
// drops the first row.
PolyMatrix phi_double_prime(const PolyMatrix& phi);
PolyMatrix phi_prime(const PolyMatrix& phi);

// J = (l_1..l_{n-2}) : (x,y,zw0) for Cases I/II; (l_1..l_{n-2}) : (x,y)
// for Case III, where the identity J:(x,y) = J + I_2(B(phi'')) is also
// verified.
Ideal ideal_J(const PolyMatrix& phi, const CaseLabel& label);

// K = (l_1..l_{n-2}) + I_2(A) + (zw0).
Ideal ideal_K(const PolyMatrix& phi);

// The generator families N_1..N_4 lifted to S (the K^2 part of N_2/N_4 is
// taken from K).
Ideal build_N(int kind, const AlphaSystem& data, const PencilInvariants& blocks,
              const Ideal& K);

// Symbolic square of K-bar, lifted to S as an ideal containing J. The
// formula branch dispatches on (pencil summary, w0 membership); the oracle
// is (K^2 + J) : x^infty. Both are always computed and must agree.
Ideal symbolic_square_K(const PolyMatrix& phi, Method m);

// K' = (z^2 w0) : (x,y,zw0)^2 in B, lifted to S. Same formula/oracle
// discipline with the six lists of the Case II theorem.
Ideal ideal_Kprime(const PolyMatrix& phi, Method m);

// K'' = (z^2 w0) in B (Case III), with the colon identity verified.
Ideal ideal_Kdoubleprime(const PolyMatrix& phi);

// The defining ideal of the Rees algebra, as a reduced GB in S.
Ideal defining_ideal(const PolyMatrix& phi, DefiningMethod m);

struct ObsColonReport {
    bool equal = false;  // L : U == L + I_3(B(phi))
    int exponent = 0;    // saturation exponent of L with respect to U
};
// Cases I/II: U = (x,y,zw0), exponent must be >= 2. Case III: U = (x,y).
ObsColonReport verify_obs_colon(const PolyMatrix& phi);

// Theorem branches covered by the random generator.
enum class Branch {
    I_N1,    // single staircase, w0 outside
    I_N2,    // single staircase, w0 inside
    I_Rp2,   // staircase + square block of size >= 2
    I_N3,    // staircase + 1x1 block, w0 outside
    I_N4,    // staircase + 1x1 block, w0 inside
    II_1a,
    II_1b,
    II_2,
    II_3a,
    II_3b,
    III
};
std::string branch_name(Branch b);

// Seeded construction of a Setting-1.1 instance hitting the requested
// branch; draws are rejection-tested against validate/classify/pencil.
PolyMatrix random_instance(Branch branch, unsigned long seed, int n, Field field = {});

} // namespace rk
