#pragma once

#include "ring.hpp"

namespace rk {

// Linear pencil x*A + y*B with scalar matrices A, B.
struct Pencil {
    int rows = 0, cols = 0;
    std::vector<mpq_class> A, B;  // row-major
    Ctx ctx;

    const mpq_class& a(int r, int c) const { return A[(size_t)r * cols + c]; }
    const mpq_class& b(int r, int c) const { return B[(size_t)r * cols + c]; }
    PolyMatrix to_matrix() const;
};

enum class PencilSummary { SingleLPrime, LPrimeWithM };

struct PencilInvariants {
    int normal_rank = 0;
    std::vector<Polynomial> invariant_factors;         // s_1, ..., s_rank
    std::vector<std::pair<Polynomial, int>> elementary_divisors;  // (linear form, power)
    bool has_zero_block = false;
    PencilSummary summary = PencilSummary::SingleLPrime;
    std::vector<int> m_block_sizes;                    // r' for each M_{r'} block

    std::string summary_str() const;
};

// Split a matrix of linear forms in x, y into its pencil; throws
// ValidationError when an entry involves z, any w, or is nonlinear.
Pencil pencil_from_matrix(const PolyMatrix& M);

// Smith-form data over k[x,y]: d_i = gcd of the i x i minors as binary
// forms, s_i = d_i / d_{i-1}. Forms are normalized monic after setting
// y = 1 (pure powers of y monic in y).
std::vector<Polynomial> invariant_factors(const Pencil& P);

// Kronecker block summary for the phi' pencils: either a single staircase
// block (all s_i constant) or a staircase plus square blocks whose sizes
// are the elementary-divisor degrees. Throws ValidationError when the
// pencil drops normal column rank, NeedsFieldExtension when an invariant
// factor does not split into linear forms over the base field.
PencilInvariants classify_phi_prime(const Pencil& P);

} // namespace rk
