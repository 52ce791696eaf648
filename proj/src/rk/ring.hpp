#pragma once

#include "field.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rk {

// Monomial orders. Variable index 0 is the *smallest* variable; the
// pipeline rings use x < y < z < w0 < ... < w_{n-1}.
//
// elim_block > 0 turns the order into a product (elimination) order: the
// top elim_block variables are compared first (degrevlex among
// themselves), then the remaining variables under `kind`.
enum class OrderKind { degrevlex, lex };

struct MonomialOrder {
    OrderKind kind = OrderKind::degrevlex;
    int elim_block = 0;

    bool operator==(const MonomialOrder&) const = default;
    std::string describe() const;
};

struct Monomial {
    std::vector<int> e;
    int deg = 0;

    static Monomial one(int nvars) { return Monomial{std::vector<int>(nvars, 0), 0}; }
    bool is_one() const { return deg == 0; }
    bool operator==(const Monomial&) const = default;
};

Monomial mono_mul(const Monomial& a, const Monomial& b);
bool mono_divides(const Monomial& a, const Monomial& b);   // a | b
Monomial mono_div(const Monomial& a, const Monomial& b);   // a / b, requires b | a
Monomial mono_lcm(const Monomial& a, const Monomial& b);
bool mono_coprime(const Monomial& a, const Monomial& b);
// -1, 0, +1 with a <, =, > b.
int mono_cmp(const Monomial& a, const Monomial& b, const MonomialOrder& ord);

struct RingContext;
using Ctx = std::shared_ptr<const RingContext>;

struct RingContext {
    std::vector<std::string> vars;   // index 0 = smallest variable
    Field field;
    MonomialOrder order;
    int n = 0;                       // generator count for pipeline rings S, else 0

    int nvars() const { return (int)vars.size(); }
    int var(const std::string& name) const;          // -1 if absent
    int var_checked(const std::string& name) const;  // throws
};

// S = k[x, y, z, w0, ..., w_{n-1}] with x < y < z < w0 < ... < w_{n-1}.
Ctx make_pipeline_ring(int n, Field field = {}, MonomialOrder order = {});
Ctx make_ring(std::vector<std::string> vars, Field field = {}, MonomialOrder order = {},
              int n = 0);
// Same variables and field, different order.
Ctx with_order(const Ctx& ctx, MonomialOrder order);
// Appends fresh variables at the top and installs an elimination block of
// that size (used for the t-tricks).
Ctx extend_top(const Ctx& ctx, const std::vector<std::string>& extra);

struct Term {
    Monomial m;
    mpq_class c;
};

struct Bidegree {
    int x_degree = 0;
    int w_degree = 0;
    bool operator==(const Bidegree&) const = default;
};

// Exact sparse multivariate polynomial. Terms are kept sorted in strictly
// descending monomial order (the context's order), coefficients nonzero;
// this canonical form is unique, so operator== is term-wise.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(Ctx ctx) : ctx_(std::move(ctx)) {}
    Polynomial(Ctx ctx, std::vector<Term> terms);  // normalizes

    static Polynomial zero(const Ctx& ctx) { return Polynomial(ctx); }
    static Polynomial constant(const Ctx& ctx, const mpq_class& c);
    static Polynomial variable(const Ctx& ctx, int idx);
    static Polynomial monomial(const Ctx& ctx, Monomial m, mpq_class c = 1);

    const Ctx& ctx() const { return ctx_; }
    const std::vector<Term>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].m.is_one()); }
    int total_degree() const;

    const Term& leading() const;  // under the ctx order; throws on zero

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    bool operator==(const Polynomial& o) const;
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    Polynomial scaled(const mpq_class& c) const;
    Polynomial monic() const;  // leading coefficient 1
    Polynomial times_term(const Monomial& m, const mpq_class& c) const;

    std::string str() const;

private:
    void check_ctx(const Polynomial& o) const;

    Ctx ctx_;
    std::vector<Term> t_;  // descending
};

// Leading term of f under an arbitrary order (not necessarily the ctx one).
Term leading_term(const Polynomial& f, const MonomialOrder& order);

// Bidegree (x-part, w-part) of a bihomogeneous polynomial; throws if f is
// zero or not bihomogeneous. Pipeline rings only (x,y,z vs w split).
Bidegree bidegree_of(const Polynomial& f);

Polynomial parse_poly(const std::string& text, const Ctx& ctx);

// Transport between rings with compatible variable names.
Polynomial map_poly(const Polynomial& f, const Ctx& to);

struct PolyMatrix {
    int rows = 0, cols = 0;
    std::vector<Polynomial> entries;  // row-major
    Ctx ctx;

    const Polynomial& at(int r, int c) const { return entries[(size_t)r * cols + c]; }
    Polynomial& at(int r, int c) { return entries[(size_t)r * cols + c]; }
    static PolyMatrix zero(const Ctx& ctx, int rows, int cols);
};

// All k x k minors, deterministic order (lexicographic on row then column
// index sets), Laplace expansion with subdeterminant memoization.
// k == 0 returns {1}. Parallel and serial variants agree exactly.
std::vector<Polynomial> matrix_minors(const PolyMatrix& M, int k);
std::vector<Polynomial> matrix_minors_serial(const PolyMatrix& M, int k);

} // namespace rk
