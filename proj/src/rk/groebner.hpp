#pragma once

#include "ring.hpp"

#include <optional>

namespace rk {

struct GroebnerBasis {
    MonomialOrder order;
    std::vector<Polynomial> elements;  // reduced basis, monic, sorted descending by lm
};

struct Ideal {
    Ctx ctx;
    std::vector<Polynomial> gens;
    mutable std::optional<GroebnerBasis> cached_gb;

    Ideal() = default;
    Ideal(Ctx c, std::vector<Polynomial> g) : ctx(std::move(c)), gens(std::move(g)) {}
    bool is_zero_ideal() const;
};

Ideal make_ideal(const Ctx& ctx, std::vector<Polynomial> gens);
Ideal make_ideal(const Ctx& ctx, const std::vector<std::string>& texts);

// Multivariate division: f = sum q_i g_i + r, no term of r divisible by any
// lm(g_i); divisor selection is first match in list order.
struct DivisionResult {
    std::vector<Polynomial> quotients;
    Polynomial remainder;
};
DivisionResult reduce(const Polynomial& f, const std::vector<Polynomial>& G,
                      const MonomialOrder& order);
Polynomial normal_form(const Polynomial& f, const std::vector<Polynomial>& G,
                       const MonomialOrder& order);

Polynomial s_polynomial(const Polynomial& f, const Polynomial& g, const MonomialOrder& order);

struct BuchbergerOptions {
    bool use_criteria = true;  // coprime-lm and chain criteria
    bool parallel = true;      // batch S-polynomial reduction (deterministic)
};

// Unique reduced Groebner basis of (gens) under the context order.
GroebnerBasis buchberger(const std::vector<Polynomial>& gens,
                         BuchbergerOptions opts = {});
// Reference engine: no selection criteria, strictly sequential.
GroebnerBasis buchberger_reference(const std::vector<Polynomial>& gens);

const GroebnerBasis& gb_of(const Ideal& I);

bool ideal_member(const Polynomial& f, const Ideal& I);
bool ideal_equal(const Ideal& I, const Ideal& J);
bool is_unit_ideal(const Ideal& I);

// Generators of I intersected with the subring omitting drop_vars.
Ideal eliminate(const Ideal& I, const std::vector<std::string>& drop_vars);

// Every pairwise S-polynomial of G reduces to zero.
bool gb_self_check(const GroebnerBasis& G);

} // namespace rk
