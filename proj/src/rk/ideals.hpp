#pragma once

#include "groebner.hpp"

namespace rk {

struct SaturationResult {
    Ideal ideal;
    int exponent = 0;  // first m with I : J^m == I : J^{m+1}
};

// I intersect J via t*I + (1-t)*J and elimination of t.
Ideal intersect(const Ideal& I, const Ideal& J);

// Ideal quotient I : J. Generators come back as the reduced GB.
Ideal colon(const Ideal& I, const Ideal& J);
Ideal colon(const Ideal& I, const Polynomial& g);

SaturationResult saturate(const Ideal& I, const Ideal& J);

// Rabinowitsch: f in sqrt(I) iff 1 in I + (1 - t*f).
bool radical_member(const Polynomial& f, const Ideal& I);

// Krull dimension of S/I via independent sets of the initial ideal.
int dimension(const Ideal& I);
int height(const Ideal& I);

// Fitt_i of the cokernel presented by phi (n x (n-1)): ideal of (n-i)-minors.
Ideal fitting_ideal(const PolyMatrix& phi, int i);

// G_s via heights of Fitting ideals; indices below ht(I) are vacuous.
bool gs_check(const PolyMatrix& phi, int s);

// Min(I_{n-2}(phi)) == {(x,y)}: containment in (x,y) plus x,y in the radical.
bool min_prime_check(const PolyMatrix& phi);

// Exact division f / g; throws MathMismatch when g does not divide f.
Polynomial exact_divide(const Polynomial& f, const Polynomial& g);

} // namespace rk
