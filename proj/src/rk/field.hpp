#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace rk {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseError : Error { using Error::Error; };
struct ContextMismatch : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct NormalizationFailed : Error { using Error::Error; };
struct FrameMismatch : Error { using Error::Error; };
struct MathMismatch : Error { using Error::Error; };
struct NeedsFieldExtension : Error { using Error::Error; };

// Coefficient field: rationals when p == 0, otherwise GF(p).
// GF(p) elements are kept as canonical integers in [0, p).
struct Field {
    unsigned long p = 0;

    bool rational() const { return p == 0; }
    bool operator==(const Field&) const = default;

    mpq_class normalize(const mpq_class& v) const {
        if (p == 0) return v;
        mpz_class num = v.get_num() % mpz_class(p);
        if (num < 0) num += p;
        mpz_class den = v.get_den() % mpz_class(p);
        if (den == 0) throw Error("division by zero modulo p");
        if (den != 1) {
            mpz_class inv;
            if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mpz_class(p).get_mpz_t()) == 0)
                throw Error("noninvertible denominator modulo p");
            num = (num * inv) % mpz_class(p);
        }
        return mpq_class(num);
    }

    mpq_class add(const mpq_class& a, const mpq_class& b) const { return normalize(a + b); }
    mpq_class sub(const mpq_class& a, const mpq_class& b) const { return normalize(a - b); }
    mpq_class mul(const mpq_class& a, const mpq_class& b) const { return normalize(a * b); }
    mpq_class neg(const mpq_class& a) const { return normalize(-a); }
    mpq_class div(const mpq_class& a, const mpq_class& b) const {
        if (b == 0) throw Error("division by zero");
        if (p == 0) return mpq_class(a / b);
        return mul(a, inv(b));
    }
    mpq_class inv(const mpq_class& a) const {
        if (a == 0) throw Error("inverse of zero");
        if (p == 0) return mpq_class(1 / a);
        mpq_class c = normalize(a);
        mpz_class r;
        if (mpz_invert(r.get_mpz_t(), c.get_num().get_mpz_t(), mpz_class(p).get_mpz_t()) == 0)
            throw Error("noninvertible element modulo p");
        return mpq_class(r);
    }

    std::string describe() const { return p == 0 ? "QQ" : "GF(" + std::to_string(p) + ")"; }
};

} // namespace rk
