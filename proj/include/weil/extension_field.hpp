#pragma once

#include <gmpxx.h>

#include <vector>

#include "weil/field.hpp"

namespace weil {

/// F_{p^j} realised as F_p[X]/(P) with P the lexicographically least monic
/// irreducible polynomial of degree j. Candidates are ordered by the integer
/// c_0 + c_1 p + ... + c_{j-1} p^{j-1} formed from their non-leading coefficients.
///
/// Elements are coefficient vectors of length j (low to high).
class ExtensionField {
public:
    using Element = std::vector<u64>;

    ExtensionField(PrimeModulus base, unsigned degree);

    const PrimeModulus& base() const noexcept { return base_; }
    unsigned degree() const noexcept { return degree_; }
    /// Monic defining polynomial, coefficients low to high (length degree + 1).
    const std::vector<u64>& defining_polynomial() const noexcept { return poly_; }
    /// p^j - 1.
    const mpz_class& group_order() const noexcept { return group_order_; }

    Element zero() const { return Element(degree_, 0); }
    Element one() const { return from_base(1); }
    Element from_base(u64 c) const;
    /// The element whose coefficient vector is the base-p digits of `index`.
    Element from_index(u64 index) const;

    bool is_base(const Element& a) const;
    bool is_zero(const Element& a) const;

    Element add(const Element& a, const Element& b) const;
    Element sub(const Element& a, const Element& b) const;
    Element mul(const Element& a, const Element& b) const;
    Element scale(const Element& a, u64 c) const;
    Element pow(const Element& a, u64 e) const;
    Element pow(const Element& a, const mpz_class& e) const;
    Element frobenius(const Element& a) const { return pow(a, base_.value()); }

private:
    PrimeModulus base_;
    unsigned degree_;
    std::vector<u64> poly_;
    mpz_class group_order_;
};

/// True when the monic polynomial (low to high coefficients) is irreducible over F_p.
bool is_irreducible(const PrimeModulus& mod, const std::vector<u64>& monic_coeffs);

/// Order of p in (Z/e)^*; requires gcd(p, e) = 1.
unsigned multiplicative_order_mod(u64 p, u64 e);

/// All solutions of Z^e = 1, listed as 1, zeta, zeta^2, ... for a fixed
/// primitive e-th root zeta, inside the smallest field F_{p^j} containing them.
struct RootsOfUnity {
    ExtensionField field;
    u64 e;
    std::vector<ExtensionField::Element> roots;
};

/// Throws std::invalid_argument when p divides e or e == 0.
RootsOfUnity roots_of_unity(const PrimeModulus& mod, u64 e);

}  // namespace weil
