#pragma once

// Weil sums e_p(f(x)) over F_p, intervals, subgroups and subgroup orbits.

#include <span>
#include <vector>

#include "weil/character.hpp"
#include "weil/field.hpp"

namespace weil {

struct Term {
    u64 exponent;
    u64 coeff;
    friend bool operator==(const Term&, const Term&) = default;
};

/// f(X) = a_0 + a_1 X^{n_1} + ... + a_r X^{n_r} with 1 <= n_1 < ... < n_r.
///
/// Terms are kept sorted by exponent; terms with a zero coefficient are dropped.
/// Coefficients are plain integers and are reduced modulo p at evaluation time.
class SparsePolynomial {
public:
    SparsePolynomial() = default;
    /// Throws std::invalid_argument on a zero or repeated exponent.
    explicit SparsePolynomial(std::vector<Term> terms, u64 constant = 0);

    static SparsePolynomial monomial(u64 coeff, u64 exponent) { return SparsePolynomial({{exponent, coeff}}); }
    static SparsePolynomial constant_poly(u64 c) { return SparsePolynomial({}, c); }

    std::span<const Term> terms() const noexcept { return terms_; }
    u64 constant() const noexcept { return constant_; }
    std::size_t term_count() const noexcept { return terms_.size(); }
    u64 degree() const noexcept { return terms_.empty() ? 0 : terms_.back().exponent; }
    std::vector<u64> exponents() const;

    u64 eval(const PrimeModulus& mod, u64 x) const noexcept;

    /// Same polynomial with coefficients reduced modulo p (zero terms dropped).
    SparsePolynomial reduced(const PrimeModulus& mod) const;
    /// -f, coefficients taken modulo p.
    SparsePolynomial negated(const PrimeModulus& mod) const;
    /// f(hX) modulo p.
    SparsePolynomial dilated(const PrimeModulus& mod, u64 h) const;

    friend bool operator==(const SparsePolynomial&, const SparsePolynomial&) = default;

private:
    std::vector<Term> terms_;
    u64 constant_ = 0;
};

/// Replace each exponent n_i by n_i mod tau, folding exponents that become 0
/// into the constant and merging collisions modulo p. On a subgroup of order
/// tau the result takes the same values as f.
SparsePolynomial normalize_exponents(const SparsePolynomial& f, u64 tau, const PrimeModulus& mod);

struct SumValue {
    UnitComplex value{};
    u64 term_count = 0;
    /// Terms skipped by the summation (inversive sums only).
    u64 excluded = 0;

    double magnitude() const noexcept { return std::abs(value); }
};

/// Evaluates f(theta^x) for consecutive x by multiplying cached powers
/// theta^{x n_i} by theta^{n_i} at every step.
class OrbitEvaluator {
public:
    OrbitEvaluator(const PrimeModulus& mod, u64 theta, const SparsePolynomial& f, u64 start_x);

    u64 value() const noexcept;
    void advance() noexcept;

private:
    PrimeModulus mod_;
    u64 constant_;
    std::vector<u64> coeffs_;
    std::vector<u64> steps_;
    std::vector<u64> powers_;
};

SumValue complete_sum(const PrimeModulus& mod, const SparsePolynomial& f);
/// Sum over x = 0..N-1; requires 1 <= N <= p.
SumValue interval_sum(const PrimeModulus& mod, const SparsePolynomial& f, u64 n);
SumValue subgroup_sum(const SubgroupSpec& g, const SparsePolynomial& f);
/// Sum over x = 1..tau of e_p(f(theta^x)) exp(2 pi i b x / tau); requires b < tau.
SumValue twisted_sum(const SubgroupSpec& g, const SparsePolynomial& f, u64 b);
/// Sum over x = 1..N of e_p(f(theta^x)); requires N <= tau.
SumValue incomplete_subgroup_sum(const SubgroupSpec& g, const SparsePolynomial& f, u64 n);
/// Sum over g in G of e_p(a g + b g^{-1}).
SumValue kloosterman_subgroup(const SubgroupSpec& g, u64 a, u64 b);
/// Sum over g in G with a g + b != 0 of e_p((a g + b)^{-1}); `excluded` counts the skipped g.
SumValue inversive_subgroup_sum(const SubgroupSpec& g, u64 a, u64 b);

}  // namespace weil
