#pragma once

// Saving exponents eta_n(eps), auxiliary moment orders kappa_n(eps), and the
// closed-form bounds they feed. All exponent arithmetic is exact over Q;
// conversion to double happens only in the bound functions.

#include <gmpxx.h>

#include <string_view>
#include <vector>

#include "weil/field.hpp"

namespace weil {

using ExactRational = mpq_class;

/// Parses "NUM/DEN" or an integer literal; throws std::invalid_argument otherwise.
ExactRational parse_rational(std::string_view text);

/// Exact ceiling of a rational.
mpz_class ceil(const ExactRational& q);

/// Memoized rows n -> (kappa_n, eta_n) for one eps.
///
///   eta_1 = eta_2 = 7 eps / 27
///   kappa_n = ceil((n - 2 - 7 eps / 3) / (2 eta_{n-1}) + 3),   n >= 3
///   eta_n = 7 eps / (18 kappa_n)
///
/// Not thread-safe; use one table per thread.
class EtaTable {
public:
    /// Throws std::invalid_argument unless eps > 0.
    explicit EtaTable(ExactRational eps);

    const ExactRational& epsilon() const noexcept { return eps_; }
    const ExactRational& eta(unsigned n);
    /// Throws std::invalid_argument for n < 3.
    const mpz_class& kappa(unsigned n);

private:
    void extend(unsigned n);

    ExactRational eps_;
    std::vector<ExactRational> eta_;  // eta_[n], index 0 unused
    std::vector<mpz_class> kappa_;    // kappa_[n], zero below 3
};

mpz_class kappa(unsigned n, const ExactRational& eps);
ExactRational eta(unsigned n, const ExactRational& eps);

/// (7 eps / 9)^{n-1} / (n - 2)!; requires n >= 2.
ExactRational eta_lower_shape(unsigned n, const ExactRational& eps);

double to_double(const ExactRational& q);

// Displayed bound expressions, without implied constants. p and tau are reals.
double theorem_bound(double p, double tau, unsigned n, const ExactRational& eps);  // tau p^{-eta_n}
double binomial_bound(double p, double tau);                                      // tau^{20/27} p^{1/9}
double monomial_bound(double p, double tau);  // min{p^{1/2}, tau^{1/2} p^{1/6} (log p)^{1/6}}
double q3_bound(double p, double tau);        // tau^{11/3} + tau^5 / p
double curve_bound(double d, double p);       // 4 d^{4/3} p^{2/3} + 3 p
inline double kloosterman_bound(double p, double tau) { return binomial_bound(p, tau); }

struct AdmissibleRange {
    bool theorem_hypothesis;  // tau >= p^{3/7 + eps}
    bool reduction_applies;   // tau <= p^{3/4}
    bool medium_window;       // both of the above
    double lower;             // p^{3/7 + eps}
    double upper;             // p^{3/4}
};

/// Decided exactly as integer power comparisons.
AdmissibleRange admissible_range(u64 p, u64 tau, const ExactRational& eps);

struct InductionLevel {
    unsigned level;  // number of monomials r at this step
    mpz_class k;     // kappa_r(eps)
    unsigned l;      // always 3
    unsigned u;      // r - 1
    unsigned v;      // 2
};

/// Parameter choices of the induction from r monomials down to the binomial base.
/// Requires r >= 3; returns r - 2 levels, outermost first.
std::vector<InductionLevel> induction_trace(unsigned r, const ExactRational& eps);

}  // namespace weil
