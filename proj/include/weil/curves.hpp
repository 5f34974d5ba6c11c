#pragma once

// The plane curves F(X,Y) = (X^{sm} + Y^{sm} - A)^n - (X^{sn} + Y^{sn} - B)^m over F_p.

#include <optional>

#include "weil/field.hpp"

namespace weil {

struct CurveSpec {
    u64 m = 1;
    u64 n = 2;
    u64 s = 1;
    u64 a = 0;
    u64 b = 0;
    u64 p = 2;

    /// Total degree s m n.
    u64 degree() const noexcept { return s * m * n; }
};

/// Res(f, g) = lc(f)^{deg g} prod_{f(alpha) = 0} g(alpha).
///
/// If exactly one argument is zero the result is 1 when the other is a nonzero
/// constant and 0 otherwise. Throws std::invalid_argument when both are zero.
u64 resultant(const UniPoly& f, const UniPoly& g);

/// (-1)^{d(d-1)/2} Res(f, f') / lc(f), using the formal degree d - 1 for f'.
/// Polynomials of degree <= 1 (including nonzero constants) have discriminant 1.
u64 discriminant(const UniPoly& f);

struct F0Discriminant {
    enum class Kind { regular, degree_at_most_one, zero_polynomial };
    Kind kind;
    u64 value;   // 1 for degree_at_most_one, 0 for zero_polynomial
    int degree;  // degree of F(0, Y) after cancellation, -1 for the zero polynomial
};

/// F(0, Y) = (Y^m - A)^n - (Y^n - B)^m at s = 1.
UniPoly f0_polynomial(u64 m, u64 n, u64 a, u64 b, const PrimeModulus& mod);

/// Discriminant of F(0, Y). Requires n > m >= 1.
F0Discriminant discriminant_F0Y(u64 m, u64 n, u64 a, u64 b, const PrimeModulus& mod);

/// The factors whose product is Delta(A, B), each reduced to F_p.
struct DeltaEvaluation {
    u64 mn;            // m n
    u64 axes;          // (-A)^n - (-B)^m
    u64 coordinate;    // A^n - B^m
    u64 single_roots;  // prod over zeta != 1, zeta^{n-m} = 1
    u64 pair_roots;    // prod over (zeta_1, zeta_2), identically-zero factors dropped
    u64 disc;          // D(A, B)
    u64 value;         // product of all of the above
    unsigned extension_degree;
    u64 dropped_pair_factors;

    bool nonzero() const noexcept { return value != 0; }
};

/// Evaluates Delta(A, B) pointwise. Requires gcd(m, n) = 1, n > m >= 1 and p not
/// dividing m n (n - m); throws std::invalid_argument otherwise.
DeltaEvaluation delta_eval(u64 m, u64 n, u64 a, u64 b, const PrimeModulus& mod);

/// #{(x, y) in F_p^2 : F(x, y) = 0}. Guard "curve-prime": p <= 2000.
u64 count_points(const CurveSpec& spec);

struct CurveBoundReport {
    enum class Delta { nonzero, zero, unavailable };

    u64 count;
    double bound;  // 4 d^{4/3} p^{2/3} + 3 p
    double ratio;
    Delta delta;
    bool in_hypothesis;  // d < p
    bool asserted;       // the bound applies: Delta != 0 and d < p
    bool holds;          // count <= bound whenever asserted
};

CurveBoundReport check_curve_bound(const CurveSpec& spec);

}  // namespace weil
