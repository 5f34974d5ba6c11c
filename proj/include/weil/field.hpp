#pragma once

// Prime-field arithmetic and cyclic subgroups of F_p^*.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace weil {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

/// Raised when an input exceeds one of the enumeration or memory guards.
/// `guard()` names the guard so the CLI can surface it verbatim.
class GuardError : public std::runtime_error {
public:
    GuardError(std::string guard, const std::string& detail)
        : std::runtime_error(guard + ": " + detail), guard_(std::move(guard)) {}
    const std::string& guard() const noexcept { return guard_; }

private:
    std::string guard_;
};

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(u64 n);

/// Distinct prime factors of n in ascending order (Pollard-Brent for large cofactors).
std::vector<u64> prime_factors(u64 n);

/// All positive divisors of n in ascending order.
std::vector<u64> divisors(u64 n);

u64 gcd(u64 a, u64 b);

/// A prime p < 2^62 together with the data needed for fast reduction.
///
/// Products are formed in 64 bits when p < 2^32 and in 128 bits otherwise.
class PrimeModulus {
public:
    static constexpr u64 kMaxPrime = (u64{1} << 62);

    explicit PrimeModulus(u64 p);

    u64 value() const noexcept { return p_; }

    u64 reduce(i64 a) const noexcept {
        i64 r = a % static_cast<i64>(p_);
        return static_cast<u64>(r < 0 ? r + static_cast<i64>(p_) : r);
    }
    u64 reduce(u64 a) const noexcept { return a % p_; }

    u64 add(u64 a, u64 b) const noexcept {
        u64 s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    u64 sub(u64 a, u64 b) const noexcept { return a >= b ? a - b : a + p_ - b; }
    u64 neg(u64 a) const noexcept { return a == 0 ? 0 : p_ - a; }
    u64 mul(u64 a, u64 b) const noexcept {
        if (narrow_) return (a * b) % p_;
        return static_cast<u64>((static_cast<u128>(a) * b) % p_);
    }
    u64 pow(u64 base, u64 exp) const noexcept;
    /// Inverse of a nonzero element; throws std::domain_error on zero.
    u64 inv(u64 a) const;

    friend bool operator==(const PrimeModulus& a, const PrimeModulus& b) noexcept {
        return a.p_ == b.p_;
    }

private:
    u64 p_;
    bool narrow_;
};

/// Multiplicative order of a nonzero a modulo p.
u64 multiplicative_order(const PrimeModulus& mod, u64 a);

/// Least g >= 1 generating F_p^*. Returns 1 for p = 2.
u64 least_primitive_root(const PrimeModulus& mod);

/// The subgroup G of F_p^* of order tau, with generator theta.
///
/// Enumeration order is theta, theta^2, ..., theta^tau = 1.
class SubgroupSpec {
public:
    SubgroupSpec(PrimeModulus mod, u64 tau, u64 theta);

    const PrimeModulus& modulus() const noexcept { return mod_; }
    u64 prime() const noexcept { return mod_.value(); }
    u64 order() const noexcept { return tau_; }
    u64 generator() const noexcept { return theta_; }
    /// Index (p-1)/tau of G in F_p^*.
    u64 index() const noexcept { return (mod_.value() - 1) / tau_; }

    std::vector<u64> enumerate() const;
    bool contains(u64 x) const;

private:
    PrimeModulus mod_;
    u64 tau_;
    u64 theta_;
};

/// G of order tau with theta = g^((p-1)/tau), g the least primitive root.
/// Throws std::invalid_argument unless tau divides p-1.
SubgroupSpec subgroup(const PrimeModulus& mod, u64 tau);

/// Dense univariate polynomial over F_p, coefficients stored low to high.
/// The zero polynomial has no coefficients and degree -1.
class UniPoly {
public:
    explicit UniPoly(PrimeModulus mod) : mod_(mod) {}
    UniPoly(PrimeModulus mod, std::vector<u64> coeffs);

    static UniPoly monomial(PrimeModulus mod, u64 coeff, std::size_t degree);

    const PrimeModulus& modulus() const noexcept { return mod_; }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    u64 lead() const noexcept { return c_.empty() ? 0 : c_.back(); }
    u64 coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
    std::span<const u64> coeffs() const noexcept { return c_; }

    u64 eval(u64 x) const noexcept;
    UniPoly derivative() const;
    UniPoly monic() const;

    UniPoly& operator+=(const UniPoly& o);
    UniPoly& operator-=(const UniPoly& o);
    UniPoly& operator*=(const UniPoly& o);
    UniPoly& scale(u64 c);

    friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
    friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
    friend UniPoly operator*(UniPoly a, const UniPoly& b) { return a *= b; }
    friend bool operator==(const UniPoly& a, const UniPoly& b) noexcept {
        return a.mod_ == b.mod_ && a.c_ == b.c_;
    }

    /// Quotient and remainder; throws std::domain_error for a zero divisor.
    std::pair<UniPoly, UniPoly> divmod(const UniPoly& d) const;
    UniPoly operator%(const UniPoly& d) const { return divmod(d).second; }

private:
    void trim() noexcept;

    PrimeModulus mod_;
    std::vector<u64> c_;
};

UniPoly pow(const UniPoly& f, u64 e);
/// Monic gcd (zero if both inputs are zero).
UniPoly gcd(const UniPoly& a, const UniPoly& b);

}  // namespace weil
