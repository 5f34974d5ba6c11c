#pragma once

// Exact counts for the diagonal systems
//   g_1^{n_i} + ... + g_k^{n_i} = g_{k+1}^{n_i} + ... + g_{2k}^{n_i},  i = 1..r,
// over a subgroup G, and the six-variable analogue over F_p^*.

#include <gmpxx.h>

#include <span>
#include <vector>

#include "weil/expsum.hpp"
#include "weil/field.hpp"

namespace weil {

using MomentCount = mpz_class;
using ExactRational = mpq_class;

/// Limits shared by every counter.
struct MomentGuards {
    static constexpr u64 kMaxEnumeration = 100'000'000;  // tau^k for the brute-force counter
    static constexpr u64 kMaxHistogram = 100'000'000;    // p^r cells for convolution
};

/// Exponents n_1 < ... < n_r, all positive.
class ExponentVector {
public:
    /// Throws std::invalid_argument unless the exponents are positive and strictly increasing.
    explicit ExponentVector(std::vector<u64> exps);

    std::span<const u64> values() const noexcept { return n_; }
    std::size_t size() const noexcept { return n_.size(); }
    u64 operator[](std::size_t i) const noexcept { return n_[i]; }
    /// (n_1, ..., n_u).
    ExponentVector prefix(std::size_t u) const;

private:
    std::vector<u64> n_;
};

/// Multiplicities of vectors in (Z/p)^r. Stored densely when at least 1/8 of
/// the p^r cells are occupied and as a sorted key list otherwise.
///
/// A vector (l_1, ..., l_r) is keyed by l_1 p^{r-1} + ... + l_r.
class PowerVectorHistogram {
public:
    PowerVectorHistogram(u64 p, unsigned dims);

    u64 prime() const noexcept { return p_; }
    unsigned dims() const noexcept { return dims_; }
    u64 cells() const noexcept { return cells_; }
    bool dense() const noexcept { return dense_; }

    u64 key(std::span<const u64> lambda) const;
    std::vector<u64> decode(u64 key) const;

    u64 at(u64 key) const;
    u64 operator()(std::span<const u64> lambda) const { return at(key(lambda)); }
    std::size_t support_size() const;

    MomentCount total_mass() const;
    MomentCount sum_of_squares() const;

    /// Visits every occupied cell in ascending key order.
    template <class Fn>
    void for_each(Fn&& fn) const {
        if (dense_) {
            for (u64 k = 0; k < cells_; ++k)
                if (dense_counts_[k]) fn(k, dense_counts_[k]);
        } else {
            for (const auto& [k, c] : sparse_) fn(k, c);
        }
    }

    /// Builds a histogram from (key, weight) pairs; keys may repeat.
    static PowerVectorHistogram from_entries(u64 p, unsigned dims, std::vector<std::pair<u64, u64>> entries);

    /// Additive convolution over (Z/p)^r.
    friend PowerVectorHistogram convolve(const PowerVectorHistogram& a, const PowerVectorHistogram& b);

private:
    void set_dense(std::vector<u64> counts);
    void set_sparse(std::vector<std::pair<u64, u64>> entries);

    u64 p_;
    unsigned dims_;
    u64 cells_;
    bool dense_ = false;
    std::vector<u64> dense_counts_;
    std::vector<std::pair<u64, u64>> sparse_;
};

PowerVectorHistogram convolve(const PowerVectorHistogram& a, const PowerVectorHistogram& b);
/// k-fold convolution power (k >= 1).
PowerVectorHistogram convolution_power(const PowerVectorHistogram& base, unsigned k);

/// Q_k(n; G) by enumerating all tau^k k-tuples and pairing equal power-sum vectors.
/// Guard "enumeration": tau^k <= 10^8.
MomentCount q_bruteforce(const SubgroupSpec& g, const ExponentVector& n, unsigned k);

/// Q_k(n; G) as the sum of squared fibres of the k-fold convolution of the
/// histogram of (g^{n_1}, ..., g^{n_r}). Requires r <= 2.
/// Guards "histogram-size" (p^r <= 10^8) and "count-width" (tau^k < 2^63).
MomentCount q_convolution(const SubgroupSpec& g, const ExponentVector& n, unsigned k);

/// Q_k by convolution when r <= 2 and the histogram fits, otherwise by enumeration.
MomentCount moment_count(const SubgroupSpec& g, const ExponentVector& n, unsigned k);

/// The map lambda -> J_k(lambda) counting k-tuples with a_i (g_1^{n_i} + ... + g_k^{n_i}) = lambda_i.
/// All a_i must be nonzero modulo p.
PowerVectorHistogram j_histogram(const SubgroupSpec& g, const ExponentVector& n, unsigned k,
                                 std::span<const u64> coeffs);

/// Number of (x_1..x_6) in (F_p^*)^6 with sum_{i<=3} x_i^{sm} = sum_{i>3} x_i^{sm}
/// and the same for the exponent sn. Requires n > m >= 1, s >= 1.
MomentCount t3_count(const PrimeModulus& mod, u64 s, u64 m, u64 n);

/// For d = gcd(m, n): (m/d, n/d, gcd(d, p-1)).
struct GcdReduction {
    u64 m;
    u64 n;
    u64 e;
};
GcdReduction gcd_reduction(u64 m, u64 n, u64 p);

struct MomentInequalityReport {
    double lhs;  // |S(G; f)|^{2kl}
    double rhs;  // p^r tau^{2kl-2k-2l} Q_k Q_l
    MomentCount q_k;
    MomentCount q_l;
    bool holds;  // lhs <= rhs (1 + 1e-6)
};

/// Evaluates both sides of |S(G;f)|^{2kl} <= p^r tau^{2kl-2k-2l} Q_k Q_l
/// for f with r >= 1 nonzero non-constant terms.
MomentInequalityReport verify_moment_inequality(const SubgroupSpec& g, const SparsePolynomial& f, unsigned k,
                                                unsigned l);

/// min{r, eta (2k - 6) + 1 + 7 eps / 3}; requires r >= 2, k >= 3, eta > 0, eps >= 0.
ExactRational xi_exponent(unsigned r, unsigned k, const ExactRational& eta, const ExactRational& eps);

}  // namespace weil
