#include <gtest/gtest.h>

#include <map>
#include <random>

#include "oracles.hpp"
#include "weil/expsum.hpp"
#include "weil/moments.hpp"

using namespace weil;

namespace {

u64 t3_exhaustive(u64 p, u64 s, u64 m, u64 n) {
    // Histogram of (x^{sm}, x^{sn}) sums over triples, then squares.
    std::map<std::pair<u64, u64>, u64> triples;
    for (u64 a = 1; a < p; ++a)
        for (u64 b = 1; b < p; ++b)
            for (u64 c = 1; c < p; ++c) {
                const u64 u = (oracle::powmod(a, s * m, p) + oracle::powmod(b, s * m, p) + oracle::powmod(c, s * m, p)) % p;
                const u64 v = (oracle::powmod(a, s * n, p) + oracle::powmod(b, s * n, p) + oracle::powmod(c, s * n, p)) % p;
                ++triples[{u, v}];
            }
    u64 total = 0;
    for (const auto& [key, count] : triples) total += count * count;
    return total;
}

u64 t3_six_loop(u64 p, u64 s, u64 m, u64 n) {
    std::vector<u64> pm(p), pn(p);
    for (u64 x = 1; x < p; ++x) {
        pm[x] = oracle::powmod(x, s * m, p);
        pn[x] = oracle::powmod(x, s * n, p);
    }
    u64 count = 0;
    for (u64 a = 1; a < p; ++a)
        for (u64 b = 1; b < p; ++b)
            for (u64 c = 1; c < p; ++c)
                for (u64 d = 1; d < p; ++d)
                    for (u64 e = 1; e < p; ++e)
                        for (u64 f = 1; f < p; ++f)
                            count += (pm[a] + pm[b] + pm[c]) % p == (pm[d] + pm[e] + pm[f]) % p &&
                                     (pn[a] + pn[b] + pn[c]) % p == (pn[d] + pn[e] + pn[f]) % p;
    return count;
}

}  // namespace

TEST(ExponentVector, Validation) {
    EXPECT_THROW(ExponentVector({}), std::invalid_argument);
    EXPECT_THROW(ExponentVector({0, 1}), std::invalid_argument);
    EXPECT_THROW(ExponentVector({2, 2}), std::invalid_argument);
    EXPECT_THROW(ExponentVector({3, 1}), std::invalid_argument);
    const ExponentVector n({1, 4, 9});
    EXPECT_EQ(n.prefix(2).size(), 2u);
    EXPECT_EQ(n.prefix(2)[1], 4u);
}

TEST(MomentCount, Examples) {
    for (u64 p : {u64{7}, u64{13}, u64{31}}) {
        const PrimeModulus mod(p);
        for (u64 tau : divisors(p - 1)) {
            const auto g = subgroup(mod, tau);
            EXPECT_EQ(q_bruteforce(g, ExponentVector({1}), 1), tau);
            EXPECT_EQ(q_convolution(g, ExponentVector({1}), 1), tau);
            EXPECT_EQ(q_convolution(g, ExponentVector({1, 2}), 2), 2 * tau * tau - tau);
        }
        const auto one = subgroup(mod, 1);
        for (unsigned k = 1; k <= 3; ++k) {
            EXPECT_EQ(q_bruteforce(one, ExponentVector({1, 2}), k), 1);
            EXPECT_EQ(q_convolution(one, ExponentVector({2, 3}), k), 1);
        }
    }
    const auto g = subgroup(PrimeModulus(13), 4);
    const u64 want = oracle::moment(oracle::subgroup_elements(13, 4), {1, 2}, 3, 13);
    EXPECT_EQ(q_convolution(g, ExponentVector({1, 2}), 3), want);
    EXPECT_EQ(q_bruteforce(g, ExponentVector({1, 2}), 3), want);
}

TEST(MomentCount, BothCountersMatchNaiveEnumeration) {
    const std::vector<std::vector<u64>> vectors{{1}, {1, 2}, {2, 3}, {1, 3}, {1, 2, 3}};
    for (u64 p : {u64{5}, u64{7}, u64{11}, u64{13}, u64{17}, u64{19}}) {
        const PrimeModulus mod(p);
        for (u64 tau : divisors(p - 1)) {
            const auto g = subgroup(mod, tau);
            const auto elems = oracle::subgroup_elements(p, tau);
            for (unsigned k = 1; k <= 3; ++k) {
                double tuples = 1;
                for (unsigned i = 0; i < 2 * k; ++i) tuples *= static_cast<double>(tau);
                if (tuples > 3e6) continue;
                for (const auto& n : vectors) {
                    const u64 want = oracle::moment(elems, n, k, p);
                    EXPECT_EQ(q_bruteforce(g, ExponentVector(n), k), want) << p << " " << tau << " " << k;
                    if (n.size() <= 2) {
                        EXPECT_EQ(q_convolution(g, ExponentVector(n), k), want);
                    }
                    EXPECT_EQ(moment_count(g, ExponentVector(n), k), want);
                }
            }
        }
    }
}

TEST(MomentCount, LowerBoundsAndSymmetry) {
    for (u64 p : {u64{23}, u64{29}, u64{31}}) {
        const PrimeModulus mod(p);
        for (u64 tau : divisors(p - 1)) {
            const auto g = subgroup(mod, tau);
            for (unsigned k = 1; k <= 3; ++k) {
                for (const auto& nv : {std::vector<u64>{1}, std::vector<u64>{1, 3}}) {
                    const ExponentVector n(nv);
                    const MomentCount q = q_convolution(g, n, k);
                    mpz_class tau_k, tau_2k, p_r, lower;
                    mpz_ui_pow_ui(tau_k.get_mpz_t(), tau, k);
                    mpz_ui_pow_ui(tau_2k.get_mpz_t(), tau, 2 * k);
                    mpz_ui_pow_ui(p_r.get_mpz_t(), p, nv.size());
                    mpz_cdiv_q(lower.get_mpz_t(), tau_2k.get_mpz_t(), p_r.get_mpz_t());
                    EXPECT_GE(q, lower);
                    EXPECT_GE(q, tau_k);
                    EXPECT_LE(q, tau_2k);
                }
            }
            if (tau <= 10) {
                auto inverted = oracle::subgroup_elements(p, tau);
                for (auto& x : inverted) x = oracle::inverse(x, p);
                EXPECT_EQ(q_convolution(g, ExponentVector({1, 2}), 2), oracle::moment(inverted, {1, 2}, 2, p));
            }
        }
    }
}

TEST(MomentCount, Guards) {
    const auto g = subgroup(PrimeModulus(1009), 1008);
    try {
        (void)q_bruteforce(g, ExponentVector({1}), 3);
        FAIL() << "expected a guard violation";
    } catch (const GuardError& e) {
        EXPECT_EQ(e.guard(), "enumeration");
    }
    EXPECT_THROW((void)q_convolution(g, ExponentVector({1, 2, 3}), 2), std::invalid_argument);
}

TEST(Histogram, ConvolutionMatchesPairwiseSums) {
    std::mt19937_64 rng(4);
    for (unsigned dims : {1u, 2u}) {
        const u64 p = 11;
        const u64 cells = dims == 1 ? p : p * p;
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<std::pair<u64, u64>> ea, eb;
            const std::size_t na = 1 + rng() % (trial % 2 ? 4 : cells), nb = 1 + rng() % 6;
            for (std::size_t i = 0; i < na; ++i) ea.emplace_back(rng() % cells, 1 + rng() % 5);
            for (std::size_t i = 0; i < nb; ++i) eb.emplace_back(rng() % cells, 1 + rng() % 5);
            const auto a = PowerVectorHistogram::from_entries(p, dims, ea);
            const auto b = PowerVectorHistogram::from_entries(p, dims, eb);
            std::map<u64, u64> want;
            for (const auto& [ka, ca] : ea)
                for (const auto& [kb, cb] : eb) {
                    u64 key;
                    if (dims == 1) {
                        key = (ka + kb) % p;
                    } else {
                        key = ((ka / p + kb / p) % p) * p + (ka % p + kb % p) % p;
                    }
                    want[key] += ca * cb;
                }
            const auto c = convolve(a, b);
            std::map<u64, u64> got;
            c.for_each([&](u64 key, u64 count) { got[key] = count; });
            EXPECT_EQ(got, want);
            EXPECT_EQ(c.total_mass(), a.total_mass() * b.total_mass());
        }
    }
}

TEST(JHistogram, Identities) {
    std::mt19937_64 rng(5);
    for (u64 p : {u64{13}, u64{29}}) {
        const PrimeModulus mod(p);
        for (u64 tau : divisors(p - 1)) {
            const auto g = subgroup(mod, tau);
            for (unsigned k = 1; k <= 3; ++k) {
                for (const auto& nv : {std::vector<u64>{1}, std::vector<u64>{1, 2}, std::vector<u64>{2, 3}}) {
                    const ExponentVector n(nv);
                    std::vector<u64> coeffs(nv.size());
                    for (auto& c : coeffs) c = 1 + rng() % (p - 1);
                    const auto j = j_histogram(g, n, k, coeffs);
                    mpz_class tau_k;
                    mpz_ui_pow_ui(tau_k.get_mpz_t(), tau, k);
                    EXPECT_EQ(j.total_mass(), tau_k);
                    EXPECT_EQ(j.sum_of_squares(), q_bruteforce(g, n, k));
                }
            }
        }
    }
}

TEST(JHistogram, IndicatorOfSubgroup) {
    const PrimeModulus mod(13);
    const auto g = subgroup(mod, 4);
    const std::vector<u64> one{1};
    const auto j = j_histogram(g, ExponentVector({1}), 1, one);
    for (u64 x = 0; x < 13; ++x) EXPECT_EQ(j(std::vector<u64>{x}), g.contains(x) ? 1u : 0u);
    const std::vector<u64> zero{13};
    EXPECT_THROW(j_histogram(g, ExponentVector({1}), 1, zero), std::invalid_argument);
}

TEST(T3Count, SixFoldLoopOracle) {
    EXPECT_EQ(t3_count(PrimeModulus(5), 1, 1, 2), t3_six_loop(5, 1, 1, 2));
    EXPECT_EQ(t3_count(PrimeModulus(7), 2, 1, 2), t3_six_loop(7, 2, 1, 2));
    EXPECT_EQ(t3_count(PrimeModulus(7), 1, 2, 3), t3_six_loop(7, 1, 2, 3));
}

TEST(T3Count, TripleHistogramOracle) {
    for (u64 p : {u64{11}, u64{13}}) {
        for (u64 s : divisors(p - 1)) {
            EXPECT_EQ(t3_count(PrimeModulus(p), s, 1, 2), t3_exhaustive(p, s, 1, 2)) << p << " " << s;
            EXPECT_EQ(t3_count(PrimeModulus(p), s, 2, 5), t3_exhaustive(p, s, 2, 5)) << p << " " << s;
        }
    }
}

TEST(T3Count, RelationToThirdMoment) {
    for (u64 p : {u64{7}, u64{13}, u64{19}, u64{31}}) {
        const PrimeModulus mod(p);
        for (u64 tau : divisors(p - 1)) {
            const auto g = subgroup(mod, tau);
            const u64 s = (p - 1) / tau;
            for (const auto& [m, n] : {std::pair<u64, u64>{1, 2}, std::pair<u64, u64>{2, 3}}) {
                mpz_class s6;
                mpz_ui_pow_ui(s6.get_mpz_t(), s, 6);
                EXPECT_EQ(s6 * q_convolution(g, ExponentVector({m, n}), 3), t3_count(mod, s, m, n));
            }
        }
    }
    EXPECT_THROW(t3_count(PrimeModulus(7), 1, 2, 2), std::invalid_argument);
}

TEST(GcdReduction, Example) {
    const auto r = gcd_reduction(4, 6, 31);
    EXPECT_EQ(r.m, 2u);
    EXPECT_EQ(r.n, 3u);
    EXPECT_EQ(r.e, 2u);
    EXPECT_EQ(gcd_reduction(3, 9, 31).e, 3u);
    EXPECT_EQ(gcd_reduction(3, 9, 29).e, 1u);
}

TEST(MomentInequality, TrivialSubgroup) {
    const PrimeModulus mod(13);
    const auto rep = verify_moment_inequality(subgroup(mod, 1), SparsePolynomial({{1, 1}, {2, 1}}), 2, 3);
    EXPECT_NEAR(rep.lhs, 1.0, 1e-12);
    EXPECT_NEAR(rep.rhs, 169.0, 1e-9);
    EXPECT_TRUE(rep.holds);
}

TEST(MomentInequality, ConcreteInstance) {
    const PrimeModulus mod(13);
    const auto g = subgroup(mod, 4);
    const SparsePolynomial f({{1, 1}, {2, 1}});
    const auto rep = verify_moment_inequality(g, f, 3, 3);

    const auto elems = oracle::subgroup_elements(13, 4);
    const long double s = std::abs(oracle::sum_over(elems, {{1, 1}, {2, 1}}, 13));
    const long double q3 = static_cast<long double>(oracle::moment(elems, {1, 2}, 3, 13));
    const long double lhs = std::pow(s, 18.0L);
    const long double rhs = 169.0L * std::pow(4.0L, 6.0L) * q3 * q3;
    EXPECT_NEAR(rep.lhs / static_cast<double>(lhs), 1.0, 1e-9);
    EXPECT_NEAR(rep.rhs / static_cast<double>(rhs), 1.0, 1e-12);
    EXPECT_EQ(rep.q_k, static_cast<u64>(q3));
    EXPECT_TRUE(rep.holds);
}

TEST(MomentInequality, RandomInstances) {
    std::mt19937_64 rng(6);
    const std::vector<u64> primes{5, 7, 11, 13, 17, 19, 23, 29, 31};
    for (int i = 0; i < 100; ++i) {
        const u64 p = primes[rng() % primes.size()];
        const auto taus = divisors(p - 1);
        const auto g = subgroup(PrimeModulus(p), taus[rng() % taus.size()]);
        const u64 e1 = 1 + rng() % (p - 2);
        u64 e2 = 1 + rng() % (p - 2);
        if (e2 == e1) e2 = e1 + 1;
        const SparsePolynomial f({{e1, 1 + rng() % (p - 1)}, {e2, 1 + rng() % (p - 1)}});
        const unsigned k = 2 + rng() % 2, l = 2 + rng() % 2;
        EXPECT_TRUE(verify_moment_inequality(g, f, k, l).holds) << p << " " << g.order();
    }
}

TEST(XiExponent, Examples) {
    const ExactRational eps(1, 10), eta(7, 270);
    EXPECT_EQ(xi_exponent(3, 3, eta, eps), ExactRational(1) + ExactRational(7, 30));
    EXPECT_EQ(xi_exponent(2, 3, ExactRational(5, 7), ExactRational(0)), 1);
    EXPECT_EQ(xi_exponent(3, 18, eta, ExactRational(3, 10)), ExactRational(223, 90));
    EXPECT_EQ(xi_exponent(2, 40, eta, eps), 2);
    EXPECT_THROW(xi_exponent(1, 3, eta, eps), std::invalid_argument);
}
