#include <gtest/gtest.h>

#include <chrono>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "weil/expsum.hpp"

using namespace weil;

namespace {

std::vector<oracle::Mono> monos(const SparsePolynomial& f) {
    std::vector<oracle::Mono> out;
    for (const auto& t : f.terms()) out.push_back({t.exponent, t.coeff});
    return out;
}

std::complex<long double> direct_subgroup(u64 p, u64 tau, const SparsePolynomial& f) {
    std::complex<long double> s = 0;
    for (u64 x : oracle::subgroup_elements(p, tau)) s += oracle::ep(oracle::eval(monos(f), x, p, f.constant()), p);
    return s;
}

void expect_close(const UnitComplex& got, const std::complex<long double>& want, double tol) {
    EXPECT_NEAR(got.real(), static_cast<double>(want.real()), tol);
    EXPECT_NEAR(got.imag(), static_cast<double>(want.imag()), tol);
}

SparsePolynomial random_poly(std::mt19937_64& rng, u64 p, unsigned r, u64 max_exp) {
    std::vector<Term> terms;
    std::vector<u64> used;
    while (terms.size() < r) {
        const u64 e = 1 + rng() % max_exp;
        if (std::find(used.begin(), used.end(), e) != used.end()) continue;
        used.push_back(e);
        terms.push_back({e, 1 + rng() % (p - 1)});
    }
    return SparsePolynomial(std::move(terms));
}

}  // namespace

TEST(SparsePolynomial, Canonicalisation) {
    const SparsePolynomial f({{5, 3}, {1, 2}, {3, 0}}, 7);
    ASSERT_EQ(f.term_count(), 2u);
    EXPECT_EQ(f.terms()[0].exponent, 1u);
    EXPECT_EQ(f.terms()[1].exponent, 5u);
    EXPECT_EQ(f.degree(), 5u);
    EXPECT_EQ(f.constant(), 7u);
    EXPECT_THROW(SparsePolynomial({{0, 1}}), std::invalid_argument);
    EXPECT_THROW(SparsePolynomial({{2, 1}, {2, 3}}), std::invalid_argument);

    const PrimeModulus mod(13);
    EXPECT_EQ(f.eval(mod, 2), (2 * 2 + 3 * 32 + 7) % 13u);
}

TEST(SparsePolynomial, NormalisationPreservesValuesOnSubgroup) {
    std::mt19937_64 rng(1);
    const PrimeModulus mod(97);
    for (u64 tau : {u64{4}, u64{12}, u64{32}}) {
        const auto g = subgroup(mod, tau);
        for (int i = 0; i < 20; ++i) {
            const auto f = random_poly(rng, 97, 3, 200);
            const auto h = normalize_exponents(f, tau, mod);
            for (const auto& t : h.terms()) EXPECT_LT(t.exponent, tau);
            for (u64 x : g.enumerate()) EXPECT_EQ(f.eval(mod, x), h.eval(mod, x));
        }
    }
}

TEST(CompleteSum, Examples) {
    for (u64 p : {u64{13}, u64{101}, u64{1009}}) {
        const PrimeModulus mod(p);
        EXPECT_LT(complete_sum(mod, SparsePolynomial::monomial(5, 1)).magnitude(), 1e-9 * p);
        const auto c = complete_sum(mod, SparsePolynomial::constant_poly(3));
        expect_close(c.value, static_cast<long double>(p) * oracle::ep(3, p), 1e-9 * p);
        EXPECT_EQ(c.term_count, p);
    }
    const auto gauss = complete_sum(PrimeModulus(13), SparsePolynomial::monomial(1, 2));
    EXPECT_NEAR(gauss.magnitude(), std::sqrt(13.0), 1e-12);
}

TEST(SubgroupSum, Examples) {
    for (u64 p : {u64{13}, u64{199}, u64{7919}}) {
        const PrimeModulus mod(p);
        const auto s = subgroup_sum(subgroup(mod, p - 1), SparsePolynomial::monomial(1, 1));
        EXPECT_NEAR(s.value.real(), -1.0, 1e-9 * p);
        EXPECT_NEAR(s.value.imag(), 0.0, 1e-9 * p);
    }
    const PrimeModulus mod(13);
    const SparsePolynomial f({{1, 3}, {2, 1}});
    expect_close(subgroup_sum(subgroup(mod, 1), f).value, oracle::ep(f.eval(mod, 1), 13), 1e-15);

    const auto s4 = subgroup_sum(subgroup(mod, 4), SparsePolynomial::monomial(1, 1));
    std::complex<long double> four = 0;
    for (u64 g : {1u, 5u, 8u, 12u}) four += oracle::ep(g, 13);
    expect_close(s4.value, four, 1e-14);
    EXPECT_NEAR(s4.value.imag(), 0.0, 1e-14);
    EXPECT_EQ(s4.term_count, 4u);
}

TEST(SubgroupSum, MatchesDirectEvaluation) {
    std::mt19937_64 rng(2);
    for (u64 p : {u64{31}, u64{101}, u64{1009}, u64{65537}}) {
        const PrimeModulus mod(p);
        for (u64 tau : divisors(p - 1)) {
            if (tau > 2000) continue;
            const auto f = random_poly(rng, p, 1 + rng() % 3, 3 * tau);
            expect_close(subgroup_sum(subgroup(mod, tau), f).value, direct_subgroup(p, tau, f), 1e-10 * tau);
        }
    }
}

TEST(SubgroupSum, MagnitudeAtMostTermCount) {
    std::mt19937_64 rng(3);
    const PrimeModulus mod(1009);
    for (u64 tau : divisors(1008)) {
        const auto s = subgroup_sum(subgroup(mod, tau), random_poly(rng, 1009, 2, 50));
        EXPECT_LE(s.magnitude(), static_cast<double>(s.term_count) + 1e-6);
    }
}

TEST(SubgroupSum, InvariantUnderDilationByGroupElement) {
    std::mt19937_64 rng(4);
    const PrimeModulus mod(401);
    const auto g = subgroup(mod, 40);
    for (int i = 0; i < 20; ++i) {
        const auto f = random_poly(rng, 401, 3, 60);
        const u64 h = g.enumerate()[rng() % 40];
        const auto a = subgroup_sum(g, f).value, b = subgroup_sum(g, f.dilated(mod, h)).value;
        EXPECT_NEAR(a.real(), b.real(), 1e-10);
        EXPECT_NEAR(a.imag(), b.imag(), 1e-10);
    }
}

TEST(SubgroupSum, NegationConjugates) {
    std::mt19937_64 rng(5);
    const PrimeModulus mod(211);
    const auto g = subgroup(mod, 35);
    for (int i = 0; i < 20; ++i) {
        const auto f = random_poly(rng, 211, 2, 30);
        const auto a = subgroup_sum(g, f).value, b = subgroup_sum(g, f.negated(mod)).value;
        EXPECT_NEAR(a.real(), b.real(), 1e-11);
        EXPECT_NEAR(a.imag(), -b.imag(), 1e-11);
    }
}

TEST(SubgroupSum, CompletingIdentity) {
    std::mt19937_64 rng(6);
    for (u64 p : {u64{13}, u64{61}, u64{101}}) {
        const PrimeModulus mod(p);
        for (u64 tau : divisors(p - 1)) {
            const u64 s = (p - 1) / tau;
            for (int i = 0; i < 5; ++i) {
                const auto f = random_poly(rng, p, 2, 2 * p);
                std::complex<long double> full = 0;
                for (u64 x = 1; x < p; ++x) full += oracle::ep(oracle::eval(monos(f), oracle::fastpow(x, s, p), p), p);
                const auto want = full * (static_cast<long double>(tau) / static_cast<long double>(p - 1));
                expect_close(subgroup_sum(subgroup(mod, tau), f).value, want, 1e-8 * p);
            }
        }
    }
}

TEST(TwistedSum, Examples) {
    std::mt19937_64 rng(7);
    const PrimeModulus mod(101);
    const auto g = subgroup(mod, 20);
    const auto f = random_poly(rng, 101, 2, 30);
    EXPECT_EQ(twisted_sum(g, f, 0).value, subgroup_sum(g, f).value);
    for (u64 b = 1; b < 20; ++b) EXPECT_LT(twisted_sum(g, SparsePolynomial(), b).magnitude(), 1e-9 * 20);
    const auto one = subgroup(mod, 1);
    expect_close(twisted_sum(one, f, 0).value, oracle::ep(f.eval(mod, 1), 101), 1e-15);
    EXPECT_THROW(twisted_sum(g, f, 20), std::invalid_argument);
}

TEST(TwistedSum, MatchesDirectEvaluation) {
    std::mt19937_64 rng(8);
    const PrimeModulus mod(157);
    const auto g = subgroup(mod, 26);
    const auto f = random_poly(rng, 157, 3, 40);
    for (u64 b = 0; b < 26; ++b) {
        std::complex<long double> want = 0;
        u64 x = 1;
        for (u64 i = 1; i <= 26; ++i) {
            x = oracle::mulmod(x, g.generator(), 157);
            const long double angle = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(b * i % 26) / 26.0L;
            want += oracle::ep(oracle::eval(monos(f), x, 157), 157) * std::complex<long double>(std::cos(angle), std::sin(angle));
        }
        expect_close(twisted_sum(g, f, b).value, want, 1e-11);
    }
}

TEST(IncompleteSum, Examples) {
    std::mt19937_64 rng(9);
    const PrimeModulus mod(73);
    const auto g = subgroup(mod, 24);
    const auto f = random_poly(rng, 73, 2, 30);
    EXPECT_EQ(incomplete_subgroup_sum(g, f, 24).value, subgroup_sum(g, f).value);
    expect_close(incomplete_subgroup_sum(g, f, 1).value, oracle::ep(f.eval(mod, g.generator()), 73), 1e-15);
    EXPECT_EQ(incomplete_subgroup_sum(g, f, 0).value, UnitComplex(0.0, 0.0));
    EXPECT_THROW(incomplete_subgroup_sum(g, f, 25), std::invalid_argument);

    for (u64 n = 0; n <= 24; ++n) {
        std::complex<long double> want = 0;
        u64 x = 1;
        for (u64 i = 1; i <= n; ++i) {
            x = oracle::mulmod(x, g.generator(), 73);
            want += oracle::ep(oracle::eval(monos(f), x, 73), 73);
        }
        expect_close(incomplete_subgroup_sum(g, f, n).value, want, 1e-12);
    }
}

TEST(IntervalSum, Examples) {
    const PrimeModulus mod(13);
    EXPECT_LT(interval_sum(mod, SparsePolynomial::monomial(4, 1), 13).magnitude(), 1e-12);
    const SparsePolynomial f({{2, 3}}, 5);
    expect_close(interval_sum(mod, f, 1).value, oracle::ep(5, 13), 1e-15);
    EXPECT_NEAR(interval_sum(mod, SparsePolynomial::monomial(1, 2), 13).magnitude(), std::sqrt(13.0), 1e-12);
    EXPECT_THROW(interval_sum(mod, f, 0), std::invalid_argument);
    EXPECT_THROW(interval_sum(mod, f, 14), std::invalid_argument);
}

TEST(KloostermanSum, Examples) {
    const PrimeModulus mod(13);
    const auto g = subgroup(mod, 4);
    const auto k = kloosterman_subgroup(g, 1, 1);
    const double want = 2.0 + 2.0 * std::cos(4.0 * std::numbers::pi / 13.0);
    EXPECT_NEAR(k.value.real(), want, 1e-12);
    EXPECT_NEAR(k.value.imag(), 0.0, 1e-12);

    std::complex<long double> direct = 0;
    for (u64 x : {1u, 5u, 8u, 12u}) direct += oracle::ep(x + oracle::inverse(x, 13), 13);
    expect_close(k.value, direct, 1e-13);

    for (u64 a : {1u, 4u, 11u}) {
        EXPECT_EQ(kloosterman_subgroup(g, a, 0).value, subgroup_sum(g, SparsePolynomial::monomial(a, 1)).value);
    }
}

TEST(KloostermanSum, MatchesDirectEvaluation) {
    std::mt19937_64 rng(10);
    const u64 p = 421;
    const PrimeModulus mod(p);
    for (u64 tau : {u64{20}, u64{60}, u64{105}}) {
        const auto g = subgroup(mod, tau);
        const u64 a = 1 + rng() % (p - 1), b = 1 + rng() % (p - 1);
        std::complex<long double> want = 0;
        for (u64 x : oracle::subgroup_elements(p, tau))
            want += oracle::ep(oracle::mulmod(a, x, p) + oracle::mulmod(b, oracle::inverse(x, p), p), p);
        expect_close(kloosterman_subgroup(g, a, b).value, want, 1e-11);
    }
}

TEST(InversiveSum, Examples) {
    const PrimeModulus mod(13);
    const auto g = subgroup(mod, 4);

    const auto constant = inversive_subgroup_sum(g, 0, 3);
    expect_close(constant.value, 4.0L * oracle::ep(oracle::inverse(3, 13), 13), 1e-13);

    const auto bzero = inversive_subgroup_sum(g, 6, 0);
    expect_close(bzero.value,
                 std::complex<long double>(subgroup_sum(g, SparsePolynomial::monomial(mod.inv(6), 1)).value), 1e-13);

    const auto s = inversive_subgroup_sum(g, 1, 1);
    std::complex<long double> want = 0;
    u64 skipped = 0;
    for (u64 x : {1u, 5u, 8u, 12u}) {
        if ((x + 1) % 13 == 0) {
            ++skipped;
            continue;
        }
        want += oracle::ep(oracle::inverse(x + 1, 13), 13);
    }
    EXPECT_EQ(skipped, 1u);
    EXPECT_EQ(s.excluded, skipped);
    EXPECT_EQ(s.term_count, 4u - skipped);
    expect_close(s.value, want, 1e-13);
}

TEST(Performance, LargePrimeSubgroupSum) {
    const PrimeModulus mod(1000033);
    const auto g = subgroup(mod, 1056);
    const SparsePolynomial f({{1, 17}, {5, 123}, {11, 99999}});
    const auto start = std::chrono::steady_clock::now();
    const auto s = subgroup_sum(g, f);
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    EXPECT_LE(s.magnitude(), 1056.0);
    EXPECT_LT(ms, 10.0);
}
