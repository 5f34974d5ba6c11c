#include "weil/expsum.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

#include "weil/parallel.hpp"

namespace weil {

namespace {

constexpr u64 kChunk = u64{1} << 15;

// Sums chunk_sum(begin, end, acc) over [first, first + count) in fixed-size
// chunks, merging partial sums in ascending chunk order.
template <class ChunkSum>
UnitComplex chunked_sum(u64 first, u64 count, ChunkSum&& chunk_sum) {
    const std::size_t chunks = static_cast<std::size_t>((count + kChunk - 1) / kChunk);
    std::vector<CompensatedSum> partial(chunks);
    parallel_chunks(chunks, [&](std::size_t c) {
        const u64 begin = first + c * kChunk;
        const u64 end = std::min(first + count, begin + kChunk);
        chunk_sum(begin, end, partial[c]);
    });
    CompensatedSum total;
    for (const auto& s : partial) total.merge(s);
    return total.value();
}

}  // namespace

SparsePolynomial::SparsePolynomial(std::vector<Term> terms, u64 constant) : constant_(constant) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].exponent == 0) throw std::invalid_argument("exponent 0 belongs in the constant term");
        if (i > 0 && terms[i].exponent == terms[i - 1].exponent) {
            throw std::invalid_argument("repeated exponent " + std::to_string(terms[i].exponent));
        }
    }
    for (const auto& t : terms)
        if (t.coeff != 0) terms_.push_back(t);
}

std::vector<u64> SparsePolynomial::exponents() const {
    std::vector<u64> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back(t.exponent);
    return out;
}

u64 SparsePolynomial::eval(const PrimeModulus& mod, u64 x) const noexcept {
    u64 acc = mod.reduce(constant_);
    x = mod.reduce(x);
    for (const auto& t : terms_) acc = mod.add(acc, mod.mul(mod.reduce(t.coeff), mod.pow(x, t.exponent)));
    return acc;
}

SparsePolynomial SparsePolynomial::reduced(const PrimeModulus& mod) const {
    std::vector<Term> ts;
    for (const auto& t : terms_) ts.push_back({t.exponent, mod.reduce(t.coeff)});
    return SparsePolynomial(std::move(ts), mod.reduce(constant_));
}

SparsePolynomial SparsePolynomial::negated(const PrimeModulus& mod) const {
    std::vector<Term> ts;
    for (const auto& t : terms_) ts.push_back({t.exponent, mod.neg(mod.reduce(t.coeff))});
    return SparsePolynomial(std::move(ts), mod.neg(mod.reduce(constant_)));
}

SparsePolynomial SparsePolynomial::dilated(const PrimeModulus& mod, u64 h) const {
    std::vector<Term> ts;
    for (const auto& t : terms_) ts.push_back({t.exponent, mod.mul(mod.reduce(t.coeff), mod.pow(h, t.exponent))});
    return SparsePolynomial(std::move(ts), mod.reduce(constant_));
}

SparsePolynomial normalize_exponents(const SparsePolynomial& f, u64 tau, const PrimeModulus& mod) {
    if (tau == 0) throw std::invalid_argument("tau must be positive");
    std::map<u64, u64> merged;
    u64 constant = mod.reduce(f.constant());
    for (const auto& t : f.terms()) {
        const u64 e = t.exponent % tau;
        const u64 c = mod.reduce(t.coeff);
        if (e == 0) {
            constant = mod.add(constant, c);
        } else {
            merged[e] = mod.add(merged[e], c);
        }
    }
    std::vector<Term> ts;
    for (const auto& [e, c] : merged) ts.push_back({e, c});
    return SparsePolynomial(std::move(ts), constant);
}

// ---------------------------------------------------------------------------

OrbitEvaluator::OrbitEvaluator(const PrimeModulus& mod, u64 theta, const SparsePolynomial& f, u64 start_x)
    : mod_(mod), constant_(mod.reduce(f.constant())) {
    for (const auto& t : f.terms()) {
        const u64 step = mod.pow(theta, t.exponent);
        coeffs_.push_back(mod.reduce(t.coeff));
        steps_.push_back(step);
        powers_.push_back(mod.pow(step, start_x));
    }
}

u64 OrbitEvaluator::value() const noexcept {
    u64 acc = constant_;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) acc = mod_.add(acc, mod_.mul(coeffs_[i], powers_[i]));
    return acc;
}

void OrbitEvaluator::advance() noexcept {
    for (std::size_t i = 0; i < powers_.size(); ++i) powers_[i] = mod_.mul(powers_[i], steps_[i]);
}

// ---------------------------------------------------------------------------

SumValue interval_sum(const PrimeModulus& mod, const SparsePolynomial& f, u64 n) {
    if (n == 0 || n > mod.value()) {
        throw std::invalid_argument("interval length must satisfy 1 <= N <= p");
    }
    const AdditiveCharacter ep(mod, n);
    const auto v = chunked_sum(0, n, [&](u64 begin, u64 end, CompensatedSum& acc) {
        for (u64 x = begin; x < end; ++x) acc.add(ep(f.eval(mod, x)));
    });
    return {v, n, 0};
}

SumValue complete_sum(const PrimeModulus& mod, const SparsePolynomial& f) {
    return interval_sum(mod, f, mod.value());
}

SumValue incomplete_subgroup_sum(const SubgroupSpec& g, const SparsePolynomial& f, u64 n) {
    if (n > g.order()) {
        throw std::invalid_argument("N = " + std::to_string(n) + " exceeds tau = " + std::to_string(g.order()));
    }
    const auto& mod = g.modulus();
    const AdditiveCharacter ep(mod, n);
    const auto v = chunked_sum(1, n, [&](u64 begin, u64 end, CompensatedSum& acc) {
        OrbitEvaluator orbit(mod, g.generator(), f, begin);
        for (u64 x = begin; x < end; ++x) {
            acc.add(ep(orbit.value()));
            orbit.advance();
        }
    });
    return {v, n, 0};
}

SumValue subgroup_sum(const SubgroupSpec& g, const SparsePolynomial& f) {
    return incomplete_subgroup_sum(g, f, g.order());
}

SumValue twisted_sum(const SubgroupSpec& g, const SparsePolynomial& f, u64 b) {
    const u64 tau = g.order();
    if (b >= tau) throw std::invalid_argument("twist b must satisfy 0 <= b < tau");
    if (b == 0) return subgroup_sum(g, f);
    const auto& mod = g.modulus();
    const AdditiveCharacter ep(mod, tau);
    const auto v = chunked_sum(1, tau, [&](u64 begin, u64 end, CompensatedSum& acc) {
        OrbitEvaluator orbit(mod, g.generator(), f, begin);
        for (u64 x = begin; x < end; ++x) {
            const u64 k = static_cast<u64>((static_cast<u128>(b) * x) % tau);
            acc.add(ep(orbit.value()) * root_of_unity_power(k, tau));
            orbit.advance();
        }
    });
    return {v, tau, 0};
}

SumValue kloosterman_subgroup(const SubgroupSpec& g, u64 a, u64 b) {
    const auto& mod = g.modulus();
    a = mod.reduce(a);
    b = mod.reduce(b);
    const u64 theta = g.generator();
    const u64 theta_inv = mod.inv(theta);
    const AdditiveCharacter ep(mod, g.order());
    const auto v = chunked_sum(1, g.order(), [&](u64 begin, u64 end, CompensatedSum& acc) {
        u64 x = mod.pow(theta, begin);
        u64 xinv = mod.pow(theta_inv, begin);
        for (u64 i = begin; i < end; ++i) {
            acc.add(ep(mod.add(mod.mul(a, x), mod.mul(b, xinv))));
            x = mod.mul(x, theta);
            xinv = mod.mul(xinv, theta_inv);
        }
    });
    return {v, g.order(), 0};
}

SumValue inversive_subgroup_sum(const SubgroupSpec& g, u64 a, u64 b) {
    const auto& mod = g.modulus();
    a = mod.reduce(a);
    b = mod.reduce(b);
    const u64 theta = g.generator();
    const AdditiveCharacter ep(mod, g.order());
    std::vector<u64> skipped((g.order() + kChunk - 1) / kChunk, 0);
    const auto v = chunked_sum(1, g.order(), [&](u64 begin, u64 end, CompensatedSum& acc) {
        u64 x = mod.pow(theta, begin);
        for (u64 i = begin; i < end; ++i) {
            const u64 w = mod.add(mod.mul(a, x), b);
            if (w == 0) {
                ++skipped[(begin - 1) / kChunk];
            } else {
                acc.add(ep(mod.inv(w)));
            }
            x = mod.mul(x, theta);
        }
    });
    u64 excluded = 0;
    for (u64 s : skipped) excluded += s;
    return {v, g.order() - excluded, excluded};
}

}  // namespace weil
