#include "weil/extension_field.hpp"

#include <stdexcept>

namespace weil {

bool is_irreducible(const PrimeModulus& mod, const std::vector<u64>& monic_coeffs) {
    const UniPoly f(mod, monic_coeffs);
    const int n = f.degree();
    if (n < 1 || f.lead() != 1) throw std::invalid_argument("irreducibility test needs a monic polynomial");
    if (n == 1) return true;
    const UniPoly x(mod, {0, 1});
    UniPoly h = x;
    // Ben-Or: f is irreducible iff gcd(X^{p^i} - X, f) = 1 for 1 <= i <= n/2.
    for (int i = 1; i <= n / 2; ++i) {
        UniPoly acc(mod, {1});
        UniPoly b = h;
        u64 e = mod.value();
        while (e) {
            if (e & 1) acc = (acc * b) % f;
            e >>= 1;
            if (e) b = (b * b) % f;
        }
        h = acc;
        if (gcd(h - x, f).degree() != 0) return false;
    }
    return true;
}

unsigned multiplicative_order_mod(u64 p, u64 e) {
    if (e == 0 || gcd(p, e) != 1) throw std::invalid_argument("p and e must be coprime");
    if (e == 1) return 1;
    const u64 base = p % e;
    u64 acc = base;
    unsigned j = 1;
    while (acc != 1) {
        acc = static_cast<u64>((static_cast<u128>(acc) * base) % e);
        ++j;
    }
    return j;
}

ExtensionField::ExtensionField(PrimeModulus base, unsigned degree) : base_(base), degree_(degree) {
    if (degree == 0) throw std::invalid_argument("extension degree must be positive");
    mpz_class p(static_cast<unsigned long>(base.value()));
    mpz_pow_ui(group_order_.get_mpz_t(), p.get_mpz_t(), degree);
    group_order_ -= 1;

    // Walk monic candidates in lexicographic order of their non-leading coefficients.
    std::vector<u64> cand(degree + 1, 0);
    cand[degree] = 1;
    for (;;) {
        if (is_irreducible(base_, cand)) break;
        unsigned i = 0;
        while (i < degree && ++cand[i] == base.value()) cand[i++] = 0;
        if (i == degree) throw std::logic_error("no irreducible polynomial found");
    }
    poly_ = std::move(cand);
}

ExtensionField::Element ExtensionField::from_base(u64 c) const {
    Element e(degree_, 0);
    e[0] = base_.reduce(c);
    return e;
}

ExtensionField::Element ExtensionField::from_index(u64 index) const {
    Element e(degree_, 0);
    for (unsigned i = 0; i < degree_ && index; ++i) {
        e[i] = index % base_.value();
        index /= base_.value();
    }
    return e;
}

bool ExtensionField::is_base(const Element& a) const {
    for (unsigned i = 1; i < degree_; ++i)
        if (a[i] != 0) return false;
    return true;
}

bool ExtensionField::is_zero(const Element& a) const {
    for (u64 c : a)
        if (c != 0) return false;
    return true;
}

ExtensionField::Element ExtensionField::add(const Element& a, const Element& b) const {
    Element r(degree_);
    for (unsigned i = 0; i < degree_; ++i) r[i] = base_.add(a[i], b[i]);
    return r;
}

ExtensionField::Element ExtensionField::sub(const Element& a, const Element& b) const {
    Element r(degree_);
    for (unsigned i = 0; i < degree_; ++i) r[i] = base_.sub(a[i], b[i]);
    return r;
}

ExtensionField::Element ExtensionField::scale(const Element& a, u64 c) const {
    Element r(degree_);
    c = base_.reduce(c);
    for (unsigned i = 0; i < degree_; ++i) r[i] = base_.mul(a[i], c);
    return r;
}

ExtensionField::Element ExtensionField::mul(const Element& a, const Element& b) const {
    const unsigned j = degree_;
    std::vector<u64> r(2 * j - 1, 0);
    for (unsigned i = 0; i < j; ++i) {
        if (a[i] == 0) continue;
        for (unsigned k = 0; k < j; ++k) r[i + k] = base_.add(r[i + k], base_.mul(a[i], b[k]));
    }
    for (unsigned i = 2 * j - 1; i-- > j;) {
        const u64 t = r[i];
        if (t == 0) continue;
        for (unsigned k = 0; k < j; ++k) r[i - j + k] = base_.sub(r[i - j + k], base_.mul(t, poly_[k]));
    }
    r.resize(j);
    return r;
}

ExtensionField::Element ExtensionField::pow(const Element& a, u64 e) const {
    Element r = one(), b = a;
    while (e) {
        if (e & 1) r = mul(r, b);
        e >>= 1;
        if (e) b = mul(b, b);
    }
    return r;
}

ExtensionField::Element ExtensionField::pow(const Element& a, const mpz_class& e) const {
    Element r = one();
    const mp_bitcnt_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (mp_bitcnt_t i = bits; i-- > 0;) {
        r = mul(r, r);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = mul(r, a);
    }
    return r;
}

RootsOfUnity roots_of_unity(const PrimeModulus& mod, u64 e) {
    if (e == 0) throw std::invalid_argument("e must be positive");
    if (e % mod.value() == 0) throw std::invalid_argument("p divides e; roots of unity are not separable");
    const unsigned j = multiplicative_order_mod(mod.value(), e);
    ExtensionField field(mod, j);
    const mpz_class cofactor = field.group_order() / static_cast<unsigned long>(e);
    const auto qs = prime_factors(e);

    ExtensionField::Element zeta;
    for (u64 idx = 1;; ++idx) {
        auto x = field.from_index(idx);
        auto y = field.pow(x, cofactor);
        bool primitive = true;
        for (u64 q : qs) {
            if (field.pow(y, e / q) == field.one()) {
                primitive = false;
                break;
            }
        }
        if (primitive) {
            zeta = std::move(y);
            break;
        }
    }
    std::vector<ExtensionField::Element> roots;
    roots.reserve(e);
    auto cur = field.one();
    for (u64 i = 0; i < e; ++i) {
        roots.push_back(cur);
        cur = field.mul(cur, zeta);
    }
    return RootsOfUnity{std::move(field), e, std::move(roots)};
}

}  // namespace weil
