#include "weil/field.hpp"

#include <algorithm>
#include <numeric>

namespace weil {

namespace {

u64 mulmod64(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<u128>(a) * b) % m);
}

u64 powmod64(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod64(r, b, m);
        b = mulmod64(b, b, m);
        e >>= 1;
    }
    return r;
}

bool miller_rabin_witness(u64 n, u64 a, u64 d, int s) {
    u64 x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < s; ++i) {
        x = mulmod64(x, x, n);
        if (x == n - 1) return false;
    }
    return true;
}

// Pollard-Brent; n must be odd, composite and not a prime power of a tiny prime.
u64 pollard_brent(u64 n) {
    for (u64 c = 1;; ++c) {
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        const u64 m = 128;
        u64 r = 1;
        auto f = [&](u64 v) { return (mulmod64(v, v, n) + c) % n; };
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod64(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_into(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (miller_rabin_witness(n, a, d, s)) return false;
    }
    return true;
}

std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> out;
    if (n <= 1) return out;
    for (u64 q = 2; q < 1000 && q * q <= n; ++q) {
        if (n % q == 0) {
            out.push_back(q);
            while (n % q == 0) n /= q;
        }
    }
    factor_into(n, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<u64> divisors(u64 n) {
    std::vector<u64> out{1};
    if (n == 0) return {};
    for (u64 q : prime_factors(n)) {
        u64 m = n;
        int e = 0;
        while (m % q == 0) {
            m /= q;
            ++e;
        }
        const std::size_t base = out.size();
        u64 pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= q;
            for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

PrimeModulus::PrimeModulus(u64 p) : p_(p), narrow_(p < (u64{1} << 32)) {
    if (p >= kMaxPrime) throw std::invalid_argument("modulus must be below 2^62");
    if (!is_prime(p)) throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
}

u64 PrimeModulus::pow(u64 base, u64 exp) const noexcept {
    u64 r = 1 % p_;
    base %= p_;
    while (exp) {
        if (exp & 1) r = mul(r, base);
        base = mul(base, base);
        exp >>= 1;
    }
    return r;
}

u64 PrimeModulus::inv(u64 a) const {
    a %= p_;
    if (a == 0) throw std::domain_error("zero has no inverse");
    return pow(a, p_ - 2);
}

u64 multiplicative_order(const PrimeModulus& mod, u64 a) {
    a = mod.reduce(a);
    if (a == 0) throw std::domain_error("zero has no multiplicative order");
    u64 order = mod.value() - 1;
    for (u64 q : prime_factors(order)) {
        while (order % q == 0 && mod.pow(a, order / q) == 1) order /= q;
    }
    return order;
}

u64 least_primitive_root(const PrimeModulus& mod) {
    const u64 p = mod.value();
    if (p == 2) return 1;
    const auto qs = prime_factors(p - 1);
    for (u64 g = 2;; ++g) {
        bool ok = true;
        for (u64 q : qs) {
            if (mod.pow(g, (p - 1) / q) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
}

SubgroupSpec::SubgroupSpec(PrimeModulus mod, u64 tau, u64 theta) : mod_(mod), tau_(tau), theta_(theta) {
    const u64 p = mod_.value();
    if (tau == 0 || (p - 1) % tau != 0) {
        throw std::invalid_argument("subgroup order " + std::to_string(tau) + " does not divide p-1 = " +
                                    std::to_string(p - 1));
    }
    theta_ = mod_.reduce(theta_);
    if (theta_ == 0 || mod_.pow(theta_, tau) != 1) throw std::invalid_argument("generator does not lie in G");
    for (u64 q : prime_factors(tau)) {
        if (mod_.pow(theta_, tau / q) == 1) throw std::invalid_argument("generator order is smaller than tau");
    }
}

std::vector<u64> SubgroupSpec::enumerate() const {
    std::vector<u64> out;
    out.reserve(tau_);
    u64 g = theta_;
    for (u64 x = 1; x <= tau_; ++x) {
        out.push_back(g);
        g = mod_.mul(g, theta_);
    }
    return out;
}

bool SubgroupSpec::contains(u64 x) const {
    x = mod_.reduce(x);
    return x != 0 && mod_.pow(x, tau_) == 1;
}

SubgroupSpec subgroup(const PrimeModulus& mod, u64 tau) {
    const u64 p = mod.value();
    if (tau == 0 || (p - 1) % tau != 0) {
        throw std::invalid_argument("tau = " + std::to_string(tau) + " does not divide p-1 = " +
                                    std::to_string(p - 1));
    }
    const u64 g = least_primitive_root(mod);
    return SubgroupSpec(mod, tau, mod.pow(g, (p - 1) / tau));
}

// ---------------------------------------------------------------------------
// UniPoly

UniPoly::UniPoly(PrimeModulus mod, std::vector<u64> coeffs) : mod_(mod), c_(std::move(coeffs)) {
    for (auto& c : c_) c = mod_.reduce(c);
    trim();
}

UniPoly UniPoly::monomial(PrimeModulus mod, u64 coeff, std::size_t degree) {
    std::vector<u64> c(degree + 1, 0);
    c[degree] = coeff;
    return UniPoly(mod, std::move(c));
}

void UniPoly::trim() noexcept {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

u64 UniPoly::eval(u64 x) const noexcept {
    u64 acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = mod_.add(mod_.mul(acc, x), *it);
    return acc;
}

UniPoly UniPoly::derivative() const {
    std::vector<u64> d;
    if (c_.size() > 1) {
        d.resize(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = mod_.mul(c_[i], mod_.reduce(u64{i}));
    }
    return UniPoly(mod_, std::move(d));
}

UniPoly UniPoly::monic() const {
    if (is_zero()) return *this;
    UniPoly r = *this;
    return r.scale(mod_.inv(lead()));
}

UniPoly& UniPoly::operator+=(const UniPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = mod_.add(c_[i], o.c_[i]);
    trim();
    return *this;
}

UniPoly& UniPoly::operator-=(const UniPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = mod_.sub(c_[i], o.c_[i]);
    trim();
    return *this;
}

UniPoly& UniPoly::operator*=(const UniPoly& o) {
    if (is_zero() || o.is_zero()) {
        c_.clear();
        return *this;
    }
    std::vector<u64> r(c_.size() + o.c_.size() - 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] = mod_.add(r[i + j], mod_.mul(c_[i], o.c_[j]));
    }
    c_ = std::move(r);
    trim();
    return *this;
}

UniPoly& UniPoly::scale(u64 c) {
    c = mod_.reduce(c);
    for (auto& x : c_) x = mod_.mul(x, c);
    trim();
    return *this;
}

std::pair<UniPoly, UniPoly> UniPoly::divmod(const UniPoly& d) const {
    if (d.is_zero()) throw std::domain_error("polynomial division by zero");
    UniPoly rem = *this;
    if (degree() < d.degree()) return {UniPoly(mod_), rem};
    const std::size_t dd = static_cast<std::size_t>(d.degree());
    std::vector<u64> q(c_.size() - dd, 0);
    const u64 lead_inv = mod_.inv(d.lead());
    for (std::size_t i = c_.size(); i-- > dd;) {
        const u64 t = mod_.mul(rem.c_[i], lead_inv);
        q[i - dd] = t;
        if (t == 0) continue;
        for (std::size_t j = 0; j <= dd; ++j) {
            rem.c_[i - dd + j] = mod_.sub(rem.c_[i - dd + j], mod_.mul(t, d.c_[j]));
        }
    }
    rem.trim();
    return {UniPoly(mod_, std::move(q)), rem};
}

UniPoly pow(const UniPoly& f, u64 e) {
    UniPoly r(f.modulus(), {1});
    UniPoly b = f;
    while (e) {
        if (e & 1) r *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return r;
}

UniPoly gcd(const UniPoly& a, const UniPoly& b) {
    UniPoly x = a, y = b;
    while (!y.is_zero()) {
        UniPoly r = x % y;
        x = std::move(y);
        y = std::move(r);
    }
    return x.monic();
}

}  // namespace weil
