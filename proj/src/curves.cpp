#include "weil/curves.hpp"

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "weil/exponents.hpp"
#include "weil/extension_field.hpp"
#include "weil/parallel.hpp"

namespace weil {

u64 resultant(const UniPoly& f0, const UniPoly& g0) {
    if (f0.is_zero() && g0.is_zero()) throw std::invalid_argument("resultant of two zero polynomials");
    if (f0.is_zero() || g0.is_zero()) {
        const UniPoly& other = f0.is_zero() ? g0 : f0;
        return other.degree() == 0 ? 1 : 0;
    }
    const PrimeModulus& mod = f0.modulus();
    UniPoly f = f0, g = g0;
    u64 acc = 1;
    for (;;) {
        const u64 m = static_cast<u64>(f.degree());
        const u64 n = static_cast<u64>(g.degree());
        if (m == 0) return mod.mul(acc, mod.pow(f.lead(), n));
        if (n == 0) return mod.mul(acc, mod.pow(g.lead(), m));
        if (m > n) {
            if ((m & 1) && (n & 1)) acc = mod.neg(acc);
            std::swap(f, g);
            continue;
        }
        // deg f <= deg g: Res(f, g) = lc(f)^{deg g - deg r} Res(f, g mod f).
        UniPoly r = g % f;
        if (r.is_zero()) return 0;
        acc = mod.mul(acc, mod.pow(f.lead(), n - static_cast<u64>(r.degree())));
        g = std::move(r);
    }
}

u64 discriminant(const UniPoly& f) {
    if (f.is_zero()) throw std::invalid_argument("discriminant of the zero polynomial");
    const int d = f.degree();
    if (d <= 1) return 1;
    const PrimeModulus& mod = f.modulus();
    const UniPoly df = f.derivative();
    if (df.is_zero()) return 0;
    u64 res = resultant(f, df);
    res = mod.mul(res, mod.pow(f.lead(), static_cast<u64>(d - 1 - df.degree())));
    res = mod.mul(res, mod.inv(f.lead()));
    const u64 sign_exp = static_cast<u64>(d) * static_cast<u64>(d - 1) / 2;
    return (sign_exp & 1) ? mod.neg(res) : res;
}

UniPoly f0_polynomial(u64 m, u64 n, u64 a, u64 b, const PrimeModulus& mod) {
    UniPoly left = UniPoly::monomial(mod, 1, m) - UniPoly(mod, {mod.reduce(a)});
    UniPoly right = UniPoly::monomial(mod, 1, n) - UniPoly(mod, {mod.reduce(b)});
    // Both powers have degree mn; the subtraction cancels the leading term and
    // the UniPoly arithmetic recomputes the degree.
    return pow(left, n) - pow(right, m);
}

F0Discriminant discriminant_F0Y(u64 m, u64 n, u64 a, u64 b, const PrimeModulus& mod) {
    if (!(n > m && m >= 1)) throw std::invalid_argument("requires n > m >= 1");
    const UniPoly f0 = f0_polynomial(m, n, a, b, mod);
    if (f0.is_zero()) return {F0Discriminant::Kind::zero_polynomial, 0, -1};
    if (f0.degree() <= 1) return {F0Discriminant::Kind::degree_at_most_one, 1, f0.degree()};
    return {F0Discriminant::Kind::regular, discriminant(f0), f0.degree()};
}

DeltaEvaluation delta_eval(u64 m, u64 n, u64 a, u64 b, const PrimeModulus& mod) {
    if (!(n > m && m >= 1)) throw std::invalid_argument("delta requires n > m >= 1");
    if (std::gcd(m, n) != 1) throw std::invalid_argument("delta requires gcd(m, n) = 1");
    const u64 p = mod.value();
    if (m % p == 0 || n % p == 0 || (n - m) % p == 0) {
        throw std::invalid_argument("p divides m n (n - m); degenerate characteristic");
    }
    a = mod.reduce(a);
    b = mod.reduce(b);

    DeltaEvaluation out{};
    out.mn = mod.mul(m % p, n % p);
    out.axes = mod.sub(mod.pow(mod.neg(a), n), mod.pow(mod.neg(b), m));
    const u64 an = mod.pow(a, n);
    const u64 bm = mod.pow(b, m);
    out.coordinate = mod.sub(an, bm);

    const auto roots = roots_of_unity(mod, n - m);
    const ExtensionField& fq = roots.field;
    out.extension_degree = fq.degree();
    const auto one = fq.one();

    auto factor = [&](const ExtensionField::Element& cn, const ExtensionField::Element& cm) {
        // cn^m A^n - cm^n B^m
        return fq.sub(fq.scale(fq.pow(cn, m), an), fq.scale(fq.pow(cm, n), bm));
    };
    auto to_base = [&](const ExtensionField::Element& e, const char* what) {
        if (!fq.is_base(e)) throw std::logic_error(std::string(what) + " product left the base field");
        return e[0];
    };

    auto single = one;
    for (const auto& z : roots.roots) {
        if (z == one) continue;
        const auto cn = fq.sub(fq.pow(z, n), one);
        const auto cm = fq.sub(fq.pow(z, m), one);
        single = fq.mul(single, factor(cn, cm));
    }
    out.single_roots = to_base(single, "single-root");

    std::vector<ExtensionField::Element> zn, zm;
    for (const auto& z : roots.roots) {
        zn.push_back(fq.pow(z, n));
        zm.push_back(fq.pow(z, m));
    }
    auto pairs = one;
    for (std::size_t i = 0; i < roots.roots.size(); ++i) {
        for (std::size_t j = 0; j < roots.roots.size(); ++j) {
            const auto cn = fq.sub(fq.add(one, zn[i]), zn[j]);
            const auto cm = fq.sub(fq.add(one, zm[i]), zm[j]);
            if (fq.is_zero(cn) && fq.is_zero(cm)) {
                ++out.dropped_pair_factors;
                continue;
            }
            pairs = fq.mul(pairs, factor(cn, cm));
        }
    }
    out.pair_roots = to_base(pairs, "root-pair");

    out.disc = discriminant_F0Y(m, n, a, b, mod).value;

    u64 v = out.mn;
    for (u64 f : {out.axes, out.coordinate, out.single_roots, out.pair_roots, out.disc}) v = mod.mul(v, f);
    out.value = v;
    return out;
}

u64 count_points(const CurveSpec& spec) {
    if (spec.p > 2000) throw GuardError("curve-prime", "point counting is limited to p <= 2000");
    if (!(spec.n > spec.m && spec.m >= 1) || spec.s == 0) throw std::invalid_argument("curve requires n > m >= 1, s >= 1");
    const PrimeModulus mod(spec.p);
    const u64 p = spec.p;
    const u64 a = mod.reduce(spec.a), b = mod.reduce(spec.b);

    std::vector<u64> xm(p), xn(p), pow_n(p), pow_m(p);
    for (u64 x = 0; x < p; ++x) {
        xm[x] = mod.pow(mod.pow(x, spec.s), spec.m);
        xn[x] = mod.pow(mod.pow(x, spec.s), spec.n);
        pow_n[x] = mod.pow(x, spec.n);
        pow_m[x] = mod.pow(x, spec.m);
    }
    constexpr u64 kRows = 64;
    const std::size_t chunks = static_cast<std::size_t>((p + kRows - 1) / kRows);
    std::vector<u64> partial(chunks, 0);
    parallel_chunks(chunks, [&](std::size_t c) {
        u64 cnt = 0;
        const u64 end = std::min(p, (c + 1) * kRows);
        for (u64 x = c * kRows; x < end; ++x) {
            const u64 ua = mod.sub(xm[x], a);
            const u64 ub = mod.sub(xn[x], b);
            for (u64 y = 0; y < p; ++y) {
                if (pow_n[mod.add(ua, xm[y])] == pow_m[mod.add(ub, xn[y])]) ++cnt;
            }
        }
        partial[c] = cnt;
    });
    u64 total = 0;
    for (u64 v : partial) total += v;
    return total;
}

CurveBoundReport check_curve_bound(const CurveSpec& spec) {
    CurveBoundReport rep{};
    rep.count = count_points(spec);
    const u64 d = spec.degree();
    rep.bound = curve_bound(static_cast<double>(d), static_cast<double>(spec.p));
    rep.ratio = static_cast<double>(rep.count) / rep.bound;
    rep.in_hypothesis = d < spec.p;
    try {
        rep.delta = delta_eval(spec.m, spec.n, spec.a, spec.b, PrimeModulus(spec.p)).nonzero()
                        ? CurveBoundReport::Delta::nonzero
                        : CurveBoundReport::Delta::zero;
    } catch (const std::invalid_argument&) {
        rep.delta = CurveBoundReport::Delta::unavailable;
    }
    rep.asserted = rep.in_hypothesis && rep.delta == CurveBoundReport::Delta::nonzero;
    rep.holds = !rep.asserted || static_cast<double>(rep.count) <= rep.bound;
    return rep;
}

}  // namespace weil
