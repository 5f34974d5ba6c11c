#include "weil/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "weil/parallel.hpp"

namespace weil {

namespace {

MomentCount to_mpz(u128 v) {
    MomentCount hi(static_cast<unsigned long>(static_cast<u64>(v >> 64)));
    MomentCount lo(static_cast<unsigned long>(static_cast<u64>(v)));
    return (hi << 64) + lo;
}

// base^exp, saturating at 2^127.
u128 saturating_pow(u64 base, u64 exp) {
    constexpr u128 kCap = u128{1} << 127;
    u128 r = 1;
    for (u64 i = 0; i < exp; ++i) {
        if (base != 0 && r > kCap / base) return kCap;
        r *= base;
    }
    return r;
}

void check_histogram_guard(u64 p, std::size_t dims) {
    const u128 cells = saturating_pow(p, dims);
    if (cells > MomentGuards::kMaxHistogram) {
        throw GuardError("histogram-size", "p^r = " + std::to_string(p) + "^" + std::to_string(dims) +
                                               " exceeds " + std::to_string(MomentGuards::kMaxHistogram) + " cells");
    }
}

void check_count_guard(u64 tau, unsigned k) {
    if (saturating_pow(tau, k) >= (u128{1} << 63)) {
        throw GuardError("count-width", "tau^k = " + std::to_string(tau) + "^" + std::to_string(k) +
                                            " does not fit a 63-bit fibre count");
    }
}

// Histogram of the vectors (c_1 g^{n_1}, ..., c_r g^{n_r}) over g in G.
PowerVectorHistogram power_histogram(const SubgroupSpec& g, const ExponentVector& n, std::span<const u64> coeffs) {
    const auto& mod = g.modulus();
    const u64 p = mod.value();
    const unsigned r = static_cast<unsigned>(n.size());
    std::vector<std::pair<u64, u64>> entries;
    entries.reserve(g.order());
    std::vector<u64> lambda(r);
    PowerVectorHistogram shape(p, r);
    for (u64 x : g.enumerate()) {
        for (unsigned i = 0; i < r; ++i) lambda[i] = mod.mul(coeffs[i], mod.pow(x, n[i]));
        entries.emplace_back(shape.key(lambda), 1);
    }
    return PowerVectorHistogram::from_entries(p, r, std::move(entries));
}

}  // namespace

// ---------------------------------------------------------------------------
// ExponentVector

ExponentVector::ExponentVector(std::vector<u64> exps) : n_(std::move(exps)) {
    if (n_.empty()) throw std::invalid_argument("exponent vector must be nonempty");
    for (std::size_t i = 0; i < n_.size(); ++i) {
        if (n_[i] == 0) throw std::invalid_argument("exponents must be positive");
        if (i > 0 && n_[i] <= n_[i - 1]) throw std::invalid_argument("exponents must be strictly increasing");
    }
}

ExponentVector ExponentVector::prefix(std::size_t u) const {
    if (u == 0 || u > n_.size()) throw std::invalid_argument("prefix length out of range");
    return ExponentVector(std::vector<u64>(n_.begin(), n_.begin() + static_cast<std::ptrdiff_t>(u)));
}

// ---------------------------------------------------------------------------
// PowerVectorHistogram

PowerVectorHistogram::PowerVectorHistogram(u64 p, unsigned dims) : p_(p), dims_(dims) {
    if (dims == 0) throw std::invalid_argument("histogram needs at least one dimension");
    check_histogram_guard(p, dims);
    cells_ = static_cast<u64>(saturating_pow(p, dims));
}

u64 PowerVectorHistogram::key(std::span<const u64> lambda) const {
    if (lambda.size() != dims_) throw std::invalid_argument("vector length does not match histogram dimension");
    u64 k = 0;
    for (u64 l : lambda) k = k * p_ + (l % p_);
    return k;
}

std::vector<u64> PowerVectorHistogram::decode(u64 key) const {
    std::vector<u64> out(dims_);
    for (unsigned i = dims_; i-- > 0;) {
        out[i] = key % p_;
        key /= p_;
    }
    return out;
}

u64 PowerVectorHistogram::at(u64 key) const {
    if (dense_) return key < cells_ ? dense_counts_[key] : 0;
    auto it = std::lower_bound(sparse_.begin(), sparse_.end(), key,
                               [](const std::pair<u64, u64>& e, u64 k) { return e.first < k; });
    return (it != sparse_.end() && it->first == key) ? it->second : 0;
}

std::size_t PowerVectorHistogram::support_size() const {
    if (!dense_) return sparse_.size();
    return static_cast<std::size_t>(
        std::count_if(dense_counts_.begin(), dense_counts_.end(), [](u64 c) { return c != 0; }));
}

MomentCount PowerVectorHistogram::total_mass() const {
    u128 s = 0;
    for_each([&](u64, u64 c) { s += c; });
    return to_mpz(s);
}

MomentCount PowerVectorHistogram::sum_of_squares() const {
    u128 s = 0;
    for_each([&](u64, u64 c) { s += static_cast<u128>(c) * c; });
    return to_mpz(s);
}

void PowerVectorHistogram::set_dense(std::vector<u64> counts) {
    dense_ = true;
    dense_counts_ = std::move(counts);
    sparse_.clear();
}

void PowerVectorHistogram::set_sparse(std::vector<std::pair<u64, u64>> entries) {
    dense_ = false;
    sparse_ = std::move(entries);
    dense_counts_.clear();
}

PowerVectorHistogram PowerVectorHistogram::from_entries(u64 p, unsigned dims,
                                                        std::vector<std::pair<u64, u64>> entries) {
    PowerVectorHistogram h(p, dims);
    std::sort(entries.begin(), entries.end());
    std::vector<std::pair<u64, u64>> merged;
    for (const auto& [k, c] : entries) {
        if (c == 0) continue;
        if (!merged.empty() && merged.back().first == k) {
            merged.back().second += c;
        } else {
            merged.emplace_back(k, c);
        }
    }
    if (merged.size() * 8 >= h.cells_) {
        std::vector<u64> counts(h.cells_, 0);
        for (const auto& [k, c] : merged) counts[k] = c;
        h.set_dense(std::move(counts));
    } else {
        h.set_sparse(std::move(merged));
    }
    return h;
}

PowerVectorHistogram convolve(const PowerVectorHistogram& a, const PowerVectorHistogram& b) {
    if (a.p_ != b.p_ || a.dims_ != b.dims_) throw std::invalid_argument("histogram shapes differ");
    const u64 p = a.p_;
    const unsigned dims = a.dims_;

    auto add_keys = [&](u64 x, u64 y) {
        u64 out = 0, scale = 1;
        for (unsigned i = 0; i < dims; ++i) {
            u64 s = x % p + y % p;
            if (s >= p) s -= p;
            out += s * scale;
            scale *= p;
            x /= p;
            y /= p;
        }
        return out;
    };

    const std::size_t sa = a.support_size(), sb = b.support_size();
    if (!a.dense_ && !b.dense_ && static_cast<u128>(sa) * sb * 8 <= a.cells_) {
        std::vector<std::pair<u64, u64>> entries;
        entries.reserve(sa * sb);
        a.for_each([&](u64 ka, u64 ca) { b.for_each([&](u64 kb, u64 cb) { entries.emplace_back(add_keys(ka, kb), ca * cb); }); });
        return PowerVectorHistogram::from_entries(p, dims, std::move(entries));
    }

    // Dense pull: out[row, l] += w * src[row - shift_row, l - shift_last].
    const PowerVectorHistogram& src_hist = (a.dense_ || (!b.dense_ && sa >= sb)) ? a : b;
    const PowerVectorHistogram& shift_hist = (&src_hist == &a) ? b : a;
    std::vector<u64> src_storage;
    const u64* src = nullptr;
    if (src_hist.dense_) {
        src = src_hist.dense_counts_.data();
    } else {
        src_storage.assign(src_hist.cells_, 0);
        src_hist.for_each([&](u64 k, u64 c) { src_storage[k] = c; });
        src = src_storage.data();
    }
    struct Shift {
        std::vector<u64> row_digits;
        u64 last;
        u64 weight;
    };
    std::vector<Shift> shifts;
    shift_hist.for_each([&](u64 k, u64 c) {
        Shift s;
        s.last = k % p;
        u64 row = k / p;
        s.row_digits.resize(dims - 1);
        for (unsigned i = 0; i + 1 < dims; ++i) {
            s.row_digits[i] = row % p;
            row /= p;
        }
        s.weight = c;
        shifts.push_back(std::move(s));
    });

    const u64 rows = a.cells_ / p;
    std::vector<u64> out(a.cells_, 0);
    constexpr u64 kRowsPerChunk = 16;
    const std::size_t chunks = static_cast<std::size_t>((rows + kRowsPerChunk - 1) / kRowsPerChunk);
    parallel_chunks(chunks, [&](std::size_t chunk) {
        const u64 row_begin = chunk * kRowsPerChunk;
        const u64 row_end = std::min(rows, row_begin + kRowsPerChunk);
        std::vector<u64> digits(dims > 1 ? dims - 1 : 0);
        for (u64 row = row_begin; row < row_end; ++row) {
            u64* dst = out.data() + row * p;
            for (const auto& s : shifts) {
                u64 src_row = 0, scale = 1, r = row;
                for (unsigned i = 0; i + 1 < dims; ++i) {
                    const u64 d = r % p;
                    r /= p;
                    src_row += (d >= s.row_digits[i] ? d - s.row_digits[i] : d + p - s.row_digits[i]) * scale;
                    scale *= p;
                }
                const u64* sr = src + src_row * p;
                const u64 bl = s.last;
                const u64 w = s.weight;
                if (w == 1) {
                    for (u64 l = 0; l < bl; ++l) dst[l] += sr[l + p - bl];
                    for (u64 l = bl; l < p; ++l) dst[l] += sr[l - bl];
                } else {
                    for (u64 l = 0; l < bl; ++l) dst[l] += w * sr[l + p - bl];
                    for (u64 l = bl; l < p; ++l) dst[l] += w * sr[l - bl];
                }
            }
        }
    });

    PowerVectorHistogram h(p, dims);
    const std::size_t occupied =
        static_cast<std::size_t>(std::count_if(out.begin(), out.end(), [](u64 c) { return c != 0; }));
    if (occupied * 8 >= h.cells_) {
        h.set_dense(std::move(out));
    } else {
        std::vector<std::pair<u64, u64>> entries;
        entries.reserve(occupied);
        for (u64 k = 0; k < h.cells_; ++k)
            if (out[k]) entries.emplace_back(k, out[k]);
        h.set_sparse(std::move(entries));
    }
    return h;
}

PowerVectorHistogram convolution_power(const PowerVectorHistogram& base, unsigned k) {
    if (k == 0) throw std::invalid_argument("convolution power needs k >= 1");
    PowerVectorHistogram acc = base;
    for (unsigned i = 1; i < k; ++i) acc = convolve(acc, base);
    return acc;
}

// ---------------------------------------------------------------------------
// Counters

MomentCount q_bruteforce(const SubgroupSpec& g, const ExponentVector& n, unsigned k) {
    if (k == 0) throw std::invalid_argument("k must be positive");
    const u64 tau = g.order();
    const u128 tuples = saturating_pow(tau, k);
    if (tuples > MomentGuards::kMaxEnumeration) {
        throw GuardError("enumeration", "tau^k = " + std::to_string(tau) + "^" + std::to_string(k) + " exceeds " +
                                            std::to_string(MomentGuards::kMaxEnumeration));
    }
    const auto& mod = g.modulus();
    const u64 p = mod.value();
    const std::size_t r = n.size();
    const auto elems = g.enumerate();

    std::vector<u64> powers(tau * r);
    for (u64 j = 0; j < tau; ++j)
        for (std::size_t i = 0; i < r; ++i) powers[j * r + i] = mod.pow(elems[j], n[i]);

    const std::size_t count = static_cast<std::size_t>(tuples);
    const bool packed = saturating_pow(p, r) < (u128{1} << 64);
    std::vector<u64> keys(packed ? count : 0);
    std::vector<u64> sums(packed ? 0 : count * r);
    // Odometer over k-tuples with prefix sums per level.
    std::vector<u64> prefix((k + 1) * r, 0);
    std::vector<u64> idx(k, 0);
    auto refresh = [&](unsigned from) {
        for (unsigned lv = from; lv < k; ++lv)
            for (std::size_t i = 0; i < r; ++i)
                prefix[(lv + 1) * r + i] = mod.add(prefix[lv * r + i], powers[idx[lv] * r + i]);
    };
    refresh(0);
    for (std::size_t t = 0; t < count; ++t) {
        const u64* last = prefix.data() + k * r;
        if (packed) {
            u64 key = 0;
            for (std::size_t i = 0; i < r; ++i) key = key * p + last[i];
            keys[t] = key;
        } else {
            std::copy_n(last, r, sums.begin() + static_cast<std::ptrdiff_t>(t * r));
        }
        unsigned lv = k;
        while (lv > 0 && ++idx[lv - 1] == tau) idx[--lv] = 0;
        if (lv == 0) break;
        refresh(lv - 1);
    }

    u128 total = 0;
    auto flush = [&](u64 run) { total += static_cast<u128>(run) * run; };
    if (packed) {
        std::sort(keys.begin(), keys.end());
        u64 run = 0;
        for (std::size_t t = 0; t < count; ++t) {
            if (t > 0 && keys[t] != keys[t - 1]) {
                flush(run);
                run = 0;
            }
            ++run;
        }
        flush(run);
    } else {
        std::vector<std::size_t> order(count);
        std::iota(order.begin(), order.end(), std::size_t{0});
        auto row = [&](std::size_t t) { return sums.begin() + static_cast<std::ptrdiff_t>(t * r); };
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return std::lexicographical_compare(row(x), row(x) + static_cast<std::ptrdiff_t>(r), row(y),
                                                row(y) + static_cast<std::ptrdiff_t>(r));
        });
        u64 run = 0;
        for (std::size_t t = 0; t < count; ++t) {
            if (t > 0 && !std::equal(row(order[t]), row(order[t]) + static_cast<std::ptrdiff_t>(r), row(order[t - 1]))) {
                flush(run);
                run = 0;
            }
            ++run;
        }
        flush(run);
    }
    return to_mpz(total);
}

MomentCount q_convolution(const SubgroupSpec& g, const ExponentVector& n, unsigned k) {
    if (k == 0) throw std::invalid_argument("k must be positive");
    if (n.size() > 2) throw std::invalid_argument("convolution counter handles r <= 2; use q_bruteforce");
    check_histogram_guard(g.prime(), n.size());
    check_count_guard(g.order(), k);
    const std::vector<u64> ones(n.size(), 1);
    return convolution_power(power_histogram(g, n, ones), k).sum_of_squares();
}

MomentCount moment_count(const SubgroupSpec& g, const ExponentVector& n, unsigned k) {
    if (n.size() <= 2 && saturating_pow(g.prime(), n.size()) <= MomentGuards::kMaxHistogram &&
        saturating_pow(g.order(), k) < (u128{1} << 63)) {
        return q_convolution(g, n, k);
    }
    return q_bruteforce(g, n, k);
}

PowerVectorHistogram j_histogram(const SubgroupSpec& g, const ExponentVector& n, unsigned k,
                                 std::span<const u64> coeffs) {
    if (k == 0) throw std::invalid_argument("k must be positive");
    if (coeffs.size() != n.size()) throw std::invalid_argument("one coefficient per exponent is required");
    const auto& mod = g.modulus();
    std::vector<u64> a(coeffs.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = mod.reduce(coeffs[i]);
        if (a[i] == 0) throw std::invalid_argument("coefficient a_" + std::to_string(i + 1) + " vanishes mod p");
    }
    check_histogram_guard(g.prime(), n.size());
    check_count_guard(g.order(), k);
    return convolution_power(power_histogram(g, n, a), k);
}

MomentCount t3_count(const PrimeModulus& mod, u64 s, u64 m, u64 n) {
    if (!(n > m && m >= 1)) throw std::invalid_argument("t3 requires n > m >= 1");
    if (s == 0) throw std::invalid_argument("s must be positive");
    const u64 p = mod.value();
    check_histogram_guard(p, 2);
    check_count_guard(p - 1, 3);
    PowerVectorHistogram shape(p, 2);
    const u64 em = static_cast<u64>((static_cast<u128>(s) * m) % (p - 1));
    const u64 en = static_cast<u64>((static_cast<u128>(s) * n) % (p - 1));
    std::vector<std::pair<u64, u64>> entries;
    entries.reserve(p - 1);
    for (u64 x = 1; x < p; ++x) {
        const u64 v[2] = {mod.pow(x, em), mod.pow(x, en)};
        entries.emplace_back(shape.key(v), 1);
    }
    auto base = PowerVectorHistogram::from_entries(p, 2, std::move(entries));
    return convolution_power(base, 3).sum_of_squares();
}

GcdReduction gcd_reduction(u64 m, u64 n, u64 p) {
    const u64 d = std::gcd(m, n);
    if (d == 0) throw std::invalid_argument("m and n cannot both vanish");
    return {m / d, n / d, std::gcd(d, p - 1)};
}

namespace {

double log_of(const mpz_class& z) {
    if (z <= 0) return -INFINITY;
    long e = 0;
    const double mant = mpz_get_d_2exp(&e, z.get_mpz_t());
    return std::log(mant) + static_cast<double>(e) * std::log(2.0);
}

double to_double_clamped(double log_value) { return log_value > 709.0 ? INFINITY : std::exp(log_value); }

}  // namespace

MomentInequalityReport verify_moment_inequality(const SubgroupSpec& g, const SparsePolynomial& f, unsigned k,
                                                unsigned l) {
    if (k == 0 || l == 0) throw std::invalid_argument("k and l must be positive");
    const auto fr = f.reduced(g.modulus());
    if (fr.term_count() == 0) throw std::invalid_argument("f needs at least one nonconstant term");
    const ExponentVector n(fr.exponents());
    const std::size_t r = n.size();

    MomentInequalityReport rep;
    rep.q_k = moment_count(g, n, k);
    rep.q_l = (l == k) ? rep.q_k : moment_count(g, n, l);

    const double s = subgroup_sum(g, fr).magnitude();
    const i64 tau_exp = 2 * static_cast<i64>(k) * l - 2 * static_cast<i64>(k) - 2 * static_cast<i64>(l);
    const double log_lhs = s > 0 ? 2.0 * k * l * std::log(s) : -INFINITY;
    const double log_rhs = static_cast<double>(r) * std::log(static_cast<double>(g.prime())) +
                           static_cast<double>(tau_exp) * std::log(static_cast<double>(g.order())) + log_of(rep.q_k) +
                           log_of(rep.q_l);
    rep.lhs = std::isinf(log_lhs) ? 0.0 : to_double_clamped(log_lhs);
    rep.rhs = to_double_clamped(log_rhs);
    rep.holds = log_lhs <= log_rhs + std::log1p(1e-6);
    return rep;
}

ExactRational xi_exponent(unsigned r, unsigned k, const ExactRational& eta, const ExactRational& eps) {
    if (r < 2) throw std::invalid_argument("xi requires r >= 2");
    if (k < 3) throw std::invalid_argument("xi requires k >= 3");
    if (eta <= 0) throw std::invalid_argument("xi requires eta > 0");
    if (eps < 0) throw std::invalid_argument("xi requires eps >= 0");
    ExactRational v = eta * (2 * static_cast<long>(k) - 6) + 1 + ExactRational(7, 3) * eps;
    v.canonicalize();
    const ExactRational rr(static_cast<unsigned long>(r));
    return v < rr ? v : rr;
}

}  // namespace weil
