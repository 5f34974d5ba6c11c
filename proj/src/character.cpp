#include "weil/character.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace weil {

namespace {

std::mutex g_table_mutex;
std::map<u64, std::weak_ptr<const std::vector<UnitComplex>>> g_tables;

std::shared_ptr<const std::vector<UnitComplex>> build_table(u64 p) {
    auto t = std::make_shared<std::vector<UnitComplex>>(p);
    (*t)[0] = {1.0, 0.0};
    // e_p(p - k) is the conjugate of e_p(k), so only half the arguments are evaluated.
    for (u64 k = 1; 2 * k <= p; ++k) {
        const UnitComplex v = root_of_unity_power(k, p);
        (*t)[k] = v;
        (*t)[p - k] = std::conj(v);
    }
    return t;
}

}  // namespace

UnitComplex root_of_unity_power(u64 k, u64 n) {
    // Fold into [0, n/2] and use the conjugate so the angle stays below pi.
    k %= n;
    const bool flip = 2 * k > n;
    const u64 kk = flip ? n - k : k;
    const long double angle =
        2.0L * std::numbers::pi_v<long double> * static_cast<long double>(kk) / static_cast<long double>(n);
    const double c = static_cast<double>(std::cos(angle));
    const double s = static_cast<double>(std::sin(angle));
    return {c, flip ? -s : s};
}

AdditiveCharacter::AdditiveCharacter(const PrimeModulus& mod, u64 expected_evaluations) : p_(mod.value()) {
    if (p_ >= kTableLimit) return;
    std::lock_guard lock(g_table_mutex);
    auto& slot = g_tables[p_];
    table_ = slot.lock();
    if (!table_ && expected_evaluations >= p_ / 64) {
        table_ = build_table(p_);
        slot = table_;
    }
}

UnitComplex AdditiveCharacter::at(i64 z) const noexcept {
    i64 r = z % static_cast<i64>(p_);
    if (r < 0) r += static_cast<i64>(p_);
    return (*this)(static_cast<u64>(r));
}

UnitComplex additive_character(const PrimeModulus& mod, i64 z) { return AdditiveCharacter(mod, 1).at(z); }

}  // namespace weil
