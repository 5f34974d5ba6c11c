#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "weil/field.hpp"

namespace weil {

using UnitComplex = std::complex<double>;

/// exp(2 pi i k / n) for 0 <= k < n, evaluated in extended precision and rounded once.
UnitComplex root_of_unity_power(u64 k, u64 n);

/// e_p(z) = exp(2 pi i z / p).
///
/// For p < 2^20 the values come from a shared table of the p-th roots of unity.
/// The table is built on first use for a modulus and cached for the process;
/// callers that will evaluate only a handful of values (fewer than p/64) and
/// find no cached table get direct evaluation instead, which is equally exact.
class AdditiveCharacter {
public:
    static constexpr u64 kTableLimit = u64{1} << 20;

    explicit AdditiveCharacter(const PrimeModulus& mod, u64 expected_evaluations = ~u64{0});

    /// `z` must already be reduced into [0, p).
    UnitComplex operator()(u64 z) const noexcept {
        return table_ ? (*table_)[z] : root_of_unity_power(z, p_);
    }
    UnitComplex at(i64 z) const noexcept;

    bool tabulated() const noexcept { return table_ != nullptr; }
    u64 modulus() const noexcept { return p_; }

private:
    u64 p_;
    std::shared_ptr<const std::vector<UnitComplex>> table_;
};

/// e_p(z) for an arbitrary integer z.
UnitComplex additive_character(const PrimeModulus& mod, i64 z);

/// Neumaier-compensated complex accumulator.
class CompensatedSum {
public:
    void add(UnitComplex v) noexcept {
        add_component(re_, re_c_, v.real());
        add_component(im_, im_c_, v.imag());
    }
    void merge(const CompensatedSum& o) noexcept {
        add_component(re_, re_c_, o.re_);
        add_component(im_, im_c_, o.im_);
        re_c_ += o.re_c_;
        im_c_ += o.im_c_;
    }
    UnitComplex value() const noexcept { return {re_ + re_c_, im_ + im_c_}; }

private:
    static void add_component(double& s, double& c, double v) noexcept {
        const double t = s + v;
        if (std::abs(s) >= std::abs(v)) {
            c += (s - t) + v;
        } else {
            c += (v - t) + s;
        }
        s = t;
    }

    double re_ = 0.0, im_ = 0.0, re_c_ = 0.0, im_c_ = 0.0;
};

}  // namespace weil
