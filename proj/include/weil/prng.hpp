#pragma once

// Power generator f(theta^x) and inversive generator (a theta^x + b)^{-1}.

#include <optional>
#include <ostream>
#include <vector>

#include "weil/expsum.hpp"
#include "weil/field.hpp"

namespace weil {

/// Residues in [0, p). An empty slot marks an excluded index of the
/// inversive generator (a theta^x = -b), which statistics skip.
struct GeneratorSequence {
    u64 p = 0;
    std::vector<std::optional<u64>> values;

    std::size_t size() const noexcept { return values.size(); }
    std::size_t excluded() const noexcept;

    static GeneratorSequence from_residues(u64 p, const std::vector<u64>& residues);
};

/// f(theta^x) mod p for x = 1..N; requires N >= 1.
GeneratorSequence power_generator(const SubgroupSpec& g, const SparsePolynomial& f, u64 n);

/// (a theta^x + b)^{-1} mod p for x = 1..N; requires a != 0 mod p and N >= 1.
GeneratorSequence inversive_generator(const PrimeModulus& mod, u64 theta, u64 a, u64 b, u64 n);

struct EquidistributionReport {
    std::vector<double> harmonics;  // |sum_x e_p(h s_x)| / N for h = 1..H
    double max_harmonic = 0.0;
    /// max over (h1, h2) in [0, H]^2 \ {(0, 0)} of |mean of e_p(h1 s_x + h2 s_{x+1})|
    /// over consecutive pairs with both entries present; 0 when no pair exists.
    double serial_correlation = 0.0;
    std::size_t counted = 0;
};

EquidistributionReport equidistribution_report(const GeneratorSequence& seq, unsigned harmonics = 10);

/// One residue per line; excluded entries are written as "-".
void write_csv(std::ostream& out, const GeneratorSequence& seq);
/// 8-byte little-endian words; excluded entries are written as 0xFFFFFFFFFFFFFFFF.
void write_u64_le(std::ostream& out, const GeneratorSequence& seq);

}  // namespace weil
