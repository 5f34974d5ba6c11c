#include "weil/prng.hpp"

#include <algorithm>
#include <stdexcept>

namespace weil {

std::size_t GeneratorSequence::excluded() const noexcept {
    return static_cast<std::size_t>(std::count(values.begin(), values.end(), std::nullopt));
}

GeneratorSequence GeneratorSequence::from_residues(u64 p, const std::vector<u64>& residues) {
    GeneratorSequence s{p, {}};
    s.values.reserve(residues.size());
    for (u64 r : residues) s.values.emplace_back(r % p);
    return s;
}

GeneratorSequence power_generator(const SubgroupSpec& g, const SparsePolynomial& f, u64 n) {
    if (n == 0) throw std::invalid_argument("sequence length must be positive");
    GeneratorSequence s{g.prime(), {}};
    s.values.reserve(n);
    OrbitEvaluator orbit(g.modulus(), g.generator(), f, 1);
    for (u64 x = 1; x <= n; ++x) {
        s.values.emplace_back(orbit.value());
        orbit.advance();
    }
    return s;
}

GeneratorSequence inversive_generator(const PrimeModulus& mod, u64 theta, u64 a, u64 b, u64 n) {
    a = mod.reduce(a);
    b = mod.reduce(b);
    if (a == 0) throw std::invalid_argument("inversive generator requires a != 0");
    if (n == 0) throw std::invalid_argument("sequence length must be positive");
    theta = mod.reduce(theta);
    GeneratorSequence s{mod.value(), {}};
    s.values.reserve(n);
    u64 x = theta;
    for (u64 i = 1; i <= n; ++i) {
        const u64 w = mod.add(mod.mul(a, x), b);
        if (w == 0) {
            s.values.emplace_back(std::nullopt);
        } else {
            s.values.emplace_back(mod.inv(w));
        }
        x = mod.mul(x, theta);
    }
    return s;
}

EquidistributionReport equidistribution_report(const GeneratorSequence& seq, unsigned harmonics) {
    if (seq.values.empty()) throw std::invalid_argument("equidistribution needs a nonempty sequence");
    const PrimeModulus mod(seq.p);
    const AdditiveCharacter ep(mod, seq.size() * std::max(1u, harmonics));
    EquidistributionReport rep;
    rep.counted = seq.size() - seq.excluded();

    for (unsigned h = 1; h <= harmonics; ++h) {
        CompensatedSum acc;
        for (const auto& v : seq.values)
            if (v) acc.add(ep(mod.mul(h, *v)));
        const double stat = rep.counted ? std::abs(acc.value()) / static_cast<double>(rep.counted) : 0.0;
        rep.harmonics.push_back(stat);
        rep.max_harmonic = std::max(rep.max_harmonic, stat);
    }

    std::vector<std::pair<u64, u64>> pairs;
    for (std::size_t i = 0; i + 1 < seq.values.size(); ++i) {
        if (seq.values[i] && seq.values[i + 1]) pairs.emplace_back(*seq.values[i], *seq.values[i + 1]);
    }
    if (!pairs.empty()) {
        for (unsigned h1 = 0; h1 <= harmonics; ++h1) {
            for (unsigned h2 = 0; h2 <= harmonics; ++h2) {
                if (h1 == 0 && h2 == 0) continue;
                CompensatedSum acc;
                for (const auto& [u, w] : pairs) acc.add(ep(mod.add(mod.mul(h1, u), mod.mul(h2, w))));
                rep.serial_correlation =
                    std::max(rep.serial_correlation, std::abs(acc.value()) / static_cast<double>(pairs.size()));
            }
        }
    }
    return rep;
}

void write_csv(std::ostream& out, const GeneratorSequence& seq) {
    for (const auto& v : seq.values) {
        if (v) {
            out << *v << '\n';
        } else {
            out << "-\n";
        }
    }
}

void write_u64_le(std::ostream& out, const GeneratorSequence& seq) {
    for (const auto& v : seq.values) {
        const u64 w = v ? *v : ~u64{0};
        char bytes[8];
        for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((w >> (8 * i)) & 0xff);
        out.write(bytes, 8);
    }
}

}  // namespace weil
