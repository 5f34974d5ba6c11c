#include "weil/exponents.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace weil {

ExactRational parse_rational(std::string_view text) {
    const std::string s(text);
    ExactRational q;
    const auto slash = s.find('/');
    const auto is_integer = [](const std::string& t) {
        if (t.empty()) return false;
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    const std::string num = s.substr(0, slash);
    const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!is_integer(num) || !is_integer(den) || den[0] == '-' || den[0] == '+') {
        throw std::invalid_argument("expected a fraction NUM/DEN, got '" + s + "'");
    }
    mpz_class n(num[0] == '+' ? num.substr(1) : num), d(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    q = ExactRational(n, d);
    q.canonicalize();
    return q;
}

mpz_class ceil(const ExactRational& q) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

double to_double(const ExactRational& q) { return q.get_d(); }

// ---------------------------------------------------------------------------

EtaTable::EtaTable(ExactRational eps) : eps_(std::move(eps)) {
    eps_.canonicalize();
    if (eps_ <= 0) throw std::invalid_argument("eps must be positive");
    const ExactRational base = ExactRational(7, 27) * eps_;
    eta_ = {ExactRational(0), base, base};
    kappa_ = {0, 0, 0};
}

void EtaTable::extend(unsigned n) {
    while (eta_.size() <= n) {
        const unsigned j = static_cast<unsigned>(eta_.size());
        ExactRational arg = (ExactRational(static_cast<long>(j) - 2) - ExactRational(7, 3) * eps_) /
                                (2 * eta_[j - 1]) +
                            3;
        arg.canonicalize();
        mpz_class k = ceil(arg);
        ExactRational e = ExactRational(7) * eps_ / (ExactRational(18) * ExactRational(k));
        e.canonicalize();
        kappa_.push_back(std::move(k));
        eta_.push_back(std::move(e));
    }
}

const ExactRational& EtaTable::eta(unsigned n) {
    if (n == 0) throw std::invalid_argument("eta is defined for n >= 1");
    extend(n);
    return eta_[n];
}

const mpz_class& EtaTable::kappa(unsigned n) {
    if (n < 3) throw std::invalid_argument("kappa is defined for n >= 3");
    extend(n);
    return kappa_[n];
}

namespace {

EtaTable& table_for(const ExactRational& eps) {
    thread_local std::map<ExactRational, EtaTable> tables;
    auto it = tables.find(eps);
    if (it == tables.end()) it = tables.emplace(eps, EtaTable(eps)).first;
    return it->second;
}

}  // namespace

mpz_class kappa(unsigned n, const ExactRational& eps) { return table_for(eps).kappa(n); }

ExactRational eta(unsigned n, const ExactRational& eps) { return table_for(eps).eta(n); }

ExactRational eta_lower_shape(unsigned n, const ExactRational& eps) {
    if (n < 2) throw std::invalid_argument("shape is defined for n >= 2");
    ExactRational base = ExactRational(7, 9) * eps;
    ExactRational num(1);
    for (unsigned i = 0; i + 1 < n; ++i) num *= base;
    mpz_class fact = 1;
    for (unsigned i = 2; i <= n - 2; ++i) fact *= i;
    ExactRational out = num / ExactRational(fact);
    out.canonicalize();
    return out;
}

// ---------------------------------------------------------------------------

double theorem_bound(double p, double tau, unsigned n, const ExactRational& eps) {
    return tau * std::pow(p, -to_double(eta(n, eps)));
}

double binomial_bound(double p, double tau) { return std::pow(tau, 20.0 / 27.0) * std::pow(p, 1.0 / 9.0); }

double monomial_bound(double p, double tau) {
    return std::min(std::sqrt(p), std::sqrt(tau) * std::pow(p, 1.0 / 6.0) * std::pow(std::log(p), 1.0 / 6.0));
}

double q3_bound(double p, double tau) { return std::pow(tau, 11.0 / 3.0) + std::pow(tau, 5.0) / p; }

double curve_bound(double d, double p) { return 4.0 * std::pow(d, 4.0 / 3.0) * std::pow(p, 2.0 / 3.0) + 3.0 * p; }

namespace {

// Compares base^num with other^den exactly when the exponents are modest,
// falling back to logarithms otherwise. Returns the sign of lhs - rhs.
int compare_powers(u64 base, const mpz_class& base_exp, u64 other, const mpz_class& other_exp) {
    constexpr unsigned long kExactLimit = 1u << 14;
    if (base_exp >= 0 && other_exp >= 0 && base_exp <= kExactLimit && other_exp <= kExactLimit) {
        mpz_class lhs, rhs;
        mpz_ui_pow_ui(lhs.get_mpz_t(), base, base_exp.get_ui());
        mpz_ui_pow_ui(rhs.get_mpz_t(), other, other_exp.get_ui());
        return cmp(lhs, rhs) < 0 ? -1 : (cmp(lhs, rhs) > 0 ? 1 : 0);
    }
    const long double l = base_exp.get_d() * std::log(static_cast<long double>(base));
    const long double r = other_exp.get_d() * std::log(static_cast<long double>(other));
    return l < r ? -1 : (l > r ? 1 : 0);
}

}  // namespace

AdmissibleRange admissible_range(u64 p, u64 tau, const ExactRational& eps) {
    ExactRational lower_exp = ExactRational(3, 7) + eps;
    lower_exp.canonicalize();
    AdmissibleRange out{};
    // tau >= p^{a/b}  <=>  tau^b >= p^a  (for a >= 0)
    if (lower_exp <= 0) {
        out.theorem_hypothesis = tau >= 1;
    } else {
        out.theorem_hypothesis =
            compare_powers(tau, lower_exp.get_den(), p, lower_exp.get_num()) >= 0;
    }
    out.reduction_applies = compare_powers(tau, mpz_class(4), p, mpz_class(3)) <= 0;
    out.medium_window = out.theorem_hypothesis && out.reduction_applies;
    out.lower = std::pow(static_cast<double>(p), to_double(lower_exp));
    out.upper = std::pow(static_cast<double>(p), 0.75);
    return out;
}

std::vector<InductionLevel> induction_trace(unsigned r, const ExactRational& eps) {
    if (r < 3) throw std::invalid_argument("induction trace requires r >= 3");
    EtaTable table(eps);
    std::vector<InductionLevel> out;
    for (unsigned level = r; level >= 3; --level) {
        out.push_back({level, table.kappa(level), 3, level - 1, 2});
    }
    return out;
}

}  // namespace weil
