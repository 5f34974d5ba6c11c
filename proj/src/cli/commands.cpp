#include "weil/cli/commands.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <stdexcept>

#include "weil/cli/poly_spec.hpp"
#include "weil/cli/sweep.hpp"
#include "weil/curves.hpp"
#include "weil/expsum.hpp"
#include "weil/exponents.hpp"
#include "weil/moments.hpp"
#include "weil/prng.hpp"

namespace weil::cli {

namespace {

SubgroupSpec checked_subgroup(u64 p, u64 tau) {
    if (!is_prime(p)) throw std::invalid_argument(fmt::format("p = {} is not prime", p));
    if (tau == 0 || (p - 1) % tau != 0) throw std::invalid_argument(fmt::format("tau = {} does not divide p-1 = {}", tau, p - 1));
    return subgroup(PrimeModulus(p), tau);
}

std::string complex_str(const UnitComplex& z) {
    return fmt::format("{:.12g} {} {:.12g}i", z.real(), z.imag() < 0 ? '-' : '+', std::abs(z.imag()));
}

void print_sum(std::ostream& out, const SumValue& s) {
    out << "value: " << complex_str(s.value) << '\n';
    out << fmt::format("magnitude: {:.12g}\n", s.magnitude());
    out << "terms: " << s.term_count << '\n';
    if (s.excluded) out << "excluded: " << s.excluded << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exponential sums over multiplicative subgroups of prime fields", "weilsum"};
    app.require_subcommand(1);

    u64 p = 0, tau = 0;

    // sum
    auto* sum = app.add_subcommand("sum", "Evaluate S(G; f), optionally twisted or incomplete");
    std::string poly;
    std::optional<u64> twist, incomplete;
    sum->add_option("--p", p, "prime")->required();
    sum->add_option("--tau", tau, "subgroup order")->required();
    sum->add_option("--poly", poly, "polynomial, e.g. 1*x^1+3*x^5")->required();
    auto* twist_opt = sum->add_option("--twist", twist, "multiplicative twist index b < tau");
    sum->add_option("--incomplete", incomplete, "sum over x = 1..N")->excludes(twist_opt);

    // kloosterman / inversive
    u64 ka = 0, kb = 0;
    auto* kloost = app.add_subcommand("kloosterman", "Sum of e_p(a g + b g^-1) over G");
    auto* inv = app.add_subcommand("inversive", "Sum of e_p((a g + b)^-1) over G");
    for (auto* sc : {kloost, inv}) {
        sc->add_option("--p", p, "prime")->required();
        sc->add_option("--tau", tau, "subgroup order")->required();
        sc->add_option("--a", ka, "coefficient a")->required();
        sc->add_option("--b", kb, "coefficient b")->required();
    }

    // moment
    auto* moment = app.add_subcommand("moment", "Exact moment count Q_k(n; G)");
    unsigned k = 0;
    std::vector<u64> exps;
    std::string method = "conv";
    moment->add_option("--p", p, "prime")->required();
    moment->add_option("--tau", tau, "subgroup order")->required();
    moment->add_option("--k", k, "moment order")->required()->check(CLI::PositiveNumber);
    moment->add_option("--exps", exps, "exponent vector n1[,n2,...]")->required()->delimiter(',');
    moment->add_option("--method", method, "counting method")->check(CLI::IsMember({"brute", "conv", "both"}));

    // t3
    auto* t3 = app.add_subcommand("t3", "Count T_3(m, n; s)");
    u64 ts = 0, tm = 0, tn = 0;
    t3->add_option("--p", p, "prime")->required();
    t3->add_option("--s", ts, "index s")->required();
    t3->add_option("--m", tm, "exponent m")->required();
    t3->add_option("--n", tn, "exponent n")->required();

    // curve
    auto* curve = app.add_subcommand("curve", "Nondegeneracy check and point count for the auxiliary curve");
    CurveSpec cs;
    bool delta_only = false;
    curve->add_option("--p", cs.p, "prime")->required();
    curve->add_option("--m", cs.m, "exponent m")->required();
    curve->add_option("--n", cs.n, "exponent n")->required();
    curve->add_option("--s", cs.s, "index s")->required();
    curve->add_option("--A", cs.a, "coefficient A")->required();
    curve->add_option("--B", cs.b, "coefficient B")->required();
    curve->add_flag("--delta-only", delta_only, "only evaluate the nondegeneracy condition");

    // eta
    auto* eta_cmd = app.add_subcommand("eta", "Table of the saving exponents");
    unsigned nmax = 0;
    std::string eps_text = "1/10";
    bool as_json = false;
    eta_cmd->add_option("--nmax", nmax, "largest n")->required()->check(CLI::PositiveNumber);
    eta_cmd->add_option("--eps", eps_text, "epsilon as NUM/DEN")->required();
    eta_cmd->add_flag("--json", as_json, "JSON lines output");

    // prng
    auto* prng = app.add_subcommand("prng", "Export a power or inversive generator sequence");
    std::vector<u64> inv_ab;
    u64 count = 0;
    std::string format = "csv", prng_out;
    bool stats = false;
    prng->add_option("--p", p, "prime")->required();
    prng->add_option("--tau", tau, "subgroup order")->required();
    auto* poly_opt = prng->add_option("--poly", poly, "polynomial for the power generator");
    auto* inv_opt = prng->add_option("--inversive", inv_ab, "A,B for the inversive generator")
                        ->delimiter(',')
                        ->expected(2);
    poly_opt->excludes(inv_opt);
    prng->add_option("--count", count, "sequence length")->required()->check(CLI::PositiveNumber);
    prng->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "u64-le"}));
    prng->add_option("--out", prng_out, "output file (default stdout)");
    prng->add_flag("--stats", stats, "print equidistribution statistics to stderr");

    // verify
    auto* verify = app.add_subcommand("verify", "Run a verification sweep");
    SweepConfig cfg;
    std::string out_path, taus = "auto", family = "sparse", out_format = "csv";
    verify->add_option("--suite", cfg.suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
    verify->add_option("--pmin", cfg.pmin, "smallest prime")->required();
    verify->add_option("--pmax", cfg.pmax, "largest prime")->required();
    verify->add_option("--eps", eps_text, "epsilon as NUM/DEN");
    verify->add_option("--out", out_path, "output path")->required();
    verify->add_option("--format", out_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    verify->add_option("--taus", taus, "tau selector")->check(CLI::IsMember({"auto", "all", "window"}));
    verify->add_option("--family", family, "polynomial family")->check(CLI::IsMember({"monomial", "binomial", "sparse"}));
    verify->add_option("--sparsity", cfg.sparsity, "largest r for the sparse family")->check(CLI::PositiveNumber);
    verify->add_option("--samples", cfg.samples, "random instances per (p, tau); 0 for the suite default");
    verify->add_option("--seed", cfg.seed, "random seed");
    verify->add_option("--ceiling", cfg.ceiling, "ratio ceiling for asymptotic suites");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (sum->parsed()) {
            const auto g = checked_subgroup(p, tau);
            const auto f = parse_polynomial(poly);
            out << "f: " << format_polynomial(f) << '\n';
            if (twist) {
                print_sum(out, twisted_sum(g, f, *twist));
            } else if (incomplete) {
                print_sum(out, incomplete_subgroup_sum(g, f, *incomplete));
            } else {
                print_sum(out, subgroup_sum(g, f));
            }
            return kSuccess;
        }
        if (kloost->parsed()) {
            print_sum(out, kloosterman_subgroup(checked_subgroup(p, tau), ka, kb));
            return kSuccess;
        }
        if (inv->parsed()) {
            print_sum(out, inversive_subgroup_sum(checked_subgroup(p, tau), ka, kb));
            return kSuccess;
        }
        if (moment->parsed()) {
            const auto g = checked_subgroup(p, tau);
            const ExponentVector n(exps);
            if (method != "both") {
                const auto q = method == "conv" ? q_convolution(g, n, k) : q_bruteforce(g, n, k);
                out << "Q: " << q.get_str() << '\n';
            } else {
                const auto qc = q_convolution(g, n, k);
                const auto qb = q_bruteforce(g, n, k);
                out << "Q (convolution): " << qc.get_str() << '\n';
                out << "Q (enumeration): " << qb.get_str() << '\n';
                if (qc != qb) {
                    out << "methods disagree\n";
                    return kAssertionFailure;
                }
                out << "methods agree\n";
            }
            return kSuccess;
        }
        if (t3->parsed()) {
            if (!is_prime(p)) throw std::invalid_argument(fmt::format("p = {} is not prime", p));
            out << "T3: " << t3_count(PrimeModulus(p), ts, tm, tn).get_str() << '\n';
            return kSuccess;
        }
        if (curve->parsed()) {
            if (!is_prime(cs.p)) throw std::invalid_argument(fmt::format("p = {} is not prime", cs.p));
            const PrimeModulus mod(cs.p);
            std::optional<DeltaEvaluation> delta;
            try {
                delta = delta_eval(cs.m, cs.n, cs.a, cs.b, mod);
            } catch (const std::invalid_argument& e) {
                out << "delta: unavailable (" << e.what() << ")\n";
            }
            if (delta) {
                out << fmt::format("delta: {} ({})\n", delta->value, delta->nonzero() ? "nonzero" : "zero, flagged");
                out << fmt::format("delta factors: mn={} axes={} coordinate={} single={} pairs={} disc={}\n",
                                   delta->mn, delta->axes, delta->coordinate, delta->single_roots,
                                   delta->pair_roots, delta->disc);
            }
            if (delta_only) return kSuccess;
            const auto rep = check_curve_bound(cs);
            out << "degree: " << cs.degree() << '\n';
            out << "count: " << rep.count << '\n';
            out << fmt::format("bound: {:.10g}\n", rep.bound);
            out << "ratio: " << format_ratio(rep.ratio) << '\n';
            out << "asserted: " << (rep.asserted ? "yes" : "no") << '\n';
            if (rep.asserted && !rep.holds) {
                out << "bound violated\n";
                return kAssertionFailure;
            }
            return kSuccess;
        }
        if (eta_cmd->parsed()) {
            EtaTable table(parse_rational(eps_text));
            if (!as_json) out << "n,kappa,eta,eta_decimal\n";
            for (unsigned n = 1; n <= nmax; ++n) {
                const std::string kap = n >= 3 ? table.kappa(n).get_str() : "-";
                const auto& e = table.eta(n);
                const std::string dec = fmt::format("{:.12g}", to_double(e));
                if (as_json) {
                    nlohmann::ordered_json j;
                    j["n"] = n;
                    j["kappa"] = n >= 3 ? nlohmann::ordered_json(kap) : nlohmann::ordered_json(nullptr);
                    j["eta"] = e.get_str();
                    j["eta_decimal"] = std::stod(dec);
                    out << j.dump() << '\n';
                } else {
                    out << n << ',' << kap << ',' << e.get_str() << ',' << dec << '\n';
                }
            }
            return kSuccess;
        }
        if (prng->parsed()) {
            if (poly.empty() == inv_ab.empty()) throw std::invalid_argument("exactly one of --poly and --inversive is required");
            const auto g = checked_subgroup(p, tau);
            const GeneratorSequence seq = poly.empty()
                                              ? inversive_generator(g.modulus(), g.generator(), inv_ab[0], inv_ab[1], count)
                                              : power_generator(g, parse_polynomial(poly), count);
            std::ofstream file;
            if (!prng_out.empty()) {
                file.open(prng_out, std::ios::binary);
                if (!file) throw std::invalid_argument("cannot open " + prng_out);
            }
            std::ostream& sink = prng_out.empty() ? out : file;
            if (format == "csv") {
                write_csv(sink, seq);
            } else {
                write_u64_le(sink, seq);
            }
            if (stats) {
                const auto rep = equidistribution_report(seq);
                err << fmt::format("counted: {}\nexcluded: {}\nmax harmonic: {:.6g}\nserial correlation: {:.6g}\n",
                                   rep.counted, seq.excluded(), rep.max_harmonic, rep.serial_correlation);
            }
            return kSuccess;
        }
        if (verify->parsed()) {
            cfg.eps = parse_rational(eps_text);
            cfg.format = out_format == "json" ? OutputFormat::json : OutputFormat::csv;
            cfg.taus = taus == "all" ? TauSelector::all : taus == "window" ? TauSelector::window : TauSelector::automatic;
            cfg.family = family == "monomial" ? Family::monomial : family == "binomial" ? Family::binomial : Family::sparse;
            const SweepResult res = run_sweep(cfg);
            std::ofstream file(out_path, std::ios::binary);
            if (!file) throw std::invalid_argument("cannot open " + out_path);
            write_header(file, cfg.format);
            for (const auto& row : res.rows) write_row(file, row, cfg.format);
            file.close();
            out << fmt::format("suite: {}\nrows: {}\nfailures: {}\nover ceiling: {}\n", cfg.suite, res.rows.size(),
                               res.failures, res.over);
            if (!res.max_ratio_at.empty()) out << "max ratio: " << format_ratio(res.max_ratio) << " at " << res.max_ratio_at << '\n';
            return res.passed() ? kSuccess : kAssertionFailure;
        }
    } catch (const GuardError& e) {
        err << "guard violation [" << e.guard() << "]: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    return kUsageError;
}

}  // namespace weil::cli
