#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "weil/exponents.hpp"
#include "weil/field.hpp"

namespace weil::cli {

enum class TauSelector { automatic, all, window };
enum class Family { monomial, binomial, sparse };
enum class OutputFormat { csv, json };

struct SweepConfig {
    std::string suite;
    u64 pmin = 3;
    u64 pmax = 31;
    TauSelector taus = TauSelector::automatic;  // window for binomial and theorem, all otherwise
    Family family = Family::sparse;
    unsigned sparsity = 3;   // upper bound on r for the sparse family
    unsigned samples = 0;    // per (p, tau); 0 picks the suite default
    u64 seed = 1;
    ExactRational eps{1, 10};
    double ceiling = 10.0;
    OutputFormat format = OutputFormat::csv;
};

/// Row status: "ok", "fail" (hard assertion), "over" (ratio above the ceiling)
/// or "info" (reported but not asserted).
struct ReportRow {
    std::string suite;
    u64 p = 0;
    u64 tau = 0;  // size of the summation set
    std::string params;
    std::string measured;
    std::string bound;
    double ratio = 0.0;
    bool admissible = false;
    std::string status = "ok";
};

struct SweepResult {
    std::vector<ReportRow> rows;
    std::size_t failures = 0;    // hard assertion failures
    std::size_t over = 0;        // ratios above the ceiling
    double max_ratio = 0.0;      // over asserted-ratio rows
    std::string max_ratio_at;

    bool passed() const noexcept { return failures == 0 && over == 0; }
};

const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite or an empty prime range.
SweepResult run_sweep(const SweepConfig& config);

void write_header(std::ostream& out, OutputFormat format);
void write_row(std::ostream& out, const ReportRow& row, OutputFormat format);

/// Six significant digits, no locale.
std::string format_ratio(double ratio);

}  // namespace weil::cli
