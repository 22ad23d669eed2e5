#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "specdec/cost_model.hpp"
#include "specdec/stats.hpp"

namespace specdec {

/// One (prompt, condition) observation. Baseline rows carry no alpha and use
/// "-" as the drafter label.
struct ObservationRow {
    std::string dataset;
    std::string drafter;
    std::string strategy;
    int k = 0;
    int p = 0;
    int prompt_id = 0;
    std::optional<double> alpha;
    double tps_modeled = 0;
    std::optional<double> tps_wall;
    double baseline_tps = 0;
    double speedup = 0;
    int cycles = 0;
    int absorbed_cycles = 0;
};

extern const char* const kCsvHeader;

std::string to_csv(const std::vector<ObservationRow>& rows);
/// Throws FormatError with the offending line number.
std::vector<ObservationRow> parse_csv(std::istream& in);

/// Grouped means per (dataset, drafter, strategy, k), sorted by that key.
std::vector<SummaryRow> summary_table(const std::vector<ObservationRow>& rows);

struct Report {
    std::string markdown;
    std::string summary_json;
};

/// Render the full Markdown report plus a machine-readable JSON summary:
/// per-condition means, bucket tables per (dataset, k), OLS break-even with
/// delta-method CIs, the cost-model appendix and the energy line.
Report render_report(const std::vector<ObservationRow>& rows, const CostParams& params,
                     const HardwareProfile& profile);

/// Shortest round-trip decimal representation; keeps CSV output byte-stable.
std::string format_double(double value);

} // namespace specdec
