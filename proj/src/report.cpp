#include "specdec/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace specdec {

const char* const kCsvHeader =
    "dataset,drafter,strategy,k,p,prompt_id,alpha,tps_modeled,tps_wall,baseline_tps,speedup,"
    "cycles,absorbed_cycles";

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) throw InternalError("number formatting failed");
    return std::string(buf, ptr);
}

namespace {

std::string fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

double parse_number(const std::string& field, std::size_t line_no) {
    double out = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw FormatError("line " + std::to_string(line_no) + ": bad number '" + field + "'");
    }
    return out;
}

long parse_int(const std::string& field, std::size_t line_no) {
    long out = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw FormatError("line " + std::to_string(line_no) + ": bad integer '" + field + "'");
    }
    return out;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace

std::string to_csv(const std::vector<ObservationRow>& rows) {
    std::string out = kCsvHeader;
    out.push_back('\n');
    for (const ObservationRow& r : rows) {
        out += r.dataset;
        out.push_back(',');
        out += r.drafter;
        out.push_back(',');
        out += r.strategy;
        out.push_back(',');
        out += std::to_string(r.k);
        out.push_back(',');
        out += std::to_string(r.p);
        out.push_back(',');
        out += std::to_string(r.prompt_id);
        out.push_back(',');
        if (r.alpha) out += format_double(*r.alpha);
        out.push_back(',');
        out += format_double(r.tps_modeled);
        out.push_back(',');
        if (r.tps_wall) out += format_double(*r.tps_wall);
        out.push_back(',');
        out += format_double(r.baseline_tps);
        out.push_back(',');
        out += format_double(r.speedup);
        out.push_back(',');
        out += std::to_string(r.cycles);
        out.push_back(',');
        out += std::to_string(r.absorbed_cycles);
        out.push_back('\n');
    }
    return out;
}

std::vector<ObservationRow> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw FormatError("line 1: unexpected CSV header");
    }
    std::vector<ObservationRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f = split_fields(line);
        if (f.size() != 13) {
            throw FormatError("line " + std::to_string(line_no) + ": expected 13 fields, got " +
                              std::to_string(f.size()));
        }
        ObservationRow r;
        r.dataset = f[0];
        r.drafter = f[1];
        r.strategy = f[2];
        r.k = static_cast<int>(parse_int(f[3], line_no));
        r.p = static_cast<int>(parse_int(f[4], line_no));
        r.prompt_id = static_cast<int>(parse_int(f[5], line_no));
        if (!f[6].empty()) r.alpha = parse_number(f[6], line_no);
        r.tps_modeled = parse_number(f[7], line_no);
        if (!f[8].empty()) r.tps_wall = parse_number(f[8], line_no);
        r.baseline_tps = parse_number(f[9], line_no);
        r.speedup = parse_number(f[10], line_no);
        r.cycles = static_cast<int>(parse_int(f[11], line_no));
        r.absorbed_cycles = static_cast<int>(parse_int(f[12], line_no));
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<SummaryRow> summary_table(const std::vector<ObservationRow>& rows) {
    struct Acc {
        double alpha_sum = 0;
        std::size_t alpha_n = 0;
        double tps_sum = 0;
        double speedup_sum = 0;
        std::size_t n = 0;
    };
    std::map<std::tuple<std::string, std::string, std::string, int>, Acc> groups;
    for (const ObservationRow& r : rows) {
        Acc& acc = groups[{r.dataset, r.drafter, r.strategy, r.k}];
        if (r.alpha) {
            acc.alpha_sum += *r.alpha;
            ++acc.alpha_n;
        }
        acc.tps_sum += r.tps_modeled;
        acc.speedup_sum += r.speedup;
        ++acc.n;
    }
    std::vector<SummaryRow> out;
    for (const auto& [key, acc] : groups) {
        SummaryRow s;
        std::tie(s.dataset, s.drafter, s.strategy, s.k) = key;
        s.n = acc.n;
        s.mean_alpha = acc.alpha_n > 0 ? acc.alpha_sum / static_cast<double>(acc.alpha_n) : 0.0;
        s.mean_tps = acc.tps_sum / static_cast<double>(acc.n);
        s.mean_speedup = acc.speedup_sum / static_cast<double>(acc.n);
        s.at_or_above_baseline = s.mean_speedup >= 1.0;
        out.push_back(std::move(s));
    }
    return out;
}

Report render_report(const std::vector<ObservationRow>& rows, const CostParams& params,
                     const HardwareProfile& profile) {
    using nlohmann::json;
    std::ostringstream md;
    json js;

    std::set<std::string> datasets;
    std::set<std::string> drafters;
    std::set<int> ks;
    std::map<std::string, double> base_tps_sum;
    std::map<std::string, std::size_t> base_tps_n;
    for (const ObservationRow& r : rows) {
        datasets.insert(r.dataset);
        if (r.strategy != "baseline") {
            drafters.insert(r.drafter);
            ks.insert(r.k);
        }
        base_tps_sum[r.dataset] += r.baseline_tps;
        ++base_tps_n[r.dataset];
    }
    auto dataset_baseline = [&](const std::string& d) {
        return base_tps_sum[d] / static_cast<double>(base_tps_n[d]);
    };

    md << "# Speculative decoding report\n\n";
    md << rows.size() << " observations across " << datasets.size()
       << " dataset(s). TPS values are modeled from the bandwidth cost model at the measured "
          "acceptance rate; wall-clock TPS, when recorded, is informational only.\n\n";
    md << "Confidence intervals use the standard-normal quantile (1.96 at the 95% level).\n";

    // Per-condition means, one table per (dataset, k).
    std::vector<SummaryRow> summary = summary_table(rows);
    js["summary"] = json::array();
    for (const SummaryRow& s : summary) {
        js["summary"].push_back({{"dataset", s.dataset},
                                 {"drafter", s.drafter},
                                 {"strategy", s.strategy},
                                 {"k", s.k},
                                 {"mean_alpha", s.mean_alpha},
                                 {"mean_tps", s.mean_tps},
                                 {"mean_speedup", s.mean_speedup},
                                 {"n", s.n},
                                 {"at_or_above_baseline", s.at_or_above_baseline}});
    }
    for (int k : ks) {
        md << "\n## Mean acceptance rate and throughput, k = " << k << "\n";
        for (const std::string& dataset : datasets) {
            md << "\n### " << dataset << "\n\n";
            md << "| Drafter | Condition | alpha (%) | TPS | Speedup |\n";
            md << "|---|---|---|---|---|\n";
            for (const SummaryRow& s : summary) {
                if (s.dataset != dataset || s.strategy == "baseline" || s.k != k) continue;
                const std::string mark = s.at_or_above_baseline ? "**" : "";
                md << "| " << s.drafter << " | " << s.strategy << " | " << fixed(s.mean_alpha * 100, 1)
                   << " | " << fixed(s.mean_tps, 2) << " | " << mark << fixed(s.mean_speedup, 2)
                   << "x" << mark << " |\n";
            }
            md << "| - | baseline | - | " << fixed(dataset_baseline(dataset), 2) << " | 1.00x |\n";
        }
    }

    // Bucket tables: context-aware rows per (dataset, k), one column per drafter.
    js["buckets"] = json::array();
    for (const std::string& dataset : datasets) {
        for (int k : ks) {
            std::map<std::string, std::vector<std::pair<double, double>>> per_drafter;
            for (const ObservationRow& r : rows) {
                if (r.dataset != dataset || r.k != k || r.strategy != "context_aware" || !r.alpha)
                    continue;
                per_drafter[r.drafter].push_back({*r.alpha, r.speedup});
            }
            if (per_drafter.empty()) continue;
            md << "\n## Mean speedup by acceptance bucket: " << dataset << ", k = " << k
               << " (context_aware)\n\n";
            md << "| alpha bucket |";
            std::vector<std::vector<BucketRow>> tables;
            for (const auto& [drafter, points] : per_drafter) {
                md << " " << drafter << " |";
                tables.push_back(bucket_table(points));
            }
            md << "\n|---|";
            for (std::size_t i = 0; i < per_drafter.size(); ++i) md << "---|";
            md << "\n";
            const std::size_t bucket_count = tables.empty() ? 0 : tables[0].size();
            for (std::size_t b = 0; b < bucket_count; ++b) {
                md << "| " << tables[0][b].label << " |";
                for (const auto& table : tables) {
                    if (table[b].n == 0) {
                        md << " - |";
                    } else {
                        const bool bold = table[b].mean_speedup >= 1.0;
                        md << (bold ? " **" : " ") << fixed(table[b].mean_speedup, 2) << "x"
                           << (bold ? "** |" : " |");
                    }
                }
                md << "\n";
            }
            json jt;
            jt["dataset"] = dataset;
            jt["k"] = k;
            jt["drafters"] = json::array();
            std::size_t idx = 0;
            for (const auto& [drafter, points] : per_drafter) {
                json jd;
                jd["drafter"] = drafter;
                jd["buckets"] = json::array();
                for (const BucketRow& row : tables[idx]) {
                    jd["buckets"].push_back({{"label", row.label},
                                             {"mean_speedup", row.mean_speedup},
                                             {"n", row.n}});
                }
                jt["drafters"].push_back(jd);
                ++idx;
            }
            js["buckets"].push_back(jt);
        }
    }

    // OLS break-even per (dataset, drafter, k), context-aware rows.
    md << "\n## OLS break-even acceptance rate (context_aware)\n\n";
    md << "| Dataset | Drafter | k | alpha_be (%) | 95% CI (pp) | R^2 | note |\n";
    md << "|---|---|---|---|---|---|---|\n";
    js["breakeven"] = json::array();
    for (const std::string& dataset : datasets) {
        for (const std::string& drafter : drafters) {
            for (int k : ks) {
                std::vector<std::pair<double, double>> points;
                for (const ObservationRow& r : rows) {
                    if (r.dataset == dataset && r.drafter == drafter && r.k == k &&
                        r.strategy == "context_aware" && r.alpha) {
                        points.push_back({*r.alpha, r.tps_modeled});
                    }
                }
                if (points.size() < 3) continue;
                md << "| " << dataset << " | " << drafter << " | " << k << " | ";
                json jb{{"dataset", dataset}, {"drafter", drafter}, {"k", k}};
                try {
                    OlsFit fit = ols_fit(points);
                    const double tb = dataset_baseline(dataset);
                    BreakevenEstimate be = breakeven_from_fit(fit, tb);
                    if (!be.defined) {
                        md << "- | - | " << fixed(fit.r_squared, 2) << " | slope <= 0 |\n";
                        jb["defined"] = false;
                    } else {
                        Interval ci = delta_ci(fit, tb);
                        md << fixed(be.alpha * 100, 1) << " | [" << fixed(ci.lo * 100, 1) << ", "
                           << fixed(ci.hi * 100, 1) << "] | " << fixed(fit.r_squared, 2) << " | "
                           << (be.reachable ? "" : "+unreachable (>100%)") << " |\n";
                        jb["defined"] = true;
                        jb["alpha_be"] = be.alpha;
                        jb["ci_lo"] = ci.lo;
                        jb["ci_hi"] = ci.hi;
                        jb["reachable"] = be.reachable;
                        jb["r_squared"] = fit.r_squared;
                    }
                } catch (const DataError&) {
                    md << "- | - | - | degenerate alpha spread |\n";
                    jb["defined"] = false;
                }
                js["breakeven"].push_back(jb);
            }
        }
    }

    // Cost-model appendix.
    const double tb = params.t_base();
    md << "\n## Cost model\n\n";
    md << "- t_base = " << fixed(tb * 1000, 2) << " ms, baseline " << fixed(baseline_tps(params), 2)
       << " TPS\n";
    md << "- size ratio r = S_D/S_T = " << fixed(params.size_ratio(), 4)
       << ", effective draft ratio = " << fixed(params.effective_draft_ratio(), 4) << "\n";
    md << "- beta = c1/t_base = " << fixed(params.beta(), 4) << "\n\n";
    md << "| k | t_cycle (ms) | breakeven exact (%) | breakeven approx (%) |\n";
    md << "|---|---|---|---|\n";
    js["cost_model"] = {{"t_base_s", tb},
                        {"baseline_tps", baseline_tps(params)},
                        {"size_ratio", params.size_ratio()},
                        {"effective_draft_ratio", params.effective_draft_ratio()},
                        {"beta", params.beta()},
                        {"per_k", json::array()}};
    for (int k : ks) {
        Breakeven exact = breakeven_exact(params, k);
        Breakeven approx = breakeven_approx(params.size_ratio(), params.beta(), k);
        auto pct = [](const Breakeven& b) {
            std::string s = fixed(b.alpha * 100, 1);
            if (!b.reachable) s += " (unreachable)";
            return s;
        };
        md << "| " << k << " | " << fixed(t_cycle(params, k) * 1000, 2) << " | " << pct(exact)
           << " | " << pct(approx) << " |\n";
        js["cost_model"]["per_k"].push_back({{"k", k},
                                             {"t_cycle_s", t_cycle(params, k)},
                                             {"breakeven_exact", exact.alpha},
                                             {"breakeven_exact_reachable", exact.reachable},
                                             {"breakeven_approx", approx.alpha},
                                             {"breakeven_approx_reachable", approx.reachable}});
    }

    const double chip_j = energy_per_token(profile.chip_watts, baseline_tps(params));
    const double system_j = energy_per_token(profile.system_watts, baseline_tps(params));
    md << "\n## Energy\n\n";
    md << profile.name << " at baseline throughput: " << fixed(chip_j, 2) << " J/token (chip, "
       << fixed(profile.chip_watts, 0) << " W), " << fixed(system_j, 2) << " J/token (system, "
       << fixed(profile.system_watts, 0) << " W).\n";
    js["energy"] = {{"profile", profile.name},
                    {"chip_watts", profile.chip_watts},
                    {"system_watts", profile.system_watts},
                    {"chip_j_per_token", chip_j},
                    {"system_j_per_token", system_j}};
    js["meta"] = {{"ci_quantile", "normal"}, {"observations", rows.size()}};

    Report report;
    report.markdown = md.str();
    report.summary_json = js.dump(2);
    report.summary_json.push_back('\n');
    return report;
}

} // namespace specdec
