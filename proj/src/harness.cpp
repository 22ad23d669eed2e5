#include "specdec/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "specdec/corpus.hpp"
#include "specdec/ngram.hpp"
#include "specdec/rng.hpp"

namespace specdec {

const char* const kConfigEnvVar = "SPECDEC_CONFIG";

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : value) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    out.erase(std::remove(out.begin(), out.end(), std::string{}), out.end());
    return out;
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double d = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return d;
    } catch (const std::exception&) {
        throw FormatError("config key '" + key + "': bad number '" + value + "'");
    }
}

long to_long(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw FormatError("config key '" + key + "': bad integer '" + value + "'");
    }
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw FormatError("config key '" + key + "': bad boolean '" + value + "'");
}

constexpr double kGB = 1e9;

} // namespace

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    bool strategies_set = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw FormatError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));

        if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_long(key, value));
        else if (key == "max_tokens") cfg.max_tokens = static_cast<std::size_t>(to_long(key, value));
        else if (key == "prompts_per_condition")
            cfg.prompts_per_condition = static_cast<std::size_t>(to_long(key, value));
        else if (key == "p") cfg.p = static_cast<std::size_t>(to_long(key, value));
        else if (key == "k") {
            cfg.k_values.clear();
            for (const std::string& item : split_list(value)) {
                cfg.k_values.push_back(static_cast<int>(to_long(key, item)));
            }
        } else if (key == "strategies") {
            cfg.strategies.clear();
            strategies_set = true;
            for (const std::string& item : split_list(value)) {
                auto s = strategy_from_name(item);
                if (!s) throw FormatError("config key 'strategies': unknown strategy '" + item + "'");
                if (*s != Strategy::baseline) cfg.strategies.push_back(*s);
            }
        } else if (key == "target_corpus") cfg.target_corpus = value;
        else if (key == "draft_corpus") cfg.draft_corpus = value;
        else if (key == "target_vocab_size")
            cfg.target_vocab_size = static_cast<std::size_t>(to_long(key, value));
        else if (key == "target_order") cfg.target_order = static_cast<int>(to_long(key, value));
        else if (key.rfind("draft.", 0) == 0) {
            DraftSpec spec;
            spec.label = key.substr(6);
            std::vector<std::string> parts = split_list(value);
            if (parts.size() != 2) {
                throw FormatError("config key '" + key + "': expected <vocab_size>,<order>");
            }
            spec.vocab_size = static_cast<std::size_t>(to_long(key, parts[0]));
            spec.order = static_cast<int>(to_long(key, parts[1]));
            cfg.drafts.push_back(std::move(spec));
        } else if (key.rfind("prompts.", 0) == 0) {
            cfg.prompt_sets.emplace_back(key.substr(8), value);
        } else if (key == "st_gb") cfg.cost.target_bytes = to_double(key, value) * kGB;
        else if (key == "sd_gb") cfg.cost.draft_bytes = to_double(key, value) * kGB;
        else if (key == "bw_gbps") cfg.cost.bandwidth = to_double(key, value) * kGB;
        else if (key == "c0_ms") cfg.cost.c0 = to_double(key, value) / 1000.0;
        else if (key == "c1_ms") cfg.cost.c1 = to_double(key, value) / 1000.0;
        else if (key == "rewind_ms") cfg.cost.rewind_surcharge = to_double(key, value) / 1000.0;
        else if (key == "hardware_name") cfg.profile.name = value;
        else if (key == "hardware_bw_gbps") cfg.profile.bandwidth_gbps = to_double(key, value);
        else if (key == "chip_watts") cfg.profile.chip_watts = to_double(key, value);
        else if (key == "system_watts") cfg.profile.system_watts = to_double(key, value);
        else if (key == "measure_wall_time") cfg.measure_wall_time = to_bool(key, value);
        else throw FormatError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    (void)strategies_set;
    if (cfg.drafts.empty()) throw ConfigError("config defines no drafters (draft.<label> = ...)");
    if (cfg.prompt_sets.empty()) throw ConfigError("config defines no prompt sets (prompts.<label> = ...)");
    if (cfg.target_corpus.empty() || cfg.draft_corpus.empty()) {
        throw ConfigError("config must set target_corpus and draft_corpus");
    }
    for (int k : cfg.k_values) {
        if (k < 1) throw ConfigError("k values must be >= 1");
    }
    cfg.cost.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    return parse_config(in);
}

namespace {

struct TrainedDraft {
    DraftSpec spec;
    Vocabulary vocab;
    NGramModel model;
};

void check_run(const RunResult& run, const RunResult& baseline, const Vocabulary& target_vocab,
               int k) {
    if (run.output_target_ids != baseline.output_target_ids) {
        throw InternalError("losslessness breach: speculative ids differ from greedy ids");
    }
    if (target_vocab.decode_fragment(run.output_target_ids) !=
        target_vocab.decode_fragment(baseline.output_target_ids)) {
        throw InternalError("losslessness breach: speculative text differs from greedy text");
    }
    long long proposed = 0, accepted = 0, full_cycles = 0;
    for (const CycleTrace& c : run.cycles) {
        if (c.accepted < 0 || c.accepted > c.proposed || c.proposed > k) {
            throw InternalError("cycle accounting breach: accepted/proposed out of range");
        }
        proposed += c.proposed;
        accepted += c.accepted;
        if (!c.absorbed) ++full_cycles;
    }
    if (proposed != static_cast<long long>(k) * full_cycles) {
        throw InternalError("cycle accounting breach: proposed != k * non-absorbed cycles");
    }
    const double recomputed =
        proposed > 0 ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
    if (!run.alpha || std::fabs(*run.alpha - recomputed) > 1e-12) {
        throw InternalError("cycle accounting breach: alpha does not match traces");
    }
    long long emitted = 0;
    for (const CycleTrace& c : run.cycles) emitted += c.accepted + (c.bonus_emitted ? 1 : 0);
    if (emitted != static_cast<long long>(run.tokens_emitted)) {
        throw InternalError("cycle accounting breach: emitted tokens do not match traces");
    }
}

} // namespace

MatrixResult run_matrix(const ExperimentConfig& config) {
    std::vector<std::string> target_docs = load_corpus(config.target_corpus);
    std::vector<std::string> draft_docs = load_corpus(config.draft_corpus);

    Vocabulary target_vocab = Vocabulary::train(target_docs, config.target_vocab_size);
    NGramModel target_model = NGramModel::train(encode_corpus(target_vocab, target_docs),
                                                config.target_order, model_vocab_size(target_vocab));

    std::vector<TrainedDraft> drafts;
    for (const DraftSpec& spec : config.drafts) {
        Vocabulary vocab = Vocabulary::train(draft_docs, spec.vocab_size);
        NGramModel model = NGramModel::train(encode_corpus(vocab, draft_docs), spec.order,
                                             model_vocab_size(vocab));
        drafts.push_back({spec, std::move(vocab), std::move(model)});
    }

    const double base_tps = baseline_tps(config.cost);
    std::vector<ObservationRow> rows;
    std::ostringstream traces;

    for (const auto& [dataset, prompt_path] : config.prompt_sets) {
        std::vector<std::string> prompt_docs = load_corpus(prompt_path);
        std::vector<std::size_t> order(prompt_docs.size());
        std::iota(order.begin(), order.end(), 0);
        std::uint64_t label_hash = 1469598103934665603ull;
        for (unsigned char c : dataset) {
            label_hash = (label_hash ^ c) * 1099511628211ull;
        }
        SplitMix64 rng(config.seed ^ label_hash);
        rng.shuffle(order);
        const std::size_t n_prompts = std::min(config.prompts_per_condition, prompt_docs.size());

        for (std::size_t pi = 0; pi < n_prompts; ++pi) {
            const std::string& prompt = prompt_docs[order[pi]];
            const int prompt_id = static_cast<int>(pi);

            EngineConfig base_cfg;
            base_cfg.strategy = Strategy::baseline;
            base_cfg.max_tokens = config.max_tokens;
            RunResult baseline = speculative_generate(target_model, target_vocab, nullptr, nullptr,
                                                      base_cfg, prompt, &config.cost);
            ObservationRow base_row;
            base_row.dataset = dataset;
            base_row.drafter = "-";
            base_row.strategy = "baseline";
            base_row.prompt_id = prompt_id;
            base_row.tps_modeled = base_tps;
            if (config.measure_wall_time && baseline.wall_time > 0) {
                base_row.tps_wall =
                    static_cast<double>(baseline.tokens_emitted) / baseline.wall_time;
            }
            base_row.baseline_tps = base_tps;
            base_row.speedup = 1.0;
            rows.push_back(base_row);

            for (const TrainedDraft& draft : drafts) {
                for (Strategy strategy : config.strategies) {
                    for (int k : config.k_values) {
                        EngineConfig cfg;
                        cfg.strategy = strategy;
                        cfg.k = k;
                        cfg.p = config.p;
                        cfg.max_tokens = config.max_tokens;
                        RunResult run = speculative_generate(target_model, target_vocab,
                                                             &draft.model, &draft.vocab, cfg,
                                                             prompt, &config.cost);
                        check_run(run, baseline, target_vocab, k);

                        ObservationRow row;
                        row.dataset = dataset;
                        row.drafter = draft.spec.label;
                        row.strategy = strategy_name(strategy);
                        row.k = k;
                        row.p = static_cast<int>(config.p);
                        row.prompt_id = prompt_id;
                        row.alpha = run.alpha;
                        row.tps_modeled = modeled_tps(config.cost, *run.alpha, k);
                        if (config.measure_wall_time && run.wall_time > 0) {
                            row.tps_wall =
                                static_cast<double>(run.tokens_emitted) / run.wall_time;
                        }
                        row.baseline_tps = base_tps;
                        row.speedup = row.tps_modeled / base_tps;
                        row.cycles = static_cast<int>(run.cycles.size());
                        for (const CycleTrace& c : run.cycles) {
                            if (c.absorbed) ++row.absorbed_cycles;
                        }
                        rows.push_back(std::move(row));

                        traces << dataset << " " << draft.spec.label << " "
                               << strategy_name(strategy) << " k=" << k << " prompt=" << prompt_id
                               << " alpha=" << format_double(*run.alpha)
                               << " tokens=" << run.tokens_emitted << " cycles=";
                        for (const CycleTrace& c : run.cycles) {
                            traces << (c.absorbed ? "A" : "") << c.accepted << "/" << c.proposed
                                   << (c.bonus_emitted ? "+b" : "") << " ";
                        }
                        traces << "\n";
                    }
                }
            }
        }
    }

    std::sort(rows.begin(), rows.end(), [](const ObservationRow& a, const ObservationRow& b) {
        return std::tie(a.dataset, a.drafter, a.strategy, a.k, a.prompt_id) <
               std::tie(b.dataset, b.drafter, b.strategy, b.k, b.prompt_id);
    });

    MatrixResult result;
    result.rows = std::move(rows);
    result.traces = traces.str();
    return result;
}

} // namespace specdec
