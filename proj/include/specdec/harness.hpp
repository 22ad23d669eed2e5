#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "specdec/cost_model.hpp"
#include "specdec/engine.hpp"
#include "specdec/report.hpp"

namespace specdec {

struct DraftSpec {
    std::string label;
    std::size_t vocab_size = 320;
    int order = 3;
};

struct ExperimentConfig {
    std::filesystem::path target_corpus;
    std::filesystem::path draft_corpus;
    std::vector<std::pair<std::string, std::filesystem::path>> prompt_sets; // label -> path

    std::size_t target_vocab_size = 420;
    int target_order = 3;
    std::vector<DraftSpec> drafts;

    std::vector<int> k_values = {2, 4};
    std::size_t p = 5;
    std::vector<Strategy> strategies = {Strategy::no_translation, Strategy::naive,
                                        Strategy::context_aware};
    std::size_t max_tokens = 128;
    std::size_t prompts_per_condition = 50;
    std::uint64_t seed = 1;

    CostParams cost = CostParams::m2_pro_defaults();
    HardwareProfile profile;

    // Wall-clock TPS is informational; disable it when byte-identical output
    // across runs is required.
    bool measure_wall_time = true;
};

/// `key = value` lines, `#` comments. Repeated keys `draft.<label>` and
/// `prompts.<label>` define drafters and prompt sets.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Name of the environment variable holding the default config path.
extern const char* const kConfigEnvVar;

struct MatrixResult {
    std::vector<ObservationRow> rows; // sorted by (dataset, drafter, strategy, k, prompt)
    std::string traces;               // per-run cycle log
};

/// Execute the full condition matrix: per prompt one baseline run plus one
/// run per (drafter, strategy, k). Every run's losslessness and accounting
/// invariants are re-checked before its row is recorded; a breach throws
/// InternalError.
MatrixResult run_matrix(const ExperimentConfig& config);

} // namespace specdec
