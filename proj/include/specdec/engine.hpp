#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "specdec/bpe.hpp"
#include "specdec/cost_model.hpp"
#include "specdec/ngram.hpp"
#include "specdec/translate.hpp"

namespace specdec {

enum class Strategy {
    baseline,       // autoregressive target only, no drafter
    no_translation, // draft ids passed through unchanged
    naive,          // string round-trip, no context
    context_aware,  // string round-trip with a p-token prefix window
};

const char* strategy_name(Strategy s);
std::optional<Strategy> strategy_from_name(std::string_view name);

struct EngineConfig {
    Strategy strategy = Strategy::context_aware;
    int k = 2;              // draft tokens per cycle
    std::size_t p = 5;      // prefix window, in draft tokens
    std::size_t max_tokens = 128;
};

/// One draft-verify cycle. A verified cycle proposes exactly k draft tokens;
/// an absorbed cycle proposes none (its draft work is discarded). accepted
/// and bonus_emitted count tokens that actually reached the output, so the
/// final cycle of a capped run may report fewer.
struct CycleTrace {
    int proposed = 0;
    int accepted = 0;
    bool bonus_emitted = false;
    bool absorbed = false;
    int draft_passes = 0;
};

struct RunResult {
    std::vector<TokenId> output_target_ids;
    std::vector<CycleTrace> cycles;
    std::optional<double> alpha; // absent for baseline runs
    std::size_t tokens_emitted = 0;
    double modeled_time = 0; // seconds under the cost model (0 without params)
    double wall_time = 0;    // seconds measured
};

struct VerifyResult {
    std::size_t accepted = 0;
    TokenId bonus = 0;
};

/// Accept candidates while they match the target's greedy prediction; the
/// bonus is the prediction at the rejection point, or one further token when
/// everything matched. Conceptually a single batched pass; cost accounting
/// charges one target pass per call.
VerifyResult verify(const NGramModel& target_model, std::span<const TokenId> target_context_ids,
                    std::span<const TokenId> candidate_ids);

/// Run one prompt under the configured strategy. Pass null draft model and
/// vocabulary for the baseline; with cost params the modeled cycle times are
/// accumulated into RunResult::modeled_time.
RunResult speculative_generate(const NGramModel& target_model, const Vocabulary& target_vocab,
                               const NGramModel* draft_model, const Vocabulary* draft_vocab,
                               const EngineConfig& config, std::string_view prompt_text,
                               const CostParams* cost_params = nullptr);

} // namespace specdec
