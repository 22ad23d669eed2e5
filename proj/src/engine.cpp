#include "specdec/engine.hpp"

#include <algorithm>
#include <chrono>

namespace specdec {

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::baseline: return "baseline";
        case Strategy::no_translation: return "no_translation";
        case Strategy::naive: return "naive";
        case Strategy::context_aware: return "context_aware";
    }
    return "?";
}

std::optional<Strategy> strategy_from_name(std::string_view name) {
    if (name == "baseline") return Strategy::baseline;
    if (name == "no_translation") return Strategy::no_translation;
    if (name == "naive") return Strategy::naive;
    if (name == "context_aware") return Strategy::context_aware;
    return std::nullopt;
}

VerifyResult verify(const NGramModel& target_model, std::span<const TokenId> target_context_ids,
                    std::span<const TokenId> candidate_ids) {
    std::vector<TokenId> ctx(target_context_ids.begin(), target_context_ids.end());
    VerifyResult result;
    for (;;) {
        TokenId pred = target_model.argmax_next(ctx);
        if (result.accepted == candidate_ids.size() || candidate_ids[result.accepted] != pred) {
            result.bonus = pred;
            break;
        }
        ctx.push_back(pred);
        ++result.accepted;
    }
    return result;
}

namespace {

double cycle_seconds(const CostParams* params, int draft_passes, int k, bool with_surcharge) {
    if (params == nullptr) return 0.0;
    const double kd = static_cast<double>(k);
    double t = static_cast<double>(draft_passes) * params->draft_pass_seconds() +
               params->target_bytes / params->bandwidth + params->c0 + params->c1 * kd * kd;
    if (with_surcharge) t += params->rewind_surcharge;
    return t;
}

} // namespace

RunResult speculative_generate(const NGramModel& target_model, const Vocabulary& target_vocab,
                               const NGramModel* draft_model, const Vocabulary* draft_vocab,
                               const EngineConfig& config, std::string_view prompt_text,
                               const CostParams* cost_params) {
    const auto t0 = std::chrono::steady_clock::now();
    if (target_model.vocab_size() != model_vocab_size(target_vocab)) {
        throw ConfigError("target model was not trained for this vocabulary");
    }

    RunResult result;
    if (config.strategy == Strategy::baseline) {
        result.output_target_ids =
            generate_greedy(target_model, target_vocab, prompt_text, config.max_tokens);
        result.tokens_emitted = result.output_target_ids.size();
        if (cost_params != nullptr) {
            result.modeled_time = static_cast<double>(result.tokens_emitted) * cost_params->t_base();
        }
        result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return result;
    }

    if (draft_model == nullptr || draft_vocab == nullptr) {
        throw ConfigError("speculative strategies require a draft model and vocabulary");
    }
    if (draft_model->vocab_size() != model_vocab_size(*draft_vocab)) {
        throw ConfigError("draft model was not trained for this vocabulary");
    }
    if (config.k < 1) throw ConfigError("draft length k must be >= 1");

    const TokenId target_eot = eot_id(target_vocab);
    const TokenId draft_eot = eot_id(*draft_vocab);
    const bool translates =
        config.strategy == Strategy::naive || config.strategy == Strategy::context_aware;

    GenerationCache target_cache;
    target_cache.extend(target_vocab.encode(prompt_text));
    GenerationCache draft_cache;
    draft_cache.extend(draft_vocab->encode(prompt_text));

    bool done = config.max_tokens == 0;
    while (!done) {
        CycleTrace trace;
        const std::size_t draft_committed = draft_cache.size();

        // k draft passes; the drafter never proposes its own end-of-text.
        std::vector<TokenId> proposals;
        proposals.reserve(static_cast<std::size_t>(config.k));
        for (int i = 0; i < config.k; ++i) {
            TokenId next = draft_model->argmax_next_excluding(draft_cache.ids(), draft_eot);
            proposals.push_back(next);
            draft_cache.push(next);
        }

        TranslationOutcome translated;
        switch (config.strategy) {
            case Strategy::no_translation:
                translated.target_ids = proposals;
                break;
            case Strategy::naive:
                translated = naive_translate(*draft_vocab, target_vocab, proposals);
                break;
            case Strategy::context_aware:
                translated = context_translate(*draft_vocab, target_vocab,
                                               draft_cache.ids().first(draft_committed), proposals,
                                               config.p);
                break;
            case Strategy::baseline:
                break;
        }
        if (translated.target_ids.size() > static_cast<std::size_t>(config.k)) {
            translated.target_ids.resize(static_cast<std::size_t>(config.k));
        }

        // What this cycle wants to emit: accepted candidates plus the bonus
        // (the replacement on rejection, the free extra token otherwise). An
        // absorbed cycle discards its draft work and falls back to a single
        // autoregressive target token.
        std::vector<TokenId> to_emit;
        std::size_t verified_accepted = 0;
        if (translated.absorbed) {
            trace.absorbed = true;
            to_emit.push_back(target_model.argmax_next(target_cache.ids()));
        } else {
            trace.proposed = config.k;
            VerifyResult v = verify(target_model, target_cache.ids(), translated.target_ids);
            verified_accepted = v.accepted;
            to_emit.assign(translated.target_ids.begin(),
                           translated.target_ids.begin() + static_cast<std::ptrdiff_t>(v.accepted));
            to_emit.push_back(v.bonus);
        }

        // Commit to the output, honoring end-of-text and the generation cap.
        std::size_t emitted = 0;
        for (TokenId id : to_emit) {
            if (id == target_eot) {
                done = true;
                break;
            }
            result.output_target_ids.push_back(id);
            target_cache.push(id);
            ++emitted;
            if (result.output_target_ids.size() >= config.max_tokens) {
                done = true;
                break;
            }
        }
        if (!trace.absorbed) {
            trace.accepted = static_cast<int>(std::min(verified_accepted, emitted));
            trace.bonus_emitted = emitted > verified_accepted;
        } else {
            trace.bonus_emitted = emitted > 0;
        }
        trace.draft_passes = config.k + (translates ? 1 : 0);

        // Resynchronize the drafter's context with what was actually emitted.
        // Naive mode back-translates without a prefix window (bare string
        // round-trip), context-aware keeps the same window in both directions.
        draft_cache.trim_to(draft_committed);
        std::span<const TokenId> new_target_ids(to_emit.data(), emitted);
        if (translates) {
            const std::size_t back_p = config.strategy == Strategy::naive ? 0 : config.p;
            TranslationOutcome back = back_translate(target_vocab, *draft_vocab, draft_cache.ids(),
                                                     new_target_ids, back_p);
            if (back.absorbed) {
                // Boundary absorbed on the return path; rebuild the draft
                // context from the full surface text.
                draft_cache.trim_to(0);
                draft_cache.extend(draft_vocab->encode(
                    std::string(prompt_text) +
                    target_vocab.decode_fragment(result.output_target_ids)));
            } else {
                draft_cache.extend(back.target_ids);
            }
        } else {
            draft_cache.extend(new_target_ids);
        }

        if (cost_params != nullptr) {
            result.modeled_time += cycle_seconds(cost_params, trace.draft_passes, config.k, true);
        }
        result.cycles.push_back(trace);
    }

    result.tokens_emitted = result.output_target_ids.size();
    long long proposed_total = 0;
    long long accepted_total = 0;
    for (const CycleTrace& c : result.cycles) {
        proposed_total += c.proposed;
        accepted_total += c.accepted;
    }
    result.alpha = proposed_total > 0
                       ? static_cast<double>(accepted_total) / static_cast<double>(proposed_total)
                       : 0.0;
    result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

} // namespace specdec
