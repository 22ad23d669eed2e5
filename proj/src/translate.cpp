#include "specdec/translate.hpp"

#include <algorithm>
#include <string>

namespace specdec {

namespace {

// Shared body for both directions: re-encode prefix_text + new_text in the
// destination vocabulary and strip the prefix's token count.
TranslationOutcome translate_with_prefix(const Vocabulary& dest, const std::string& prefix_text,
                                         const std::string& new_text, bool input_nonempty) {
    TranslationOutcome outcome;
    std::vector<TokenId> full = dest.encode(prefix_text + new_text);
    std::vector<TokenId> prefix_only = dest.encode(prefix_text);
    outcome.prefix_len_target = prefix_only.size();

    const std::size_t cut = std::min(outcome.prefix_len_target, full.size());
    outcome.prefix_intact =
        cut == outcome.prefix_len_target &&
        std::equal(prefix_only.begin(), prefix_only.end(), full.begin());
    outcome.target_ids.assign(full.begin() + static_cast<std::ptrdiff_t>(cut), full.end());
    outcome.absorbed = outcome.target_ids.empty() && input_nonempty;
    return outcome;
}

TranslationOutcome identity_outcome(const Vocabulary& vocab, std::span<const TokenId> ids) {
    TranslationOutcome outcome;
    outcome.target_ids.reserve(ids.size());
    for (TokenId id : ids) {
        (void)vocab.bytes_of(id); // range check
        outcome.target_ids.push_back(id);
    }
    return outcome;
}

} // namespace

TranslationOutcome naive_translate(const Vocabulary& draft_vocab, const Vocabulary& target_vocab,
                                   std::span<const TokenId> draft_ids) {
    if (draft_vocab == target_vocab) {
        // Same tokenizer on both sides degenerates to the identity mapping;
        // round-tripping through text would only re-segment cycle boundaries.
        return identity_outcome(draft_vocab, draft_ids);
    }
    TranslationOutcome outcome;
    outcome.target_ids = target_vocab.encode(draft_vocab.decode(draft_ids));
    return outcome;
}

TranslationOutcome context_translate(const Vocabulary& draft_vocab, const Vocabulary& target_vocab,
                                     std::span<const TokenId> accepted_context_draft_ids,
                                     std::span<const TokenId> draft_ids, std::size_t p) {
    const std::size_t window = std::min(p, accepted_context_draft_ids.size());
    if (window == 0) {
        return naive_translate(draft_vocab, target_vocab, draft_ids);
    }
    std::span<const TokenId> ctx =
        accepted_context_draft_ids.subspan(accepted_context_draft_ids.size() - window);
    std::string prefix_text = draft_vocab.decode(ctx);

    // Decode context and draft jointly so the draft's leading word boundary
    // survives, then split at the prefix.
    std::vector<TokenId> joint_ids(ctx.begin(), ctx.end());
    joint_ids.insert(joint_ids.end(), draft_ids.begin(), draft_ids.end());
    std::string joint = draft_vocab.decode(joint_ids);
    std::string new_text = joint.substr(prefix_text.size());

    return translate_with_prefix(target_vocab, prefix_text, new_text, !draft_ids.empty());
}

TranslationOutcome back_translate(const Vocabulary& target_vocab, const Vocabulary& draft_vocab,
                                  std::span<const TokenId> accepted_context_draft_ids,
                                  std::span<const TokenId> accepted_target_ids, std::size_t p) {
    const std::size_t window = std::min(p, accepted_context_draft_ids.size());
    if (window == 0) {
        // Bare round-trip, boundary information lost, as in naive mode.
        if (target_vocab == draft_vocab) {
            return identity_outcome(target_vocab, accepted_target_ids);
        }
        TranslationOutcome outcome;
        outcome.target_ids = draft_vocab.encode(target_vocab.decode(accepted_target_ids));
        return outcome;
    }
    std::string prefix_text = draft_vocab.decode(
        accepted_context_draft_ids.subspan(accepted_context_draft_ids.size() - window));
    // The accepted tokens continue the existing stream, so their leading
    // boundary is a real space and must be kept.
    std::string new_text = target_vocab.decode_fragment(accepted_target_ids);
    return translate_with_prefix(draft_vocab, prefix_text, new_text, !accepted_target_ids.empty());
}

} // namespace specdec
