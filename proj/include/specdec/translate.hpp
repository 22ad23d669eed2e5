#pragma once

#include <span>
#include <vector>

#include "specdec/bpe.hpp"

namespace specdec {

/// Result of one string-level translation step.
struct TranslationOutcome {
    /// Translated candidate ids in the destination vocabulary.
    std::vector<TokenId> target_ids;
    /// Tokens the re-encoded prefix occupies in the destination vocabulary
    /// (always 0 in naive mode).
    std::size_t prefix_len_target = 0;
    /// True iff the stripped candidate list is empty while the input was
    /// non-empty: every new character merged into the prefix.
    bool absorbed = false;
    /// True when the first prefix_len_target tokens of the joint encoding
    /// reproduce the prefix text exactly. Boundary merges can re-segment the
    /// prefix without absorbing everything; surface text is only guaranteed
    /// to be preserved when this holds.
    bool prefix_intact = true;
};

/// Decode in the source vocabulary, re-encode in the destination vocabulary.
/// No surrounding context; the boundary problem is left unaddressed. When
/// both vocabularies are identical this is the identity mapping.
TranslationOutcome naive_translate(const Vocabulary& draft_vocab, const Vocabulary& target_vocab,
                                   std::span<const TokenId> draft_ids);

/// Prepend the last min(p, |context|) accepted tokens as text before
/// re-encoding, then strip the prefix tokens, so the destination tokenizer
/// sees enough left context to place the word boundary correctly.
TranslationOutcome context_translate(const Vocabulary& draft_vocab, const Vocabulary& target_vocab,
                                     std::span<const TokenId> accepted_context_draft_ids,
                                     std::span<const TokenId> draft_ids, std::size_t p);

/// Return path: map accepted destination-vocabulary tokens back into the
/// source vocabulary, using the same prefix window on the source side.
TranslationOutcome back_translate(const Vocabulary& target_vocab, const Vocabulary& draft_vocab,
                                  std::span<const TokenId> accepted_context_draft_ids,
                                  std::span<const TokenId> accepted_target_ids, std::size_t p);

} // namespace specdec
