#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "specdec/bpe.hpp"
#include "specdec/errors.hpp"

namespace specdec {

/// Each document gets one reserved end-of-text id, one past the tokenizer's
/// id range; models are trained over vocab.size() + 1 ids.
inline TokenId eot_id(const Vocabulary& vocab) { return static_cast<TokenId>(vocab.size()); }
inline std::size_t model_vocab_size(const Vocabulary& vocab) { return vocab.size() + 1; }

/// Encode documents and append the end-of-text id to each.
std::vector<std::vector<TokenId>> encode_corpus(const Vocabulary& vocab,
                                                const std::vector<std::string>& docs);

/// Order-n count model scored with stupid backoff (factor 0.4 per level,
/// final fallback uniform over the vocabulary). Deterministic and total:
/// every context yields a full distribution over [0, vocab_size).
class NGramModel {
public:
    static constexpr double kBackoffFactor = 0.4;

    static NGramModel train(const std::vector<std::vector<TokenId>>& sequences, int order,
                            std::size_t vocab_size);

    int order() const { return order_; }
    std::size_t vocab_size() const { return vocab_size_; }

    /// Normalized next-token distribution; sums to 1 within 1e-9.
    std::vector<double> next_distribution(std::span<const TokenId> context) const;

    /// Highest-scoring next id; ties broken by lowest id.
    TokenId argmax_next(std::span<const TokenId> context) const;

    /// Highest-scoring next id with one id excluded (used by the drafter to
    /// keep proposals free of its end-of-text id).
    TokenId argmax_next_excluding(std::span<const TokenId> context, TokenId excluded) const;

private:
    struct ContextStats {
        std::unordered_map<TokenId, std::uint64_t> counts;
        std::uint64_t total = 0;
    };

    struct KeyHash {
        std::size_t operator()(const std::vector<TokenId>& key) const {
            std::size_t h = 1469598103934665603ull;
            for (TokenId id : key) {
                h ^= id;
                h *= 1099511628211ull;
            }
            return h;
        }
    };

    using Table = std::unordered_map<std::vector<TokenId>, ContextStats, KeyHash>;

    std::vector<double> scores(std::span<const TokenId> context) const;

    int order_ = 1;
    std::size_t vocab_size_ = 0;
    std::vector<Table> tables_; // tables_[m] keyed by contexts of length m
};

/// Committed-prefix cache with rollback, mirroring KV-cache semantics:
/// trim_to(L) then extending from L must match a fresh cache fed the full
/// sequence.
class GenerationCache {
public:
    void push(TokenId id) { ids_.push_back(id); }
    void extend(std::span<const TokenId> ids) { ids_.insert(ids_.end(), ids.begin(), ids.end()); }
    void trim_to(std::size_t length);
    std::span<const TokenId> ids() const { return ids_; }
    std::size_t size() const { return ids_.size(); }

private:
    std::vector<TokenId> ids_;
};

/// Autoregressive argmax decoding; the reference output every speculative
/// strategy must reproduce.
std::vector<TokenId> generate_greedy(const NGramModel& model, const Vocabulary& vocab,
                                     std::string_view prompt_text, std::size_t max_tokens);

} // namespace specdec
