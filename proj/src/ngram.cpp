#include "specdec/ngram.hpp"

#include <algorithm>
#include <cmath>

namespace specdec {

std::vector<std::vector<TokenId>> encode_corpus(const Vocabulary& vocab,
                                                const std::vector<std::string>& docs) {
    std::vector<std::vector<TokenId>> sequences;
    sequences.reserve(docs.size());
    for (const std::string& doc : docs) {
        std::vector<TokenId> ids = vocab.encode(doc);
        ids.push_back(eot_id(vocab));
        sequences.push_back(std::move(ids));
    }
    return sequences;
}

NGramModel NGramModel::train(const std::vector<std::vector<TokenId>>& sequences, int order,
                             std::size_t vocab_size) {
    if (order < 1) throw ConfigError("n-gram order must be >= 1");
    if (vocab_size == 0) throw ConfigError("vocab_size must be positive");
    if (sequences.empty()) throw DataError("empty training collection");

    NGramModel model;
    model.order_ = order;
    model.vocab_size_ = vocab_size;
    model.tables_.resize(static_cast<std::size_t>(order));

    for (const auto& seq : sequences) {
        for (TokenId id : seq) {
            if (id >= vocab_size) {
                throw DataError("token id " + std::to_string(id) + " out of range for vocab size " +
                                std::to_string(vocab_size));
            }
        }
        for (std::size_t pos = 0; pos < seq.size(); ++pos) {
            int max_ctx = std::min<int>(order - 1, static_cast<int>(pos));
            for (int m = 0; m <= max_ctx; ++m) {
                std::vector<TokenId> key(seq.begin() + (pos - m), seq.begin() + pos);
                ContextStats& stats = model.tables_[static_cast<std::size_t>(m)][std::move(key)];
                ++stats.counts[seq[pos]];
                ++stats.total;
            }
        }
    }
    return model;
}

std::vector<double> NGramModel::scores(std::span<const TokenId> context) const {
    const std::size_t start_len = std::min<std::size_t>(static_cast<std::size_t>(order_ - 1),
                                                        context.size());
    // Resolve the context chain once: stats for lengths start_len .. 0.
    std::vector<const ContextStats*> chain;
    chain.reserve(start_len + 1);
    for (std::size_t len = start_len + 1; len-- > 0;) {
        std::vector<TokenId> key(context.end() - static_cast<std::ptrdiff_t>(len), context.end());
        auto it = tables_[len].find(key);
        chain.push_back(it == tables_[len].end() ? nullptr : &it->second);
    }

    const double uniform = 1.0 / static_cast<double>(vocab_size_);
    std::vector<double> out(vocab_size_);
    for (TokenId id = 0; id < vocab_size_; ++id) {
        double factor = 1.0;
        double score = 0.0;
        bool found = false;
        for (const ContextStats* stats : chain) {
            if (stats != nullptr) {
                auto it = stats->counts.find(id);
                if (it != stats->counts.end() && it->second > 0) {
                    score = factor * static_cast<double>(it->second) / static_cast<double>(stats->total);
                    found = true;
                    break;
                }
            }
            factor *= kBackoffFactor;
        }
        out[id] = found ? score : factor * uniform;
    }
    return out;
}

std::vector<double> NGramModel::next_distribution(std::span<const TokenId> context) const {
    std::vector<double> dist = scores(context);
    double sum = 0.0;
    for (double s : dist) sum += s;
    for (double& s : dist) s /= sum;
    return dist;
}

TokenId NGramModel::argmax_next(std::span<const TokenId> context) const {
    std::vector<double> dist = scores(context);
    return static_cast<TokenId>(std::max_element(dist.begin(), dist.end()) - dist.begin());
}

TokenId NGramModel::argmax_next_excluding(std::span<const TokenId> context, TokenId excluded) const {
    std::vector<double> dist = scores(context);
    if (excluded < dist.size()) dist[excluded] = -1.0;
    return static_cast<TokenId>(std::max_element(dist.begin(), dist.end()) - dist.begin());
}

void GenerationCache::trim_to(std::size_t length) {
    if (length > ids_.size()) {
        throw InternalError("cache trim beyond committed length");
    }
    ids_.resize(length);
}

std::vector<TokenId> generate_greedy(const NGramModel& model, const Vocabulary& vocab,
                                     std::string_view prompt_text, std::size_t max_tokens) {
    const TokenId eot = eot_id(vocab);
    GenerationCache cache;
    cache.extend(vocab.encode(prompt_text));
    std::vector<TokenId> out;
    while (out.size() < max_tokens) {
        TokenId next = model.argmax_next(cache.ids());
        if (next == eot) break;
        out.push_back(next);
        cache.push(next);
    }
    return out;
}

} // namespace specdec
