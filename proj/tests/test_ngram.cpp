#include <doctest.h>

#include <cmath>

#include "specdec/ngram.hpp"
#include "specdec/rng.hpp"

using namespace specdec;

namespace {

// Independent stupid-backoff oracle over raw counts, for cross-checking
// next_distribution without sharing its lookup machinery.
double oracle_score(const std::vector<std::vector<TokenId>>& seqs, int order,
                    std::size_t vocab_size, const std::vector<TokenId>& ctx, TokenId id) {
    const int start = std::min<int>(order - 1, static_cast<int>(ctx.size()));
    double factor = 1.0;
    for (int len = start; len >= 0; --len) {
        std::vector<TokenId> key(ctx.end() - len, ctx.end());
        std::uint64_t total = 0, hits = 0;
        for (const auto& seq : seqs) {
            for (std::size_t pos = 0; pos + 1 <= seq.size(); ++pos) {
                if (pos < key.size()) continue;
                bool match = true;
                for (std::size_t j = 0; j < key.size(); ++j) {
                    if (seq[pos - key.size() + j] != key[j]) match = false;
                }
                if (!match) continue;
                ++total;
                if (seq[pos] == id) ++hits;
            }
        }
        if (total > 0 && hits > 0) {
            return factor * static_cast<double>(hits) / static_cast<double>(total);
        }
        factor *= NGramModel::kBackoffFactor;
    }
    return factor / static_cast<double>(vocab_size);
}

} // namespace

TEST_CASE("train_ngram validates inputs") {
    CHECK_THROWS_AS(NGramModel::train({}, 2, 10), DataError);
    CHECK_THROWS_AS(NGramModel::train({{1, 2, 99}}, 2, 10), DataError);
    CHECK_THROWS_AS(NGramModel::train({{1}}, 0, 10), ConfigError);
}

TEST_CASE("alternating corpus puts the direct mass on the follower") {
    // "abab...": after a the only observed next token is b.
    std::vector<TokenId> ab;
    for (int i = 0; i < 20; ++i) {
        ab.push_back(0);
        ab.push_back(1);
    }
    NGramModel model = NGramModel::train({ab}, 2, 4);
    std::vector<TokenId> ctx = {0};
    auto dist = model.next_distribution(ctx);
    CHECK(model.argmax_next(ctx) == 1);
    // b holds the only direct count; everything else is backoff mass.
    CHECK(dist[1] > 0.8);
    CHECK(dist[0] + dist[2] + dist[3] < 0.2);
    for (std::size_t id = 0; id < 4; ++id) {
        double expect = oracle_score({ab}, 2, 4, ctx, static_cast<TokenId>(id));
        double sum = 0;
        for (std::size_t j = 0; j < 4; ++j) sum += oracle_score({ab}, 2, 4, ctx, static_cast<TokenId>(j));
        CHECK(dist[id] == doctest::Approx(expect / sum).epsilon(1e-12));
    }
}

TEST_CASE("order-1 model ignores context") {
    NGramModel model = NGramModel::train({{0, 1, 1, 2}}, 1, 5);
    std::vector<TokenId> empty_ctx = {};
    std::vector<TokenId> some_ctx = {2, 0};
    CHECK(model.next_distribution(empty_ctx) == model.next_distribution(some_ctx));
}

TEST_CASE("argmax tie-break picks the lowest id") {
    // 0 -> 1 and 0 -> 2 equally often: two ids tied, the lower wins.
    NGramModel model = NGramModel::train({{0, 1, 0, 2, 0, 1, 0, 2}}, 2, 6);
    std::vector<TokenId> ctx = {0};
    CHECK(model.argmax_next(ctx) == 1);
}

TEST_CASE("ids unseen at every order share the uniform fallback, lowest first") {
    // Only id 2 ever occurs, so every other id bottoms out at the uniform
    // level with identical scores; the tie among them resolves to id 0.
    NGramModel model = NGramModel::train({{2, 2}}, 3, 5);
    std::vector<TokenId> ctx = {4, 4};
    auto dist = model.next_distribution(ctx);
    CHECK(dist[0] == dist[1]);
    CHECK(dist[0] == dist[3]);
    CHECK(dist[0] == dist[4]);
    CHECK(model.argmax_next(ctx) == 2); // unigram mass beats the fallback here
    CHECK(model.argmax_next_excluding(ctx, 2) == 0);
}

TEST_CASE("deterministic context always followed by one token") {
    // (x, y) -> z always.
    std::vector<std::vector<TokenId>> seqs = {{1, 2, 3, 1, 2, 3, 1, 2, 3}};
    NGramModel model = NGramModel::train(seqs, 3, 6);
    std::vector<TokenId> ctx = {1, 2};
    CHECK(model.argmax_next(ctx) == 3);
}

TEST_CASE("distributions normalize to one") {
    std::vector<std::vector<TokenId>> seqs;
    SplitMix64 rng(7);
    for (int s = 0; s < 5; ++s) {
        std::vector<TokenId> seq;
        for (int i = 0; i < 50; ++i) seq.push_back(static_cast<TokenId>(rng.below(12)));
        seqs.push_back(std::move(seq));
    }
    NGramModel model = NGramModel::train(seqs, 3, 12);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<TokenId> ctx;
        const std::size_t len = rng.below(5);
        for (std::size_t i = 0; i < len; ++i) ctx.push_back(static_cast<TokenId>(rng.below(14)));
        auto dist = model.next_distribution(ctx);
        double sum = 0;
        for (double v : dist) sum += v;
        REQUIRE(std::fabs(sum - 1.0) < 1e-9);
    }
}

TEST_CASE("generate_greedy") {
    Vocabulary vocab = Vocabulary::train({"ab ab ab ab"}, 258);
    std::vector<std::string> docs = {"ab ab ab ab ab ab"};
    NGramModel model = NGramModel::train(encode_corpus(vocab, docs), 2, model_vocab_size(vocab));

    SUBCASE("zero cap yields empty output") {
        CHECK(generate_greedy(model, vocab, "ab", 0).empty());
    }
    SUBCASE("deterministic") {
        auto a = generate_greedy(model, vocab, "ab", 16);
        auto b = generate_greedy(model, vocab, "ab", 16);
        CHECK(a == b);
    }
    SUBCASE("hand-run greedy loop on the ab model") {
        // After "ab" the chain keeps predicting " ab"; surface check.
        auto out = generate_greedy(model, vocab, "ab", 4);
        REQUIRE(!out.empty());
        CHECK(vocab.decode_fragment(out).substr(0, 3) == " ab");
    }
}

TEST_CASE("hand-run greedy on an alternating id model") {
    // Alternating a/b ids, prompt "a": expect b,a,b,a.
    Vocabulary vocab = Vocabulary::train({"a b a b a b a b"}, 258);
    std::vector<std::string> docs = {"a b a b a b a b a b"};
    NGramModel model = NGramModel::train(encode_corpus(vocab, docs), 2, model_vocab_size(vocab));
    auto out = generate_greedy(model, vocab, "a", 4);
    REQUIRE(out.size() == 4);
    CHECK(vocab.decode_fragment(out) == " b a b a");
}

TEST_CASE("cache equivalence: extend-after-trim matches fresh evaluation") {
    SplitMix64 rng(99);
    std::vector<std::vector<TokenId>> seqs = {{0, 1, 2, 3, 0, 1, 2, 3, 0, 1}};
    NGramModel model = NGramModel::train(seqs, 3, 4);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<TokenId> full;
        const std::size_t len = 2 + rng.below(12);
        for (std::size_t i = 0; i < len; ++i) full.push_back(static_cast<TokenId>(rng.below(4)));

        GenerationCache cache;
        cache.extend(full);
        const std::size_t cut = rng.below(full.size() + 1);
        cache.trim_to(cut);
        cache.extend(std::span<const TokenId>(full).subspan(cut));

        GenerationCache fresh;
        fresh.extend(full);
        REQUIRE(cache.size() == fresh.size());
        CHECK(model.argmax_next(cache.ids()) == model.argmax_next(fresh.ids()));
        CHECK(std::equal(cache.ids().begin(), cache.ids().end(), fresh.ids().begin()));
    }
    GenerationCache cache;
    cache.push(1);
    CHECK_THROWS_AS(cache.trim_to(5), InternalError);
}
