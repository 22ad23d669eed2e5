#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "specdec/errors.hpp"

namespace specdec {

using TokenId = std::uint32_t;

/// Byte-level BPE vocabulary.
///
/// Ids 0..255 are the raw byte values; learned merges follow in training
/// order. Word-initial pieces carry a marker byte (0xC0, never part of valid
/// UTF-8) that stands for the single space separating a word from its
/// predecessor. The very first chunk of a text is never marked, so a
/// standalone "w" at the start of a text and a word-initial "w" after a
/// space receive different ids.
///
/// decode() concatenates token bytes, renders interior markers as spaces and
/// strips a marker at the very start of the stream, the way a tokenizer
/// renders an isolated fragment. encode() never emits a leading marker, so
/// decode(encode(t)) == t for every UTF-8 input, including leading, trailing
/// and repeated whitespace. Decoding a fragment cut from the middle of a
/// stream loses its leading word boundary; decode_fragment() keeps it. That
/// asymmetry is the token-boundary ambiguity cross-tokenizer translation has
/// to deal with.
class Vocabulary {
public:
    static constexpr std::uint8_t kWordMarker = 0xC0;
    static constexpr std::size_t kByteTokens = 256;

    struct Merge {
        TokenId left = 0;
        TokenId right = 0;
        TokenId result = 0;
    };

    Vocabulary();

    /// Learn `vocab_size - 256` merges from the corpus. Deterministic: equal
    /// pair frequencies are broken by the lexicographically smaller
    /// (left bytes, right bytes) pair.
    static Vocabulary train(const std::vector<std::string>& corpus, std::size_t vocab_size);

    /// Build a vocabulary from an explicit merge list (fixtures, loading).
    static Vocabulary from_merges(const std::vector<std::pair<TokenId, TokenId>>& merges);

    std::size_t size() const { return surfaces_.size(); }
    const std::vector<Merge>& merges() const { return merges_; }

    /// Raw byte sequence of a token, marker byte included.
    const std::string& bytes_of(TokenId id) const;

    /// Surface form with the marker rendered as a space.
    std::string surface(TokenId id) const;

    std::vector<TokenId> encode(std::string_view text) const;

    /// Render ids as text; a marker at the stream start is stripped.
    std::string decode(std::span<const TokenId> ids) const;

    /// Render ids known to continue existing text: a leading marker is the
    /// space before the fragment's first word and is kept.
    std::string decode_fragment(std::span<const TokenId> ids) const;

    /// Pre-tokenization used by encode; exposed so tests can pin it down.
    /// Word chunks already carry the marker byte where one applies.
    static std::vector<std::string> pretokenize(std::string_view text);

    /// Line-oriented text format: `bpe v1 <vocab_size>` header, then one
    /// merge per line as `<left_id> <right_id> <new_id> <hex-bytes>`.
    void save(std::ostream& out) const;
    static Vocabulary load(std::istream& in);

    bool operator==(const Vocabulary& other) const { return surfaces_ == other.surfaces_; }

private:
    std::vector<TokenId> encode_chunk(std::string_view chunk) const;

    std::vector<std::string> surfaces_; // id -> bytes
    std::vector<Merge> merges_;
};

struct IntersectionResult {
    std::size_t count = 0;
    std::vector<std::string> shared; // marker-normalized byte sequences, sorted
};

/// Surface forms present in both vocabularies. Multi-byte surfaces are
/// compared with the marker normalized to a space; the 256 single-byte base
/// tokens are compared raw so they always contribute exactly 256 entries.
IntersectionResult vocab_intersection(const Vocabulary& a, const Vocabulary& b);

} // namespace specdec
