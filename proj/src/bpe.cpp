#include "specdec/bpe.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace specdec {

namespace {

bool is_whitespace(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string to_hex(const std::string& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char c : bytes) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 0xf]);
    }
    return out;
}

std::string from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) throw FormatError("odd-length hex string in vocabulary file");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw FormatError("invalid hex digit in vocabulary file");
    };
    std::string out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        out.push_back(static_cast<char>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
    }
    return out;
}

} // namespace

Vocabulary::Vocabulary() {
    surfaces_.reserve(kByteTokens);
    for (int b = 0; b < 256; ++b) {
        surfaces_.push_back(std::string(1, static_cast<char>(b)));
    }
}

const std::string& Vocabulary::bytes_of(TokenId id) const {
    if (id >= surfaces_.size()) {
        throw InvalidTokenError("token id " + std::to_string(id) + " out of range (vocab size " +
                                std::to_string(surfaces_.size()) + ")");
    }
    return surfaces_[id];
}

std::string Vocabulary::surface(TokenId id) const {
    std::string s = bytes_of(id);
    for (char& c : s) {
        if (static_cast<unsigned char>(c) == kWordMarker) c = ' ';
    }
    return s;
}

std::vector<std::string> Vocabulary::pretokenize(std::string_view text) {
    std::vector<std::string> chunks;
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        // A single interior space fuses with the following word as the
        // marker; at position 0 it stays a raw byte so that encode output
        // never begins with a marker.
        if (c == ' ' && i > 0 && i + 1 < text.size() &&
            !is_whitespace(static_cast<unsigned char>(text[i + 1]))) {
            std::size_t j = i + 1;
            while (j < text.size() && !is_whitespace(static_cast<unsigned char>(text[j]))) ++j;
            std::string chunk(1, static_cast<char>(kWordMarker));
            chunk.append(text.substr(i + 1, j - i - 1));
            chunks.push_back(std::move(chunk));
            i = j;
        } else if (is_whitespace(c)) {
            chunks.push_back(std::string(1, static_cast<char>(c)));
            ++i;
        } else {
            std::size_t j = i;
            while (j < text.size() && !is_whitespace(static_cast<unsigned char>(text[j]))) ++j;
            chunks.push_back(std::string(text.substr(i, j - i)));
            i = j;
        }
    }
    return chunks;
}

std::vector<TokenId> Vocabulary::encode_chunk(std::string_view chunk) const {
    std::vector<TokenId> symbols;
    symbols.reserve(chunk.size());
    for (unsigned char c : chunk) symbols.push_back(c);
    for (const Merge& m : merges_) {
        if (symbols.size() < 2) break;
        std::size_t write = 0;
        std::size_t read = 0;
        bool changed = false;
        while (read < symbols.size()) {
            if (read + 1 < symbols.size() && symbols[read] == m.left && symbols[read + 1] == m.right) {
                symbols[write++] = m.result;
                read += 2;
                changed = true;
                // The merged token may immediately pair with the next symbol.
                while (write >= 1 && read < symbols.size() && symbols[write - 1] == m.left &&
                       symbols[read] == m.right) {
                    symbols[write - 1] = m.result;
                    ++read;
                }
            } else {
                symbols[write++] = symbols[read++];
            }
        }
        if (changed) symbols.resize(write);
    }
    return symbols;
}

std::vector<TokenId> Vocabulary::encode(std::string_view text) const {
    std::vector<TokenId> ids;
    for (const std::string& chunk : pretokenize(text)) {
        std::vector<TokenId> part = encode_chunk(chunk);
        ids.insert(ids.end(), part.begin(), part.end());
    }
    return ids;
}

std::string Vocabulary::decode(std::span<const TokenId> ids) const {
    std::string out = decode_fragment(ids);
    if (!out.empty() && out.front() == ' ' && !ids.empty() &&
        static_cast<unsigned char>(bytes_of(ids.front()).front()) == kWordMarker) {
        out.erase(out.begin());
    }
    return out;
}

std::string Vocabulary::decode_fragment(std::span<const TokenId> ids) const {
    std::string out;
    for (TokenId id : ids) {
        out += bytes_of(id);
    }
    for (char& c : out) {
        if (static_cast<unsigned char>(c) == kWordMarker) c = ' ';
    }
    return out;
}

Vocabulary Vocabulary::train(const std::vector<std::string>& corpus, std::size_t vocab_size) {
    if (vocab_size < kByteTokens + 1) {
        throw ConfigError("vocab_size must be at least 257 (256 bytes plus one merge)");
    }
    bool any_content = false;
    for (const std::string& doc : corpus) {
        if (!doc.empty()) any_content = true;
    }
    if (corpus.empty() || !any_content) throw ConfigError("training corpus is empty");

    // Distinct chunk -> multiplicity, then work on symbol sequences.
    std::unordered_map<std::string, std::size_t> chunk_counts;
    for (const std::string& doc : corpus) {
        for (std::string& chunk : pretokenize(doc)) {
            ++chunk_counts[std::move(chunk)];
        }
    }

    Vocabulary vocab;
    struct Work {
        std::vector<TokenId> symbols;
        std::size_t count;
    };
    std::vector<Work> work;
    work.reserve(chunk_counts.size());
    for (const auto& [chunk, count] : chunk_counts) {
        Work w;
        w.count = count;
        w.symbols.reserve(chunk.size());
        for (unsigned char c : chunk) w.symbols.push_back(c);
        work.push_back(std::move(w));
    }

    const std::size_t max_merges = vocab_size - kByteTokens;
    for (std::size_t step = 0; step < max_merges; ++step) {
        // Count adjacent pairs.
        std::map<std::pair<TokenId, TokenId>, std::size_t> pair_counts;
        for (const Work& w : work) {
            for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
                pair_counts[{w.symbols[i], w.symbols[i + 1]}] += w.count;
            }
        }
        if (pair_counts.empty()) break;

        std::pair<TokenId, TokenId> best{};
        std::size_t best_count = 0;
        bool have_best = false;
        for (const auto& [pair, count] : pair_counts) {
            if (!have_best || count > best_count) {
                best = pair;
                best_count = count;
                have_best = true;
                continue;
            }
            if (count == best_count) {
                auto key = [&](const std::pair<TokenId, TokenId>& p) {
                    return std::make_pair(vocab.surfaces_[p.first], vocab.surfaces_[p.second]);
                };
                if (key(pair) < key(best)) best = pair;
            }
        }

        TokenId new_id = static_cast<TokenId>(vocab.surfaces_.size());
        vocab.surfaces_.push_back(vocab.surfaces_[best.first] + vocab.surfaces_[best.second]);
        vocab.merges_.push_back({best.first, best.second, new_id});

        for (Work& w : work) {
            if (w.symbols.size() < 2) continue;
            std::size_t write = 0;
            std::size_t read = 0;
            while (read < w.symbols.size()) {
                if (read + 1 < w.symbols.size() && w.symbols[read] == best.first &&
                    w.symbols[read + 1] == best.second) {
                    w.symbols[write++] = new_id;
                    read += 2;
                    while (write >= 1 && read < w.symbols.size() && w.symbols[write - 1] == best.first &&
                           w.symbols[read] == best.second) {
                        w.symbols[write - 1] = new_id;
                        ++read;
                    }
                } else {
                    w.symbols[write++] = w.symbols[read++];
                }
            }
            w.symbols.resize(write);
        }
    }
    return vocab;
}

Vocabulary Vocabulary::from_merges(const std::vector<std::pair<TokenId, TokenId>>& merges) {
    Vocabulary vocab;
    for (const auto& [left, right] : merges) {
        TokenId new_id = static_cast<TokenId>(vocab.surfaces_.size());
        if (left >= new_id || right >= new_id) {
            throw ConfigError("merge rule references a token id not yet defined");
        }
        vocab.surfaces_.push_back(vocab.surfaces_[left] + vocab.surfaces_[right]);
        vocab.merges_.push_back({left, right, new_id});
    }
    return vocab;
}

void Vocabulary::save(std::ostream& out) const {
    out << "bpe v1 " << size() << "\n";
    for (const Merge& m : merges_) {
        out << m.left << " " << m.right << " " << m.result << " " << to_hex(surfaces_[m.result]) << "\n";
    }
}

Vocabulary Vocabulary::load(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw FormatError("empty vocabulary file");
    std::istringstream hs(header);
    std::string magic, version;
    std::size_t declared = 0;
    hs >> magic >> version >> declared;
    if (!hs || magic != "bpe" || version != "v1") {
        throw FormatError("unknown vocabulary header: '" + header + "'");
    }

    std::vector<std::pair<TokenId, TokenId>> merges;
    std::vector<std::string> expected_bytes;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        TokenId left = 0, right = 0, result = 0;
        std::string hex;
        ls >> left >> right >> result >> hex;
        if (!ls) throw FormatError("malformed merge line: '" + line + "'");
        if (result != kByteTokens + merges.size()) {
            throw FormatError("merge ids must be dense and in training order");
        }
        merges.emplace_back(left, right);
        expected_bytes.push_back(from_hex(hex));
    }

    Vocabulary vocab = from_merges(merges);
    if (vocab.size() != declared) {
        throw FormatError("vocabulary size in header does not match merge count");
    }
    for (std::size_t i = 0; i < merges.size(); ++i) {
        if (vocab.surfaces_[kByteTokens + i] != expected_bytes[i]) {
            throw FormatError("merge byte sequence does not match its constituents");
        }
    }
    return vocab;
}

IntersectionResult vocab_intersection(const Vocabulary& a, const Vocabulary& b) {
    auto normalize = [](const Vocabulary& v, TokenId id) {
        std::string s = v.bytes_of(id);
        if (s.size() > 1) {
            for (char& c : s) {
                if (static_cast<unsigned char>(c) == Vocabulary::kWordMarker) c = ' ';
            }
        }
        return s;
    };
    std::unordered_set<std::string> forms_a;
    for (TokenId id = 0; id < a.size(); ++id) forms_a.insert(normalize(a, id));
    std::unordered_set<std::string> shared;
    for (TokenId id = 0; id < b.size(); ++id) {
        std::string form = normalize(b, id);
        if (forms_a.count(form)) shared.insert(std::move(form));
    }
    IntersectionResult result;
    result.shared.assign(shared.begin(), shared.end());
    std::sort(result.shared.begin(), result.shared.end());
    result.count = result.shared.size();
    return result;
}

} // namespace specdec
