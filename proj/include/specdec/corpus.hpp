#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace specdec {

enum class CorpusKind {
    structured, // templated list/infobox lines, highly repetitive
    varied,     // diverse sentence templates
    short_qa,   // short question/answer pairs
    boundary,   // word families sharing prefixes, stressing token boundaries
};

std::optional<CorpusKind> corpus_kind_from_name(std::string_view name);
const char* corpus_kind_name(CorpusKind kind);

/// Deterministic synthetic documents for the given kind and seed.
std::vector<std::string> generate_corpus(CorpusKind kind, std::size_t docs, std::uint64_t seed);

/// Directory of one-document-per-file plain text (sorted by filename), or a
/// .jsonl file of records with a `text` field.
std::vector<std::string> load_corpus(const std::filesystem::path& path);

/// Write one document per file (doc_0000.txt, ...), creating the directory.
void write_corpus_dir(const std::filesystem::path& dir, const std::vector<std::string>& docs);

} // namespace specdec
