#include "specdec/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "specdec/errors.hpp"
#include "specdec/rng.hpp"

namespace specdec {

namespace {

using Rng = SplitMix64;

std::vector<std::string> gen_structured(std::size_t docs, Rng& rng) {
    const std::vector<std::string> names = {"Kalina", "Rokita", "Sosna",  "Brzoza",
                                            "Topola", "Jarzab", "Olcha"};
    const std::vector<std::string> types = {"wies", "miasto", "osada", "kolonia"};
    const std::vector<std::string> regions = {"dolny", "gorny", "wschodni", "zachodni"};
    const std::vector<std::string> years = {"1821", "1907", "1954", "1987", "2001"};
    std::vector<std::string> out;
    for (std::size_t d = 0; d < docs; ++d) {
        std::ostringstream doc;
        const std::string& name = rng.pick(names);
        doc << "nazwa: " << name << " | typ: " << rng.pick(types) << " | rok: " << rng.pick(years)
            << " | region: " << rng.pick(regions) << "\n";
        const std::size_t lines = 3 + rng.below(3);
        for (std::size_t i = 0; i < lines; ++i) {
            switch (rng.below(3)) {
                case 0:
                    doc << "wedlug spisu z roku " << rng.pick(years) << " liczba domow wynosi "
                        << (10 + rng.below(90)) << "\n";
                    break;
                case 1:
                    doc << "lista: " << rng.pick(names) << ", " << rng.pick(names) << ", "
                        << rng.pick(names) << "\n";
                    break;
                default:
                    doc << name << " lezy w regionie " << rng.pick(regions) << " od roku "
                        << rng.pick(years) << "\n";
                    break;
            }
        }
        out.push_back(doc.str());
    }
    return out;
}

std::vector<std::string> gen_varied(std::size_t docs, Rng& rng) {
    const std::vector<std::string> subjects = {"ogrodnik", "kucharz",  "pisarz", "żeglarz",
                                               "malarz",   "nauczyciel"};
    const std::vector<std::string> verbs = {"przygotowuje", "opisuje", "maluje",
                                            "sprzedaje",    "zbiera",  "naprawia"};
    const std::vector<std::string> objects = {"stare mapy",     "świeże owoce", "żółte łodzie",
                                              "drewniane stoly", "ciche ogrody", "dlugie listy"};
    const std::vector<std::string> places = {"nad rzeka",   "w miescie", "na wyspie",
                                             "przy drodze", "za lasem"};
    const std::vector<std::string> tails = {"kazdego ranka", "po poludniu", "bardzo powoli",
                                            "z wielka uwaga", "bez pospiechu"};
    std::vector<std::string> out;
    for (std::size_t d = 0; d < docs; ++d) {
        std::ostringstream doc;
        const std::size_t lines = 3 + rng.below(4);
        for (std::size_t i = 0; i < lines; ++i) {
            switch (rng.below(3)) {
                case 0:
                    doc << rng.pick(subjects) << " " << rng.pick(verbs) << " " << rng.pick(objects)
                        << " " << rng.pick(places) << "\n";
                    break;
                case 1:
                    doc << rng.pick(places) << " " << rng.pick(subjects) << " " << rng.pick(verbs)
                        << " " << rng.pick(objects) << " " << rng.pick(tails) << "\n";
                    break;
                default:
                    doc << rng.pick(subjects) << " " << rng.pick(tails) << " " << rng.pick(verbs)
                        << " " << rng.pick(objects) << "\n";
                    break;
            }
        }
        out.push_back(doc.str());
    }
    return out;
}

std::vector<std::string> gen_short_qa(std::size_t docs, Rng& rng) {
    const std::vector<std::string> things = {"wino", "woda", "mapa", "lodka", "ogrod", "lista"};
    const std::vector<std::string> answers = {"napoj z winogron", "plyn bez smaku",
                                              "rysunek terenu",   "mala jednostka",
                                              "teren z roslinami", "spis rzeczy"};
    std::vector<std::string> out;
    for (std::size_t d = 0; d < docs; ++d) {
        std::ostringstream doc;
        const std::size_t idx = rng.below(things.size());
        doc << "pytanie: co to jest " << things[idx] << "?\n";
        doc << "odpowiedz: " << things[idx] << " to " << answers[idx] << "\n";
        if (rng.below(2) == 0) {
            const std::size_t j = rng.below(things.size());
            doc << "pytanie: gdzie jest " << things[j] << "?\n";
            doc << "odpowiedz: " << things[j] << " jest w domu\n";
        }
        out.push_back(doc.str());
    }
    return out;
}

std::vector<std::string> gen_boundary(std::size_t docs, Rng& rng) {
    // Word families sharing prefixes so that coarse and fine vocabularies
    // place token boundaries differently inside the same words.
    const std::vector<std::string> wines = {"wino", "wina", "winnica", "winorosl"};
    const std::vector<std::string> waters = {"woda", "wodny", "wodospad"};
    const std::vector<std::string> raws = {"surowa", "surowka", "surowiec"};
    const std::vector<std::string> adjectives = {"stara", "starta", "staranna"};
    const std::vector<std::string> towns = {"Warszawie", "Warce", "Warcie"};
    std::vector<std::string> out;
    for (std::size_t d = 0; d < docs; ++d) {
        std::ostringstream doc;
        const std::size_t lines = 4 + rng.below(3);
        for (std::size_t i = 0; i < lines; ++i) {
            switch (rng.below(4)) {
                case 0:
                    doc << "w " << rng.pick(towns) << " lezy " << rng.pick(adjectives) << " "
                        << rng.pick(wines) << "\n";
                    break;
                case 1:
                    doc << rng.pick(wines) << " i " << rng.pick(waters) << " to " << rng.pick(raws)
                        << "\n";
                    break;
                case 2:
                    doc << rng.pick(adjectives) << " " << rng.pick(raws) << " w "
                        << rng.pick(towns) << "\n";
                    break;
                default:
                    doc << "w piwnicy lezy " << rng.pick(wines) << " obok " << rng.pick(waters)
                        << "\n";
                    break;
            }
        }
        out.push_back(doc.str());
    }
    return out;
}

} // namespace

std::optional<CorpusKind> corpus_kind_from_name(std::string_view name) {
    if (name == "structured") return CorpusKind::structured;
    if (name == "varied") return CorpusKind::varied;
    if (name == "short_qa") return CorpusKind::short_qa;
    if (name == "boundary") return CorpusKind::boundary;
    return std::nullopt;
}

const char* corpus_kind_name(CorpusKind kind) {
    switch (kind) {
        case CorpusKind::structured: return "structured";
        case CorpusKind::varied: return "varied";
        case CorpusKind::short_qa: return "short_qa";
        case CorpusKind::boundary: return "boundary";
    }
    return "?";
}

std::vector<std::string> generate_corpus(CorpusKind kind, std::size_t docs, std::uint64_t seed) {
    Rng rng(seed ^ (static_cast<std::uint64_t>(kind) << 32));
    switch (kind) {
        case CorpusKind::structured: return gen_structured(docs, rng);
        case CorpusKind::varied: return gen_varied(docs, rng);
        case CorpusKind::short_qa: return gen_short_qa(docs, rng);
        case CorpusKind::boundary: return gen_boundary(docs, rng);
    }
    throw ConfigError("unknown corpus kind");
}

std::vector<std::string> load_corpus(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    if (!fs::exists(path)) throw ConfigError("corpus path does not exist: " + path.string());

    std::vector<std::string> docs;
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path)) {
            if (entry.is_regular_file()) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const fs::path& file : files) {
            std::ifstream in(file, std::ios::binary);
            std::ostringstream buf;
            buf << in.rdbuf();
            docs.push_back(buf.str());
        }
    } else if (path.extension() == ".jsonl") {
        std::ifstream in(path);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
            if (record.is_discarded() || !record.contains("text") || !record["text"].is_string()) {
                throw FormatError(path.string() + ": line " + std::to_string(line_no) +
                                  ": expected a JSON object with a string `text` field");
            }
            docs.push_back(record["text"].get<std::string>());
        }
    } else {
        throw ConfigError("corpus must be a directory of text files or a .jsonl file: " +
                          path.string());
    }

    docs.erase(std::remove_if(docs.begin(), docs.end(),
                              [](const std::string& d) { return d.empty(); }),
               docs.end());
    if (docs.empty()) throw ConfigError("corpus has no non-empty documents: " + path.string());
    return docs;
}

void write_corpus_dir(const std::filesystem::path& dir, const std::vector<std::string>& docs) {
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < docs.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "doc_%04zu.txt", i);
        std::ofstream out(dir / name, std::ios::binary);
        out << docs[i];
    }
}

} // namespace specdec
