#pragma once

// On-disk corpus layout:
//
//   events.csv      ego,alter,direction,timestamp_epoch_min,utc_offset_min,token_count
//   words.csv       ego,alter,direction,word,count,language
//   bigrams.csv     ego,first,second,count
//   variants.tsv    canonical[:count] TAB variant:count TAB ...
//   lexicon.<name>.txt  one word per line
//
// events and words may be given as .jsonl instead (one object per line with
// the same field names). Malformed rows are collected in a LoadReport and the
// rest of the file is still loaded.

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ruqa/completion.hpp"
#include "ruqa/corpus/types.hpp"
#include "ruqa/text.hpp"

namespace ruqa::corpus {

namespace fs = std::filesystem;

inline constexpr std::string_view kEventsHeader = "ego,alter,direction,timestamp_epoch_min,utc_offset_min,token_count";
inline constexpr std::string_view kWordsHeader = "ego,alter,direction,word,count,language";
inline constexpr std::string_view kBigramsHeader = "ego,first,second,count";

// ---------------------------------------------------------------- CSV basics

inline std::vector<std::string> parse_csv_line(std::string_view line, char delim = ',') {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delim) {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) throw CorpusError("unterminated quoted field");
    fields.push_back(std::move(cur));
    return fields;
}

inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline std::string csv_row(std::initializer_list<std::string_view> fields) {
    std::string out;
    bool first = true;
    for (auto f : fields) {
        if (!first) out.push_back(',');
        out += csv_field(f);
        first = false;
    }
    return out;
}

template <class T>
T parse_number(std::string_view s, std::string_view what) {
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw CorpusError("invalid " + std::string(what) + " '" + std::string(s) + "'");
    return value;
}

inline std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

// ------------------------------------------------------------- load report

struct RowIssue {
    std::string file;
    std::size_t line = 0;
    std::string message;
};

struct LoadReport {
    std::vector<RowIssue> errors;
    std::vector<std::string> warnings;
    std::size_t events = 0;
    std::size_t words = 0;
    std::size_t bigrams = 0;
    std::size_t variant_groups = 0;

    bool clean() const { return errors.empty(); }
};

inline nlohmann::ordered_json to_json(const LoadReport& r) {
    nlohmann::ordered_json j;
    j["events"] = r.events;
    j["words"] = r.words;
    j["bigrams"] = r.bigrams;
    j["variant_groups"] = r.variant_groups;
    j["errors"] = nlohmann::ordered_json::array();
    for (const auto& e : r.errors) j["errors"].push_back({{"file", e.file}, {"line", e.line}, {"message", e.message}});
    j["warnings"] = r.warnings;
    return j;
}

// ------------------------------------------------------------ row parsers

using FieldMap = std::map<std::string, std::string, std::less<>>;

inline const std::string& field(const FieldMap& row, std::string_view name) {
    auto it = row.find(name);
    if (it == row.end()) throw CorpusError("missing field '" + std::string(name) + "'");
    return it->second;
}

inline MessageEvent parse_event(const FieldMap& row) {
    MessageEvent e;
    e.ego = field(row, "ego");
    e.alter = field(row, "alter");
    validate_id(e.ego, "ego");
    validate_id(e.alter, "alter");
    e.direction = parse_direction(field(row, "direction"));
    e.timestamp_epoch_min = parse_number<std::int64_t>(field(row, "timestamp_epoch_min"), "timestamp_epoch_min");
    e.utc_offset_min = parse_number<std::int32_t>(field(row, "utc_offset_min"), "utc_offset_min");
    e.token_count = parse_number<std::int64_t>(field(row, "token_count"), "token_count");
    if (e.token_count < 0) throw CorpusError("token_count must be non-negative");
    if (e.utc_offset_min < -24 * 60 || e.utc_offset_min > 24 * 60) throw CorpusError("utc_offset_min out of range");
    return e;
}

inline WordUsage parse_word(const FieldMap& row) {
    WordUsage w;
    w.ego = field(row, "ego");
    w.alter = field(row, "alter");
    validate_id(w.ego, "ego");
    validate_id(w.alter, "alter");
    w.direction = parse_direction(field(row, "direction"));
    w.word = text::normalize_word(field(row, "word"));
    if (w.word.empty()) throw CorpusError("word is empty");
    w.count = parse_number<std::uint64_t>(field(row, "count"), "count");
    if (w.count < 1) throw CorpusError("count must be >= 1");
    w.language = parse_language(field(row, "language"));
    return w;
}

inline BigramUsage parse_bigram(const FieldMap& row) {
    BigramUsage b;
    b.ego = field(row, "ego");
    validate_id(b.ego, "ego");
    b.first = text::normalize_word(field(row, "first"));
    b.second = text::normalize_word(field(row, "second"));
    if (b.first.empty() || b.second.empty()) throw CorpusError("bigram token is empty");
    b.count = parse_number<std::uint64_t>(field(row, "count"), "count");
    if (b.count < 1) throw CorpusError("count must be >= 1");
    return b;
}

inline FieldMap json_to_fields(const nlohmann::json& obj) {
    if (!obj.is_object()) throw CorpusError("JSONL line is not an object");
    FieldMap row;
    for (const auto& [k, v] : obj.items()) row[k] = v.is_string() ? v.get<std::string>() : v.dump();
    return row;
}

// --------------------------------------------------------- table readers

/// Reads a delimited table with a header line and hands every row, keyed by
/// column name, to `on_row`. Exceptions from `on_row` become row issues.
inline void read_table(const fs::path& path, std::set<std::string> required_columns, LoadReport& report,
                       const std::function<void(const FieldMap&)>& on_row, char delim = ',',
                       const std::map<std::string, std::string>& rename = {},
                       const std::map<std::string, std::string>& defaults = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open " + path.string());
    const std::string file = path.filename().string();
    std::string line;
    if (!std::getline(in, line)) throw CorpusError(file + ": missing header line");
    std::vector<std::string> header = parse_csv_line(strip_cr(line), delim);
    for (auto& h : header) {
        auto it = rename.find(h);
        if (it != rename.end()) h = it->second;
    }
    std::set<std::string> present(header.begin(), header.end());
    for (const auto& [k, _] : defaults) present.insert(k);
    for (const auto& col : required_columns) {
        if (!present.contains(col)) throw CorpusError(file + ": header lacks required column '" + col + "'");
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(std::move(line));
        if (line.empty()) continue;
        try {
            auto fields = parse_csv_line(line, delim);
            if (fields.size() != header.size())
                throw CorpusError("expected " + std::to_string(header.size()) + " fields, got " +
                                  std::to_string(fields.size()));
            FieldMap row(defaults.begin(), defaults.end());
            for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = fields[i];
            on_row(row);
        } catch (const std::exception& ex) {
            report.errors.push_back({file, lineno, ex.what()});
        }
    }
}

inline void read_jsonl(const fs::path& path, LoadReport& report, const std::function<void(const FieldMap&)>& on_row) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open " + path.string());
    const std::string file = path.filename().string();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(std::move(line));
        if (line.empty()) continue;
        try {
            on_row(json_to_fields(nlohmann::json::parse(line)));
        } catch (const std::exception& ex) {
            report.errors.push_back({file, lineno, ex.what()});
        }
    }
}

inline std::set<std::string> header_columns(std::string_view header) {
    auto cols = parse_csv_line(header);
    return {cols.begin(), cols.end()};
}

// ---------------------------------------------------- variants & lexicons

/// Parses "word:count"; the count part is optional when `count_optional`.
inline std::pair<std::string, std::optional<std::uint64_t>> parse_word_count(std::string_view s, bool count_optional) {
    const auto colon = s.rfind(':');
    if (colon == std::string_view::npos) {
        if (!count_optional) throw CorpusError("expected word:count, got '" + std::string(s) + "'");
        return {text::normalize_word(s), std::nullopt};
    }
    return {text::normalize_word(s.substr(0, colon)), parse_number<std::uint64_t>(s.substr(colon + 1), "count")};
}

inline editops::VariantGroup parse_variant_line(std::string_view line) {
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        cols.emplace_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
    }
    while (!cols.empty() && cols.back().empty()) cols.pop_back();
    if (cols.empty() || cols.front().empty()) throw CorpusError("empty variant line");
    editops::VariantGroup g;
    auto [canonical, ccount] = parse_word_count(cols.front(), true);
    if (canonical.empty()) throw CorpusError("empty canonical word");
    g.canonical = std::move(canonical);
    g.canonical_count = ccount;
    for (std::size_t i = 1; i < cols.size(); ++i) {
        auto [word, count] = parse_word_count(cols[i], false);
        if (word.empty()) throw CorpusError("empty variant word");
        if (*count < 1) throw CorpusError("variant count must be >= 1");
        if (word == g.canonical) throw CorpusError("variant '" + word + "' repeats the canonical spelling");
        g.variants.emplace_back(std::move(word), *count);
    }
    return g;
}

inline std::vector<editops::VariantGroup> load_variants(const fs::path& path, LoadReport& report) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open " + path.string());
    std::vector<editops::VariantGroup> groups;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(std::move(line));
        if (line.empty() || line.front() == '#') continue;
        try {
            groups.push_back(parse_variant_line(line));
            if (groups.back().variants.empty())
                report.warnings.push_back(path.filename().string() + ":" + std::to_string(lineno) + ": group '" +
                                          groups.back().canonical + "' has no variants");
        } catch (const std::exception& ex) {
            report.errors.push_back({path.filename().string(), lineno, ex.what()});
        }
    }
    return groups;
}

inline std::vector<editops::VariantGroup> load_variants(const fs::path& path) {
    LoadReport report;
    auto groups = load_variants(path, report);
    if (!report.errors.empty()) {
        const auto& e = report.errors.front();
        throw CorpusError(e.file + ":" + std::to_string(e.line) + ": " + e.message);
    }
    return groups;
}

inline std::string format_variant_line(const editops::VariantGroup& g) {
    std::string line = g.canonical;
    if (g.canonical_count) line += ":" + std::to_string(*g.canonical_count);
    for (const auto& [w, c] : g.variants) line += "\t" + w + ":" + std::to_string(c);
    return line;
}

inline Lexicon load_lexicon(const fs::path& path, std::string name) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open lexicon " + path.string());
    Lexicon lex{std::move(name), {}};
    std::string line;
    while (std::getline(in, line)) {
        line = strip_cr(std::move(line));
        if (line.empty() || line.front() == '#') continue;
        std::string w = text::normalize_word(line);
        if (!w.empty()) lex.entries.insert(std::move(w));
    }
    if (lex.entries.empty()) throw CorpusError("lexicon " + path.string() + " is empty");
    return lex;
}

inline void save_lexicon(const Lexicon& lex, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    for (const auto& w : lex.entries) out << w << '\n';
}

// ------------------------------------------------------------ load / save

struct LoadResult {
    Corpus corpus;
    LoadReport report;
};

namespace detail {

inline void flag_orphans(const Corpus& c, LoadReport& report) {
    std::set<std::string> egos, alters;
    for (const auto& e : c.events) {
        egos.insert(e.ego);
        alters.insert(e.ego + "\x1f" + e.alter);
    }
    std::set<std::string> reported;
    for (const auto& w : c.words) {
        if (!egos.contains(w.ego) && reported.insert("ego " + w.ego).second)
            report.warnings.push_back("orphan ego '" + w.ego + "' in words (no events)");
        else if (egos.contains(w.ego) && !alters.contains(w.ego + "\x1f" + w.alter) &&
                 reported.insert("alter " + w.ego + "/" + w.alter).second)
            report.warnings.push_back("orphan alter '" + w.alter + "' of ego '" + w.ego + "' in words (no events)");
    }
    for (const auto& b : c.bigrams) {
        if (!egos.contains(b.ego) && reported.insert("ego " + b.ego).second)
            report.warnings.push_back("orphan ego '" + b.ego + "' in bigrams (no events)");
    }
}

}  // namespace detail

/// Loads a corpus directory. A missing events or words table is fatal; row
/// level problems are listed in the report.
inline LoadResult load_corpus(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw CorpusError(dir.string() + " is not a corpus directory");
    LoadResult result;
    Corpus& c = result.corpus;
    LoadReport& report = result.report;

    auto pick = [&](std::string_view stem) -> std::optional<fs::path> {
        for (auto ext : {".csv", ".jsonl"}) {
            fs::path p = dir / (std::string(stem) + ext);
            if (fs::exists(p)) return p;
        }
        return std::nullopt;
    };
    auto load = [&](std::string_view stem, std::string_view header, bool required,
                    const std::function<void(const FieldMap&)>& on_row) {
        auto p = pick(stem);
        if (!p) {
            if (required) throw CorpusError("required file " + std::string(stem) + ".csv missing in " + dir.string());
            return;
        }
        if (p->extension() == ".jsonl") read_jsonl(*p, report, on_row);
        else read_table(*p, header_columns(header), report, on_row);
    };

    load("events", kEventsHeader, true, [&](const FieldMap& r) { c.events.push_back(parse_event(r)); });
    load("words", kWordsHeader, true, [&](const FieldMap& r) { c.words.push_back(parse_word(r)); });
    load("bigrams", kBigramsHeader, false, [&](const FieldMap& r) { c.bigrams.push_back(parse_bigram(r)); });
    if (fs::exists(dir / "variants.tsv")) c.variant_groups = load_variants(dir / "variants.tsv", report);

    std::vector<fs::path> lexicon_files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.starts_with("lexicon.") && name.ends_with(".txt")) lexicon_files.push_back(entry.path());
    }
    std::sort(lexicon_files.begin(), lexicon_files.end());
    for (const auto& p : lexicon_files) {
        const std::string fname = p.filename().string();
        std::string lname = fname.substr(8, fname.size() - 12);
        try {
            c.lexicons[lname] = load_lexicon(p, lname);
        } catch (const std::exception& ex) {
            report.errors.push_back({fname, 0, ex.what()});
        }
    }

    canonicalize_words(c.words);
    canonicalize_bigrams(c.bigrams);
    detail::flag_orphans(c, report);
    report.events = c.events.size();
    report.words = c.words.size();
    report.bigrams = c.bigrams.size();
    report.variant_groups = c.variant_groups.size();
    return result;
}

inline void write_events_csv(const std::vector<MessageEvent>& events, std::ostream& out) {
    out << kEventsHeader << '\n';
    for (const auto& e : events) {
        out << csv_row({e.ego, e.alter, to_string(e.direction), std::to_string(e.timestamp_epoch_min),
                        std::to_string(e.utc_offset_min), std::to_string(e.token_count)})
            << '\n';
    }
}

inline void write_words_csv(std::vector<WordUsage> words, std::ostream& out) {
    canonicalize_words(words);
    out << kWordsHeader << '\n';
    for (const auto& w : words) {
        out << csv_row({w.ego, w.alter, to_string(w.direction), w.word, std::to_string(w.count),
                        to_string(w.language)})
            << '\n';
    }
}

inline void write_bigrams_csv(std::vector<BigramUsage> bigrams, std::ostream& out) {
    canonicalize_bigrams(bigrams);
    out << kBigramsHeader << '\n';
    for (const auto& b : bigrams) out << csv_row({b.ego, b.first, b.second, std::to_string(b.count)}) << '\n';
}

/// Writes the canonical layout. Word and bigram rows are exported sorted.
inline void save_corpus(const Corpus& c, const fs::path& dir) {
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "events.csv", std::ios::binary);
        write_events_csv(c.events, out);
    }
    {
        std::ofstream out(dir / "words.csv", std::ios::binary);
        write_words_csv(c.words, out);
    }
    {
        std::ofstream out(dir / "bigrams.csv", std::ios::binary);
        write_bigrams_csv(c.bigrams, out);
    }
    if (!c.variant_groups.empty()) {
        std::ofstream out(dir / "variants.tsv", std::ios::binary);
        for (const auto& g : c.variant_groups) out << format_variant_line(g) << '\n';
    }
    for (const auto& [name, lex] : c.lexicons) save_lexicon(lex, dir / ("lexicon." + name + ".txt"));
}

// ----------------------------------------------------- word-unit loading

/// Loads completion-simulation units from a word file. Accepted shapes:
///   * words.csv layout (has an `ego` column): one unit per (ego, word),
///     i.e. every user's own vocabulary, counts summed over alters/directions;
///   * `word,count` with a header: one unit per row;
///   * a plain list, one word per line: one unit per line with count 1.
inline std::vector<completion::WordCount> load_word_units(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open word file " + path.string());
    std::string first;
    if (!std::getline(in, first)) return {};
    first = strip_cr(first);
    const auto cols = parse_csv_line(first);
    const bool has_header = std::find(cols.begin(), cols.end(), "word") != cols.end();
    std::vector<completion::WordCount> units;
    if (!has_header) {
        in.seekg(0);
        std::string line;
        while (std::getline(in, line)) {
            line = strip_cr(std::move(line));
            if (line.empty() || line.front() == '#') continue;
            auto w = text::normalize_word(line);
            if (!w.empty()) units.push_back({std::move(w), 1});
        }
        return units;
    }
    const bool per_ego = std::find(cols.begin(), cols.end(), "ego") != cols.end();
    LoadReport report;
    std::map<std::pair<std::string, std::string>, std::uint64_t> by_ego;
    read_table(path, {"word"}, report, [&](const FieldMap& row) {
        std::string w = text::normalize_word(field(row, "word"));
        if (w.empty()) throw CorpusError("empty word");
        std::uint64_t count = row.contains("count") ? parse_number<std::uint64_t>(field(row, "count"), "count") : 1;
        if (count < 1) throw CorpusError("count must be >= 1");
        if (per_ego) by_ego[{field(row, "ego"), w}] += count;
        else units.push_back({std::move(w), count});
    });
    if (!report.errors.empty()) {
        const auto& e = report.errors.front();
        throw CorpusError(e.file + ":" + std::to_string(e.line) + ": " + e.message);
    }
    for (auto& [key, count] : by_ego) units.push_back({key.second, count});
    return units;
}

/// Word frequencies summed over all egos, as used to rank completions.
inline std::vector<completion::WordCount> load_word_frequencies(const fs::path& path) {
    std::map<std::string, std::uint64_t> totals;
    for (auto& u : load_word_units(path)) totals[u.word] += u.count;
    std::vector<completion::WordCount> out;
    out.reserve(totals.size());
    for (auto& [w, c] : totals) out.push_back({w, c});
    return out;
}

// ------------------------------------------------------- import adapter

/// Imports a corpus laid out differently from the canonical files, driven by
/// a JSON mapping:
///
///   {
///     "events":   {"file": "...", "delimiter": ",", "columns": {"src col": "ego", ...},
///                  "defaults": {"utc_offset_min": "300"}},
///     "words":    {...}, "bigrams": {...},
///     "variants": {"file": "..."},
///     "lexicons": {"en": "english.txt", ...}
///   }
///
/// `columns` renames source headers to canonical field names; `defaults`
/// fills canonical fields the source does not have.
inline LoadResult import_with_mapping(const fs::path& source_dir, const nlohmann::json& mapping) {
    LoadResult result;
    Corpus& c = result.corpus;
    LoadReport& report = result.report;
    auto table = [&](const char* key, std::string_view header, const std::function<void(const FieldMap&)>& on_row) {
        if (!mapping.contains(key)) return;
        const auto& spec = mapping.at(key);
        const fs::path file = source_dir / spec.at("file").get<std::string>();
        const std::string delim = spec.value("delimiter", std::string(","));
        if (delim.size() != 1) throw CorpusError(std::string(key) + ": delimiter must be one character");
        std::map<std::string, std::string> rename, defaults;
        if (spec.contains("columns"))
            for (const auto& [src, dst] : spec.at("columns").items()) rename[src] = dst.get<std::string>();
        if (spec.contains("defaults"))
            for (const auto& [k, v] : spec.at("defaults").items())
                defaults[k] = v.is_string() ? v.get<std::string>() : v.dump();
        read_table(file, header_columns(header), report, on_row, delim.front(), rename, defaults);
    };
    table("events", kEventsHeader, [&](const FieldMap& r) { c.events.push_back(parse_event(r)); });
    table("words", kWordsHeader, [&](const FieldMap& r) { c.words.push_back(parse_word(r)); });
    table("bigrams", kBigramsHeader, [&](const FieldMap& r) { c.bigrams.push_back(parse_bigram(r)); });
    if (mapping.contains("variants"))
        c.variant_groups = load_variants(source_dir / mapping.at("variants").at("file").get<std::string>(), report);
    if (mapping.contains("lexicons")) {
        for (const auto& [name, file] : mapping.at("lexicons").items())
            c.lexicons[name] = load_lexicon(source_dir / file.get<std::string>(), name);
    }
    canonicalize_words(c.words);
    canonicalize_bigrams(c.bigrams);
    detail::flag_orphans(c, report);
    report.events = c.events.size();
    report.words = c.words.size();
    report.bigrams = c.bigrams.size();
    report.variant_groups = c.variant_groups.size();
    return result;
}

}  // namespace ruqa::corpus
