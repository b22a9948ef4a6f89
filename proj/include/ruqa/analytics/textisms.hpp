#pragma once

// Numeric homophones ("gr8", "7" for saath) and character repetition
// ("yessss") in word counts.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ruqa/corpus/types.hpp"
#include "ruqa/text.hpp"

namespace ruqa::analytics {

/// Maps a digit to the word it stands in for by sound.
using HomophoneTable = std::map<char32_t, std::string>;

inline HomophoneTable default_homophones() {
    return {{U'2', "to"}, {U'4', "for"}, {U'7', "saath"}, {U'8', "ate"}};
}

inline constexpr std::size_t kRepetitionRun = 3;

inline bool is_numeric_homophone(const std::string& token, const HomophoneTable& table) {
    const auto cps = text::to_u32(token);
    if (cps.empty()) return false;
    if (cps.size() == 1) return table.contains(cps.front());
    bool letter = false;
    bool digit = false;
    for (char32_t c : cps) {
        if (u_isdigit(static_cast<UChar32>(c))) {
            if (!table.contains(c)) return false;
            digit = true;
        } else if (u_isalpha(static_cast<UChar32>(c))) {
            letter = true;
        } else if (!text::is_apostrophe(c)) {
            return false;
        }
    }
    return letter && digit;
}

inline bool has_repetition(const std::string& token) {
    const auto cps = text::to_u32(token);
    std::size_t run = 0;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        run = (i > 0 && cps[i] == cps[i - 1]) ? run + 1 : 1;
        if (run >= kRepetitionRun) return true;
    }
    return false;
}

/// Collapses every run of 3+ identical characters. Each run becomes a single
/// character unless keeping two of it produces a lexicon word ("cooool" ->
/// "cool"); with several candidates the one with the fewest doubled runs wins.
inline std::string canonicalize_repetition(const std::string& token, const std::vector<const corpus::Lexicon*>& lexicons) {
    const auto cps = text::to_u32(token);
    struct Run {
        char32_t c;
        std::size_t len;
    };
    std::vector<Run> runs;
    for (char32_t c : cps) {
        if (!runs.empty() && runs.back().c == c) ++runs.back().len;
        else runs.push_back({c, 1});
    }
    std::vector<std::size_t> long_runs;
    for (std::size_t i = 0; i < runs.size(); ++i)
        if (runs[i].len >= kRepetitionRun) long_runs.push_back(i);
    if (long_runs.empty()) return token;

    auto render = [&](std::uint32_t doubled_mask) {
        std::u32string out;
        std::size_t k = 0;
        for (std::size_t i = 0; i < runs.size(); ++i) {
            std::size_t len = runs[i].len;
            if (k < long_runs.size() && long_runs[k] == i) {
                len = (doubled_mask >> k & 1u) ? 2 : 1;
                ++k;
            }
            out.append(len, runs[i].c);
        }
        return text::to_utf8(out);
    };
    auto in_lexicon = [&](const std::string& w) {
        return std::any_of(lexicons.begin(), lexicons.end(), [&](const corpus::Lexicon* l) { return l->contains(w); });
    };
    const std::string squashed = render(0);
    if (lexicons.empty() || long_runs.size() > 12 || in_lexicon(squashed)) return squashed;
    std::optional<std::pair<int, std::string>> best;
    for (std::uint32_t mask = 1; mask < (1u << long_runs.size()); ++mask) {
        std::string candidate = render(mask);
        if (!in_lexicon(candidate)) continue;
        std::pair<int, std::string> key{std::popcount(mask), candidate};
        if (!best || key < *best) best = std::move(key);
    }
    return best ? best->second : squashed;
}

struct EgoTextisms {
    std::string ego;
    std::uint64_t tokens = 0;
    std::uint64_t homophone_hits = 0;
    std::uint64_t repetition_hits = 0;
    std::vector<std::string> homophone_examples;   // distinct, sorted, capped
    std::vector<std::string> repetition_examples;  // distinct, sorted, capped
};

struct TextismReport {
    std::vector<EgoTextisms> per_ego;  // sorted by ego
    std::uint64_t tokens = 0;
    std::uint64_t homophone_hits = 0;
    std::uint64_t repetition_hits = 0;
    std::map<std::string, std::string> homophone_readings;  // token -> reading, capped
    std::map<std::string, std::string> canonical_forms;     // token -> canonical, capped
};

struct TextismOptions {
    std::size_t example_cap = 10;
    std::size_t form_cap = 200;
};

inline std::string homophone_reading(const std::string& token, const HomophoneTable& table) {
    std::string out;
    for (char32_t c : text::to_u32(token)) {
        auto it = table.find(c);
        if (it != table.end()) out += it->second;
        else text::append_utf8(out, c);
    }
    return out;
}

/// Counts textism occurrences per ego. Lexicons used for canonicalization
/// are all lexicons attached to the corpus.
inline TextismReport detect_textisms(const corpus::Corpus& c, const HomophoneTable& table = default_homophones(),
                                     const TextismOptions& options = {}) {
    std::vector<const corpus::Lexicon*> lexicons;
    for (const auto& [_, lex] : c.lexicons) lexicons.push_back(&lex);

    std::map<std::string, EgoTextisms> by_ego;
    std::map<std::string, std::set<std::string>> homophone_words, repetition_words;
    TextismReport report;
    for (const auto& w : c.words) {
        EgoTextisms& e = by_ego[w.ego];
        e.ego = w.ego;
        e.tokens += w.count;
        report.tokens += w.count;
        if (is_numeric_homophone(w.word, table)) {
            e.homophone_hits += w.count;
            report.homophone_hits += w.count;
            homophone_words[w.ego].insert(w.word);
            if (report.homophone_readings.size() < options.form_cap)
                report.homophone_readings.emplace(w.word, homophone_reading(w.word, table));
        }
        if (has_repetition(w.word)) {
            e.repetition_hits += w.count;
            report.repetition_hits += w.count;
            repetition_words[w.ego].insert(w.word);
            if (report.canonical_forms.size() < options.form_cap && !report.canonical_forms.contains(w.word))
                report.canonical_forms.emplace(w.word, canonicalize_repetition(w.word, lexicons));
        }
    }
    for (auto& [ego, e] : by_ego) {
        for (const auto& w : homophone_words[ego]) {
            if (e.homophone_examples.size() >= options.example_cap) break;
            e.homophone_examples.push_back(w);
        }
        for (const auto& w : repetition_words[ego]) {
            if (e.repetition_examples.size() >= options.example_cap) break;
            e.repetition_examples.push_back(w);
        }
        report.per_ego.push_back(std::move(e));
    }
    return report;
}

}  // namespace ruqa::analytics
