#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <regex>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "ruqa/editops.hpp"

namespace ruqa::corpus {

class CorpusError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using EgoId = std::string;
using AlterId = std::string;

enum class Direction { Sent, Received };
enum class Language { RomanUrdu, English, Unknown };

inline std::string_view to_string(Direction d) { return d == Direction::Sent ? "sent" : "received"; }

inline Direction parse_direction(std::string_view s) {
    if (s == "sent" || s == "s" || s == "out") return Direction::Sent;
    if (s == "received" || s == "r" || s == "in") return Direction::Received;
    throw CorpusError("unknown direction '" + std::string(s) + "'");
}

inline std::string_view to_string(Language l) {
    switch (l) {
        case Language::RomanUrdu: return "ru";
        case Language::English: return "en";
        case Language::Unknown: return "unk";
    }
    return "unk";
}

inline Language parse_language(std::string_view s) {
    if (s == "ru") return Language::RomanUrdu;
    if (s == "en") return Language::English;
    if (s == "unk" || s.empty()) return Language::Unknown;
    throw CorpusError("unknown language label '" + std::string(s) + "' (expected ru|en|unk)");
}

/// True when `s` contains something shaped like a phone number.
inline bool looks_like_phone_number(std::string_view s) {
    static const std::regex pattern("[+]?[0-9]{7,15}");
    return std::regex_search(s.begin(), s.end(), pattern);
}

inline void validate_id(std::string_view id, std::string_view what) {
    if (id.empty()) throw CorpusError(std::string(what) + " id is empty");
    if (looks_like_phone_number(id)) throw CorpusError(std::string(what) + " id looks like a phone number");
}

struct MessageEvent {
    EgoId ego;
    AlterId alter;
    Direction direction = Direction::Sent;
    std::int64_t timestamp_epoch_min = 0;  // UTC
    std::int32_t utc_offset_min = 0;
    std::int64_t token_count = 0;

    /// Hour of day in the sender's local time, in [0, 24).
    int local_hour() const {
        const std::int64_t local = timestamp_epoch_min + utc_offset_min;
        const std::int64_t minute_of_day = ((local % 1440) + 1440) % 1440;
        return static_cast<int>(minute_of_day / 60);
    }

    friend bool operator==(const MessageEvent&, const MessageEvent&) = default;
};

struct WordUsage {
    EgoId ego;
    AlterId alter;
    std::string word;
    Direction direction = Direction::Sent;
    std::uint64_t count = 1;
    Language language = Language::Unknown;

    friend bool operator==(const WordUsage&, const WordUsage&) = default;
};

struct BigramUsage {
    EgoId ego;
    std::string first;
    std::string second;
    std::uint64_t count = 1;

    friend bool operator==(const BigramUsage&, const BigramUsage&) = default;
};

struct Lexicon {
    std::string name;
    std::set<std::string> entries;

    bool contains(std::string_view w) const { return entries.contains(std::string(w)); }
    friend bool operator==(const Lexicon&, const Lexicon&) = default;
};

struct Corpus {
    std::vector<MessageEvent> events;
    std::vector<WordUsage> words;
    std::vector<BigramUsage> bigrams;
    std::vector<editops::VariantGroup> variant_groups;
    std::map<std::string, Lexicon> lexicons;

    const Lexicon* lexicon(const std::string& name) const {
        auto it = lexicons.find(name);
        return it == lexicons.end() ? nullptr : &it->second;
    }

    friend bool operator==(const Corpus&, const Corpus&) = default;
};

/// Sorts word rows by (ego, alter, direction, word) and merges duplicates.
inline void canonicalize_words(std::vector<WordUsage>& words) {
    auto key = [](const WordUsage& w) {
        return std::tuple<const std::string&, const std::string&, std::string_view, const std::string&>(
            w.ego, w.alter, to_string(w.direction), w.word);
    };
    std::sort(words.begin(), words.end(), [&](const WordUsage& a, const WordUsage& b) { return key(a) < key(b); });
    std::vector<WordUsage> merged;
    for (auto& w : words) {
        if (!merged.empty() && key(merged.back()) == key(w)) {
            merged.back().count += w.count;
            if (merged.back().language == Language::Unknown) merged.back().language = w.language;
        } else {
            merged.push_back(std::move(w));
        }
    }
    words = std::move(merged);
}

inline void canonicalize_bigrams(std::vector<BigramUsage>& bigrams) {
    auto key = [](const BigramUsage& b) { return std::tie(b.ego, b.first, b.second); };
    std::sort(bigrams.begin(), bigrams.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    std::vector<BigramUsage> merged;
    for (auto& b : bigrams) {
        if (!merged.empty() && key(merged.back()) == key(b)) merged.back().count += b.count;
        else merged.push_back(std::move(b));
    }
    bigrams = std::move(merged);
}

}  // namespace ruqa::corpus
