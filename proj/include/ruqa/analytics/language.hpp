#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ruqa/corpus/types.hpp"
#include "ruqa/stats.hpp"

namespace ruqa::analytics {

using corpus::Corpus;
using corpus::Language;
using corpus::Lexicon;

/// Lexicon lookup: English if only the English list has the word, Roman Urdu
/// if only the Roman Urdu list has it, Unknown otherwise.
inline Language label_language(const std::string& word, const Lexicon& en, const Lexicon& ru) {
    const bool in_en = en.contains(word);
    const bool in_ru = ru.contains(word);
    if (in_en && !in_ru) return Language::English;
    if (in_ru && !in_en) return Language::RomanUrdu;
    return Language::Unknown;
}

/// Fills in the language of every Unknown word row from the lexicons.
/// Rows that already carry a label keep it.
inline std::size_t apply_language_labels(Corpus& c, const Lexicon& en, const Lexicon& ru) {
    std::size_t labeled = 0;
    for (auto& w : c.words) {
        if (w.language != Language::Unknown) continue;
        w.language = label_language(w.word, en, ru);
        if (w.language != Language::Unknown) ++labeled;
    }
    return labeled;
}

/// Labels using the corpus's own "en" and "ru" lexicons when both exist.
inline std::size_t apply_language_labels(Corpus& c) {
    const Lexicon* en = c.lexicon("en");
    const Lexicon* ru = c.lexicon("ru");
    if (!en || !ru) return 0;
    return apply_language_labels(c, *en, *ru);
}

struct LanguageShare {
    std::string ego;  // empty for the overall row
    std::uint64_t roman_urdu = 0;
    std::uint64_t english = 0;
    std::uint64_t unknown = 0;

    std::uint64_t labeled() const { return roman_urdu + english; }
    double roman_urdu_share() const { return labeled() ? double(roman_urdu) / double(labeled()) : 0.0; }
    double english_share() const { return labeled() ? double(english) / double(labeled()) : 0.0; }
    double unknown_share() const {
        const auto all = labeled() + unknown;
        return all ? double(unknown) / double(all) : 0.0;
    }
    /// Wald interval of the Roman Urdu share over labeled word occurrences.
    stats::ProportionInterval roman_urdu_ci(double confidence = 0.95) const {
        if (!labeled()) return {};
        return stats::wald_ci(roman_urdu_share(), labeled(), confidence);
    }
};

struct LanguageProfile {
    std::vector<LanguageShare> per_ego;  // sorted by ego
    LanguageShare overall;
};

/// Roman Urdu / English shares per ego and overall, over word occurrences.
inline LanguageProfile language_profile(const Corpus& c) {
    std::map<std::string, LanguageShare> by_ego;
    LanguageProfile profile;
    for (const auto& w : c.words) {
        LanguageShare& s = by_ego[w.ego];
        s.ego = w.ego;
        for (LanguageShare* t : {&s, &profile.overall}) {
            switch (w.language) {
                case Language::RomanUrdu: t->roman_urdu += w.count; break;
                case Language::English: t->english += w.count; break;
                case Language::Unknown: t->unknown += w.count; break;
            }
        }
    }
    for (auto& [_, s] : by_ego) profile.per_ego.push_back(s);
    return profile;
}

}  // namespace ruqa::analytics
