#pragma once

// Synthetic corpora with planted effects, for exercising the analytics end to
// end. Everything drawn here comes from one seeded Rng in a fixed order, so a
// (config, seed) pair always yields the same corpus.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fmt/format.h"
#include "json.hpp"
#include "ruqa/corpus/lexicons.hpp"
#include "ruqa/corpus/types.hpp"
#include "ruqa/random.hpp"

namespace ruqa::corpus {

struct SyntheticConfig {
    std::size_t egos = 30;
    std::size_t alters_per_ego = 6;
    std::size_t words_per_direction = 200;  // language-labeled tokens per pair and direction
    std::size_t events_per_direction = 60;  // messages per pair and direction

    // Planted reciprocity: each pair gets |p_s - p_r| drawn uniformly from
    // reciprocity_mean +- reciprocity_spread.
    double reciprocity_mean = 0.31;
    double reciprocity_spread = 0.1;
    // Overrides the above with the same (p_s, p_r) for every pair.
    std::optional<std::pair<double, double>> fixed_shares;

    // Probability that a message to or from an intimate alter is moved into
    // the 20:00-23:59 window.
    double nocturnal_shift = 0.0;

    // Fractions of egos in the Low / Medium / High romantic groups and the
    // romantic-word totals drawn for each.
    std::array<double, 3> group_mix = {0.4, 0.3, 0.3};
    std::array<std::pair<std::uint64_t, std::uint64_t>, 3> romantic_range = {
        std::pair<std::uint64_t, std::uint64_t>{0, 20}, {21, 80}, {81, 300}};

    double textism_rate = 0.01;  // extra textism tokens per labeled token
    std::size_t bigrams_per_ego = 40;

    std::int64_t start_epoch_min = 28'401'120;  // 2024-01-01 00:00 UTC
    std::int64_t days = 90;
    std::int32_t utc_offset_min = 300;
};

inline void to_json(nlohmann::ordered_json& j, const SyntheticConfig& c) {
    j = nlohmann::ordered_json{{"egos", c.egos},
                               {"alters_per_ego", c.alters_per_ego},
                               {"words_per_direction", c.words_per_direction},
                               {"events_per_direction", c.events_per_direction},
                               {"reciprocity_mean", c.reciprocity_mean},
                               {"reciprocity_spread", c.reciprocity_spread},
                               {"nocturnal_shift", c.nocturnal_shift},
                               {"group_mix", c.group_mix},
                               {"textism_rate", c.textism_rate},
                               {"bigrams_per_ego", c.bigrams_per_ego},
                               {"start_epoch_min", c.start_epoch_min},
                               {"days", c.days},
                               {"utc_offset_min", c.utc_offset_min}};
    if (c.fixed_shares) j["fixed_shares"] = {c.fixed_shares->first, c.fixed_shares->second};
}

inline SyntheticConfig synthetic_config_from_json(const nlohmann::json& j) {
    SyntheticConfig c;
    c.egos = j.value("egos", c.egos);
    c.alters_per_ego = j.value("alters_per_ego", c.alters_per_ego);
    c.words_per_direction = j.value("words_per_direction", c.words_per_direction);
    c.events_per_direction = j.value("events_per_direction", c.events_per_direction);
    c.reciprocity_mean = j.value("reciprocity_mean", c.reciprocity_mean);
    c.reciprocity_spread = j.value("reciprocity_spread", c.reciprocity_spread);
    c.nocturnal_shift = j.value("nocturnal_shift", c.nocturnal_shift);
    if (j.contains("group_mix")) c.group_mix = j.at("group_mix").get<std::array<double, 3>>();
    c.textism_rate = j.value("textism_rate", c.textism_rate);
    c.bigrams_per_ego = j.value("bigrams_per_ego", c.bigrams_per_ego);
    c.start_epoch_min = j.value("start_epoch_min", c.start_epoch_min);
    c.days = j.value("days", c.days);
    c.utc_offset_min = j.value("utc_offset_min", c.utc_offset_min);
    if (j.contains("fixed_shares")) {
        auto v = j.at("fixed_shares").get<std::vector<double>>();
        if (v.size() != 2) throw CorpusError("fixed_shares must be [p_s, p_r]");
        c.fixed_shares = std::make_pair(v[0], v[1]);
    }
    return c;
}

namespace detail {

// Relative message volume per local hour: quiet small hours, busy afternoon
// and evening.
inline constexpr std::array<double, 24> kBaseHourWeights = {
    1.0, 0.6, 0.3, 0.2, 0.2, 0.3, 0.8, 2.0, 3.0, 3.5, 4.0, 4.0,
    4.0, 4.5, 4.5, 4.0, 4.0, 4.5, 5.0, 5.0, 4.5, 4.0, 3.0, 2.0};

inline std::vector<std::string> unambiguous(const Lexicon& lex, const Lexicon& other, const Lexicon& romantic) {
    std::vector<std::string> out;
    for (const auto& w : lex.entries)
        if (!other.contains(w) && !romantic.contains(w)) out.push_back(w);
    return out;
}

inline std::string textism_token(Rng& rng, const std::vector<std::string>& vocab) {
    static constexpr std::string_view kHomophones[] = {"2", "4", "7", "8", "gr8", "2day", "4u", "b4", "l8r", "2mrw"};
    if (rng.bernoulli(0.4)) return std::string(kHomophones[rng.below(std::size(kHomophones))]);
    std::string w = vocab[rng.below(vocab.size())];
    const char last = w.back();
    w.append(static_cast<std::size_t>(rng.between(2, 6)), last);
    return w;
}

}  // namespace detail

inline Corpus generate_synthetic(const SyntheticConfig& config, std::uint64_t seed) {
    if (config.egos == 0) throw CorpusError("synthetic corpus needs at least one ego");
    if (config.alters_per_ego == 0) throw CorpusError("synthetic corpus needs at least one alter per ego");
    if (config.days <= 0) throw CorpusError("synthetic corpus needs a positive day span");
    if (config.fixed_shares) {
        auto [s, r] = *config.fixed_shares;
        if (s < 0.0 || s > 1.0 || r < 0.0 || r > 1.0) throw CorpusError("fixed shares must lie in [0, 1]");
    }

    Rng rng(seed);
    Corpus c;
    c.lexicons["en"] = builtin::english();
    c.lexicons["ru"] = builtin::roman_urdu();
    c.lexicons["romantic"] = builtin::romantic();
    const auto en_vocab = detail::unambiguous(c.lexicons["en"], c.lexicons["ru"], c.lexicons["romantic"]);
    const auto ru_vocab = detail::unambiguous(c.lexicons["ru"], c.lexicons["en"], c.lexicons["romantic"]);
    // Romantic words outside both language lists, so they never shift the
    // planted language shares.
    std::vector<std::string> romantic_vocab;
    for (const auto& w : c.lexicons["romantic"].entries)
        if (!c.lexicons["en"].contains(w) && !c.lexicons["ru"].contains(w)) romantic_vocab.push_back(w);

    std::size_t alter_serial = 0;
    for (std::size_t e = 0; e < config.egos; ++e) {
        const std::string ego = fmt::format("E{:03d}", e + 1);
        const std::size_t group = rng.discrete(config.group_mix);
        const auto [rlo, rhi] = config.romantic_range[group];
        const auto romantic_total = static_cast<std::uint64_t>(rng.between(static_cast<std::int64_t>(rlo),
                                                                           static_cast<std::int64_t>(rhi)));

        std::vector<std::string> alters;
        for (std::size_t a = 0; a < config.alters_per_ego; ++a) alters.push_back(fmt::format("A{:04d}", ++alter_serial));

        // Medium egos have one intimate alter, High egos two (if available).
        std::size_t intimate_count = group == 0 ? 0 : std::min<std::size_t>(group, alters.size() > 1 ? alters.size() - 1 : 0);
        std::set<std::size_t> intimate;
        while (intimate.size() < intimate_count) intimate.insert(rng.below(alters.size()));

        for (std::size_t a = 0; a < alters.size(); ++a) {
            const std::string& alter = alters[a];
            const bool is_intimate = intimate.contains(a);

            // Language mix for this pair.
            double p_s, p_r;
            if (config.fixed_shares) {
                std::tie(p_s, p_r) = *config.fixed_shares;
            } else {
                const double gap = std::clamp(rng.uniform(config.reciprocity_mean - config.reciprocity_spread,
                                                          config.reciprocity_mean + config.reciprocity_spread),
                                              0.0, 1.0);
                const double low = rng.uniform(0.0, 1.0 - gap);
                if (rng.bernoulli(0.5)) {
                    p_s = low;
                    p_r = low + gap;
                } else {
                    p_s = low + gap;
                    p_r = low;
                }
            }
            for (Direction dir : {Direction::Sent, Direction::Received}) {
                const double p_en = dir == Direction::Sent ? p_s : p_r;
                std::map<std::string, std::pair<std::uint64_t, Language>> counts;
                for (std::size_t t = 0; t < config.words_per_direction; ++t) {
                    if (rng.bernoulli(p_en)) {
                        auto& slot = counts[en_vocab[rng.below(en_vocab.size())]];
                        ++slot.first;
                        slot.second = Language::English;
                    } else {
                        auto& slot = counts[ru_vocab[rng.below(ru_vocab.size())]];
                        ++slot.first;
                        slot.second = Language::RomanUrdu;
                    }
                    if (rng.bernoulli(config.textism_rate)) {
                        auto& slot = counts[detail::textism_token(rng, rng.bernoulli(0.5) ? en_vocab : ru_vocab)];
                        ++slot.first;
                        slot.second = Language::Unknown;
                    }
                }
                for (auto& [w, v] : counts) c.words.push_back({ego, alter, w, dir, v.first, v.second});

                for (std::size_t m = 0; m < config.events_per_direction; ++m) {
                    int hour;
                    if (is_intimate && rng.bernoulli(config.nocturnal_shift)) hour = static_cast<int>(rng.between(20, 23));
                    else hour = static_cast<int>(rng.discrete(detail::kBaseHourWeights));
                    const std::int64_t local = config.start_epoch_min + rng.between(0, config.days - 1) * 1440 +
                                               hour * 60 + rng.between(0, 59);
                    c.events.push_back(
                        {ego, alter, dir, local - config.utc_offset_min, config.utc_offset_min, rng.between(1, 20)});
                }
            }
        }

        // Romantic words. Intimate alters receive most of them with at least
        // five sent each; the rest are scattered with at most four sent words
        // per other alter so those stay non-intimate.
        std::map<std::pair<std::size_t, Direction>, std::map<std::string, std::uint64_t>> romantic_words;
        std::uint64_t remaining = romantic_total;
        std::vector<std::size_t> intimate_list(intimate.begin(), intimate.end());
        if (!intimate_list.empty()) {
            const std::uint64_t share = remaining * 8 / 10 / intimate_list.size();
            for (std::size_t a : intimate_list) {
                const std::uint64_t sent = std::max<std::uint64_t>(5, share / 2);
                const std::uint64_t received = share > sent ? share - sent : 0;
                for (std::uint64_t k = 0; k < sent; ++k)
                    ++romantic_words[{a, Direction::Sent}][romantic_vocab[rng.below(romantic_vocab.size())]];
                for (std::uint64_t k = 0; k < received; ++k)
                    ++romantic_words[{a, Direction::Received}][romantic_vocab[rng.below(romantic_vocab.size())]];
                remaining -= std::min(remaining, sent + received);
            }
        }
        std::vector<std::uint64_t> sent_to(alters.size(), 0);
        std::vector<std::size_t> others;
        for (std::size_t a = 0; a < alters.size(); ++a)
            if (!intimate.contains(a)) others.push_back(a);
        if (others.empty()) others = intimate_list;
        for (; remaining > 0; --remaining) {
            const std::size_t a = others[rng.below(others.size())];
            Direction dir = rng.bernoulli(0.5) ? Direction::Sent : Direction::Received;
            if (!intimate.contains(a) && dir == Direction::Sent && sent_to[a] >= 4) dir = Direction::Received;
            if (dir == Direction::Sent) ++sent_to[a];
            ++romantic_words[{a, dir}][romantic_vocab[rng.below(romantic_vocab.size())]];
        }
        for (const auto& [key, words] : romantic_words) {
            for (const auto& [w, n] : words) c.words.push_back({ego, alters[key.first], w, key.second, n, Language::Unknown});
        }

        for (std::size_t b = 0; b < config.bigrams_per_ego; ++b) {
            const auto& vocab = rng.bernoulli(0.5) ? en_vocab : ru_vocab;
            c.bigrams.push_back({ego, vocab[rng.below(vocab.size())], vocab[rng.below(vocab.size())],
                                 static_cast<std::uint64_t>(rng.between(1, 12))});
        }
    }

    std::stable_sort(c.events.begin(), c.events.end(), [](const MessageEvent& a, const MessageEvent& b) {
        return std::tie(a.ego, a.timestamp_epoch_min, a.alter) < std::tie(b.ego, b.timestamp_epoch_min, b.alter);
    });
    canonicalize_words(c.words);
    canonicalize_bigrams(c.bigrams);
    return c;
}

}  // namespace ruqa::corpus
