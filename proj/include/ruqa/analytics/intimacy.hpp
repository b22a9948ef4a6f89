#pragma once

// Romantic-word grouping of egos and the hour-of-day comparison between
// intimate and non-intimate alters.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ruqa/corpus/types.hpp"
#include "ruqa/stats.hpp"

namespace ruqa::analytics {

using Hourly = std::array<double, 24>;

enum class IntimacyGroup { Low, Medium, High };

inline std::string_view to_string(IntimacyGroup g) {
    switch (g) {
        case IntimacyGroup::Low: return "low";
        case IntimacyGroup::Medium: return "medium";
        case IntimacyGroup::High: return "high";
    }
    return "low";
}

// Low: <= 20 romantic words, Medium: 21..80, High: otherwise. The published
// grouping says "more than 81" for High, which leaves 81 unassigned; 81 is
// placed in High to keep the groups contiguous.
inline constexpr std::uint64_t kLowMax = 20;
inline constexpr std::uint64_t kMediumMax = 80;

inline IntimacyGroup group_for(std::uint64_t romantic_words) {
    if (romantic_words <= kLowMax) return IntimacyGroup::Low;
    if (romantic_words <= kMediumMax) return IntimacyGroup::Medium;
    return IntimacyGroup::High;
}

/// Night for group summaries: 20:00 through 06:59.
inline bool is_night_hour(int h) { return h >= 20 || h < 7; }

inline Hourly normalized(const std::array<std::uint64_t, 24>& counts) {
    Hourly out{};
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) return out;
    for (std::size_t h = 0; h < 24; ++h) out[h] = double(counts[h]) / double(total);
    return out;
}

struct IntimacyProfile {
    std::string ego;
    std::uint64_t romantic_word_count = 0;
    IntimacyGroup group = IntimacyGroup::Low;
    std::uint64_t messages = 0;
    Hourly hourly{};  // share of the ego's sent+received messages per local hour
};

enum class RomanticCount { SentAndReceived, SentOnly };

/// One profile per ego (every ego seen in events or words), sorted by ego.
inline std::vector<IntimacyProfile> intimacy_groups(const corpus::Corpus& c, const corpus::Lexicon& romantic,
                                                    RomanticCount counting = RomanticCount::SentAndReceived) {
    if (romantic.entries.empty()) throw std::invalid_argument("romantic lexicon is empty");
    std::map<std::string, IntimacyProfile> profiles;
    std::map<std::string, std::array<std::uint64_t, 24>> counts;
    for (const auto& w : c.words) {
        auto& p = profiles[w.ego];
        p.ego = w.ego;
        if (counting == RomanticCount::SentOnly && w.direction != corpus::Direction::Sent) continue;
        if (romantic.contains(w.word)) p.romantic_word_count += w.count;
    }
    for (const auto& e : c.events) {
        auto& p = profiles[e.ego];
        p.ego = e.ego;
        ++p.messages;
        ++counts[e.ego][static_cast<std::size_t>(e.local_hour())];
    }
    std::vector<IntimacyProfile> out;
    for (auto& [ego, p] : profiles) {
        p.group = group_for(p.romantic_word_count);
        if (auto it = counts.find(ego); it != counts.end()) p.hourly = normalized(it->second);
        out.push_back(std::move(p));
    }
    return out;
}

struct GroupHourly {
    IntimacyGroup group = IntimacyGroup::Low;
    std::size_t egos = 0;
    Hourly hourly{};
    double night_share = 0.0;
};

/// Hourly profile per group: the mean of the egos' own proportions, or with
/// `pooled` the proportions of all the group's messages together.
inline std::vector<GroupHourly> group_hourly(const std::vector<IntimacyProfile>& profiles, bool pooled = false) {
    std::vector<GroupHourly> out;
    for (IntimacyGroup g : {IntimacyGroup::Low, IntimacyGroup::Medium, IntimacyGroup::High}) {
        GroupHourly gh;
        gh.group = g;
        Hourly sum{};
        double weight = 0.0;
        for (const auto& p : profiles) {
            if (p.group != g || p.messages == 0) continue;
            ++gh.egos;
            const double w = pooled ? double(p.messages) : 1.0;
            for (std::size_t h = 0; h < 24; ++h) sum[h] += w * p.hourly[h];
            weight += w;
        }
        if (weight > 0.0)
            for (std::size_t h = 0; h < 24; ++h) gh.hourly[h] = sum[h] / weight;
        for (int h = 0; h < 24; ++h)
            if (is_night_hour(h)) gh.night_share += gh.hourly[static_cast<std::size_t>(h)];
        out.push_back(gh);
    }
    return out;
}

struct EgoDifference {
    std::string ego;
    std::size_t intimate_alters = 0;
    std::size_t other_alters = 0;
    Hourly p_intimate{};
    Hourly p_other{};
    Hourly d{};
    double window_mean = 0.0;  // mean of d over the test window
};

struct HourlyDifference {
    std::vector<EgoDifference> per_ego;  // sorted by ego
    Hourly d{};                          // average over egos
    std::optional<stats::TTestResult> test;
    std::vector<std::string> warnings;
};

struct DifferenceOptions {
    std::uint64_t min_sent_intimate_words = 5;
    int window_start = 20;  // inclusive
    int window_end = 23;    // inclusive
};

/// For egos who sent at least `min_sent_intimate_words` romantic words, splits
/// their alters into intimate (at least that many romantic words sent to
/// them) and the rest, builds hourly shares of sent messages for both sets,
/// and tests whether the per-ego mean of d = p_i - p_n over the window is
/// greater than zero (one-sided, each ego one sample).
inline HourlyDifference intimate_alter_difference(const corpus::Corpus& c, const corpus::Lexicon& romantic,
                                                  const DifferenceOptions& options = {}) {
    if (romantic.entries.empty()) throw std::invalid_argument("romantic lexicon is empty");
    std::map<std::string, std::map<std::string, std::uint64_t>> sent_romantic;  // ego -> alter -> words
    for (const auto& w : c.words) {
        if (w.direction == corpus::Direction::Sent && romantic.contains(w.word)) sent_romantic[w.ego][w.alter] += w.count;
    }
    std::map<std::string, std::map<std::string, std::array<std::uint64_t, 24>>> sent_hours;  // ego -> alter -> hours
    for (const auto& e : c.events) {
        if (e.direction == corpus::Direction::Sent) ++sent_hours[e.ego][e.alter][static_cast<std::size_t>(e.local_hour())];
    }

    HourlyDifference result;
    for (const auto& [ego, by_alter] : sent_romantic) {
        std::uint64_t total = 0;
        for (const auto& [_, n] : by_alter) total += n;
        if (total < options.min_sent_intimate_words) continue;
        std::array<std::uint64_t, 24> intimate{}, other{};
        EgoDifference ed;
        ed.ego = ego;
        auto hours_it = sent_hours.find(ego);
        if (hours_it != sent_hours.end()) {
            for (const auto& [alter, hours] : hours_it->second) {
                auto it = by_alter.find(alter);
                const bool is_intimate = it != by_alter.end() && it->second >= options.min_sent_intimate_words;
                auto& target = is_intimate ? intimate : other;
                (is_intimate ? ed.intimate_alters : ed.other_alters)++;
                for (std::size_t h = 0; h < 24; ++h) target[h] += hours[h];
            }
        }
        if (ed.intimate_alters == 0 || ed.other_alters == 0) {
            result.warnings.push_back("ego '" + ego + "' excluded: needs sent messages to both intimate and other alters");
            continue;
        }
        ed.p_intimate = normalized(intimate);
        ed.p_other = normalized(other);
        double window = 0.0;
        for (std::size_t h = 0; h < 24; ++h) ed.d[h] = ed.p_intimate[h] - ed.p_other[h];
        for (int h = options.window_start; h <= options.window_end; ++h) window += ed.d[static_cast<std::size_t>(h)];
        ed.window_mean = window / double(options.window_end - options.window_start + 1);
        result.per_ego.push_back(std::move(ed));
    }
    if (result.per_ego.empty()) throw std::invalid_argument("no ego qualifies for the intimate-alter comparison");

    std::vector<double> samples;
    for (const auto& ed : result.per_ego) {
        samples.push_back(ed.window_mean);
        for (std::size_t h = 0; h < 24; ++h) result.d[h] += ed.d[h];
    }
    for (auto& v : result.d) v /= double(result.per_ego.size());
    try {
        result.test = stats::one_sample_t(samples, 0.0, stats::Tail::Right);
    } catch (const stats::StatsError& e) {
        result.warnings.push_back(std::string("t-test skipped: ") + e.what());
    }
    return result;
}

}  // namespace ruqa::analytics
