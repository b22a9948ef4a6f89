#pragma once

// Per ego-alter language reciprocity: p = |p_s - p_r| where p_s and p_r are
// the English shares of the labeled words the ego sent to and received from
// the alter. Unknown-language words are left out of both shares.

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

struct ReciprocityRecord {
    std::string ego;
    std::string alter;
    std::uint64_t reference_sent = 0;  // words in the reference language
    std::uint64_t labeled_sent = 0;
    std::uint64_t reference_received = 0;
    std::uint64_t labeled_received = 0;
    double p_s = 0.0;
    double p_r = 0.0;
    double p = 0.0;
};

enum class WordUnit { Occurrences, DistinctWords };

struct ReciprocityOptions {
    std::uint64_t min_words_per_direction = 10;
    WordUnit unit = WordUnit::Occurrences;
    /// Shares are measured for this language; the coefficient is the same
    /// for either choice.
    corpus::Language reference = corpus::Language::English;
    double mu0 = 0.5;
    double alpha = 0.05;
};

struct ReciprocitySummary {
    std::vector<ReciprocityRecord> records;  // sorted by (ego, alter)
    double mean_p = 0.0;
    std::optional<stats::TTestResult> test;  // left-tailed, H1: mean p < mu0
    bool reject_null = false;
    std::vector<std::string> warnings;
};

inline ReciprocitySummary reciprocity(const corpus::Corpus& c, const ReciprocityOptions& options = {}) {
    using corpus::Direction;
    using corpus::Language;
    struct Tally {
        std::uint64_t ref[2] = {0, 0};
        std::uint64_t labeled[2] = {0, 0};
    };
    std::map<std::pair<std::string, std::string>, Tally> tallies;
    std::set<std::tuple<std::string, std::string, Direction, std::string>> seen;
    for (const auto& w : c.words) {
        if (w.language == Language::Unknown) continue;
        const std::uint64_t n = options.unit == WordUnit::Occurrences ? w.count : 1;
        if (options.unit == WordUnit::DistinctWords && !seen.insert({w.ego, w.alter, w.direction, w.word}).second)
            continue;
        Tally& t = tallies[{w.ego, w.alter}];
        const int d = w.direction == Direction::Sent ? 0 : 1;
        t.labeled[d] += n;
        if (w.language == options.reference) t.ref[d] += n;
    }

    ReciprocitySummary summary;
    std::vector<double> ps;
    for (const auto& [key, t] : tallies) {
        if (t.labeled[0] < options.min_words_per_direction || t.labeled[1] < options.min_words_per_direction) continue;
        if (t.labeled[0] == 0 || t.labeled[1] == 0) continue;
        ReciprocityRecord r;
        r.ego = key.first;
        r.alter = key.second;
        r.reference_sent = t.ref[0];
        r.labeled_sent = t.labeled[0];
        r.reference_received = t.ref[1];
        r.labeled_received = t.labeled[1];
        r.p_s = double(t.ref[0]) / double(t.labeled[0]);
        r.p_r = double(t.ref[1]) / double(t.labeled[1]);
        // |a/b - c/d| = |ad - cb| / bd in integers, so relabelling the
        // reference language yields the identical double.
        const __int128 num = static_cast<__int128>(t.ref[0]) * t.labeled[1] - static_cast<__int128>(t.ref[1]) * t.labeled[0];
        const __int128 den = static_cast<__int128>(t.labeled[0]) * t.labeled[1];
        r.p = static_cast<double>(num < 0 ? -num : num) / static_cast<double>(den);
        ps.push_back(r.p);
        summary.records.push_back(std::move(r));
    }
    if (summary.records.empty())
        throw std::invalid_argument("no ego-alter pair has enough labeled words in both directions");
    summary.mean_p = stats::mean(ps);
    try {
        summary.test = stats::one_sample_t(ps, options.mu0, stats::Tail::Left);
        summary.reject_null = summary.test->p_value < options.alpha;
    } catch (const stats::StatsError& e) {
        summary.warnings.push_back(std::string("t-test skipped: ") + e.what());
    }
    return summary;
}

}  // namespace ruqa::analytics
