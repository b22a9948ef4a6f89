#pragma once

// Categorized edit scripts between spelling variants, corpus-level
// distributions over edit subtypes, and a likelihood-based same-word scorer.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ruqa/random.hpp"
#include "ruqa/text.hpp"

namespace ruqa::editops {

/// Two spellings either differ by an inserted/deleted character or by one
/// character swapped for another. Insertions and deletions are pooled.
enum class OpCategory { AddDelete, Replace };

enum class EditKind { Insert, Delete, Replace };

struct EditOp {
    EditKind kind = EditKind::Insert;
    std::size_t position = 0;         // index into the source word (code points)
    std::size_t target_position = 0;  // index into the target word
    char32_t from = 0;                // deleted or replaced character (0 for Insert)
    char32_t to = 0;                  // inserted or replacing character (0 for Delete)

    OpCategory category() const { return kind == EditKind::Replace ? OpCategory::Replace : OpCategory::AddDelete; }

    /// The character added or removed by an AddDelete op.
    char32_t changed_char() const { return kind == EditKind::Insert ? to : from; }

    /// Replace pair in canonical (smaller, larger) code-point order.
    std::pair<char32_t, char32_t> pair() const { return std::minmax(from, to); }

    friend bool operator==(const EditOp&, const EditOp&) = default;
};

/// Category-level identity of an op: AddDelete(c) or Replace(a, b) with a < b.
struct OpSubtype {
    OpCategory category = OpCategory::AddDelete;
    char32_t a = 0;
    char32_t b = 0;

    static OpSubtype of(const EditOp& op) {
        if (op.category() == OpCategory::AddDelete) return {OpCategory::AddDelete, op.changed_char(), 0};
        auto [x, y] = op.pair();
        return {OpCategory::Replace, x, y};
    }

    std::string label() const {
        std::string s = category == OpCategory::AddDelete ? "add_delete:" : "replace:";
        text::append_utf8(s, a);
        if (category == OpCategory::Replace) {
            s.push_back('|');
            text::append_utf8(s, b);
        }
        return s;
    }

    friend auto operator<=>(const OpSubtype&, const OpSubtype&) = default;
};

struct EditScript {
    std::string source;
    std::string target;
    std::vector<EditOp> ops;  // in alignment order
};

namespace detail {

/// Row-major (n+1) x (m+1) Levenshtein table written into `d`.
inline void fill_distance_table(std::u32string_view s, std::u32string_view t, std::vector<std::uint32_t>& d) {
    const std::size_t n = s.size();
    const std::size_t m = t.size();
    const std::size_t w = m + 1;
    d.resize((n + 1) * w);
    for (std::size_t j = 0; j <= m; ++j) d[j] = static_cast<std::uint32_t>(j);
    for (std::size_t i = 1; i <= n; ++i) {
        std::uint32_t* row = d.data() + i * w;
        const std::uint32_t* up = row - w;
        row[0] = static_cast<std::uint32_t>(i);
        const char32_t c = s[i - 1];
        for (std::size_t j = 1; j <= m; ++j) {
            const std::uint32_t sub = up[j - 1] + (c == t[j - 1] ? 0u : 1u);
            row[j] = std::min({sub, up[j] + 1u, row[j - 1] + 1u});
        }
    }
}

inline std::vector<std::uint32_t>& scratch_table() {
    thread_local std::vector<std::uint32_t> table;
    return table;
}

// Backtrace from the end of both words. On cost ties an edit is preferred to a
// free match, and among edits Replace > Delete > Insert, which places edits at
// the rightmost position that is still optimal. Ops are appended to `ops` in
// reverse alignment order.
inline void backtrace_reversed(std::u32string_view s, std::u32string_view t, std::vector<EditOp>& ops) {
    auto& d = scratch_table();
    fill_distance_table(s, t, d);
    const std::size_t w = t.size() + 1;
    std::size_t i = s.size();
    std::size_t j = t.size();
    while (i > 0 || j > 0) {
        const std::uint32_t here = d[i * w + j];
        if (i > 0 && j > 0 && s[i - 1] != t[j - 1] && here == d[(i - 1) * w + j - 1] + 1) {
            ops.push_back({EditKind::Replace, i - 1, j - 1, s[i - 1], t[j - 1]});
            --i;
            --j;
        } else if (i > 0 && here == d[(i - 1) * w + j] + 1) {
            ops.push_back({EditKind::Delete, i - 1, j, s[i - 1], 0});
            --i;
        } else if (j > 0 && here == d[i * w + j - 1] + 1) {
            ops.push_back({EditKind::Insert, i, j - 1, 0, t[j - 1]});
            --j;
        } else {
            --i;
            --j;
        }
    }
}

inline EditOp invert(const EditOp& op) {
    switch (op.kind) {
        case EditKind::Insert: return {EditKind::Delete, op.target_position, op.position, op.to, 0};
        case EditKind::Delete: return {EditKind::Insert, op.target_position, op.position, 0, op.from};
        case EditKind::Replace: return {EditKind::Replace, op.target_position, op.position, op.to, op.from};
    }
    return op;
}

}  // namespace detail

/// Unit-cost Levenshtein distance over code points.
inline std::size_t levenshtein(std::string_view s1, std::string_view s2) {
    const auto a = text::to_u32(s1);
    const auto b = text::to_u32(s2);
    auto& d = detail::scratch_table();
    detail::fill_distance_table(a, b, d);
    return d.back();
}

/// Code-point core of edit_script: replaces `ops` with the script turning `a`
/// into `b`.
///
/// The alignment is always computed on the code-point-ordered pair and
/// inverted when needed, so (a, b) and (b, a) describe the same alignment and
/// carry equal subtype multisets.
inline void edit_ops(std::u32string_view a, std::u32string_view b, std::vector<EditOp>& ops) {
    ops.clear();
    if (b < a) {
        detail::backtrace_reversed(b, a, ops);
        for (EditOp& op : ops) op = detail::invert(op);
    } else {
        detail::backtrace_reversed(a, b, ops);
    }
    std::reverse(ops.begin(), ops.end());
}

/// Minimal categorized edit script turning `s1` into `s2`.
inline EditScript edit_script(std::string_view s1, std::string_view s2) {
    EditScript script{std::string(s1), std::string(s2), {}};
    edit_ops(text::to_u32(s1), text::to_u32(s2), script.ops);
    return script;
}

/// Replays `ops` (as produced by edit_script) on `source`.
inline std::string apply(std::span<const EditOp> ops, std::string_view source) {
    std::u32string s = text::to_u32(source);
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        const EditOp& op = *it;
        switch (op.kind) {
            case EditKind::Insert:
                if (op.position > s.size()) throw std::out_of_range("insert position past end of word");
                s.insert(s.begin() + static_cast<std::ptrdiff_t>(op.position), op.to);
                break;
            case EditKind::Delete:
                if (op.position >= s.size() || s[op.position] != op.from)
                    throw std::out_of_range("delete does not match source character");
                s.erase(s.begin() + static_cast<std::ptrdiff_t>(op.position));
                break;
            case EditKind::Replace:
                if (op.position >= s.size() || s[op.position] != op.from)
                    throw std::out_of_range("replace does not match source character");
                s[op.position] = op.to;
                break;
        }
    }
    return text::to_utf8(s);
}

inline std::string apply(const EditScript& script) { return editops::apply(std::span<const EditOp>(script.ops), script.source); }

/// A canonical word plus its observed alternative spellings.
struct VariantGroup {
    std::string canonical;
    std::optional<std::uint64_t> canonical_count;
    std::vector<std::pair<std::string, std::uint64_t>> variants;

    friend bool operator==(const VariantGroup&, const VariantGroup&) = default;
};

enum class CharClass { Vowel, H, N, Other };

inline CharClass classify_char(char32_t c) {
    switch (c) {
        case U'a': case U'e': case U'i': case U'o': case U'u': return CharClass::Vowel;
        case U'h': return CharClass::H;
        case U'n': return CharClass::N;
        default: return CharClass::Other;
    }
}

inline std::string_view to_string(CharClass c) {
    switch (c) {
        case CharClass::Vowel: return "vowel";
        case CharClass::H: return "h";
        case CharClass::N: return "n";
        case CharClass::Other: return "other";
    }
    return "other";
}

enum class Pairing { CanonicalVsVariant, AllPairs };
enum class Weighting { Unweighted, MinCount };

struct DistributionOptions {
    Pairing pairing = Pairing::CanonicalVsVariant;
    Weighting weighting = Weighting::Unweighted;
};

struct OpDistribution {
    std::uint64_t total_ops = 0;
    std::uint64_t adddelete_ops = 0;
    std::uint64_t replace_ops = 0;
    std::uint64_t pairs_compared = 0;
    std::map<char32_t, std::uint64_t> adddelete_by_char;
    std::map<std::pair<char32_t, char32_t>, std::uint64_t> replace_by_pair;
    std::map<CharClass, std::uint64_t> adddelete_by_class;
    std::map<std::size_t, std::uint64_t> pairs_by_distance;
    std::map<std::size_t, std::uint64_t> groups_by_spelling_count;  // canonical + variants
    std::vector<std::string> warnings;

    double adddelete_share() const { return total_ops ? double(adddelete_ops) / double(total_ops) : 0.0; }
    double replace_share() const { return total_ops ? double(replace_ops) / double(total_ops) : 0.0; }

    /// Share of AddDelete ops whose character is a vowel, 'h' or 'n'.
    double vowel_hn_share_of_adddelete() const {
        if (!adddelete_ops) return 0.0;
        std::uint64_t other = adddelete_by_class.contains(CharClass::Other) ? adddelete_by_class.at(CharClass::Other) : 0;
        return double(adddelete_ops - other) / double(adddelete_ops);
    }

    double pair_share_of_replace(char32_t a, char32_t b) const {
        if (!replace_ops) return 0.0;
        auto it = replace_by_pair.find(std::minmax(a, b));
        return it == replace_by_pair.end() ? 0.0 : double(it->second) / double(replace_ops);
    }

    std::uint64_t count(const OpSubtype& sub) const {
        if (sub.category == OpCategory::AddDelete) {
            auto it = adddelete_by_char.find(sub.a);
            return it == adddelete_by_char.end() ? 0 : it->second;
        }
        auto it = replace_by_pair.find({sub.a, sub.b});
        return it == replace_by_pair.end() ? 0 : it->second;
    }

    std::size_t observed_subtypes() const { return adddelete_by_char.size() + replace_by_pair.size(); }

    void add(const EditScript& script, std::uint64_t weight = 1) {
        ++pairs_by_distance[script.ops.size()];
        ++pairs_compared;
        for (const EditOp& op : script.ops) {
            total_ops += weight;
            if (op.category() == OpCategory::AddDelete) {
                adddelete_ops += weight;
                adddelete_by_char[op.changed_char()] += weight;
                adddelete_by_class[classify_char(op.changed_char())] += weight;
            } else {
                replace_ops += weight;
                replace_by_pair[op.pair()] += weight;
            }
        }
    }
};

/// Aggregates edit scripts over the word pairs of every group.
///
/// CanonicalVsVariant compares the canonical spelling with each variant;
/// AllPairs additionally compares every unordered variant/variant pair. Each
/// pair is counted once, or weighted by the smaller usage count under
/// Weighting::MinCount (a canonical without a count never limits the minimum).
inline OpDistribution op_distribution(std::span<const VariantGroup> groups, const DistributionOptions& options = {}) {
    if (groups.empty()) throw std::invalid_argument("op_distribution needs at least one variant group");
    OpDistribution dist;
    for (const VariantGroup& g : groups) {
        if (g.variants.empty()) {
            dist.warnings.push_back("group '" + g.canonical + "' has no variants; skipped");
            continue;
        }
        ++dist.groups_by_spelling_count[g.variants.size() + 1];
        auto weight = [&](std::optional<std::uint64_t> c1, std::optional<std::uint64_t> c2) -> std::uint64_t {
            if (options.weighting == Weighting::Unweighted) return 1;
            if (c1 && c2) return std::min(*c1, *c2);
            if (c1) return *c1;
            if (c2) return *c2;
            return 1;
        };
        for (const auto& [word, count] : g.variants) {
            dist.add(edit_script(g.canonical, word), weight(g.canonical_count, count));
        }
        if (options.pairing == Pairing::AllPairs) {
            for (std::size_t i = 0; i < g.variants.size(); ++i) {
                for (std::size_t j = i + 1; j < g.variants.size(); ++j) {
                    dist.add(edit_script(g.variants[i].first, g.variants[j].first),
                             weight(g.variants[i].second, g.variants[j].second));
                }
            }
        }
    }
    return dist;
}

struct ScoreOptions {
    double length_penalty = std::log(20.0);  // subtracted per op
};

/// Log-likelihood that two spellings are the same word.
///
/// Each op contributes log P(subtype) with add-one smoothing over the observed
/// subtypes plus one bucket for unseen subtypes, minus a per-op length
/// penalty. Identical words score 0; larger is more likely the same word.
inline double same_word_score(std::string_view s1, std::string_view s2, const OpDistribution& dist,
                              const ScoreOptions& options = {}) {
    if (dist.total_ops == 0) throw std::invalid_argument("same_word_score needs a distribution with total_ops > 0");
    const double denom = double(dist.total_ops) + double(dist.observed_subtypes() + 1);
    double score = 0.0;
    for (const EditOp& op : edit_script(s1, s2).ops) {
        score += std::log((double(dist.count(OpSubtype::of(op))) + 1.0) / denom) - options.length_penalty;
    }
    return score;
}

inline bool classify_same_word(std::string_view s1, std::string_view s2, const OpDistribution& dist, double threshold,
                               const ScoreOptions& options = {}) {
    return same_word_score(s1, s2, dist, options) >= threshold;
}

struct LabeledPair {
    std::string first;
    std::string second;
    bool same = false;
};

struct ClassifierMetrics {
    double threshold = 0.0;
    std::size_t true_pos = 0;
    std::size_t false_pos = 0;
    std::size_t false_neg = 0;
    std::size_t true_neg = 0;

    double precision() const { return true_pos + false_pos ? double(true_pos) / double(true_pos + false_pos) : 0.0; }
    double recall() const { return true_pos + false_neg ? double(true_pos) / double(true_pos + false_neg) : 0.0; }
    double f1() const {
        const double p = precision(), r = recall();
        return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    }
};

inline ClassifierMetrics evaluate(std::span<const LabeledPair> pairs, const OpDistribution& dist, double threshold,
                                  const ScoreOptions& options = {}) {
    ClassifierMetrics m;
    m.threshold = threshold;
    for (const auto& p : pairs) {
        const bool predicted = classify_same_word(p.first, p.second, dist, threshold, options);
        if (predicted && p.same) ++m.true_pos;
        else if (predicted) ++m.false_pos;
        else if (p.same) ++m.false_neg;
        else ++m.true_neg;
    }
    return m;
}

/// Grid search over the midpoints between distinct observed scores; returns
/// the threshold with the best F1 (ties go to the higher threshold).
inline ClassifierMetrics fit_threshold(std::span<const LabeledPair> pairs, const OpDistribution& dist,
                                       const ScoreOptions& options = {}) {
    if (pairs.empty()) throw std::invalid_argument("fit_threshold needs labeled pairs");
    std::vector<double> scores;
    scores.reserve(pairs.size());
    for (const auto& p : pairs) scores.push_back(same_word_score(p.first, p.second, dist, options));
    std::sort(scores.begin(), scores.end());
    scores.erase(std::unique(scores.begin(), scores.end()), scores.end());
    std::vector<double> candidates{scores.front() - 1.0};
    for (std::size_t i = 0; i + 1 < scores.size(); ++i) candidates.push_back((scores[i] + scores[i + 1]) / 2.0);
    candidates.push_back(scores.back());
    ClassifierMetrics best = evaluate(pairs, dist, candidates.front(), options);
    for (double c : candidates) {
        ClassifierMetrics m = evaluate(pairs, dist, c, options);
        if (m.f1() >= best.f1()) best = m;
    }
    return best;
}

/// Positive pairs are (canonical, variant) within a group; negatives pair the
/// canonical of one group with a spelling drawn from a different group.
inline std::vector<LabeledPair> labeled_pairs(std::span<const VariantGroup> groups, std::uint64_t seed) {
    std::vector<LabeledPair> out;
    std::vector<const VariantGroup*> usable;
    for (const auto& g : groups)
        if (!g.variants.empty()) usable.push_back(&g);
    for (const VariantGroup* g : usable)
        for (const auto& v : g->variants) out.push_back({g->canonical, v.first, true});
    if (usable.size() < 2) return out;
    Rng rng(seed);
    const std::size_t positives = out.size();
    for (std::size_t k = 0; k < positives; ++k) {
        const std::size_t i = rng.below(usable.size());
        std::size_t j = rng.below(usable.size() - 1);
        if (j >= i) ++j;
        const VariantGroup& other = *usable[j];
        const std::size_t pick = rng.below(other.variants.size() + 1);
        const std::string& word = pick == 0 ? other.canonical : other.variants[pick - 1].first;
        if (word != usable[i]->canonical) out.push_back({usable[i]->canonical, word, false});
    }
    return out;
}

}  // namespace ruqa::editops
