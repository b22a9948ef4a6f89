#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "ruqa/radix_tree.hpp"
#include "ruqa/random.hpp"

using ruqa::RadixTree;

namespace {

std::string random_word(ruqa::Rng& rng, std::size_t min_len, std::size_t max_len, std::string_view alphabet) {
    std::string s;
    const auto len = min_len + rng.below(max_len - min_len + 1);
    for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng.below(alphabet.size())]);
    return s;
}

// Linear-scan oracle over an explicit word -> frequency map.
std::vector<RadixTree::Completion> oracle_complete(const std::map<std::string, std::uint64_t>& words,
                                                   std::string_view prefix, std::size_t k) {
    std::vector<RadixTree::Completion> all;
    for (const auto& [w, f] : words)
        if (w.starts_with(prefix)) all.push_back({w, f});
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return a.freq != b.freq ? a.freq > b.freq : a.word < b.word;
    });
    if (all.size() > k) all.resize(k);
    return all;
}

}  // namespace

TEST(RadixTree, EmptyTree) {
    RadixTree t;
    EXPECT_FALSE(t.contains("khan"));
    EXPECT_TRUE(t.empty());
    EXPECT_TRUE(t.complete("", 5).empty());
    EXPECT_EQ(t.audit(), std::nullopt);
}

TEST(RadixTree, InsertAndContains) {
    RadixTree t;
    t.insert("khan");
    EXPECT_TRUE(t.contains("khan"));
    EXPECT_FALSE(t.contains("kha"));
    EXPECT_FALSE(t.contains("khana"));
}

TEST(RadixTree, SplitsAtSharedPrefix) {
    RadixTree t;
    t.insert("khan");
    t.insert("khana");
    EXPECT_TRUE(t.contains("khan"));
    EXPECT_TRUE(t.contains("khana"));
    EXPECT_EQ(t.node_count(), 3u);  // root, "khan", "a"
    t.insert("khabar");
    // root -> "kha" -> {"n" -> "a", "bar"}
    EXPECT_EQ(t.node_count(), 5u);
    EXPECT_FALSE(t.contains("kha"));
    EXPECT_EQ(t.audit(), std::nullopt);
}

TEST(RadixTree, RepeatedInsertAccumulatesFrequency) {
    RadixTree t;
    t.insert("khan");
    t.insert("khan");
    EXPECT_EQ(t.frequency("khan"), 2u);
    EXPECT_EQ(t.size(), 1u);
    t.insert("khan", 5);
    EXPECT_EQ(t.frequency("khan"), 7u);
}

TEST(RadixTree, RejectsEmptyWordAndNonPositiveDelta) {
    RadixTree t;
    EXPECT_THROW(t.insert(""), std::invalid_argument);
    EXPECT_THROW(t.insert("a", 0), std::invalid_argument);
    EXPECT_THROW(t.complete("a", 0), std::invalid_argument);
}

TEST(RadixTree, RankedCompletion) {
    RadixTree t;
    t.insert("khan", 5);
    t.insert("khana", 3);
    t.insert("khabar", 2);
    using C = RadixTree::Completion;
    EXPECT_EQ(t.complete("kha", 2), (std::vector<C>{{"khan", 5}, {"khana", 3}}));
    EXPECT_TRUE(t.complete("z", 5).empty());
    EXPECT_EQ(t.complete("", 10), (std::vector<C>{{"khan", 5}, {"khana", 3}, {"khabar", 2}}));
    EXPECT_EQ(t.complete("khana", 3), (std::vector<C>{{"khana", 3}}));
    EXPECT_EQ(t.complete("khanaz", 3), std::vector<C>{});
}

TEST(RadixTree, TiesBreakLexicographically) {
    RadixTree t;
    for (auto w : {"bat", "ab", "ba", "abc", "b"}) t.insert(w, 4);
    using C = RadixTree::Completion;
    EXPECT_EQ(t.complete("", 3), (std::vector<C>{{"ab", 4}, {"abc", 4}, {"b", 4}}));
}

TEST(RadixTree, NonAsciiWordsKeepByteOrder) {
    RadixTree t;
    t.insert("zed");
    t.insert("\xC3\xA9t\xC3\xA9");  // "été"
    t.insert("abc");
    std::vector<std::string> seen;
    t.for_each([&](const std::string& w, std::uint64_t) { seen.push_back(w); });
    EXPECT_EQ(seen, (std::vector<std::string>{"abc", "zed", "\xC3\xA9t\xC3\xA9"}));
    EXPECT_EQ(t.audit(), std::nullopt);
}

TEST(RadixTree, ForEachUnderPrefix) {
    RadixTree t;
    for (auto w : {"kal", "kab", "kaha", "kahan", "kya"}) t.insert(w);
    std::vector<std::string> seen;
    t.for_each("kah", [&](const std::string& w, std::uint64_t) { seen.push_back(w); });
    EXPECT_EQ(seen, (std::vector<std::string>{"kaha", "kahan"}));
}

TEST(RadixTree, AgreesWithSetOracleAndStaysCompressed) {
    ruqa::Rng rng(99);
    RadixTree t;
    std::unordered_set<std::string> oracle;
    std::map<std::string, std::uint64_t> freqs;
    for (int i = 1; i <= 10000; ++i) {
        const auto w = random_word(rng, 1, 9, "abehiknrs");
        const auto f = 1 + rng.below(20);
        t.insert(w, f);
        oracle.insert(w);
        freqs[w] += f;
        if (i % 1000 == 0) ASSERT_EQ(t.audit(), std::nullopt) << "after " << i << " inserts";
    }
    EXPECT_EQ(t.size(), oracle.size());
    for (int i = 0; i < 20000; ++i) {
        const auto probe = random_word(rng, 1, 9, "abehiknrs");
        ASSERT_EQ(t.contains(probe), oracle.contains(probe)) << probe;
    }
    for (int i = 0; i < 300; ++i) {
        const auto prefix = random_word(rng, 0, 3, "abehiknrs");
        const std::size_t k = 1 + rng.below(30);
        ASSERT_EQ(t.complete(prefix, k), oracle_complete(freqs, prefix, k)) << prefix;
    }
    // Unbounded k returns exactly the matching set.
    EXPECT_EQ(t.complete("ab", 1'000'000), oracle_complete(freqs, "ab", 1'000'000));
}
