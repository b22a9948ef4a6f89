#include <gtest/gtest.h>

#include "ruqa/analytics/textisms.hpp"
#include "ruqa/corpus/lexicons.hpp"

using namespace ruqa;
using namespace ruqa::analytics;
using corpus::Direction;
using corpus::Language;

TEST(Textisms, NumericHomophones) {
    const auto table = default_homophones();
    EXPECT_TRUE(is_numeric_homophone("7", table));
    EXPECT_TRUE(is_numeric_homophone("gr8", table));
    EXPECT_TRUE(is_numeric_homophone("2day", table));
    EXPECT_FALSE(is_numeric_homophone("book", table));
    EXPECT_FALSE(is_numeric_homophone("2024", table));
    EXPECT_FALSE(is_numeric_homophone("b9", table));
    EXPECT_EQ(homophone_reading("gr8", table), "grate");
    EXPECT_EQ(homophone_reading("7", table), "saath");
}

TEST(Textisms, RepetitionDetection) {
    EXPECT_TRUE(has_repetition("yessss"));
    EXPECT_TRUE(has_repetition("hmmm"));
    EXPECT_FALSE(has_repetition("book"));
    EXPECT_FALSE(has_repetition("achha"));
}

TEST(Textisms, RepetitionCanonicalForm) {
    const auto en = corpus::builtin::english();
    const auto ru = corpus::builtin::roman_urdu();
    const std::vector<const corpus::Lexicon*> lex = {&en, &ru};
    EXPECT_EQ(canonicalize_repetition("yessss", lex), "yes");
    EXPECT_EQ(canonicalize_repetition("pleeeease", lex), "please");
    EXPECT_EQ(canonicalize_repetition("gooood", lex), "good");
    EXPECT_EQ(canonicalize_repetition("book", lex), "book");
    EXPECT_EQ(canonicalize_repetition("zzzzq", {}), "zq");
    for (const char* w : {"yessss", "gooood", "haaaan", "loooool"}) {
        const auto once = canonicalize_repetition(w, lex);
        EXPECT_EQ(canonicalize_repetition(once, lex), once) << w;
        EXPECT_FALSE(has_repetition(once)) << w;
    }
}

TEST(Textisms, ReportCountsOccurrences) {
    corpus::Corpus c;
    c.lexicons["en"] = corpus::builtin::english();
    c.words = {{"E1", "A1", "7", Direction::Sent, 3, Language::Unknown},
               {"E1", "A1", "book", Direction::Sent, 4, Language::Unknown},
               {"E1", "A1", "yessss", Direction::Received, 2, Language::Unknown},
               {"E2", "A1", "gr8", Direction::Sent, 1, Language::Unknown}};
    const auto r = detect_textisms(c);
    EXPECT_EQ(r.tokens, 10u);
    EXPECT_EQ(r.homophone_hits, 4u);
    EXPECT_EQ(r.repetition_hits, 2u);
    ASSERT_EQ(r.per_ego.size(), 2u);
    EXPECT_EQ(r.per_ego[0].homophone_hits, 3u);
    EXPECT_EQ(r.per_ego[0].repetition_examples, std::vector<std::string>{"yessss"});
    EXPECT_EQ(r.canonical_forms.at("yessss"), "yes");
    EXPECT_EQ(r.homophone_readings.at("gr8"), "grate");
}
