#include <gtest/gtest.h>

#include <sstream>
#include <tuple>

#include "ruqa/corpus/io.hpp"
#include "ruqa/corpus/synthetic.hpp"
#include "temp_dir.hpp"

using namespace ruqa::corpus;
using ruqa::testing::read_file;
using ruqa::testing::TempDir;
using ruqa::testing::write_file;

namespace {

constexpr const char* kEvents =
    "ego,alter,direction,timestamp_epoch_min,utc_offset_min,token_count\n"
    "E001,A1,sent,1000,300,3\n"
    "E001,A1,received,1010,300,2\n"
    "E001,A2,sent,1020,300,1\n";

constexpr const char* kWords =
    "ego,alter,direction,word,count,language\n"
    "E001,A1,sent,kya,2,ru\n"
    "E001,A1,received,the,1,en\n";

}  // namespace

TEST(CorpusIo, LoadsSmallFixture) {
    TempDir dir;
    write_file(dir / "events.csv", kEvents);
    write_file(dir / "words.csv", kWords);
    const auto r = load_corpus(dir.path());
    EXPECT_TRUE(r.report.clean());
    ASSERT_EQ(r.corpus.events.size(), 3u);
    ASSERT_EQ(r.corpus.words.size(), 2u);
    EXPECT_TRUE(r.corpus.bigrams.empty());
    EXPECT_EQ(r.corpus.events[1].direction, Direction::Received);
    EXPECT_EQ(r.corpus.events[0].local_hour(), (1000 + 300) / 60);
    // Rows are ordered by the direction's text, so "received" comes first.
    EXPECT_EQ(r.corpus.words[0].word, "the");
    EXPECT_EQ(r.corpus.words[1].word, "kya");
    EXPECT_EQ(r.corpus.words[1].language, Language::RomanUrdu);
    EXPECT_EQ(r.report.events, 3u);
    EXPECT_EQ(r.report.words, 2u);
}

TEST(CorpusIo, NegativeTokenCountIsRejectedWithLineNumber) {
    TempDir dir;
    write_file(dir / "events.csv", std::string(kEvents) + "E001,A2,sent,1030,300,-1\n");
    write_file(dir / "words.csv", kWords);
    const auto r = load_corpus(dir.path());
    ASSERT_EQ(r.report.errors.size(), 1u);
    EXPECT_EQ(r.report.errors[0].file, "events.csv");
    EXPECT_EQ(r.report.errors[0].line, 5u);
    EXPECT_EQ(r.corpus.events.size(), 3u);
}

TEST(CorpusIo, HeaderOnlyTablesGiveEmptyCorpus) {
    TempDir dir;
    write_file(dir / "events.csv", std::string(kEventsHeader) + "\n");
    write_file(dir / "words.csv", std::string(kWordsHeader) + "\n");
    const auto r = load_corpus(dir.path());
    EXPECT_TRUE(r.report.clean());
    EXPECT_TRUE(r.corpus.events.empty());
    EXPECT_TRUE(r.corpus.words.empty());
}

TEST(CorpusIo, MissingRequiredFileOrColumnIsFatal) {
    TempDir dir;
    write_file(dir / "events.csv", kEvents);
    EXPECT_THROW(load_corpus(dir.path()), CorpusError);
    write_file(dir / "words.csv", "ego,alter,word,count\nE001,A1,kya,1\n");
    EXPECT_THROW(load_corpus(dir.path()), CorpusError);
    EXPECT_THROW(load_corpus(dir / "nope"), CorpusError);
}

TEST(CorpusIo, RejectsBadRows) {
    TempDir dir;
    write_file(dir / "events.csv",
               std::string(kEvents) + "E001,A1,sideways,1,0,1\nE001,03001234567,sent,1,0,1\nE001,A1,sent,x,0,1\n"
                                      "E001,A1,sent,1,0\n");
    write_file(dir / "words.csv", std::string(kWords) + "E001,A1,sent,kya,0,ru\nE001,A1,sent,,1,ru\n");
    const auto r = load_corpus(dir.path());
    EXPECT_EQ(r.report.errors.size(), 6u);
    EXPECT_EQ(r.corpus.events.size(), 3u);
    EXPECT_EQ(r.corpus.words.size(), 2u);
}

TEST(CorpusIo, OrphanWordsAreWarnings) {
    TempDir dir;
    write_file(dir / "events.csv", kEvents);
    write_file(dir / "words.csv", std::string(kWords) + "E009,A1,sent,hai,1,ru\nE001,A7,sent,hai,1,ru\n");
    const auto r = load_corpus(dir.path());
    EXPECT_TRUE(r.report.clean());
    EXPECT_EQ(r.report.warnings.size(), 2u);
}

TEST(CorpusIo, SaveLoadRoundTripIsExact) {
    SyntheticConfig config;
    config.egos = 4;
    config.alters_per_ego = 3;
    config.words_per_direction = 40;
    config.events_per_direction = 10;
    Corpus c = generate_synthetic(config, 7);
    c.variant_groups = {{"acha", 3, {{"achha", 1}, {"accha", 2}}}, {"nahi", std::nullopt, {{"nahin", 2}}}};

    TempDir dir;
    save_corpus(c, dir.path());
    const auto r = load_corpus(dir.path());
    EXPECT_TRUE(r.report.clean());
    EXPECT_TRUE(r.corpus == c);

    TempDir again;
    save_corpus(r.corpus, again.path());
    for (const char* f : {"events.csv", "words.csv", "bigrams.csv", "variants.tsv", "lexicon.en.txt"})
        EXPECT_EQ(read_file(dir / f), read_file(again / f)) << f;
}

TEST(CorpusIo, ExportsAreStrictlySorted) {
    std::vector<WordUsage> words = {{"E2", "A1", "zz", Direction::Sent, 1, Language::Unknown},
                                    {"E1", "A2", "b", Direction::Received, 2, Language::English},
                                    {"E1", "A2", "b", Direction::Received, 3, Language::English},
                                    {"E1", "A1", "a", Direction::Sent, 1, Language::RomanUrdu}};
    canonicalize_words(words);
    ASSERT_EQ(words.size(), 3u);
    EXPECT_EQ(words[1].count, 5u);
    for (std::size_t i = 1; i < words.size(); ++i) {
        EXPECT_LT(std::make_tuple(words[i - 1].ego, words[i - 1].alter, to_string(words[i - 1].direction), words[i - 1].word),
                  std::make_tuple(words[i].ego, words[i].alter, to_string(words[i].direction), words[i].word));
    }

    std::vector<BigramUsage> bigrams = {{"E1", "b", "a", 1}, {"E1", "a", "b", 1}, {"E1", "a", "b", 4}};
    std::ostringstream out;
    write_bigrams_csv(bigrams, out);
    EXPECT_EQ(out.str(), "ego,first,second,count\nE1,a,b,5\nE1,b,a,1\n");
}

TEST(CorpusIo, CsvQuotingRoundTrips) {
    EXPECT_EQ(csv_row({"a", "b,c", "say \"hi\""}), "a,\"b,c\",\"say \"\"hi\"\"\"");
    const auto fields = parse_csv_line("a,\"b,c\",\"say \"\"hi\"\"\"");
    ASSERT_EQ(fields.size(), 3u);
    EXPECT_EQ(fields[1], "b,c");
    EXPECT_EQ(fields[2], "say \"hi\"");
}

TEST(CorpusIo, ReadsJsonl) {
    TempDir dir;
    write_file(dir / "events.jsonl",
               "{\"ego\":\"E001\",\"alter\":\"A1\",\"direction\":\"sent\",\"timestamp_epoch_min\":5,"
               "\"utc_offset_min\":0,\"token_count\":2}\n"
               "not json\n");
    write_file(dir / "words.csv", std::string(kWordsHeader) + "\n");
    const auto r = load_corpus(dir.path());
    ASSERT_EQ(r.corpus.events.size(), 1u);
    EXPECT_EQ(r.corpus.events[0].timestamp_epoch_min, 5);
    ASSERT_EQ(r.report.errors.size(), 1u);
    EXPECT_EQ(r.report.errors[0].line, 2u);
}

TEST(CorpusIo, ImportWithMappingRenamesAndDefaults) {
    TempDir dir;
    write_file(dir / "msgs.tsv", "user\tpeer\tdir\tminute\ttokens\nE001\tA1\ts\t60\t4\nE001\tA1\tr\t61\t2\n");
    write_file(dir / "vocab.tsv", "user\tpeer\tdir\tterm\tn\tlang\nE001\tA1\tout\tKya\t3\tru\n");
    write_file(dir / "english.txt", "the\nyou\n");
    const nlohmann::json mapping = {
        {"events",
         {{"file", "msgs.tsv"},
          {"delimiter", "\t"},
          {"columns",
           {{"user", "ego"}, {"peer", "alter"}, {"dir", "direction"}, {"minute", "timestamp_epoch_min"},
            {"tokens", "token_count"}}},
          {"defaults", {{"utc_offset_min", 300}}}}},
        {"words",
         {{"file", "vocab.tsv"},
          {"delimiter", "\t"},
          {"columns",
           {{"user", "ego"}, {"peer", "alter"}, {"dir", "direction"}, {"term", "word"}, {"n", "count"},
            {"lang", "language"}}}}},
        {"lexicons", {{"en", "english.txt"}}}};
    const auto r = import_with_mapping(dir.path(), mapping);
    EXPECT_TRUE(r.report.clean());
    ASSERT_EQ(r.corpus.events.size(), 2u);
    EXPECT_EQ(r.corpus.events[0].utc_offset_min, 300);
    EXPECT_EQ(r.corpus.events[1].direction, Direction::Received);
    ASSERT_EQ(r.corpus.words.size(), 1u);
    EXPECT_EQ(r.corpus.words[0].word, "kya");
    ASSERT_NE(r.corpus.lexicon("en"), nullptr);
    EXPECT_TRUE(r.corpus.lexicon("en")->contains("you"));
}

TEST(CorpusIo, WordUnitShapes) {
    TempDir dir;
    write_file(dir / "plain.txt", "Kya\nhai\n\nkya\n");
    write_file(dir / "counts.csv", "word,count\nkya,3\nhai,2\n");
    write_file(dir / "egos.csv", "ego,word,count\nE1,kya,1\nE1,kya,2\nE2,kya,1\n");
    auto plain = load_word_units(dir / "plain.txt");
    ASSERT_EQ(plain.size(), 3u);
    EXPECT_EQ(plain[0].word, "kya");
    EXPECT_EQ(load_word_units(dir / "counts.csv").size(), 2u);
    auto egos = load_word_units(dir / "egos.csv");
    ASSERT_EQ(egos.size(), 2u);
    EXPECT_EQ(egos[0].count, 3u);
    auto freq = load_word_frequencies(dir / "egos.csv");
    ASSERT_EQ(freq.size(), 1u);
    EXPECT_EQ(freq[0].count, 4u);
}

TEST(CorpusIo, VariantFileParsing) {
    TempDir dir;
    write_file(dir / "v.tsv", "# comment\nacha:40\tachha:12\taccha:7\nsolo\n");
    LoadReport report;
    const auto groups = load_variants(dir / "v.tsv", report);
    ASSERT_EQ(groups.size(), 2u);
    EXPECT_TRUE(report.errors.empty());
    EXPECT_EQ(report.warnings.size(), 1u);
    EXPECT_EQ(groups[0].canonical, "acha");
    EXPECT_EQ(groups[0].canonical_count, 40u);
    ASSERT_EQ(groups[0].variants.size(), 2u);
    EXPECT_EQ(groups[0].variants[0].second, 12u);
    EXPECT_TRUE(groups[1].variants.empty());

    write_file(dir / "bad.tsv", "acha\tacha:2\n");
    EXPECT_THROW(load_variants(dir / "bad.tsv"), CorpusError);
}
