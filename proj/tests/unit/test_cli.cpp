#include <gtest/gtest.h>

#include <sstream>

#include "ruqa/cli.hpp"
#include "temp_dir.hpp"

using ruqa::testing::read_file;
using ruqa::testing::TempDir;
using ruqa::testing::write_file;

namespace {

const std::filesystem::path kFixtures = std::filesystem::path(RUQA_SOURCE_DIR) / "data" / "fixtures";

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = ruqa::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"badcmd"}).code, 2);
    EXPECT_EQ(run({"completion-sim"}).code, 2);
    EXPECT_EQ(run({"stat", "ci", "--p", "2", "--n", "10"}).code, 2);
    EXPECT_EQ(run({"ingest", "--out", "x"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, DataErrorsExitOne) {
    TempDir dir;
    EXPECT_EQ(run({"completion-sim", "--words", (dir / "missing.csv").string()}).code, 1);
    EXPECT_EQ(run({"reciprocity", "--corpus", (dir / "nope").string()}).code, 1);
}

TEST(Cli, CompletionSimOnFixture) {
    TempDir dir;
    const auto r = run({"completion-sim", "--words", (kFixtures / "ru_words.csv").string(), "--out",
                        (dir.path().string() + "/")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto report = nlohmann::json::parse(read_file(dir / "completion.ru_words.json"));
    EXPECT_EQ(report["dataset"], "ru_words");
    EXPECT_EQ(report["completed"].get<int>() + report["not_completed"].get<int>(), report["test_size"].get<int>());
}

TEST(Cli, VariantsOnFixtureMatchesHandCount) {
    TempDir dir;
    const auto r = run({"variants", "--groups", (kFixtures / "variants.tsv").string(), "--out", dir.path().string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(read_file(dir / "opdist.json"));
    EXPECT_EQ(j["total_ops"], 23);
    EXPECT_EQ(j["adddelete_ops"], 11);
    EXPECT_EQ(j["replace_ops"], 12);
    EXPECT_EQ(j["pairs_compared"], 18);
    EXPECT_TRUE(std::filesystem::exists(dir / "fig2.plot.csv"));
}

TEST(Cli, StatSubcommands) {
    TempDir dir;
    auto r = run({"stat", "ci", "--p", "0.5", "--n", "100"});
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["half_width"].get<double>(), 0.0979981992270027, 1e-12);

    write_file(dir / "s.txt", "0.12\n0.35\n0.28\n0.41\n0.19\n0.33\n0.27\n0.38\n");
    r = run({"stat", "ttest", "--samples", (dir / "s.txt").string(), "--mu0", "0.5", "--tail", "left", "--out",
             dir.path().string()});
    ASSERT_EQ(r.code, 0) << r.err;
    j = nlohmann::json::parse(read_file(dir / "ttest.json"));
    EXPECT_NEAR(j["statistic"].get<double>(), -6.031143939898543, 1e-9);
    EXPECT_NEAR(j["p_value"].get<double>(), 0.0002628530968270586, 1e-9);
}

TEST(Cli, SynthAnalysesAreDeterministic) {
    TempDir a, b;
    for (const TempDir* d : {&a, &b}) {
        const auto corpus = (d->path() / "corpus").string();
        ASSERT_EQ(run({"synth", "--seed", "5", "--egos", "12", "--nocturnal-shift", "0.3", "--out", corpus}).code, 0);
        const auto out = d->path().string();
        EXPECT_EQ(run({"reciprocity", "--corpus", corpus, "--out", out}).code, 0);
        EXPECT_EQ(run({"textisms", "--corpus", corpus, "--out", out}).code, 0);
        EXPECT_EQ(run({"intimacy", "--corpus", corpus, "--out", out}).code, 0);
    }
    for (const char* f : {"corpus/events.csv", "corpus/words.csv", "corpus/bigrams.csv", "reciprocity.csv",
                          "reciprocity_summary.json", "textisms.json", "intimacy.csv", "fig6.plot.csv",
                          "intimacy_summary.json"}) {
        const auto x = read_file(a / f);
        EXPECT_FALSE(x.empty()) << f;
        EXPECT_EQ(x, read_file(b / f)) << f;
    }
}

TEST(Cli, ReportWithoutInputsSaysSo) {
    TempDir dir;
    const auto r = run({"report", "--from", (dir / "empty").string(), "--out", (dir / "bundle").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto md = read_file(dir / "bundle" / "report.md");
    EXPECT_NE(md.find("no inputs"), std::string::npos);
    EXPECT_FALSE(std::filesystem::exists(dir / "bundle" / "table1.csv"));
}

TEST(Cli, IngestRoundTripsAndReportsRejects) {
    TempDir dir;
    const auto src = dir / "src";
    write_file(src / "events.csv",
               "ego,alter,direction,timestamp_epoch_min,utc_offset_min,token_count\nE001,A1,sent,1,0,2\n");
    write_file(src / "words.csv", "ego,alter,direction,word,count,language\nE001,A1,sent,kya,2,unk\n");
    auto r = run({"ingest", "--corpus", src.string(), "--label", "--out", (dir / "clean").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(read_file(dir / "clean" / "words.csv").find("kya,2,ru"), std::string::npos);

    write_file(src / "events.csv", read_file(src / "events.csv") + "E001,A1,sent,1,0,-1\n");
    r = run({"ingest", "--corpus", src.string(), "--out", (dir / "bad").string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_TRUE(std::filesystem::exists(dir / "bad" / "load_report.json"));
}
