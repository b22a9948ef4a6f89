#pragma once

// The `ruqa` command: one subcommand per analysis, each reading plain files
// and writing deterministic CSV/JSON outputs (no timestamps, fixed ordering).
//
// Exit codes: 0 success, 1 data error, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "ruqa/analytics/intimacy.hpp"
#include "ruqa/analytics/language.hpp"
#include "ruqa/analytics/reciprocity.hpp"
#include "ruqa/analytics/textisms.hpp"
#include "ruqa/completion.hpp"
#include "ruqa/corpus/anonymize.hpp"
#include "ruqa/corpus/io.hpp"
#include "ruqa/corpus/lexicons.hpp"
#include "ruqa/corpus/synthetic.hpp"
#include "ruqa/editops.hpp"
#include "ruqa/random.hpp"
#include "ruqa/service.hpp"
#include "ruqa/stats.hpp"

namespace ruqa::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

/// Raised for bad input data; mapped to exit code 1.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string num(double v) { return fmt::format("{:.10g}", v); }

inline void write_text(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw DataError("cannot write " + path.string());
}

inline void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline std::optional<json> read_json(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    try {
        return json::parse(in);
    } catch (const json::exception&) {
        return std::nullopt;
    }
}

inline std::string utf8(char32_t c) {
    std::string s;
    text::append_utf8(s, c);
    return s;
}

inline json test_json(const std::optional<stats::TTestResult>& t) {
    if (!t) return nullptr;
    return {{"statistic", t->statistic}, {"df", t->df}, {"p_value", t->p_value}, {"tail", stats::to_string(t->tail)}};
}

/// Uses the lexicon file when given, else the corpus's own lexicon of that
/// name, else the built-in starter list.
inline void ensure_lexicon(corpus::Corpus& c, const std::string& name, const std::string& path,
                           corpus::Lexicon (*builtin)()) {
    if (!path.empty()) c.lexicons[name] = corpus::load_lexicon(path, name);
    else if (!c.lexicons.contains(name)) c.lexicons[name] = builtin();
}

inline corpus::Corpus load_checked(const std::string& dir, std::ostream& err) {
    auto result = corpus::load_corpus(dir);
    if (!result.report.clean())
        err << fmt::format("warning: {} malformed row(s) skipped while loading {}\n", result.report.errors.size(), dir);
    return std::move(result.corpus);
}

inline std::string hourly_header() {
    std::string s;
    for (int h = 0; h < 24; ++h) s += fmt::format(",h{:02d}", h);
    return s;
}

}  // namespace detail

// ------------------------------------------------------------------ ingest

struct IngestArgs {
    std::string corpus;
    std::string import_dir;
    std::string mapping;
    std::string out = "corpus";
    bool label = false;
    std::string en, ru;
};

inline int cmd_ingest(const IngestArgs& a, std::ostream& out, std::ostream& err) {
    if (a.corpus.empty() == a.import_dir.empty()) throw CLI::ValidationError("ingest", "give exactly one of --corpus or --import");
    corpus::LoadResult result;
    if (!a.import_dir.empty()) {
        std::ifstream in(a.mapping, std::ios::binary);
        if (!in) throw DataError("cannot open mapping file " + a.mapping);
        nlohmann::json mapping;
        try {
            mapping = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw DataError("mapping file is not valid JSON: " + std::string(e.what()));
        }
        result = corpus::import_with_mapping(a.import_dir, mapping);
    } else {
        result = corpus::load_corpus(a.corpus);
    }
    corpus::Corpus& c = result.corpus;
    std::size_t labeled = 0;
    if (a.label) {
        detail::ensure_lexicon(c, "en", a.en, corpus::builtin::english);
        detail::ensure_lexicon(c, "ru", a.ru, corpus::builtin::roman_urdu);
        labeled = analytics::apply_language_labels(c);
    }
    corpus::save_corpus(c, a.out);
    const fs::path report_path = fs::path(a.out) / "load_report.json";
    detail::write_json(report_path, corpus::to_json(result.report));
    out << fmt::format("ingested {} events, {} word rows, {} bigram rows, {} variant groups into {}\n", c.events.size(),
                       c.words.size(), c.bigrams.size(), c.variant_groups.size(), a.out);
    if (a.label) out << fmt::format("labeled {} word rows\n", labeled);
    for (const auto& w : result.report.warnings) err << "warning: " << w << '\n';
    if (!result.report.clean()) {
        err << fmt::format("error: {} row(s) rejected; see {}\n", result.report.errors.size(), report_path.string());
        return 1;
    }
    return 0;
}

// --------------------------------------------------------------- anonymize

struct AnonymizeArgs {
    std::string input;
    std::string ego;
    std::string salt_file;
    std::string out = "anonymized";
};

inline int cmd_anonymize(const AnonymizeArgs& a, std::ostream& out, std::ostream& err) {
    std::string salt;
    if (!a.salt_file.empty()) {
        std::ifstream in(a.salt_file, std::ios::binary);
        if (!in) throw DataError("cannot open salt file " + a.salt_file);
        std::getline(in, salt);
        salt = corpus::strip_cr(salt);
    } else if (const char* env = std::getenv("RUQA_SALT")) {
        salt = env;
    }
    if (salt.empty()) throw DataError("a non-empty salt is required (--salt-file or RUQA_SALT)");

    std::vector<corpus::RawMessage> messages;
    corpus::LoadReport report;
    auto on_row = [&](const corpus::FieldMap& row) {
        corpus::RawMessage m;
        m.contact = corpus::field(row, "contact");
        if (m.contact.empty()) throw corpus::CorpusError("empty contact");
        m.direction = corpus::parse_direction(corpus::field(row, "direction"));
        m.timestamp_epoch_min = corpus::parse_number<std::int64_t>(corpus::field(row, "timestamp_epoch_min"), "timestamp_epoch_min");
        if (row.contains("utc_offset_min"))
            m.utc_offset_min = corpus::parse_number<std::int32_t>(corpus::field(row, "utc_offset_min"), "utc_offset_min");
        m.body = corpus::field(row, "body");
        messages.push_back(std::move(m));
    };
    if (fs::path(a.input).extension() == ".jsonl") corpus::read_jsonl(a.input, report, on_row);
    else corpus::read_table(a.input, {"contact", "direction", "timestamp_epoch_min", "body"}, report, on_row);

    const std::size_t n = messages.size();
    auto data = corpus::anonymize(a.ego, std::move(messages), salt);
    fs::create_directories(a.out);
    {
        std::ostringstream s;
        corpus::write_events_csv(data.events, s);
        detail::write_text(fs::path(a.out) / "events.csv", s.str());
    }
    {
        std::ostringstream s;
        corpus::write_words_csv(data.words, s);
        detail::write_text(fs::path(a.out) / "words.csv", s.str());
    }
    {
        std::ostringstream s;
        corpus::write_bigrams_csv(data.bigrams, s);
        detail::write_text(fs::path(a.out) / "bigrams.csv", s.str());
    }
    out << fmt::format("anonymized {} messages: {} word rows, {} bigram rows in {}\n", n, data.words.size(),
                       data.bigrams.size(), a.out);
    if (!report.clean()) {
        const fs::path report_path = fs::path(a.out) / "anonymize_report.json";
        detail::write_json(report_path, corpus::to_json(report));
        err << fmt::format("error: {} input row(s) rejected; see {}\n", report.errors.size(), report_path.string());
        return 1;
    }
    return 0;
}

// ------------------------------------------------------------------- synth

struct SynthArgs {
    std::string config;
    std::uint64_t seed = 42;
    std::string out = "synthetic";
    std::optional<double> nocturnal_shift;
    std::optional<std::size_t> egos;
};

inline int cmd_synth(const SynthArgs& a, std::ostream& out, std::ostream&) {
    corpus::SyntheticConfig config;
    if (!a.config.empty()) {
        std::ifstream in(a.config, std::ios::binary);
        if (!in) throw DataError("cannot open config " + a.config);
        try {
            config = corpus::synthetic_config_from_json(nlohmann::json::parse(in));
        } catch (const nlohmann::json::exception& e) {
            throw DataError("bad synthetic config: " + std::string(e.what()));
        }
    }
    if (a.nocturnal_shift) config.nocturnal_shift = *a.nocturnal_shift;
    if (a.egos) config.egos = *a.egos;
    const corpus::Corpus c = corpus::generate_synthetic(config, a.seed);
    corpus::save_corpus(c, a.out);
    json meta;
    meta["seed"] = a.seed;
    meta["config"] = config;
    detail::write_json(fs::path(a.out) / "synth_config.json", meta);
    out << fmt::format("generated {} events and {} word rows for {} egos in {}\n", c.events.size(), c.words.size(),
                       config.egos, a.out);
    return 0;
}

// ---------------------------------------------------------------- variants

struct VariantsArgs {
    std::string groups;
    bool weighted = false;
    bool all_pairs = false;
    std::uint64_t seed = 42;
    double split = 0.8;
    std::string out = "variants";
};

inline json distribution_json(const editops::OpDistribution& d, editops::Pairing pairing, editops::Weighting weighting) {
    json j;
    j["pairing"] = pairing == editops::Pairing::AllPairs ? "all_pairs" : "canonical_vs_variant";
    j["weighting"] = weighting == editops::Weighting::MinCount ? "min_count" : "unweighted";
    j["pairs_compared"] = d.pairs_compared;
    j["total_ops"] = d.total_ops;
    j["adddelete_ops"] = d.adddelete_ops;
    j["replace_ops"] = d.replace_ops;
    j["adddelete_share"] = d.adddelete_share();
    j["replace_share"] = d.replace_share();
    j["vowel_hn_share_of_adddelete"] = d.vowel_hn_share_of_adddelete();
    j["ei_share_of_replace"] = d.pair_share_of_replace(U'e', U'i');
    return j;
}

inline int cmd_variants(const VariantsArgs& a, std::ostream& out, std::ostream& err) {
    corpus::LoadReport report;
    auto groups = corpus::load_variants(a.groups, report);
    for (const auto& e : report.errors) err << fmt::format("warning: {}:{}: {}\n", e.file, e.line, e.message);
    if (groups.empty()) throw DataError("no usable variant groups in " + a.groups);

    editops::DistributionOptions options;
    options.pairing = a.all_pairs ? editops::Pairing::AllPairs : editops::Pairing::CanonicalVsVariant;
    options.weighting = a.weighted ? editops::Weighting::MinCount : editops::Weighting::Unweighted;
    const auto dist = editops::op_distribution(groups, options);
    editops::DistributionOptions alt_options = options;
    alt_options.pairing = a.all_pairs ? editops::Pairing::CanonicalVsVariant : editops::Pairing::AllPairs;
    const auto alt = editops::op_distribution(groups, alt_options);

    json j;
    j["source"] = fs::path(a.groups).filename().string();
    j["groups"] = groups.size();
    j.update(distribution_json(dist, options.pairing, options.weighting));
    json by_char = json::object(), by_class = json::object(), by_pair = json::object(), by_dist = json::object(),
         spellings = json::object();
    for (const auto& [c, n] : dist.adddelete_by_char) by_char[detail::utf8(c)] = n;
    for (const auto& [c, n] : dist.adddelete_by_class) by_class[std::string(editops::to_string(c))] = n;
    for (const auto& [p, n] : dist.replace_by_pair) by_pair[detail::utf8(p.first) + "|" + detail::utf8(p.second)] = n;
    for (const auto& [k, n] : dist.pairs_by_distance) by_dist[std::to_string(k)] = n;
    for (const auto& [k, n] : dist.groups_by_spelling_count) spellings[std::to_string(k)] = n;
    j["adddelete_by_char"] = by_char;
    j["adddelete_by_class"] = by_class;
    j["replace_by_pair"] = by_pair;
    j["pairs_by_distance"] = by_dist;
    j["groups_by_spelling_count"] = spellings;
    j["alternate"] = distribution_json(alt, alt_options.pairing, alt_options.weighting);

    // Same-word classifier: threshold fitted on a split of the groups,
    // scored on the held-out groups.
    std::vector<editops::VariantGroup> shuffled = groups;
    Rng rng(a.seed);
    rng.shuffle(std::span<editops::VariantGroup>(shuffled));
    const auto train_n = static_cast<std::size_t>(std::llround(a.split * double(shuffled.size())));
    json classifier;
    if (train_n >= 2 && shuffled.size() - train_n >= 2) {
        std::span<const editops::VariantGroup> train(shuffled.data(), train_n);
        std::span<const editops::VariantGroup> test(shuffled.data() + train_n, shuffled.size() - train_n);
        const auto train_dist = editops::op_distribution(train, options);
        if (train_dist.total_ops > 0) {
            const auto fitted = editops::fit_threshold(editops::labeled_pairs(train, a.seed), train_dist);
            const auto held = editops::evaluate(editops::labeled_pairs(test, a.seed + 1), train_dist, fitted.threshold);
            classifier = {{"train_groups", train.size()},
                          {"test_groups", test.size()},
                          {"threshold", fitted.threshold},
                          {"train_f1", fitted.f1()},
                          {"test_precision", held.precision()},
                          {"test_recall", held.recall()},
                          {"test_f1", held.f1()}};
        }
    }
    j["classifier"] = classifier.is_null() ? json{{"skipped", "needs at least two groups on each side of the split"}}
                                           : classifier;
    json warnings = json::array();
    for (const auto& w : dist.warnings) warnings.push_back(w);
    for (const auto& e : report.errors) warnings.push_back(fmt::format("{}:{}: {}", e.file, e.line, e.message));
    j["warnings"] = warnings;

    const fs::path dir = a.out;
    detail::write_json(dir / "opdist.json", j);
    std::string csv = "subtype,count,share\n";
    auto row = [&](const std::string& label, std::uint64_t n) {
        csv += corpus::csv_row({label, std::to_string(n), detail::num(dist.total_ops ? double(n) / double(dist.total_ops) : 0.0)});
        csv += '\n';
    };
    for (const auto& [c, n] : dist.adddelete_by_char) row(editops::OpSubtype{editops::OpCategory::AddDelete, c, 0}.label(), n);
    for (const auto& [p, n] : dist.replace_by_pair)
        row(editops::OpSubtype{editops::OpCategory::Replace, p.first, p.second}.label(), n);
    detail::write_text(dir / "opdist.csv", csv);
    std::string fig2 = "spellings,words\n";
    for (const auto& [k, n] : dist.groups_by_spelling_count) fig2 += fmt::format("{},{}\n", k, n);
    detail::write_text(dir / "fig2.plot.csv", fig2);

    out << fmt::format("{} groups, {} ops: add/delete {:.2f}%, replace {:.2f}%\n", groups.size(), dist.total_ops,
                       100.0 * dist.adddelete_share(), 100.0 * dist.replace_share());
    out << fmt::format("vowel/h/n share of add/delete {:.2f}%, (e,i) share of replace {:.2f}%\n",
                       100.0 * dist.vowel_hn_share_of_adddelete(), 100.0 * dist.pair_share_of_replace(U'e', U'i'));
    return 0;
}

// ---------------------------------------------------------- completion-sim

struct CompletionArgs {
    std::string words;
    std::string train_words;
    std::string dataset;
    double split = 0.8;
    std::uint64_t seed = 42;
    std::size_t top_k = 3;
    std::size_t prefix_len = 2;
    std::string out = "report.json";
};

inline int cmd_completion(const CompletionArgs& a, std::ostream& out, std::ostream&) {
    const auto units = corpus::load_word_units(a.words);
    completion::SimulationOptions options;
    options.dataset = a.dataset.empty() ? fs::path(a.words).stem().string() : a.dataset;
    options.split = a.split;
    options.seed = a.seed;
    options.top_k = a.top_k;
    options.prefix_len = a.prefix_len;
    if (!a.train_words.empty()) {
        options.external_training = corpus::load_word_frequencies(a.train_words);
        options.training_source = fs::path(a.train_words).filename().string();
    }
    const auto report = completion::simulate(units, options);
    fs::path target = a.out;
    if (fs::is_directory(target) || a.out.ends_with('/')) target = target / ("completion." + options.dataset + ".json");
    json j = report;
    detail::write_json(target, j);
    out << fmt::format("{}: completed {} ({:.0f}%), not completed {} of {} test words -> {}\n", report.dataset,
                       report.completed, 100.0 * report.accuracy, report.not_completed, report.test_size,
                       target.string());
    return 0;
}

// ------------------------------------------------------------- reciprocity

struct ReciprocityArgs {
    std::string corpus;
    std::string en, ru;
    std::uint64_t min_words = 10;
    bool distinct = false;
    double mu0 = 0.5;
    std::string out = "reciprocity";
};

inline int cmd_reciprocity(const ReciprocityArgs& a, std::ostream& out, std::ostream& err) {
    corpus::Corpus c = detail::load_checked(a.corpus, err);
    detail::ensure_lexicon(c, "en", a.en, corpus::builtin::english);
    detail::ensure_lexicon(c, "ru", a.ru, corpus::builtin::roman_urdu);
    analytics::apply_language_labels(c);

    analytics::ReciprocityOptions options;
    options.min_words_per_direction = a.min_words;
    options.unit = a.distinct ? analytics::WordUnit::DistinctWords : analytics::WordUnit::Occurrences;
    options.mu0 = a.mu0;
    const auto summary = analytics::reciprocity(c, options);
    const fs::path dir = a.out;

    std::string csv = "ego,alter,english_sent,labeled_sent,english_received,labeled_received,p_s,p_r,p\n";
    std::string fig1 = "ego,alter,p\n";
    for (const auto& r : summary.records) {
        csv += corpus::csv_row({r.ego, r.alter, std::to_string(r.reference_sent), std::to_string(r.labeled_sent),
                                std::to_string(r.reference_received), std::to_string(r.labeled_received),
                                detail::num(r.p_s), detail::num(r.p_r), detail::num(r.p)}) +
               "\n";
        fig1 += corpus::csv_row({r.ego, r.alter, detail::num(r.p)}) + "\n";
    }
    detail::write_text(dir / "reciprocity.csv", csv);
    detail::write_text(dir / "fig1.plot.csv", fig1);

    const auto profile = analytics::language_profile(c);
    std::string lang = "ego,roman_urdu,english,unknown,roman_urdu_share,ci_half_width,ci_lo,ci_hi\n";
    auto lang_row = [&](const analytics::LanguageShare& s, const std::string& label) {
        const auto ci = s.roman_urdu_ci();
        lang += corpus::csv_row({label, std::to_string(s.roman_urdu), std::to_string(s.english),
                                 std::to_string(s.unknown), detail::num(s.roman_urdu_share()), detail::num(ci.half_width),
                                 detail::num(ci.lo), detail::num(ci.hi)}) +
                "\n";
    };
    for (const auto& s : profile.per_ego) lang_row(s, s.ego);
    lang_row(profile.overall, "ALL");
    detail::write_text(dir / "language.csv", lang);

    json j;
    j["pairs"] = summary.records.size();
    j["min_words_per_direction"] = a.min_words;
    j["unit"] = a.distinct ? "distinct_words" : "occurrences";
    j["mean_p"] = summary.mean_p;
    j["mu0"] = a.mu0;
    j["test"] = detail::test_json(summary.test);
    j["reject_null"] = summary.reject_null;
    j["roman_urdu_share"] = profile.overall.roman_urdu_share();
    j["roman_urdu_ci_half_width"] = profile.overall.roman_urdu_ci().half_width;
    j["warnings"] = summary.warnings;
    detail::write_json(dir / "reciprocity_summary.json", j);

    out << fmt::format("{} ego-alter pairs, mean p = {:.4f}", summary.records.size(), summary.mean_p);
    if (summary.test) out << fmt::format(", t = {:.4f}, df = {:.0f}, p-value = {:.3g}", summary.test->statistic,
                                         summary.test->df, summary.test->p_value);
    out << '\n';
    return 0;
}

// ---------------------------------------------------------------- textisms

struct TextismArgs {
    std::string corpus;
    std::string en, ru;
    std::string out = "textisms";
};

inline int cmd_textisms(const TextismArgs& a, std::ostream& out, std::ostream& err) {
    corpus::Corpus c = detail::load_checked(a.corpus, err);
    detail::ensure_lexicon(c, "en", a.en, corpus::builtin::english);
    detail::ensure_lexicon(c, "ru", a.ru, corpus::builtin::roman_urdu);
    const auto table = analytics::default_homophones();
    const auto report = analytics::detect_textisms(c, table);

    json j;
    j["tokens"] = report.tokens;
    j["homophone_hits"] = report.homophone_hits;
    j["repetition_hits"] = report.repetition_hits;
    json homophones = json::object();
    for (const auto& [digit, word] : table) homophones[detail::utf8(digit)] = word;
    j["homophone_table"] = homophones;
    j["per_ego"] = json::array();
    for (const auto& e : report.per_ego) {
        j["per_ego"].push_back({{"ego", e.ego},
                                {"tokens", e.tokens},
                                {"homophone_hits", e.homophone_hits},
                                {"repetition_hits", e.repetition_hits},
                                {"homophone_examples", e.homophone_examples},
                                {"repetition_examples", e.repetition_examples}});
    }
    j["homophone_readings"] = report.homophone_readings;
    j["canonical_forms"] = report.canonical_forms;
    detail::write_json(fs::path(a.out) / "textisms.json", j);
    out << fmt::format("{} tokens: {} numeric homophones, {} character repetitions\n", report.tokens,
                       report.homophone_hits, report.repetition_hits);
    return 0;
}

// ---------------------------------------------------------------- intimacy

struct IntimacyArgs {
    std::string corpus;
    std::string romantic;
    bool pooled = false;
    bool sent_only = false;
    std::uint64_t min_intimate = 5;
    std::string out = "intimacy";
};

inline int cmd_intimacy(const IntimacyArgs& a, std::ostream& out, std::ostream& err) {
    corpus::Corpus c = detail::load_checked(a.corpus, err);
    detail::ensure_lexicon(c, "romantic", a.romantic, corpus::builtin::romantic);
    const corpus::Lexicon& romantic = c.lexicons.at("romantic");
    const fs::path dir = a.out;

    const auto profiles = analytics::intimacy_groups(
        c, romantic, a.sent_only ? analytics::RomanticCount::SentOnly : analytics::RomanticCount::SentAndReceived);
    std::string csv = "ego,romantic_word_count,group,messages,night_share" + detail::hourly_header() + "\n";
    std::string fig4 = "ego,romantic_word_count,group\n";
    for (const auto& p : profiles) {
        double night = 0.0;
        for (int h = 0; h < 24; ++h)
            if (analytics::is_night_hour(h)) night += p.hourly[static_cast<std::size_t>(h)];
        csv += corpus::csv_row({p.ego, std::to_string(p.romantic_word_count), std::string(analytics::to_string(p.group)),
                                std::to_string(p.messages), detail::num(night)});
        for (double v : p.hourly) csv += "," + detail::num(v);
        csv += '\n';
        fig4 += corpus::csv_row({p.ego, std::to_string(p.romantic_word_count), std::string(analytics::to_string(p.group))}) + "\n";
    }
    detail::write_text(dir / "intimacy.csv", csv);
    detail::write_text(dir / "fig4.plot.csv", fig4);

    const auto groups = analytics::group_hourly(profiles, a.pooled);
    std::string fig5 = "hour,low,medium,high\n";
    for (std::size_t h = 0; h < 24; ++h)
        fig5 += fmt::format("{},{},{},{}\n", h, detail::num(groups[0].hourly[h]), detail::num(groups[1].hourly[h]),
                            detail::num(groups[2].hourly[h]));
    detail::write_text(dir / "fig5.plot.csv", fig5);

    json j;
    j["romantic_lexicon_size"] = romantic.entries.size();
    j["group_hourly"] = a.pooled ? "pooled" : "per_ego_mean";
    j["groups"] = json::array();
    for (const auto& g : groups)
        j["groups"].push_back({{"group", analytics::to_string(g.group)}, {"egos", g.egos}, {"night_share", g.night_share}});

    analytics::DifferenceOptions options;
    options.min_sent_intimate_words = a.min_intimate;
    int status = 0;
    try {
        const auto diff = analytics::intimate_alter_difference(c, romantic, options);
        std::string hourly = "hour,d,p_intimate,p_other\n";
        std::string fig6 = "hour,d\n";
        for (std::size_t h = 0; h < 24; ++h) {
            double pi = 0.0, pn = 0.0;
            for (const auto& e : diff.per_ego) {
                pi += e.p_intimate[h];
                pn += e.p_other[h];
            }
            pi /= double(diff.per_ego.size());
            pn /= double(diff.per_ego.size());
            hourly += fmt::format("{},{},{},{}\n", h, detail::num(diff.d[h]), detail::num(pi), detail::num(pn));
            fig6 += fmt::format("{},{}\n", h, detail::num(diff.d[h]));
        }
        detail::write_text(dir / "hourly_diff.csv", hourly);
        detail::write_text(dir / "fig6.plot.csv", fig6);
        j["qualifying_egos"] = diff.per_ego.size();
        j["window"] = {options.window_start, options.window_end};
        j["test"] = detail::test_json(diff.test);
        j["warnings"] = diff.warnings;
        out << fmt::format("{} egos grouped; {} qualify for the intimate-alter comparison", profiles.size(),
                           diff.per_ego.size());
        if (diff.test) out << fmt::format(", t = {:.4f}, p-value = {:.3g}", diff.test->statistic, diff.test->p_value);
        out << '\n';
    } catch (const std::invalid_argument& e) {
        j["qualifying_egos"] = 0;
        j["test"] = nullptr;
        j["warnings"] = {std::string(e.what())};
        err << "error: " << e.what() << '\n';
        status = 1;
    }
    detail::write_json(dir / "intimacy_summary.json", j);
    return status;
}

// -------------------------------------------------------------------- stat

struct StatArgs {
    // ttest
    std::optional<double> mean1, sd1, mean2, sd2;
    std::optional<std::size_t> n1, n2;
    std::string samples, samples2;
    double mu0 = 0.0;
    std::string tail = "two";
    bool pooled = false;
    // ci
    double p = 0.0;
    std::size_t n = 0;
    double confidence = 0.95;
    bool wilson = false;
    std::string out;
};

inline std::vector<double> read_samples(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open samples file " + path);
    std::vector<double> xs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = corpus::strip_cr(line);
        if (line.empty() || line.front() == '#') continue;
        try {
            std::size_t used = 0;
            xs.push_back(std::stod(line, &used));
            if (used != line.size()) throw std::invalid_argument(line);
        } catch (const std::exception&) {
            throw DataError(fmt::format("{}:{}: not a number", path, lineno));
        }
    }
    return xs;
}

inline int cmd_ttest(const StatArgs& a, std::ostream& out) {
    const stats::Tail tail = stats::parse_tail(a.tail);
    const auto model = a.pooled ? stats::Variance::Pooled : stats::Variance::Welch;
    json j;
    stats::TTestResult r;
    if (!a.samples.empty() && !a.samples2.empty()) {
        const auto x = read_samples(a.samples), y = read_samples(a.samples2);
        r = stats::two_sample_t(x, y, tail, model);
        j["test"] = a.pooled ? "two_sample_pooled" : "two_sample_welch";
    } else if (!a.samples.empty()) {
        r = stats::one_sample_t(read_samples(a.samples), a.mu0, tail);
        j["test"] = "one_sample";
        j["mu0"] = a.mu0;
    } else if (a.mean1 && a.sd1 && a.n1 && a.mean2 && a.sd2 && a.n2) {
        r = stats::two_sample_t_from_summary({*a.mean1, *a.sd1, *a.n1}, {*a.mean2, *a.sd2, *a.n2}, tail, model);
        j["test"] = a.pooled ? "two_sample_pooled" : "two_sample_welch";
    } else {
        throw CLI::ValidationError("stat ttest", "give --samples [--samples2] or all of --mean1 --sd1 --n1 --mean2 --sd2 --n2");
    }
    j.update(detail::test_json(r));
    const std::string text = j.dump(2) + "\n";
    if (!a.out.empty()) detail::write_text(fs::path(a.out) / "ttest.json", text);
    out << text;
    return 0;
}

inline int cmd_ci(const StatArgs& a, std::ostream& out) {
    const auto ci = a.wilson ? stats::wilson_ci(a.p, a.n, a.confidence) : stats::wald_ci(a.p, a.n, a.confidence);
    json j{{"method", a.wilson ? "wilson" : "wald"}, {"p_hat", a.p},          {"n", a.n},
           {"confidence", a.confidence},            {"half_width", ci.half_width}, {"lo", ci.lo},
           {"hi", ci.hi}};
    const std::string text = j.dump(2) + "\n";
    if (!a.out.empty()) detail::write_text(fs::path(a.out) / "ci.json", text);
    out << text;
    return 0;
}

// ------------------------------------------------------------------- serve

struct ServeArgs {
    std::string words;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string log = "sessions.jsonl";
};

inline int cmd_serve(const ServeArgs& a, std::ostream& out, std::ostream& err) {
    const auto words = corpus::load_word_frequencies(a.words);
    if (words.empty()) throw DataError("no words in " + a.words);
    const RadixTree tree = completion::build_tree(words);
    service::SuggestService svc(tree, a.log);
    httplib::Server server;
    svc.mount(server);
    out << fmt::format("serving {} words on http://{}:{} (sessions -> {})\n", tree.size(), a.host, a.port, a.log)
        << std::flush;
    if (!server.listen(a.host, a.port)) {
        err << fmt::format("error: cannot listen on {}:{}\n", a.host, a.port);
        return 1;
    }
    return 0;
}

// ------------------------------------------------------------------ report

struct ReportArgs {
    std::string from = ".";
    std::string sessions;
    std::string out = "report";
};

inline int cmd_report(const ReportArgs& a, std::ostream& out, std::ostream&) {
    const fs::path from = a.from;
    const fs::path dir = a.out;
    fs::create_directories(dir);
    std::string md = "# ruqa report\n\n";

    // Table 1: every completion report found in the input directory.
    std::vector<fs::path> jsons;
    if (fs::is_directory(from))
        for (const auto& e : fs::directory_iterator(from))
            if (e.is_regular_file() && e.path().extension() == ".json") jsons.push_back(e.path());
    std::sort(jsons.begin(), jsons.end());
    std::string table = "dataset,training_source,test_size,completed,completed_pct,not_completed,accuracy,seed\n";
    std::string table_md;
    std::size_t rows = 0;
    for (const auto& p : jsons) {
        auto j = detail::read_json(p);
        if (!j || !j->is_object() || !j->contains("completed") || !j->contains("test_size")) continue;
        const auto r = completion::report_from_json(*j);
        table += corpus::csv_row({r.dataset, r.training_source, std::to_string(r.test_size), std::to_string(r.completed),
                                  fmt::format("{:.0f}", 100.0 * r.accuracy), std::to_string(r.not_completed),
                                  detail::num(r.accuracy), std::to_string(r.seed)}) +
                 "\n";
        table_md += fmt::format("| {} | {} ({:.0f}%) | {} |\n", r.dataset, r.completed, 100.0 * r.accuracy, r.not_completed);
        ++rows;
    }
    md += "## Word completion\n\n";
    if (rows) {
        detail::write_text(dir / "table1.csv", table);
        md += "| Dataset | Words completed | Words not completed |\n|---|---|---|\n" + table_md + "\n";
    } else {
        md += "no inputs: run `ruqa completion-sim` with --out in this directory\n\n";
    }

    // Figure data produced by the analysis subcommands.
    struct Figure {
        const char* file;
        const char* title;
        const char* producer;
    };
    static constexpr Figure figures[] = {
        {"fig1.plot.csv", "Reciprocity coefficient per ego-alter pair", "reciprocity"},
        {"fig2.plot.csv", "Words by number of spellings", "variants"},
        {"fig4.plot.csv", "Romantic words per ego", "intimacy"},
        {"fig5.plot.csv", "Hourly message share by romantic group", "intimacy"},
        {"fig6.plot.csv", "Hourly difference, intimate minus other alters", "intimacy"},
    };
    md += "## Figure data\n\n";
    for (const auto& f : figures) {
        const fs::path src = from / f.file;
        if (fs::exists(src)) {
            if (!fs::exists(dir / f.file) || !fs::equivalent(src, dir / f.file))
                fs::copy_file(src, dir / f.file, fs::copy_options::overwrite_existing);
            md += fmt::format("- {}: `{}`\n", f.title, f.file);
        } else {
            md += fmt::format("- {}: no inputs (run `ruqa {}`)\n", f.title, f.producer);
        }
    }
    md += '\n';

    // Typing sessions: time per mode plus a Welch test (baseline slower).
    const fs::path sessions = a.sessions.empty() ? from / "sessions.jsonl" : fs::path(a.sessions);
    md += "## Typing sessions\n\n";
    std::ifstream in(sessions, std::ios::binary);
    std::vector<std::tuple<std::string, std::string, double>> timed;
    if (in) {
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            try {
                const auto j = nlohmann::json::parse(line);
                const auto summary = service::summarize_session(j);
                timed.emplace_back(summary.mode == service::SessionMode::Baseline ? "baseline" : "with_completion",
                                   summary.session_id, double(summary.total_ms) / 1000.0);
            } catch (const std::exception&) {
                continue;
            }
        }
    }
    if (timed.empty()) {
        md += "no inputs: no sessions.jsonl found\n";
    } else {
        std::sort(timed.begin(), timed.end());
        std::string fig3 = "mode,session_id,total_s\n";
        std::vector<double> base, with;
        for (const auto& [mode, id, s] : timed) {
            fig3 += corpus::csv_row({mode, id, detail::num(s)}) + "\n";
            (mode == "baseline" ? base : with).push_back(s);
        }
        detail::write_text(dir / "fig3.plot.csv", fig3);
        md += fmt::format("- sessions: {} baseline, {} with completion (`fig3.plot.csv`)\n", base.size(), with.size());
        try {
            const auto t = stats::two_sample_t(base, with, stats::Tail::Right);
            md += fmt::format("- mean time baseline {:.2f} s (SD {:.2f}), with completion {:.2f} s (SD {:.2f})\n",
                              stats::mean(base), stats::stddev(base), stats::mean(with), stats::stddev(with));
            md += fmt::format("- Welch t = {:.4f}, df = {:.2f}, one-sided p-value = {:.4g}\n", t.statistic, t.df, t.p_value);
        } catch (const stats::StatsError& e) {
            md += fmt::format("- t-test skipped: {}\n", e.what());
        }
    }
    md += '\n';

    // Headline numbers from the other summaries, when present.
    md += "## Summaries\n\n";
    if (auto j = detail::read_json(from / "reciprocity_summary.json")) {
        md += fmt::format("- reciprocity: {} pairs, mean p = {:.4f}\n", (*j)["pairs"].get<std::size_t>(),
                          (*j)["mean_p"].get<double>());
    } else {
        md += "- reciprocity: no inputs\n";
    }
    if (auto j = detail::read_json(from / "opdist.json")) {
        md += fmt::format("- spelling variants: add/delete share {:.4f}, replace share {:.4f}\n",
                          (*j)["adddelete_share"].get<double>(), (*j)["replace_share"].get<double>());
    } else {
        md += "- spelling variants: no inputs\n";
    }
    if (auto j = detail::read_json(from / "intimacy_summary.json"); j && (*j)["test"].is_object()) {
        md += fmt::format("- intimacy: {} qualifying egos, one-sided p-value = {:.4g}\n",
                          (*j)["qualifying_egos"].get<std::size_t>(), (*j)["test"]["p_value"].get<double>());
    } else {
        md += "- intimacy: no inputs\n";
    }
    detail::write_text(dir / "report.md", md);
    out << fmt::format("report written to {} ({} completion rows, {} sessions)\n", (dir / "report.md").string(), rows,
                       timed.size());
    return 0;
}

// --------------------------------------------------------------------- run

/// Parses `args` (without the program name) and runs the chosen subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Roman Urdu SMS corpus analytics and word completion"};
    app.name("ruqa");
    app.require_subcommand(1);

    IngestArgs ingest;
    auto* s_ingest = app.add_subcommand("ingest", "Validate a corpus directory and write the canonical layout");
    s_ingest->add_option("--corpus", ingest.corpus, "Corpus directory (events/words as CSV or JSONL)");
    auto* import_opt = s_ingest->add_option("--import", ingest.import_dir, "Source directory in a foreign layout");
    s_ingest->add_option("--mapping", ingest.mapping, "JSON column mapping for --import")->needs(import_opt);
    s_ingest->add_option("--out", ingest.out, "Output directory");
    s_ingest->add_flag("--label", ingest.label, "Fill unknown language labels from the lexicons");
    s_ingest->add_option("--en", ingest.en, "English lexicon file");
    s_ingest->add_option("--ru", ingest.ru, "Roman Urdu lexicon file");

    AnonymizeArgs anon;
    auto* s_anon = app.add_subcommand("anonymize", "Pseudonymize raw messages into count tables");
    s_anon->add_option("--input", anon.input, "Raw messages (CSV or JSONL)")->required();
    s_anon->add_option("--ego", anon.ego, "Ego code for this message log")->required();
    s_anon->add_option("--salt-file", anon.salt_file, "File holding the secret salt (else $RUQA_SALT)");
    s_anon->add_option("--out", anon.out, "Output directory");

    SynthArgs synth;
    auto* s_synth = app.add_subcommand("synth", "Generate a synthetic corpus with planted effects");
    s_synth->add_option("--config", synth.config, "Synthetic config JSON");
    s_synth->add_option("--seed", synth.seed, "Random seed");
    s_synth->add_option("--out", synth.out, "Output directory");
    s_synth->add_option("--nocturnal-shift", synth.nocturnal_shift, "Override the planted nocturnal shift")
        ->check(CLI::Range(0.0, 1.0));
    s_synth->add_option("--egos", synth.egos, "Override the ego count");

    VariantsArgs variants;
    auto* s_var = app.add_subcommand("variants", "Edit-operation distribution over spelling-variant groups");
    s_var->add_option("--groups", variants.groups, "variants.tsv file")->required();
    s_var->add_flag("--weighted", variants.weighted, "Weight each pair by the smaller usage count");
    s_var->add_flag("--all-pairs", variants.all_pairs, "Also compare variant/variant pairs");
    s_var->add_option("--seed", variants.seed, "Seed for the classifier split");
    s_var->add_option("--split", variants.split, "Training fraction for the classifier")->check(CLI::Range(0.0, 1.0));
    s_var->add_option("--out", variants.out, "Output directory");

    CompletionArgs comp;
    auto* s_comp = app.add_subcommand("completion-sim", "Radix-tree word completion simulation");
    s_comp->add_option("--words", comp.words, "Word file (words.csv layout, word,count, or one word per line)")->required();
    s_comp->add_option("--train-words", comp.train_words, "Build the tree from this list instead of the training split");
    s_comp->add_option("--dataset", comp.dataset, "Dataset name for the report");
    s_comp->add_option("--split", comp.split, "Training fraction")->check(CLI::Range(0.0, 1.0));
    s_comp->add_option("--seed", comp.seed, "Shuffle seed");
    s_comp->add_option("--top-k", comp.top_k, "k for the secondary top-k metric");
    s_comp->add_option("--prefix-len", comp.prefix_len, "Typed prefix length for the secondary metric");
    s_comp->add_option("--out", comp.out, "Report file, or a directory for completion.<dataset>.json");

    ReciprocityArgs recip;
    auto* s_recip = app.add_subcommand("reciprocity", "Language reciprocity per ego-alter pair");
    s_recip->add_option("--corpus", recip.corpus, "Corpus directory")->required();
    s_recip->add_option("--en", recip.en, "English lexicon file");
    s_recip->add_option("--ru", recip.ru, "Roman Urdu lexicon file");
    s_recip->add_option("--min-words", recip.min_words, "Labeled words required in each direction");
    s_recip->add_flag("--distinct", recip.distinct, "Count distinct words instead of occurrences");
    s_recip->add_option("--mu0", recip.mu0, "Null-hypothesis mean");
    s_recip->add_option("--out", recip.out, "Output directory");

    TextismArgs texts;
    auto* s_text = app.add_subcommand("textisms", "Numeric homophones and character repetitions");
    s_text->add_option("--corpus", texts.corpus, "Corpus directory")->required();
    s_text->add_option("--en", texts.en, "English lexicon file");
    s_text->add_option("--ru", texts.ru, "Roman Urdu lexicon file");
    s_text->add_option("--out", texts.out, "Output directory");

    IntimacyArgs intim;
    auto* s_intim = app.add_subcommand("intimacy", "Romantic-word groups and intimate-alter timing");
    s_intim->add_option("--corpus", intim.corpus, "Corpus directory")->required();
    s_intim->add_option("--romantic", intim.romantic, "Romantic lexicon file");
    s_intim->add_flag("--pooled", intim.pooled, "Pool messages within a group instead of averaging egos");
    s_intim->add_flag("--sent-only", intim.sent_only, "Count only sent romantic words for grouping");
    s_intim->add_option("--min-intimate", intim.min_intimate, "Romantic words marking an intimate alter");
    s_intim->add_option("--out", intim.out, "Output directory");

    StatArgs st;
    auto* s_stat = app.add_subcommand("stat", "Ad-hoc statistics");
    s_stat->require_subcommand(1);
    auto* s_ttest = s_stat->add_subcommand("ttest", "t-test from samples or summary statistics");
    s_ttest->add_option("--samples", st.samples, "Sample file, one number per line");
    s_ttest->add_option("--samples2", st.samples2, "Second sample file (two-sample test)");
    s_ttest->add_option("--mu0", st.mu0, "Null mean for the one-sample test");
    s_ttest->add_option("--mean1", st.mean1);
    s_ttest->add_option("--sd1", st.sd1);
    s_ttest->add_option("--n1", st.n1);
    s_ttest->add_option("--mean2", st.mean2);
    s_ttest->add_option("--sd2", st.sd2);
    s_ttest->add_option("--n2", st.n2);
    s_ttest->add_option("--tail", st.tail, "left, right or two")->check(CLI::IsMember({"left", "right", "two"}));
    s_ttest->add_flag("--pooled", st.pooled, "Pooled-variance two-sample test instead of Welch");
    s_ttest->add_option("--out", st.out, "Also write ttest.json into this directory");
    auto* s_ci = s_stat->add_subcommand("ci", "Confidence interval for a proportion");
    s_ci->add_option("--p", st.p, "Observed proportion")->required()->check(CLI::Range(0.0, 1.0));
    s_ci->add_option("--n", st.n, "Sample size")->required()->check(CLI::PositiveNumber);
    s_ci->add_option("--confidence", st.confidence, "Confidence level");
    s_ci->add_flag("--wilson", st.wilson, "Wilson score interval instead of Wald");
    s_ci->add_option("--out", st.out, "Also write ci.json into this directory");

    ServeArgs serve;
    auto* s_serve = app.add_subcommand("serve", "HTTP completion service");
    s_serve->add_option("--words", serve.words, "Word frequency file")->required();
    s_serve->add_option("--host", serve.host, "Bind address");
    s_serve->add_option("--port", serve.port, "Port")->check(CLI::Range(0, 65535));
    s_serve->add_option("--log", serve.log, "Append-only session log (JSONL)");

    ReportArgs report;
    auto* s_report = app.add_subcommand("report", "Collect outputs into a report bundle");
    s_report->add_option("--from", report.from, "Directory holding earlier outputs");
    s_report->add_option("--sessions", report.sessions, "Session log (default <from>/sessions.jsonl)");
    s_report->add_option("--out", report.out, "Bundle directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (*s_ingest) return cmd_ingest(ingest, out, err);
        if (*s_anon) return cmd_anonymize(anon, out, err);
        if (*s_synth) return cmd_synth(synth, out, err);
        if (*s_var) return cmd_variants(variants, out, err);
        if (*s_comp) return cmd_completion(comp, out, err);
        if (*s_recip) return cmd_reciprocity(recip, out, err);
        if (*s_text) return cmd_textisms(texts, out, err);
        if (*s_intim) return cmd_intimacy(intim, out, err);
        if (*s_ttest) return cmd_ttest(st, out);
        if (*s_ci) return cmd_ci(st, out);
        if (*s_serve) return cmd_serve(serve, out, err);
        if (*s_report) return cmd_report(report, out, err);
    } catch (const CLI::ValidationError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace ruqa::cli
