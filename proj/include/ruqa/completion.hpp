#pragma once

// Train/test word-completion simulation over a radix tree.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ruqa/radix_tree.hpp"
#include "ruqa/random.hpp"
#include "ruqa/text.hpp"

namespace ruqa::completion {

/// One simulation unit. The same word may appear several times when the
/// source lists each user's vocabulary separately.
struct WordCount {
    std::string word;
    std::uint64_t count = 1;
    friend auto operator<=>(const WordCount&, const WordCount&) = default;
};

struct SimulationOptions {
    std::string dataset = "dataset";
    double split = 0.8;
    std::uint64_t seed = 42;
    /// When set, the tree is built from these words instead of the training
    /// split; the test split still comes from the simulated word list.
    std::optional<std::vector<WordCount>> external_training;
    std::string training_source = "train-split";
    // Secondary metric: word shows up in complete(first prefix_len chars, top_k).
    std::size_t top_k = 3;
    std::size_t prefix_len = 2;
};

struct CompletionReport {
    std::string dataset;
    std::string training_source;
    double split = 0.8;
    std::uint64_t seed = 42;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    std::size_t completed = 0;
    std::size_t not_completed = 0;
    double accuracy = 0.0;
    std::size_t top_k = 3;
    std::size_t prefix_len = 2;
    std::size_t topk_completed = 0;
    double topk_accuracy = 0.0;
};

inline void to_json(nlohmann::ordered_json& j, const CompletionReport& r) {
    j = nlohmann::ordered_json{{"dataset", r.dataset},
                               {"training_source", r.training_source},
                               {"split", r.split},
                               {"seed", r.seed},
                               {"train_size", r.train_size},
                               {"test_size", r.test_size},
                               {"completed", r.completed},
                               {"not_completed", r.not_completed},
                               {"accuracy", r.accuracy},
                               {"top_k", r.top_k},
                               {"prefix_len", r.prefix_len},
                               {"topk_completed", r.topk_completed},
                               {"topk_accuracy", r.topk_accuracy}};
}

inline CompletionReport report_from_json(const nlohmann::json& j) {
    CompletionReport r;
    r.dataset = j.at("dataset").get<std::string>();
    r.training_source = j.value("training_source", std::string("train-split"));
    r.split = j.value("split", 0.8);
    r.seed = j.value("seed", std::uint64_t{42});
    r.train_size = j.at("train_size").get<std::size_t>();
    r.test_size = j.at("test_size").get<std::size_t>();
    r.completed = j.at("completed").get<std::size_t>();
    r.not_completed = j.at("not_completed").get<std::size_t>();
    r.accuracy = j.at("accuracy").get<double>();
    r.top_k = j.value("top_k", std::size_t{3});
    r.prefix_len = j.value("prefix_len", std::size_t{2});
    r.topk_completed = j.value("topk_completed", std::size_t{0});
    r.topk_accuracy = j.value("topk_accuracy", 0.0);
    return r;
}

inline RadixTree build_tree(std::span<const WordCount> words) {
    RadixTree tree;
    for (const auto& w : words) {
        if (!w.word.empty() && w.count > 0) tree.insert(w.word, w.count);
    }
    return tree;
}

inline std::string utf8_prefix(const std::string& word, std::size_t code_points) {
    std::size_t seen = 0;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if ((static_cast<unsigned char>(word[i]) & 0xC0) != 0x80) {
            if (seen == code_points) return word.substr(0, i);
            ++seen;
        }
    }
    return word;
}

/// Shuffles the units with a seeded generator, splits them, builds a tree from
/// the training part (or the external list) and counts a test word as
/// completed when the tree contains it.
inline CompletionReport simulate(std::span<const WordCount> words, const SimulationOptions& options) {
    if (!(options.split > 0.0 && options.split < 1.0)) throw std::invalid_argument("split must lie in (0, 1)");
    std::set<std::string> distinct;
    for (const auto& w : words) distinct.insert(w.word);
    if (distinct.size() < 5) throw std::invalid_argument("simulation needs at least 5 unique words");

    std::vector<WordCount> units(words.begin(), words.end());
    std::sort(units.begin(), units.end());
    Rng rng(options.seed);
    rng.shuffle(std::span<WordCount>(units));

    const std::size_t n = units.size();
    auto train_n = static_cast<std::size_t>(std::llround(options.split * static_cast<double>(n)));
    train_n = std::clamp<std::size_t>(train_n, 1, n - 1);
    std::span<const WordCount> train(units.data(), train_n);
    std::span<const WordCount> test(units.data() + train_n, n - train_n);

    const RadixTree tree =
        options.external_training ? build_tree(*options.external_training) : build_tree(train);

    CompletionReport r;
    r.dataset = options.dataset;
    r.training_source = options.external_training ? options.training_source : "train-split";
    r.split = options.split;
    r.seed = options.seed;
    r.train_size = options.external_training ? options.external_training->size() : train.size();
    r.test_size = test.size();
    r.top_k = options.top_k;
    r.prefix_len = options.prefix_len;
    for (const auto& w : test) {
        if (tree.contains(w.word)) ++r.completed;
        else ++r.not_completed;
        if (options.top_k > 0) {
            for (const auto& c : tree.complete(utf8_prefix(w.word, options.prefix_len), options.top_k)) {
                if (c.word == w.word) {
                    ++r.topk_completed;
                    break;
                }
            }
        }
    }
    r.accuracy = static_cast<double>(r.completed) / static_cast<double>(r.test_size);
    r.topk_accuracy = static_cast<double>(r.topk_completed) / static_cast<double>(r.test_size);
    return r;
}

}  // namespace ruqa::completion
