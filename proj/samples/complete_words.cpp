// Builds a radix tree from a few word counts and prints ranked completions
// for each prefix given on the command line.
//
//   complete_words kha ac
#include <iostream>

#include <fmt/format.h>

#include "ruqa/completion.hpp"

int main(int argc, char** argv) {
    const std::vector<ruqa::completion::WordCount> words = {
        {"khan", 5}, {"khana", 3}, {"khabar", 2}, {"acha", 9}, {"achha", 4}, {"aap", 7}, {"abhi", 6}};
    const ruqa::RadixTree tree = ruqa::completion::build_tree(words);
    std::vector<std::string> prefixes(argv + 1, argv + argc);
    if (prefixes.empty()) prefixes = {"kha", "ac", "a"};
    for (const auto& prefix : prefixes) {
        std::cout << fmt::format("{:>6}:", prefix);
        for (const auto& c : tree.complete(prefix, 3)) std::cout << fmt::format(" {}({})", c.word, c.freq);
        std::cout << '\n';
    }
}
