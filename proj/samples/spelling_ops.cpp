// Prints the categorized edit script between pairs of spellings.
//
//   spelling_ops acha achha mein main
#include <iostream>

#include <fmt/format.h>

#include "ruqa/editops.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> words(argv + 1, argv + argc);
    if (words.size() < 2) words = {"acha", "achha", "mein", "main", "pleaseee", "please"};
    for (std::size_t i = 0; i + 1 < words.size(); i += 2) {
        const auto script = ruqa::editops::edit_script(words[i], words[i + 1]);
        std::cout << fmt::format("{} -> {} ({} ops)", script.source, script.target, script.ops.size());
        for (const auto& op : script.ops)
            std::cout << fmt::format(" {}@{}", ruqa::editops::OpSubtype::of(op).label(), op.position);
        std::cout << '\n';
    }
}
