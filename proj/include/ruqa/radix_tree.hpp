#pragma once

// Path-compressed prefix tree with per-word frequencies and ranked prefix
// completion.
//
// Every node stores the largest frequency found in its subtree, so complete()
// runs a best-first search that stops once k words are produced instead of
// enumerating the whole subtree.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ruqa {

template <class Count = std::uint64_t>
class basic_radix_tree {
public:
    using count_type = Count;

    struct Completion {
        std::string word;
        Count freq{};
        friend bool operator==(const Completion&, const Completion&) = default;
    };

    basic_radix_tree() : root_(std::make_unique<Node>()) {}
    basic_radix_tree(basic_radix_tree&&) noexcept = default;
    basic_radix_tree& operator=(basic_radix_tree&&) noexcept = default;

    /// Adds `freq_delta` to the frequency of `word`, inserting it if needed.
    void insert(std::string_view word, Count freq_delta = 1) {
        if (word.empty()) throw std::invalid_argument("radix tree cannot store an empty word");
        if (freq_delta <= Count{}) throw std::invalid_argument("frequency delta must be positive");
        std::vector<Node*> path{root_.get()};
        Node* node = root_.get();
        std::string_view rest = word;
        while (!rest.empty()) {
            auto it = node->children.find(byte(rest.front()));
            if (it == node->children.end()) {
                auto leaf = std::make_unique<Node>();
                leaf->label = std::string(rest);
                Node* raw = leaf.get();
                node->children.emplace(byte(rest.front()), std::move(leaf));
                path.push_back(raw);
                node = raw;
                rest = {};
                break;
            }
            Node* child = it->second.get();
            const std::size_t common = common_prefix(child->label, rest);
            if (common < child->label.size()) {
                // Split the edge: node -> mid(label[0, common)) -> child(label[common, ...)).
                auto mid = std::make_unique<Node>();
                mid->label = child->label.substr(0, common);
                mid->subtree_max = child->subtree_max;
                std::unique_ptr<Node> owned = std::move(it->second);
                owned->label.erase(0, common);
                const unsigned char key = byte(owned->label.front());
                mid->children.emplace(key, std::move(owned));
                it->second = std::move(mid);
                child = it->second.get();
            }
            path.push_back(child);
            node = child;
            rest.remove_prefix(common);
        }
        if (!node->terminal) ++size_;
        node->terminal = node->terminal.value_or(Count{}) + freq_delta;
        const Count v = *node->terminal;
        for (Node* n : path) n->subtree_max = std::max(n->subtree_max, v);
    }

    bool contains(std::string_view word) const { return find(word) != nullptr; }

    std::optional<Count> frequency(std::string_view word) const {
        const Node* n = find(word);
        return n ? n->terminal : std::nullopt;
    }

    /// Up to k words starting with `prefix`, by frequency descending, ties in
    /// lexicographic (byte) order.
    std::vector<Completion> complete(std::string_view prefix, std::size_t k) const {
        if (k == 0) throw std::invalid_argument("complete requires k >= 1");
        std::vector<Completion> out;
        auto located = locate(prefix);
        if (!located) return out;

        struct Entry {
            Count key;
            std::string text;
            const Node* node;  // nullptr: a finished word
        };
        auto worse = [](const Entry& a, const Entry& b) {
            if (a.key != b.key) return a.key < b.key;
            if (a.text != b.text) return a.text > b.text;
            return a.node == nullptr && b.node != nullptr;
        };
        std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> frontier(worse);
        frontier.push({located->first->subtree_max, std::move(located->second), located->first});
        while (!frontier.empty() && out.size() < k) {
            Entry e = frontier.top();
            frontier.pop();
            if (e.node == nullptr) {
                out.push_back({std::move(e.text), e.key});
                continue;
            }
            if (e.node->terminal) frontier.push({*e.node->terminal, e.text, nullptr});
            for (const auto& [_, child] : e.node->children) {
                frontier.push({child->subtree_max, e.text + child->label, child.get()});
            }
        }
        return out;
    }

    /// Visits every stored word under `prefix` in lexicographic order.
    void for_each(std::string_view prefix, const std::function<void(const std::string&, Count)>& visit) const {
        auto located = locate(prefix);
        if (!located) return;
        std::string buf = std::move(located->second);
        walk(*located->first, buf, visit);
    }

    void for_each(const std::function<void(const std::string&, Count)>& visit) const { for_each("", visit); }

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    std::size_t node_count() const {
        std::size_t n = 0;
        count_nodes(*root_, n);
        return n;
    }

    /// Checks the structural invariants; returns a description of the first
    /// violation found, or nullopt when the tree is well formed.
    std::optional<std::string> audit() const {
        if (!root_->label.empty()) return "root has a non-empty label";
        std::size_t words = 0;
        auto err = audit_node(*root_, true, "", words);
        if (err) return err;
        if (words != size_) return "word count mismatch";
        return std::nullopt;
    }

private:
    struct Node {
        std::string label;
        std::map<unsigned char, std::unique_ptr<Node>> children;  // keyed by first byte
        std::optional<Count> terminal;
        Count subtree_max{};
    };

    static unsigned char byte(char c) { return static_cast<unsigned char>(c); }

    static std::size_t common_prefix(std::string_view a, std::string_view b) {
        const std::size_t n = std::min(a.size(), b.size());
        std::size_t i = 0;
        while (i < n && a[i] == b[i]) ++i;
        return i;
    }

    const Node* find(std::string_view word) const {
        const Node* node = root_.get();
        while (!word.empty()) {
            auto it = node->children.find(byte(word.front()));
            if (it == node->children.end()) return nullptr;
            const Node* child = it->second.get();
            if (!word.starts_with(child->label)) return nullptr;
            word.remove_prefix(child->label.size());
            node = child;
        }
        return node->terminal ? node : nullptr;
    }

    // Node whose subtree holds exactly the words beginning with `prefix`,
    // together with that node's full path string.
    std::optional<std::pair<const Node*, std::string>> locate(std::string_view prefix) const {
        const Node* node = root_.get();
        std::string path;
        while (!prefix.empty()) {
            auto it = node->children.find(byte(prefix.front()));
            if (it == node->children.end()) return std::nullopt;
            const Node* child = it->second.get();
            const std::size_t common = common_prefix(child->label, prefix);
            if (common == prefix.size()) {
                path += child->label;
                return std::make_pair(child, std::move(path));
            }
            if (common < child->label.size()) return std::nullopt;
            path += child->label;
            prefix.remove_prefix(common);
            node = child;
        }
        return std::make_pair(node, std::move(path));
    }

    static void walk(const Node& node, std::string& buf, const std::function<void(const std::string&, Count)>& visit) {
        if (node.terminal) visit(buf, *node.terminal);
        for (const auto& [_, child] : node.children) {
            const std::size_t mark = buf.size();
            buf += child->label;
            walk(*child, buf, visit);
            buf.resize(mark);
        }
    }

    static void count_nodes(const Node& node, std::size_t& n) {
        ++n;
        for (const auto& [_, child] : node.children) count_nodes(*child, n);
    }

    static std::optional<std::string> audit_node(const Node& node, bool is_root, const std::string& path,
                                                 std::size_t& words) {
        if (!is_root) {
            if (node.label.empty()) return "empty edge label below '" + path + "'";
            if (!node.terminal && node.children.size() < 2)
                return "non-terminal node '" + path + "' has " + std::to_string(node.children.size()) + " child(ren)";
        }
        Count best{};
        if (node.terminal) {
            if (*node.terminal <= Count{}) return "non-positive frequency at '" + path + "'";
            best = *node.terminal;
            ++words;
        }
        for (const auto& [key, child] : node.children) {
            if (child->label.empty() || byte(child->label.front()) != key)
                return "child key does not match edge label under '" + path + "'";
            const std::string child_path = path + child->label;
            if (auto err = audit_node(*child, false, child_path, words)) return err;
            best = std::max(best, child->subtree_max);
        }
        if (best != node.subtree_max) return "stale subtree maximum at '" + path + "'";
        return std::nullopt;
    }

    std::unique_ptr<Node> root_;
    std::size_t size_ = 0;
};

using RadixTree = basic_radix_tree<>;

}  // namespace ruqa
