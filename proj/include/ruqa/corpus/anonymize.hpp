#pragma once

// Turns raw message logs into pseudonymized count tables. Contact strings
// become keyed-hash alter codes, bodies are reduced to word and bigram counts
// emitted in sorted order, and the bodies themselves are dropped.

#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include "ruqa/corpus/types.hpp"
#include "ruqa/text.hpp"

namespace ruqa::corpus {

struct RawMessage {
    std::string contact;
    Direction direction = Direction::Sent;
    std::int64_t timestamp_epoch_min = 0;
    std::int32_t utc_offset_min = 0;
    std::string body;
};

struct AnonymizedData {
    std::vector<MessageEvent> events;
    std::vector<WordUsage> words;
    std::vector<BigramUsage> bigrams;
};

namespace detail {

inline std::string hmac_sha256_hex(std::string_view key, std::string_view message) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
              reinterpret_cast<const unsigned char*>(message.data()), message.size(), digest, &len)) {
        throw CorpusError("HMAC-SHA256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

// Contacts differing only in formatting ("+92 300-1234567" vs "+923001234567")
// map to the same alter.
inline std::string normalize_contact(std::string_view contact) {
    std::string out;
    for (char c : contact) {
        if (c == ' ' || c == '-' || c == '(' || c == ')' || c == '.') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

inline bool has_long_digit_run(std::string_view s, std::size_t limit = 7) {
    std::size_t run = 0;
    for (char c : s) {
        run = (c >= '0' && c <= '9') ? run + 1 : 0;
        if (run >= limit) return true;
    }
    return false;
}

}  // namespace detail

/// Keyed pseudonymizer for alter codes: "A" + 8 hex digits of
/// HMAC-SHA256(salt, contact). On a collision, or when the code would itself
/// look like a phone number, the contact is re-hashed with a counter suffix.
class AlterCoder {
public:
    explicit AlterCoder(std::string salt) : salt_(std::move(salt)) {
        if (salt_.empty()) throw CorpusError("anonymization requires a non-empty salt");
    }

    const std::string& code(std::string_view contact) {
        const std::string key = detail::normalize_contact(contact);
        if (auto it = codes_.find(key); it != codes_.end()) return it->second;
        for (std::uint32_t attempt = 0;; ++attempt) {
            std::string msg = attempt == 0 ? key : key + "#" + std::to_string(attempt);
            std::string candidate = "A" + detail::hmac_sha256_hex(salt_, msg).substr(0, 8);
            if (taken_.contains(candidate) || looks_like_phone_number(candidate)) continue;
            taken_.insert(candidate);
            return codes_.emplace(key, std::move(candidate)).first->second;
        }
    }

private:
    std::string salt_;
    std::map<std::string, std::string> codes_;
    std::set<std::string> taken_;
};

/// Tokens of this many bytes or more are withheld: long tokens are mostly
/// URLs, e-mail addresses and names, and a token that long would itself be a
/// verbatim fragment of a message body.
inline constexpr std::size_t kMaxTokenBytes = 11;

/// True for tokens that must never leave the device: phone-number shaped or
/// longer than kMaxTokenBytes.
inline bool is_sensitive_token(std::string_view token) {
    return token.size() > kMaxTokenBytes || detail::has_long_digit_run(token);
}

inline AnonymizedData anonymize(const EgoId& ego, std::vector<RawMessage> messages, std::string_view salt) {
    validate_id(ego, "ego");
    AlterCoder coder{std::string(salt)};
    // Assign codes in sorted contact order so collision handling does not
    // depend on message order.
    std::set<std::string> contacts;
    for (const auto& m : messages) contacts.insert(detail::normalize_contact(m.contact));
    for (const auto& c : contacts) coder.code(c);

    AnonymizedData out;
    std::map<std::tuple<std::string, Direction, std::string>, std::uint64_t> word_counts;
    std::map<std::pair<std::string, std::string>, std::uint64_t> bigram_counts;
    for (auto& m : messages) {
        const std::string alter = coder.code(m.contact);
        MessageEvent e;
        e.ego = ego;
        e.alter = alter;
        e.direction = m.direction;
        e.timestamp_epoch_min = m.timestamp_epoch_min;
        e.utc_offset_min = m.utc_offset_min;
        e.token_count = static_cast<std::int64_t>(text::whitespace_token_count(m.body));
        out.events.push_back(std::move(e));

        const auto tokens = text::tokenize(m.body);
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (is_sensitive_token(tokens[i])) continue;
            ++word_counts[{alter, m.direction, tokens[i]}];
            if (i + 1 < tokens.size() && !is_sensitive_token(tokens[i + 1])) ++bigram_counts[{tokens[i], tokens[i + 1]}];
        }
        m.body.clear();
        m.body.shrink_to_fit();
    }
    for (const auto& [key, count] : word_counts) {
        const auto& [alter, direction, word] = key;
        out.words.push_back({ego, alter, word, direction, count, Language::Unknown});
    }
    for (const auto& [key, count] : bigram_counts) out.bigrams.push_back({ego, key.first, key.second, count});
    canonicalize_words(out.words);
    canonicalize_bigrams(out.bigrams);
    return out;
}

}  // namespace ruqa::corpus
