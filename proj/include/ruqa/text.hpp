#pragma once

// UTF-8 helpers, word normalization and tokenization shared by every module.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/locid.h>

namespace ruqa::text {

inline std::u32string to_u32(std::string_view utf8) {
    std::u32string out;
    out.reserve(utf8.size());
    std::size_t i = 0;
    while (i < utf8.size()) {
        auto b = static_cast<unsigned char>(utf8[i]);
        char32_t cp;
        std::size_t len;
        if (b < 0x80) {
            cp = b;
            len = 1;
        } else if ((b >> 5) == 0x6) {
            cp = b & 0x1F;
            len = 2;
        } else if ((b >> 4) == 0xE) {
            cp = b & 0x0F;
            len = 3;
        } else if ((b >> 3) == 0x1E) {
            cp = b & 0x07;
            len = 4;
        } else {
            throw std::invalid_argument("invalid UTF-8 lead byte");
        }
        if (i + len > utf8.size()) throw std::invalid_argument("truncated UTF-8 sequence");
        for (std::size_t k = 1; k < len; ++k) {
            auto c = static_cast<unsigned char>(utf8[i + k]);
            if ((c >> 6) != 0x2) throw std::invalid_argument("invalid UTF-8 continuation byte");
            cp = (cp << 6) | (c & 0x3F);
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

inline void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::string to_utf8(std::u32string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char32_t cp : s) append_utf8(out, cp);
    return out;
}

inline std::size_t length(std::string_view utf8) {
    return static_cast<std::size_t>(
        std::count_if(utf8.begin(), utf8.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

/// NFC-normalizes and lowercases a word. Leading/trailing whitespace is removed.
inline std::string normalize_word(std::string_view word) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");
    icu::UnicodeString us = icu::UnicodeString::fromUTF8(icu::StringPiece(word.data(), static_cast<int32_t>(word.size())));
    us.toLower(icu::Locale::getRoot());
    icu::UnicodeString normalized = nfc->normalize(us, status);
    if (U_FAILURE(status)) throw std::runtime_error("ICU normalization failed");
    normalized.trim();
    std::string out;
    normalized.toUTF8String(out);
    return out;
}

inline bool is_apostrophe(char32_t c) { return c == U'\'' || c == U'’'; }

inline bool is_punct(char32_t c) {
    auto cp = static_cast<UChar32>(c);
    return u_ispunct(cp) || u_hasBinaryProperty(cp, UCHAR_EMOJI_PRESENTATION) ||
           (u_charType(cp) == U_MATH_SYMBOL) || (u_charType(cp) == U_OTHER_SYMBOL) ||
           (u_charType(cp) == U_CURRENCY_SYMBOL) || (u_charType(cp) == U_MODIFIER_SYMBOL);
}

/// Splits a message body into normalized word tokens.
///
/// Tokens are separated by Unicode whitespace. Leading and trailing
/// punctuation is stripped (apostrophes included), interior characters are
/// kept so "don't" and "gr8" survive intact. Tokens that become empty are
/// dropped.
inline std::vector<std::string> tokenize(std::string_view body) {
    std::vector<std::string> tokens;
    std::u32string cps = to_u32(body);
    std::size_t i = 0;
    while (i < cps.size()) {
        while (i < cps.size() && u_isUWhiteSpace(static_cast<UChar32>(cps[i]))) ++i;
        std::size_t start = i;
        while (i < cps.size() && !u_isUWhiteSpace(static_cast<UChar32>(cps[i]))) ++i;
        std::size_t end = i;
        while (start < end && is_punct(cps[start])) ++start;
        while (end > start && is_punct(cps[end - 1])) --end;
        if (start < end) {
            std::string tok = normalize_word(to_utf8(std::u32string_view(cps).substr(start, end - start)));
            if (!tok.empty()) tokens.push_back(std::move(tok));
        }
    }
    return tokens;
}

/// Number of whitespace-separated tokens, before any punctuation stripping.
inline std::size_t whitespace_token_count(std::string_view body) {
    std::u32string cps = to_u32(body);
    std::size_t n = 0;
    bool in_token = false;
    for (char32_t c : cps) {
        bool ws = u_isUWhiteSpace(static_cast<UChar32>(c));
        if (!ws && !in_token) ++n;
        in_token = !ws;
    }
    return n;
}

}  // namespace ruqa::text
