#pragma once

// Starter word lists shipped with the toolkit. They are small, hand-picked and
// only meant to make the pipeline runnable out of the box; real analyses
// should load curated lexicon.<name>.txt files instead.

#include <span>
#include <string_view>
#include <vector>

#include "ruqa/corpus/types.hpp"

namespace ruqa::corpus::builtin {

// Words spelled the same in both languages ("main", "me", "to", ...) are
// listed in both and label as Unknown.
inline constexpr std::string_view kEnglish[] = {
    "about", "after", "again", "all", "also", "always", "am", "and", "any", "are", "at", "back", "bad", "be",
    "because", "bed", "before", "best", "better", "busy", "but", "call", "can", "class", "come", "coming", "could",
    "day", "did", "do", "done", "dont", "exam", "fine", "for", "free", "friend", "from", "get", "go", "going",
    "good", "got", "great", "happy", "have", "he", "hello", "help", "her", "here", "hi", "him", "home", "hope",
    "how", "i", "if", "in", "is", "it", "just", "know", "late", "let", "like", "lol", "main", "make", "me",
    "meet", "message", "morning", "my", "need", "new", "night", "no", "not", "now", "of", "ok", "okay", "on",
    "one", "or", "please", "really", "reply", "right", "said", "see", "she", "sleep", "so", "some", "sorry",
    "sure", "take", "tell", "thanks", "that", "the", "there", "they", "think", "this", "time", "to", "today",
    "tomorrow", "too", "university", "up", "very", "wait", "want", "was", "we", "well", "what", "when", "where",
    "which", "who", "why", "will", "with", "work", "would", "yes", "yeah", "you", "your"};

inline constexpr std::string_view kRomanUrdu[] = {
    "aaj", "aap", "aaya", "aayi", "abhi", "acha", "achi", "agar", "ap", "apna", "apni", "baad", "baat", "bahut",
    "bata", "batao", "bhai", "bhi", "bohat", "bol", "bolo", "chal", "chalo", "chahiye", "dekh", "dekho", "der",
    "dil", "din", "do", "dost", "ghar", "gaya", "gayi", "haan", "hai", "hain", "hal", "ham", "hi", "ho", "hoga",
    "hogi", "hum", "is", "ja", "jaa", "jab", "jaldi", "jana", "jo", "kab", "kaha", "kahan", "kal", "kam", "kar",
    "karo", "karna", "kaun", "kaisa", "kaise", "kese", "ki", "kia", "kitna", "kiya", "ko", "koi", "kuch", "kya",
    "kyun", "lekin", "liye", "lo", "main", "me", "mein", "mera", "meri", "mujhe", "na", "nahi", "nahin", "ne",
    "pata", "pe", "phir", "pr", "raha", "rahi", "raat", "sab", "sahi", "se", "so", "subah", "tha", "thi", "theek",
    "thora", "to", "tu", "tum", "tumhara", "tumhe", "un", "us", "wala", "wali", "wo", "woh", "ya", "yaar", "yahan",
    "ye", "yeh"};

inline constexpr std::string_view kRomantic[] = {
    "babu", "darling", "dil", "dildar", "hug", "ishq", "jaan", "jaanu", "janu", "jaanum", "kiss", "love", "lovely",
    "miss", "missing", "mohabbat", "piyar", "pyaar", "pyar", "sajna", "sanam", "shona", "sweetheart", "sweety"};

inline Lexicon make_lexicon(std::string name, std::span<const std::string_view> words) {
    Lexicon lex{std::move(name), {}};
    for (auto w : words) lex.entries.emplace(w);
    return lex;
}

inline Lexicon english() { return make_lexicon("en", kEnglish); }
inline Lexicon roman_urdu() { return make_lexicon("ru", kRomanUrdu); }
inline Lexicon romantic() { return make_lexicon("romantic", kRomantic); }

}  // namespace ruqa::corpus::builtin
