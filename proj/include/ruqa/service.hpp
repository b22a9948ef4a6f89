#pragma once

// HTTP front end for ranked completions and typing-session logs.
//
//   GET  /complete?prefix=<s>&k=<n>   ranked completions from an immutable tree
//   POST /session                     store a typing session, echo its metrics
//
// The tree is built once before the server starts and only read afterwards.
// Sessions are appended to a JSONL file through a single mutex-guarded writer.

#include <chrono>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>

#include "httplib.h"
#include "json.hpp"
#include "ruqa/radix_tree.hpp"
#include "ruqa/text.hpp"

namespace ruqa::service {

namespace fs = std::filesystem;

struct Reply {
    int status = 200;
    nlohmann::ordered_json body;
};

inline constexpr std::size_t kMaxK = 50;
inline constexpr std::size_t kDefaultK = 5;

enum class SessionMode { WithCompletion, Baseline };

struct SessionSummary {
    std::string session_id;
    SessionMode mode = SessionMode::WithCompletion;
    std::int64_t total_ms = 0;
    std::size_t keystrokes_typed = 0;
    std::size_t keystrokes_saved = 0;
    std::size_t accepts = 0;
    std::size_t final_length = 0;  // code points in the transcribed buffer
};

inline nlohmann::ordered_json to_json(const SessionSummary& s) {
    return {{"session_id", s.session_id},
            {"mode", s.mode == SessionMode::Baseline ? "baseline" : "with_completion"},
            {"total_ms", s.total_ms},
            {"keystrokes_typed", s.keystrokes_typed},
            {"keystrokes_saved", s.keystrokes_saved},
            {"accepts", s.accepts},
            {"final_length", s.final_length}};
}

class SchemaError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Validates a session log and replays its keystrokes.
///
/// Schema:
///   {"session_id": str, "target": str, "mode": "with_completion"|"baseline",
///    "events": [{"type": "char", "char": str, "t_ms": int}
///             | {"type": "accept", "word": str, "t_ms": int, "prefix"?: str}]}
///
/// A "char" event carries one character; " " ends the current word and
/// "\b" deletes the last character. An accept replaces the current word prefix
/// with the accepted word plus a trailing space and saves
/// len(word) - len(prefix) keystrokes.
inline SessionSummary summarize_session(const nlohmann::json& log) {
    if (!log.is_object()) throw SchemaError("session must be a JSON object");
    auto str_field = [&](const char* name) -> std::string {
        if (!log.contains(name) || !log.at(name).is_string()) throw SchemaError(std::string("'") + name + "' must be a string");
        return log.at(name).get<std::string>();
    };
    SessionSummary s;
    s.session_id = str_field("session_id");
    if (s.session_id.empty()) throw SchemaError("'session_id' must not be empty");
    str_field("target");
    if (log.contains("mode")) {
        const std::string mode = str_field("mode");
        if (mode == "baseline") s.mode = SessionMode::Baseline;
        else if (mode != "with_completion") throw SchemaError("'mode' must be with_completion or baseline");
    }
    if (!log.contains("events") || !log.at("events").is_array()) throw SchemaError("'events' must be an array");

    std::u32string buffer;
    std::size_t word_start = 0;
    std::optional<std::int64_t> first_t, last_t;
    for (const auto& ev : log.at("events")) {
        if (!ev.is_object() || !ev.contains("type") || !ev.at("type").is_string())
            throw SchemaError("every event needs a string 'type'");
        if (!ev.contains("t_ms") || !ev.at("t_ms").is_number_integer())
            throw SchemaError("every event needs an integer 't_ms'");
        const auto t = ev.at("t_ms").get<std::int64_t>();
        if (t < 0) throw SchemaError("'t_ms' must be non-negative");
        if (last_t && t < *last_t) throw SchemaError("event timestamps must be monotonic");
        if (!first_t) first_t = t;
        last_t = t;

        const std::string type = ev.at("type").get<std::string>();
        if (type == "char") {
            if (!ev.contains("char") || !ev.at("char").is_string()) throw SchemaError("char event needs 'char'");
            std::u32string ch;
            try {
                ch = text::to_u32(ev.at("char").get<std::string>());
            } catch (const std::invalid_argument&) {
                throw SchemaError("'char' is not valid UTF-8");
            }
            if (ch.size() != 1) throw SchemaError("'char' must be exactly one character");
            ++s.keystrokes_typed;
            if (ch.front() == U'\b') {
                if (!buffer.empty()) buffer.pop_back();
                word_start = std::min(word_start, buffer.size());
                while (word_start > 0 && buffer[word_start - 1] != U' ') --word_start;
            } else {
                buffer.push_back(ch.front());
                if (ch.front() == U' ') word_start = buffer.size();
            }
        } else if (type == "accept") {
            if (s.mode == SessionMode::Baseline) throw SchemaError("baseline sessions cannot accept suggestions");
            if (!ev.contains("word") || !ev.at("word").is_string()) throw SchemaError("accept event needs 'word'");
            const std::u32string word = text::to_u32(ev.at("word").get<std::string>());
            const std::u32string prefix = buffer.substr(word_start);
            if (ev.contains("prefix") && (!ev.at("prefix").is_string() || text::to_u32(ev.at("prefix").get<std::string>()) != prefix))
                throw SchemaError("accept 'prefix' does not match the typed prefix");
            if (word.empty() || !word.starts_with(prefix) || word.size() < prefix.size())
                throw SchemaError("accepted word does not extend the typed prefix");
            s.keystrokes_saved += word.size() - prefix.size();
            ++s.accepts;
            buffer.resize(word_start);
            buffer += word;
            buffer.push_back(U' ');
            word_start = buffer.size();
        } else {
            throw SchemaError("unknown event type '" + type + "'");
        }
    }
    s.total_ms = first_t ? *last_t - *first_t : 0;
    s.final_length = buffer.size();
    return s;
}

/// Append-only session store; ids already present in the log are reserved.
class SessionStore {
public:
    explicit SessionStore(fs::path path) : path_(std::move(path)) {
        std::ifstream in(path_);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            try {
                auto j = nlohmann::json::parse(line);
                if (j.contains("session_id") && j.at("session_id").is_string()) ids_.insert(j.at("session_id").get<std::string>());
            } catch (const nlohmann::json::exception&) {
            }
        }
    }

    /// False when the id is already taken.
    bool append(const std::string& id, const nlohmann::ordered_json& record) {
        std::lock_guard lock(mutex_);
        if (!ids_.insert(id).second) return false;
        std::ofstream out(path_, std::ios::app | std::ios::binary);
        out << record.dump() << '\n';
        out.flush();
        if (!out) {
            ids_.erase(id);
            throw std::runtime_error("cannot append to session log " + path_.string());
        }
        return true;
    }

private:
    fs::path path_;
    std::mutex mutex_;
    std::set<std::string> ids_;
};

class SuggestService {
public:
    SuggestService(const RadixTree& tree, fs::path session_log) : tree_(tree), sessions_(std::move(session_log)) {}

    Reply complete(const std::optional<std::string>& prefix, const std::optional<std::string>& k_param) const {
        const auto started = std::chrono::steady_clock::now();
        if (!prefix) return error(400, "missing 'prefix' parameter");
        std::size_t k = kDefaultK;
        if (k_param) {
            auto [ptr, ec] = std::from_chars(k_param->data(), k_param->data() + k_param->size(), k);
            if (ec != std::errc() || ptr != k_param->data() + k_param->size()) return error(400, "'k' must be an integer");
        }
        if (k < 1 || k > kMaxK) return error(400, "'k' must be between 1 and 50");
        std::string normalized;
        try {
            normalized = text::normalize_word(*prefix);
        } catch (const std::exception&) {
            return error(400, "'prefix' is not valid UTF-8");
        }
        Reply r;
        r.body["prefix"] = normalized;
        r.body["suggestions"] = nlohmann::ordered_json::array();
        for (const auto& c : tree_.complete(normalized, k)) r.body["suggestions"].push_back({{"word", c.word}, {"freq", c.freq}});
        r.body["elapsed_us"] = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - started).count();
        return r;
    }

    Reply post_session(std::string_view body) {
        nlohmann::json log;
        try {
            log = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception&) {
            return error(422, "body is not valid JSON");
        }
        SessionSummary summary;
        try {
            summary = summarize_session(log);
        } catch (const SchemaError& e) {
            return error(422, e.what());
        }
        nlohmann::ordered_json record = nlohmann::ordered_json::parse(log.dump());
        record["summary"] = to_json(summary);
        if (!sessions_.append(summary.session_id, record)) return error(409, "session id already exists");
        return {200, to_json(summary)};
    }

    /// Registers routes (and localhost CORS) on `server`.
    void mount(httplib::Server& server) {
        server.set_post_routing_handler([](const httplib::Request& req, httplib::Response& res) {
            const std::string origin = req.get_header_value("Origin");
            if (is_local_origin(origin)) {
                res.set_header("Access-Control-Allow-Origin", origin);
                res.set_header("Vary", "Origin");
                res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
                res.set_header("Access-Control-Allow-Headers", "Content-Type");
            }
        });
        server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
        server.Get("/complete", [this](const httplib::Request& req, httplib::Response& res) {
            std::optional<std::string> prefix, k;
            if (req.has_param("prefix")) prefix = req.get_param_value("prefix");
            if (req.has_param("k")) k = req.get_param_value("k");
            write(res, complete(prefix, k));
        });
        server.Post("/session", [this](const httplib::Request& req, httplib::Response& res) {
            write(res, post_session(req.body));
        });
    }

    static bool is_local_origin(const std::string& origin) {
        static const std::regex local(R"(^https?://(localhost|127\.0\.0\.1|\[::1\])(:[0-9]+)?$)");
        return !origin.empty() && std::regex_match(origin, local);
    }

private:
    static Reply error(int status, std::string message) { return {status, {{"error", std::move(message)}}}; }

    static void write(httplib::Response& res, const Reply& reply) {
        res.status = reply.status;
        res.set_content(reply.body.dump(), "application/json; charset=utf-8");
    }

    const RadixTree& tree_;
    SessionStore sessions_;
};

}  // namespace ruqa::service
