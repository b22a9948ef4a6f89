#include <gtest/gtest.h>

#include <thread>

#include "ruqa/completion.hpp"
#include "ruqa/service.hpp"
#include "temp_dir.hpp"

using namespace ruqa;
using namespace ruqa::service;
using nlohmann::json;
using ruqa::testing::read_file;
using ruqa::testing::TempDir;

namespace {

RadixTree sample_tree() {
    RadixTree t;
    for (auto [w, f] : std::vector<std::pair<std::string, std::uint64_t>>{
             {"kya", 50}, {"kyun", 20}, {"kab", 10}, {"kal", 10}, {"karo", 7}, {"hai", 90}, {"haan", 30}})
        t.insert(w, f);
    return t;
}

json typed_session(const std::string& id, const std::string& mode) {
    json events = json::array();
    std::int64_t t = 100;
    for (char c : std::string("ky")) events.push_back({{"type", "char"}, {"char", std::string(1, c)}, {"t_ms", t += 150}});
    if (mode == "baseline") {
        events.push_back({{"type", "char"}, {"char", "a"}, {"t_ms", t += 150}});
        events.push_back({{"type", "char"}, {"char", " "}, {"t_ms", t += 150}});
    } else {
        events.push_back({{"type", "accept"}, {"word", "kya"}, {"prefix", "ky"}, {"t_ms", t += 150}});
    }
    events.push_back({{"type", "char"}, {"char", "x"}, {"t_ms", t += 150}});
    events.push_back({{"type", "char"}, {"char", "\b"}, {"t_ms", t += 150}});
    return {{"session_id", id}, {"target", "kya"}, {"mode", mode}, {"events", events}};
}

}  // namespace

TEST(Session, ReplayCountsKeystrokes) {
    const auto with = summarize_session(typed_session("s1", "with_completion"));
    EXPECT_EQ(with.keystrokes_typed, 4u);
    EXPECT_EQ(with.keystrokes_saved, 1u);
    EXPECT_EQ(with.accepts, 1u);
    EXPECT_EQ(with.final_length, 4u);  // "kya "
    EXPECT_EQ(with.total_ms, 600);
    const auto base = summarize_session(typed_session("s2", "baseline"));
    EXPECT_EQ(base.mode, SessionMode::Baseline);
    EXPECT_EQ(base.keystrokes_typed, 6u);
    EXPECT_EQ(base.keystrokes_saved, 0u);
    EXPECT_EQ(base.final_length, 4u);
}

TEST(Session, SchemaViolations) {
    auto bad = [](auto mutate) {
        json j = typed_session("s", "with_completion");
        mutate(j);
        EXPECT_THROW(summarize_session(j), SchemaError) << j.dump();
    };
    bad([](json& j) { j.erase("session_id"); });
    bad([](json& j) { j["session_id"] = ""; });
    bad([](json& j) { j["mode"] = "fast"; });
    bad([](json& j) { j["events"] = "none"; });
    bad([](json& j) { j["events"][1]["t_ms"] = 1; });
    bad([](json& j) { j["events"][0]["t_ms"] = -5; });
    bad([](json& j) { j["events"][0]["char"] = "ab"; });
    bad([](json& j) { j["events"][0]["type"] = "paste"; });
    bad([](json& j) { j["events"][2]["prefix"] = "k"; });
    bad([](json& j) { j["events"][2]["word"] = "hai"; });
    bad([](json& j) { j["mode"] = "baseline"; });
}

TEST(Service, CompleteValidatesParameters) {
    const auto tree = sample_tree();
    TempDir dir;
    SuggestService svc(tree, dir / "sessions.jsonl");
    EXPECT_EQ(svc.complete(std::nullopt, std::nullopt).status, 400);
    EXPECT_EQ(svc.complete("k", "0").status, 400);
    EXPECT_EQ(svc.complete("k", "51").status, 400);
    EXPECT_EQ(svc.complete("k", "3x").status, 400);
    EXPECT_EQ(svc.complete("k", "-1").status, 400);
    EXPECT_EQ(svc.complete("k", "50").status, 200);

    const auto r = svc.complete("K", "3");
    ASSERT_EQ(r.status, 200);
    EXPECT_EQ(r.body["prefix"], "k");
    ASSERT_EQ(r.body["suggestions"].size(), 3u);
    EXPECT_EQ(r.body["suggestions"][0]["word"], "kya");
    EXPECT_EQ(r.body["suggestions"][1]["word"], "kyun");
    EXPECT_EQ(r.body["suggestions"][2]["word"], "kab");
    EXPECT_EQ(svc.complete("k", std::nullopt).body["suggestions"].size(), 5u);
    EXPECT_TRUE(svc.complete("zzz", std::nullopt).body["suggestions"].empty());
}

TEST(Service, SessionsAreStoredOnceAndValidated) {
    const auto tree = sample_tree();
    TempDir dir;
    const auto log = dir / "sessions.jsonl";
    {
        SuggestService svc(tree, log);
        EXPECT_EQ(svc.post_session("{not json").status, 422);
        EXPECT_EQ(svc.post_session(R"({"session_id":"x"})").status, 422);
        const auto ok = svc.post_session(typed_session("s1", "with_completion").dump());
        ASSERT_EQ(ok.status, 200);
        EXPECT_EQ(ok.body["keystrokes_saved"], 1);
        EXPECT_EQ(svc.post_session(typed_session("s1", "baseline").dump()).status, 409);
    }
    SuggestService reopened(tree, log);
    EXPECT_EQ(reopened.post_session(typed_session("s1", "baseline").dump()).status, 409);
    EXPECT_EQ(reopened.post_session(typed_session("s2", "baseline").dump()).status, 200);
    const auto content = read_file(log);
    EXPECT_EQ(std::count(content.begin(), content.end(), '\n'), 2);
    const auto first = json::parse(content.substr(0, content.find('\n')));
    EXPECT_EQ(first["summary"]["session_id"], "s1");
}

TEST(Service, LocalOriginsOnly) {
    EXPECT_TRUE(SuggestService::is_local_origin("http://localhost:3000"));
    EXPECT_TRUE(SuggestService::is_local_origin("http://127.0.0.1"));
    EXPECT_TRUE(SuggestService::is_local_origin("https://[::1]:8443"));
    EXPECT_FALSE(SuggestService::is_local_origin("http://example.com"));
    EXPECT_FALSE(SuggestService::is_local_origin("http://localhost.evil.com"));
    EXPECT_FALSE(SuggestService::is_local_origin(""));
}

TEST(Service, HttpMatchesInProcessCompletion) {
    const auto tree = sample_tree();
    TempDir dir;
    SuggestService svc(tree, dir / "sessions.jsonl");
    httplib::Server server;
    svc.mount(server);
    const int port = server.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port, 0);
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    for (const std::string prefix : {"k", "ka", "h", "kyu", "x", ""}) {
        for (int k : {1, 2, 5, 50}) {
            auto res = client.Get("/complete?prefix=" + prefix + "&k=" + std::to_string(k));
            ASSERT_TRUE(res);
            EXPECT_EQ(res->status, 200);
            auto body = nlohmann::ordered_json::parse(res->body);
            auto expected = svc.complete(prefix, std::to_string(k)).body;
            EXPECT_EQ(body["suggestions"].dump(), expected["suggestions"].dump()) << prefix << " k=" << k;
        }
    }
    auto missing = client.Get("/complete?k=2");
    ASSERT_TRUE(missing);
    EXPECT_EQ(missing->status, 400);

    auto posted = client.Post("/session", typed_session("h1", "with_completion").dump(), "application/json");
    ASSERT_TRUE(posted);
    EXPECT_EQ(posted->status, 200);
    posted = client.Post("/session", typed_session("h1", "with_completion").dump(), "application/json");
    ASSERT_TRUE(posted);
    EXPECT_EQ(posted->status, 409);

    auto local = client.Get("/complete?prefix=k", {{"Origin", "http://localhost:5173"}});
    ASSERT_TRUE(local);
    EXPECT_EQ(local->get_header_value("Access-Control-Allow-Origin"), "http://localhost:5173");
    auto remote = client.Get("/complete?prefix=k", {{"Origin", "http://example.com"}});
    ASSERT_TRUE(remote);
    EXPECT_FALSE(remote->has_header("Access-Control-Allow-Origin"));

    server.stop();
    worker.join();
}
