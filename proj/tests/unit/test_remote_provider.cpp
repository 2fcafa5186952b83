#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <deque>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "segscore/annotation/annotations.hpp"
#include "segscore/error.hpp"
#include "segscore/net/http.hpp"

using namespace segscore;
using namespace std::chrono_literals;
using annotation::Entity;

namespace {

// Plays back scripted outcomes; status 0 means "no response".
class ScriptedTransport : public net::HttpTransport {
public:
    explicit ScriptedTransport(std::deque<net::HttpResponse> script) : script_(std::move(script)) {}

    net::HttpResponse post(const std::string& url, std::string_view body, const std::string& content_type) override {
        std::lock_guard lock(mu_);
        ++calls;
        last_url = url;
        last_body = body;
        last_content_type = content_type;
        times.push_back(std::chrono::steady_clock::now());
        if (script_.empty()) throw Error(ErrorCode::ProviderUnavailable, "script exhausted");
        auto next = script_.front();
        script_.pop_front();
        if (next.status == 0) throw Error(ErrorCode::ProviderUnavailable, "connection refused");
        return next;
    }

    int calls = 0;
    std::string last_url, last_body, last_content_type;
    std::vector<std::chrono::steady_clock::time_point> times;

private:
    std::mutex mu_;
    std::deque<net::HttpResponse> script_;
};

// Sleeps inside post() and records the peak number of concurrent calls.
class SlowTransport : public net::HttpTransport {
public:
    net::HttpResponse post(const std::string&, std::string_view, const std::string&) override {
        const int now = ++active;
        int seen = peak.load();
        while (now > seen && !peak.compare_exchange_weak(seen, now)) {
        }
        std::this_thread::sleep_for(30ms);
        --active;
        return {200, R"({"entities":[]})"};
    }
    std::atomic<int> active{0};
    std::atomic<int> peak{0};
};

const std::string kOk = R"({"entities":[{"type":"City","name":"Paris","relevance":0.5}]})";

}  // namespace

TEST(RemoteProvider, PostsRawTextAsPlainText) {
    auto t = std::make_shared<ScriptedTransport>(std::deque<net::HttpResponse>{{200, kOk}});
    annotation::RemoteProvider p("http://annotator.test/v1/annotate", t, {3, 1ms});
    EXPECT_EQ(p.entities_for("trip to paris"), (std::vector<Entity>{{"City", "Paris", 0.5}}));
    EXPECT_EQ(t->calls, 1);
    EXPECT_EQ(t->last_url, "http://annotator.test/v1/annotate");
    EXPECT_EQ(t->last_body, "trip to paris");
    EXPECT_EQ(t->last_content_type, "text/plain; charset=utf-8");
}

TEST(RemoteProvider, RetriesThenSucceeds) {
    auto t = std::make_shared<ScriptedTransport>(std::deque<net::HttpResponse>{{0, ""}, {503, "busy"}, {200, kOk}});
    annotation::RemoteProvider p("http://annotator.test/", t, {3, 1ms});
    EXPECT_EQ(p.entities_for("x").size(), 1u);
    EXPECT_EQ(t->calls, 3);
}

TEST(RemoteProvider, GivesUpAfterAttempts) {
    auto t = std::make_shared<ScriptedTransport>(std::deque<net::HttpResponse>{{0, ""}, {0, ""}, {0, ""}, {200, kOk}});
    annotation::RemoteProvider p("http://annotator.test/", t, {3, 1ms});
    try {
        p.entities_for("x");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ProviderUnavailable);
    }
    EXPECT_EQ(t->calls, 3);
}

TEST(RemoteProvider, BackoffDoubles) {
    auto t = std::make_shared<ScriptedTransport>(std::deque<net::HttpResponse>{{500, ""}, {500, ""}, {500, ""}});
    annotation::RemoteProvider p("http://annotator.test/", t, {3, 40ms});
    EXPECT_THROW(p.entities_for("x"), Error);
    ASSERT_EQ(t->times.size(), 3u);
    EXPECT_GE(t->times[1] - t->times[0], 40ms);
    EXPECT_GE(t->times[2] - t->times[1], 80ms);
}

TEST(RemoteProvider, MalformedAnswerIsProtocolErrorWithoutRetry) {
    auto t = std::make_shared<ScriptedTransport>(std::deque<net::HttpResponse>{{200, "<html>oops</html>"}, {200, kOk}});
    annotation::RemoteProvider p("http://annotator.test/", t, {3, 1ms});
    try {
        p.entities_for("x");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ProviderProtocol);
    }
    EXPECT_EQ(t->calls, 1);
}

TEST(RemoteProvider, RespectsInFlightCap) {
    auto t = std::make_shared<SlowTransport>();
    annotation::RemoteProvider p("http://annotator.test/", t, {1, 1ms}, 2);
    std::vector<std::jthread> threads;
    for (int i = 0; i < 8; ++i) threads.emplace_back([&] { p.entities_for("x"); });
    threads.clear();
    EXPECT_LE(t->peak.load(), 2);
    EXPECT_GE(t->peak.load(), 1);
}

TEST(RemoteProvider, RejectsBadEndpoint) {
    auto t = std::make_shared<ScriptedTransport>(std::deque<net::HttpResponse>{});
    EXPECT_THROW(annotation::RemoteProvider("", t), Error);
    EXPECT_THROW(annotation::RemoteProvider("ftp://x/", t), Error);
    EXPECT_THROW(annotation::RemoteProvider("http://x/", nullptr), Error);
}

TEST(SplitUrl, OriginAndPath) {
    const auto u = net::split_url("https://Example.com:8443/a/b?c=d");
    EXPECT_EQ(u.origin, "https://Example.com:8443");
    EXPECT_EQ(u.path, "/a/b?c=d");
    EXPECT_EQ(net::split_url("http://host").path, "/");
    EXPECT_THROW(net::split_url("mailto:x@y"), Error);
}

TEST(HttplibTransport, TalksToLocalServer) {
    httplib::Server server;
    std::string seen_body, seen_type;
    server.Post("/annotate", [&](const httplib::Request& req, httplib::Response& res) {
        seen_body = req.body;
        seen_type = req.get_header_value("Content-Type");
        res.set_content(kOk, "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port, 0);
    std::jthread runner([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    auto transport = std::make_shared<net::HttplibTransport>();
    annotation::RemoteProvider p("http://127.0.0.1:" + std::to_string(port) + "/annotate", transport, {3, 1ms});
    EXPECT_EQ(p.entities_for("caf\xC3\xA9 in paris"), (std::vector<Entity>{{"City", "Paris", 0.5}}));
    EXPECT_EQ(seen_body, "caf\xC3\xA9 in paris");
    EXPECT_EQ(seen_type, "text/plain; charset=utf-8");
    server.stop();
}

TEST(HttplibTransport, DeadEndpointIsUnavailable) {
    auto transport = std::make_shared<net::HttplibTransport>();
    annotation::RemoteProvider p("http://127.0.0.1:1/annotate", transport, {3, 1ms});
    const auto start = std::chrono::steady_clock::now();
    try {
        p.entities_for("x");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ProviderUnavailable);
    }
    EXPECT_LT(std::chrono::steady_clock::now() - start, 3500ms);
}

TEST(FetchUrl, ReadsLocalServer) {
    httplib::Server server;
    server.Get("/page", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("<p>hello</p>", "text/html");
    });
    server.Get("/moved", [](const httplib::Request&, httplib::Response& res) { res.set_redirect("/page"); });
    server.Get("/gone", [](const httplib::Request&, httplib::Response& res) { res.status = 404; });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::jthread runner([&] { server.listen_after_bind(); });
    server.wait_until_ready();
    const std::string base = "http://127.0.0.1:" + std::to_string(port);
    EXPECT_EQ(net::fetch_url(base + "/page"), "<p>hello</p>");
    EXPECT_EQ(net::fetch_url(base + "/moved"), "<p>hello</p>");
    EXPECT_THROW(net::fetch_url(base + "/gone"), Error);
    server.stop();
}
