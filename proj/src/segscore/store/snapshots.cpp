#include "segscore/store/snapshots.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <set>

#include "segscore/annotation/annotations.hpp"
#include "segscore/error.hpp"
#include "segscore/io.hpp"

namespace segscore::store {

using nlohmann::json;

namespace {

constexpr int kSnapshotVersion = 1;

std::string file_name_for(Timestamp t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%020lld.json", static_cast<long long>(t.time_since_epoch().count()));
    return buf;
}

std::size_t distance(std::size_t a, std::size_t b) {
    return a > b ? a - b : b - a;
}

}  // namespace

SnapshotRecord snapshot_of(const std::string& url, Timestamp captured_at, const std::vector<html::Segment>& segments) {
    SnapshotRecord record{url, captured_at, {}};
    for (const auto& s : segments) record.segments.push_back({s.fingerprint, s.tokens});
    return record;
}

std::string format_timestamp(Timestamp t) {
    const auto secs = std::chrono::floor<std::chrono::seconds>(t);
    const auto micros = (t - secs).count();
    const std::time_t tt = std::chrono::system_clock::to_time_t(secs);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%06lldZ", tm.tm_year + 1900, tm.tm_mon + 1,
                  tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<long long>(micros));
    return buf;
}

Timestamp parse_timestamp(const std::string& text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    long long micros = 0;
    char z = 0;
    if (std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%6lld%c", &y, &mo, &d, &h, &mi, &s, &micros, &z) != 8 ||
        z != 'Z' || text.size() != 27) {
        throw Error(ErrorCode::MalformedInput, "bad timestamp: " + text);
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw Error(ErrorCode::MalformedInput, "bad timestamp: " + text);
    return std::chrono::sys_days{ymd} + std::chrono::hours{h} + std::chrono::minutes{mi} + std::chrono::seconds{s} +
           std::chrono::microseconds{micros};
}

json snapshot_to_json(const SnapshotRecord& record) {
    json segments = json::array();
    for (const auto& s : record.segments) {
        segments.push_back({{"fingerprint", html::fingerprint_hex(s.fingerprint)}, {"tokens", s.tokens}});
    }
    return {{"v", kSnapshotVersion},
            {"url", record.url},
            {"captured_at", format_timestamp(record.captured_at)},
            {"segments", std::move(segments)}};
}

SnapshotRecord snapshot_from_json(const json& j) {
    try {
        if (j.value("v", 0) != kSnapshotVersion) throw Error(ErrorCode::MalformedInput, "unsupported snapshot version");
        SnapshotRecord record;
        record.url = j.at("url").get<std::string>();
        record.captured_at = parse_timestamp(j.at("captured_at").get<std::string>());
        for (const auto& s : j.at("segments")) {
            record.segments.push_back({html::parse_fingerprint_hex(s.at("fingerprint").get<std::string>()),
                                       s.at("tokens").get<text::TermVector>()});
        }
        return record;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("snapshot JSON: ") + e.what());
    }
}

SnapshotStore::SnapshotStore(std::filesystem::path root) : root_(std::move(root)) {
    std::error_code ec;
    std::filesystem::create_directories(root_, ec);
    if (ec) throw Error(ErrorCode::StorageFailure, "cannot create snapshot directory " + root_.string() + ": " + ec.message());
}

std::filesystem::path SnapshotStore::directory_for(const std::string& url) const {
    return root_ / annotation::text_hash(url);
}

void SnapshotStore::put(const SnapshotRecord& record) {
    if (auto previous = latest(record.url); previous && previous->captured_at >= record.captured_at) {
        throw Error(ErrorCode::InvalidArgument, "snapshot timestamps must strictly increase for " + record.url);
    }
    io::write_file_atomic(directory_for(record.url) / file_name_for(record.captured_at),
                          snapshot_to_json(record).dump(2) + "\n");
}

std::optional<SnapshotRecord> SnapshotStore::latest(const std::string& url) const {
    const auto dir = directory_for(url);
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) return std::nullopt;

    // Fixed-width names sort chronologically.
    std::set<std::string, std::greater<>> names;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.size() == 25 && name.ends_with(".json")) names.insert(name);
    }
    if (ec) throw Error(ErrorCode::StorageFailure, "cannot list " + dir.string() + ": " + ec.message());

    for (const auto& name : names) {
        json doc;
        try {
            doc = json::parse(io::read_file(dir / name));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::StorageFailure, "corrupt snapshot " + (dir / name).string() + ": " + e.what());
        }
        auto record = snapshot_from_json(doc);
        // Guards against URL hash collisions.
        if (record.url == url) return record;
    }
    return std::nullopt;
}

double jaccard(const text::TermVector& a, const text::TermVector& b) {
    const std::set<std::string> sa(a.begin(), a.end());
    const std::set<std::string> sb(b.begin(), b.end());
    if (sa.empty() && sb.empty()) return 1.0;
    std::size_t common = 0;
    for (const auto& t : sa) common += sb.count(t);
    const std::size_t uni = sa.size() + sb.size() - common;
    return static_cast<double>(common) / static_cast<double>(uni);
}

std::optional<PriorSegment> match_prior_segment(const html::Segment& segment, const SnapshotRecord& snapshot) {
    const auto nearest = [&](auto&& accept) -> std::optional<PriorSegment> {
        std::optional<std::size_t> best;
        for (std::size_t i = 0; i < snapshot.segments.size(); ++i) {
            if (!accept(snapshot.segments[i])) continue;
            if (!best || distance(i, segment.id) < distance(*best, segment.id)) best = i;
        }
        if (!best) return std::nullopt;
        return snapshot.segments[*best];
    };
    if (auto exact = nearest([&](const PriorSegment& p) { return p.fingerprint == segment.fingerprint; })) {
        return exact;
    }
    return nearest([&](const PriorSegment& p) { return jaccard(segment.tokens, p.tokens) >= kPriorMatchThreshold; });
}

}  // namespace segscore::store
