#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "segscore/html/segmenter.hpp"
#include "segscore/text/terms.hpp"

namespace segscore::store {

using Timestamp = std::chrono::sys_time<std::chrono::microseconds>;

struct PriorSegment {
    std::uint64_t fingerprint = 0;
    text::TermVector tokens;

    friend bool operator==(const PriorSegment&, const PriorSegment&) = default;
};

struct SnapshotRecord {
    std::string url;
    Timestamp captured_at{};
    std::vector<PriorSegment> segments;  // document order

    friend bool operator==(const SnapshotRecord&, const SnapshotRecord&) = default;
};

SnapshotRecord snapshot_of(const std::string& url, Timestamp captured_at, const std::vector<html::Segment>& segments);

// "YYYY-MM-DDTHH:MM:SS.ffffffZ"
std::string format_timestamp(Timestamp t);
Timestamp parse_timestamp(const std::string& text);

nlohmann::json snapshot_to_json(const SnapshotRecord& record);
SnapshotRecord snapshot_from_json(const nlohmann::json& j);

// One directory per URL (named by a hash of the URL), one JSON file per
// snapshot named by its capture time. Single writer per URL; any number of
// readers. Throws Error(StorageFailure) on I/O errors.
class SnapshotStore {
public:
    explicit SnapshotStore(std::filesystem::path root);

    // Throws Error(InvalidArgument) unless record.captured_at is later than
    // every stored snapshot of the same URL.
    void put(const SnapshotRecord& record);
    std::optional<SnapshotRecord> latest(const std::string& url) const;

    const std::filesystem::path& root() const { return root_; }
    std::filesystem::path directory_for(const std::string& url) const;

private:
    std::filesystem::path root_;
};

// Token-set Jaccard similarity; two empty sets are identical (1.0).
double jaccard(const text::TermVector& a, const text::TermVector& b);

inline constexpr double kPriorMatchThreshold = 0.5;

// Exact fingerprint match first, then the positionally nearest prior segment
// with Jaccard >= 0.5. Position ties go to the earlier prior segment.
std::optional<PriorSegment> match_prior_segment(const html::Segment& segment, const SnapshotRecord& snapshot);

}  // namespace segscore::store
