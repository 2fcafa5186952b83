#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "segscore/annotation/annotations.hpp"
#include "segscore/html/dom.hpp"
#include "segscore/html/segmenter.hpp"
#include "segscore/scoring/structural.hpp"
#include "segscore/store/profile.hpp"
#include "segscore/store/snapshots.hpp"
#include "segscore/text/terms.hpp"

namespace segscore::page {

// Everything score_page needs besides the page, query and profile.
struct ConfigBundle {
    html::SegmentationConfig segmentation = html::SegmentationConfig::defaults();
    scoring::Vmwt vmwt = scoring::Vmwt::defaults();
    scoring::DimensionCoefficients coeffs;
    annotation::CategoryWeights category_weights;
    std::shared_ptr<annotation::AnnotationProvider> provider;  // null: annotations disabled
    std::optional<std::filesystem::path> snapshot_dir;         // set: read and write snapshots
    unsigned workers = 0;                                       // 0: hardware concurrency
    std::function<store::Timestamp()> clock;                    // null: system clock
};

struct SegmentScoreRecord {
    std::size_t segment_id = 0;
    scoring::DimensionScores dimensions;
    double delta = 0.0;
    double annotation = 0.0;
    double total = 0.0;  // delta + annotation
    std::vector<annotation::Entity> entities;
};

struct PageReport {
    std::string url;
    std::string query;
    std::string provider;  // provider id, or "none"
    std::vector<SegmentScoreRecord> segments;
    double page_score = 0.0;  // sum of segment totals
    std::vector<std::string> flags;
};

// A scored page together with the parse it was computed from.
struct ScoredPage {
    html::Document document;
    std::vector<html::Segment> segments;
    PageReport report;
};

// Segments the page, fuses query and profile once, scores every segment
// structurally and by annotations, and sums the totals. When a snapshot
// directory is configured, freshness compares against the latest stored
// snapshot and a new snapshot is written after scoring.
// Throws Error(EmptyPage) when the body has no visible text. Provider
// failures never abort: the segment's annotation score is 0 and a flag is
// added to the report.
ScoredPage score_document(std::string_view html, const std::string& url, const text::Query& query,
                          const Profile& profile, const ConfigBundle& cfg);

PageReport score_page(std::string_view html, const std::string& url, const text::Query& query, const Profile& profile,
                      const ConfigBundle& cfg);

// Annotation sets for every segment plus a replay-fixture object
// (text hash -> response body) built from the answers.
nlohmann::json annotate_page(std::string_view html, const std::string& url, const ConfigBundle& cfg);

nlohmann::json report_to_json(const PageReport& report);
PageReport report_from_json(const nlohmann::json& j);

struct SessionStats {
    std::string session_id;
    double msc = 0.0;     // mean segment count per page
    double msss = 0.0;    // mean structural score over all segments
    double mcas = 0.0;    // mean annotation score over all segments
    double uplift = 0.0;  // sum of annotation / sum of structural scores
};

// Throws Error(EmptySession) for an empty session.
SessionStats compute_session_stats(const std::string& session_id, std::span<const PageReport> session);

// Reads every *.json report in the directory, grouping by the file-name
// prefix before "__" (the whole stem when absent). Sessions come back sorted
// by id. Throws Error(EmptySession) when no report is found.
std::map<std::string, std::vector<PageReport>> load_report_sessions(const std::filesystem::path& dir);

std::string session_stats_csv(std::span<const SessionStats> stats);

struct Table1Row {
    std::string session_id;
    double msc = 0.0;
    double msss = 0.0;
    double mcas = 0.0;
};

// CSV with header session_id,msc,msss,mcas. Throws Error(MalformedInput).
std::vector<Table1Row> parse_table1_csv(const std::string& csv);

inline constexpr double kPublishedMeanMsss = 11.87;
inline constexpr double kPublishedMeanMcas = 8.91;
inline constexpr double kMeanTolerance = 0.01;
inline constexpr double kRatioLow = 0.74;
inline constexpr double kRatioHigh = 0.76;

struct RatioCheck {
    std::string session_id;
    double ratio = 0.0;  // MCAS / MSSS
    bool ok = false;
};

struct Table1Report {
    double mean_msc = 0.0;
    double mean_msss = 0.0;
    double mean_mcas = 0.0;
    bool msss_ok = false;
    bool mcas_ok = false;
    std::vector<RatioCheck> ratios;

    bool passed() const;
    std::string text() const;  // one PASS/FAIL line per check
};

Table1Report table1_checks(std::span<const Table1Row> rows);

// Per-session (MSC, MSSS, MCAS) triples for plotting.
std::string table1_csv(std::span<const Table1Row> rows);

}  // namespace segscore::page
