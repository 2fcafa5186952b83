#include "segscore/page/page_scorer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "segscore/error.hpp"
#include "segscore/html/segment_json.hpp"
#include "segscore/io.hpp"

namespace segscore::page {

using nlohmann::json;

namespace {

constexpr int kReportVersion = 1;

unsigned worker_count(const ConfigBundle& cfg, std::size_t jobs) {
    unsigned n = cfg.workers != 0 ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Runs job(i) for i in [0, count) on a small pool; rethrows the first failure.
template <typename Job>
void parallel_for(std::size_t count, unsigned workers, Job&& job) {
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

html::SegmentationConfig effective_segmentation(const ConfigBundle& cfg) {
    html::SegmentationConfig seg = cfg.segmentation;
    seg.visual_tags = cfg.vmwt.tags();
    return seg;
}

store::Timestamp now(const ConfigBundle& cfg) {
    if (cfg.clock) return cfg.clock();
    return std::chrono::time_point_cast<std::chrono::microseconds>(std::chrono::system_clock::now());
}

struct AnnotationOutcome {
    annotation::AnnotationSet set;
    std::optional<std::string> flag;
};

AnnotationOutcome annotate_segment(const html::Segment& segment, annotation::AnnotationProvider& provider) {
    AnnotationOutcome out;
    out.set.provider_id = provider.id();
    out.set.segment_id = segment.id;
    try {
        out.set = annotation::annotate(segment.text, provider, segment.id);
    } catch (const Error& e) {
        const char* kind = e.code() == ErrorCode::ProviderProtocol ? "annotation_protocol_error" : "annotation_unavailable";
        out.flag = fmt::format("{}: segment {}: {}", kind, segment.id, e.what());
    }
    return out;
}

json entities_json(const std::vector<annotation::Entity>& entities) {
    json list = json::array();
    for (const auto& e : entities) list.push_back({{"type", e.category}, {"name", e.name}, {"relevance", e.relevance}});
    return list;
}

double mean(double sum, std::size_t n) {
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

ScoredPage score_document(std::string_view html_bytes, const std::string& url, const text::Query& query,
                          const Profile& profile, const ConfigBundle& cfg) {
    store::validate_profile(profile);
    ScoredPage out{html::parse_html(html_bytes), {}, {}};
    auto segmentation = html::segment_page(out.document, effective_segmentation(cfg));
    if (segmentation.empty_page) throw Error(ErrorCode::EmptyPage, "page body has no visible text: " + url);
    out.segments = std::move(segmentation.segments);

    const auto fused = text::fuse_terms(query, profile);
    const auto title = html::title_tokens(out.document);

    std::optional<store::SnapshotStore> snapshots;
    std::optional<store::SnapshotRecord> previous;
    if (cfg.snapshot_dir) {
        snapshots.emplace(*cfg.snapshot_dir);
        previous = snapshots->latest(url);
    }

    const scoring::StructuralInputs inputs{fused, profile, title, cfg.vmwt, cfg.coeffs};
    std::vector<SegmentScoreRecord> records(out.segments.size());
    std::vector<std::optional<std::string>> segment_flags(out.segments.size());

    parallel_for(out.segments.size(), worker_count(cfg, out.segments.size()), [&](std::size_t i) {
        const html::Segment& segment = out.segments[i];

        // With a snapshot present, an unmatched segment is entirely fresh.
        std::optional<text::TermVector> prior;
        if (previous) {
            auto match = store::match_prior_segment(segment, *previous);
            prior = match ? std::move(match->tokens) : text::TermVector{};
        }

        const auto structural = scoring::structural_score(segment, inputs, prior);
        SegmentScoreRecord& record = records[i];
        record.segment_id = segment.id;
        record.dimensions = structural.dimensions;
        record.delta = structural.delta;
        if (cfg.provider) {
            auto outcome = annotate_segment(segment, *cfg.provider);
            record.annotation = annotation::annotation_score(outcome.set, fused, cfg.category_weights);
            record.entities = std::move(outcome.set.entities);
            segment_flags[i] = std::move(outcome.flag);
        }
        record.total = record.delta + record.annotation;
    });

    PageReport& report = out.report;
    report.url = url;
    report.query = query.raw;
    report.provider = cfg.provider ? cfg.provider->id() : "none";
    if (!cfg.provider) report.flags.emplace_back("annotation_provider_disabled");
    for (auto& flag : segment_flags) {
        if (flag) report.flags.push_back(std::move(*flag));
    }
    for (const auto& r : records) report.page_score += r.total;
    report.segments = std::move(records);

    if (snapshots) {
        auto captured = now(cfg);
        if (previous && captured <= previous->captured_at) captured = previous->captured_at + std::chrono::microseconds(1);
        snapshots->put(store::snapshot_of(url, captured, out.segments));
    }
    return out;
}

PageReport score_page(std::string_view html_bytes, const std::string& url, const text::Query& query,
                      const Profile& profile, const ConfigBundle& cfg) {
    return score_document(html_bytes, url, query, profile, cfg).report;
}

json annotate_page(std::string_view html_bytes, const std::string& url, const ConfigBundle& cfg) {
    const auto doc = html::parse_html(html_bytes);
    auto segmentation = html::segment_page(doc, effective_segmentation(cfg));

    json segments = json::array();
    json fixtures = json::object();
    json flags = json::array();
    if (segmentation.empty_page) flags.push_back("empty_page");
    if (!cfg.provider) flags.push_back("annotation_provider_disabled");

    std::vector<AnnotationOutcome> outcomes(segmentation.segments.size());
    if (cfg.provider) {
        parallel_for(outcomes.size(), worker_count(cfg, outcomes.size()), [&](std::size_t i) {
            outcomes[i] = annotate_segment(segmentation.segments[i], *cfg.provider);
        });
    }
    for (std::size_t i = 0; i < segmentation.segments.size(); ++i) {
        const auto& segment = segmentation.segments[i];
        const std::string hash = annotation::text_hash(segment.text);
        segments.push_back({{"segment_id", segment.id},
                            {"text_hash", hash},
                            {"text", segment.text},
                            {"entities", entities_json(outcomes[i].set.entities)}});
        if (outcomes[i].flag) {
            flags.push_back(*outcomes[i].flag);
        } else if (cfg.provider) {
            fixtures[hash] = annotation::entities_response(outcomes[i].set.entities);
        }
    }
    return {{"v", kReportVersion},
            {"url", url},
            {"provider", cfg.provider ? cfg.provider->id() : "none"},
            {"segments", std::move(segments)},
            {"fixtures", std::move(fixtures)},
            {"flags", std::move(flags)}};
}

json report_to_json(const PageReport& report) {
    json segments = json::array();
    for (const auto& r : report.segments) {
        json dims = json::object();
        for (auto d : scoring::kAllDimensions) dims[scoring::dimension_name(d)] = r.dimensions[d];
        segments.push_back({{"segment_id", r.segment_id},
                            {"dimensions", std::move(dims)},
                            {"delta", r.delta},
                            {"annotation", r.annotation},
                            {"total", r.total},
                            {"entities", entities_json(r.entities)}});
    }
    return {{"v", kReportVersion},
            {"url", report.url},
            {"query", report.query},
            {"provider", report.provider},
            {"page_score", report.page_score},
            {"segments", std::move(segments)},
            {"flags", report.flags}};
}

PageReport report_from_json(const json& j) {
    try {
        if (j.value("v", 0) != kReportVersion) throw Error(ErrorCode::MalformedInput, "unsupported report version");
        PageReport report;
        report.url = j.at("url").get<std::string>();
        report.query = j.at("query").get<std::string>();
        report.provider = j.value("provider", std::string("none"));
        report.page_score = j.at("page_score").get<double>();
        report.flags = j.value("flags", std::vector<std::string>{});
        for (const auto& s : j.at("segments")) {
            SegmentScoreRecord r;
            r.segment_id = s.at("segment_id").get<std::size_t>();
            for (auto d : scoring::kAllDimensions) r.dimensions[d] = s.at("dimensions").at(scoring::dimension_name(d)).get<double>();
            r.delta = s.at("delta").get<double>();
            r.annotation = s.at("annotation").get<double>();
            r.total = s.at("total").get<double>();
            for (const auto& e : s.value("entities", json::array())) {
                r.entities.push_back({e.at("type").get<std::string>(), e.at("name").get<std::string>(),
                                      e.value("relevance", 1.0)});
            }
            report.segments.push_back(std::move(r));
        }
        return report;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("page report JSON: ") + e.what());
    }
}

SessionStats compute_session_stats(const std::string& session_id, std::span<const PageReport> session) {
    if (session.empty()) throw Error(ErrorCode::EmptySession, "session '" + session_id + "' has no page reports");
    std::size_t segment_count = 0;
    double delta_sum = 0.0;
    double annotation_sum = 0.0;
    for (const auto& report : session) {
        segment_count += report.segments.size();
        for (const auto& r : report.segments) {
            delta_sum += r.delta;
            annotation_sum += r.annotation;
        }
    }
    SessionStats stats;
    stats.session_id = session_id;
    stats.msc = mean(static_cast<double>(segment_count), session.size());
    stats.msss = mean(delta_sum, segment_count);
    stats.mcas = mean(annotation_sum, segment_count);
    stats.uplift = delta_sum > 0.0 ? annotation_sum / delta_sum : 0.0;
    return stats;
}

std::map<std::string, std::vector<PageReport>> load_report_sessions(const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) throw Error(ErrorCode::MissingFile, "no such directory: " + dir.string());

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    std::map<std::string, std::vector<PageReport>> sessions;
    for (const auto& file : files) {
        const std::string stem = file.stem().string();
        const auto sep = stem.find("__");
        const std::string session = sep == std::string::npos ? stem : stem.substr(0, sep);
        json doc;
        try {
            doc = json::parse(io::read_file(file));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::MalformedInput, file.string() + ": " + e.what());
        }
        sessions[session].push_back(report_from_json(doc));
    }
    if (sessions.empty()) throw Error(ErrorCode::EmptySession, "no page reports in " + dir.string());
    return sessions;
}

std::string session_stats_csv(std::span<const SessionStats> stats) {
    std::string out = "session_id,msc,msss,mcas\n";
    for (const auto& s : stats) out += fmt::format("{},{:.4f},{:.4f},{:.4f}\n", s.session_id, s.msc, s.msss, s.mcas);
    return out;
}

std::vector<Table1Row> parse_table1_csv(const std::string& csv) {
    std::vector<Table1Row> rows;
    std::istringstream in(csv);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(trim(cell));
        if (cells.size() != 4) throw Error(ErrorCode::MalformedInput, fmt::format("table1 line {}: expected 4 columns", line_no));
        if (cells[0] == "session_id") continue;
        try {
            rows.push_back({cells[0], std::stod(cells[1]), std::stod(cells[2]), std::stod(cells[3])});
        } catch (const std::exception&) {
            throw Error(ErrorCode::MalformedInput, fmt::format("table1 line {}: non-numeric value", line_no));
        }
    }
    if (rows.empty()) throw Error(ErrorCode::EmptySession, "table1 file has no rows");
    return rows;
}

bool Table1Report::passed() const {
    return msss_ok && mcas_ok && std::all_of(ratios.begin(), ratios.end(), [](const RatioCheck& r) { return r.ok; });
}

std::string Table1Report::text() const {
    std::string out;
    out += fmt::format("{} mean MSSS {:.4f} (published {:.2f} +/- {:.2f})\n", msss_ok ? "PASS" : "FAIL", mean_msss,
                       kPublishedMeanMsss, kMeanTolerance);
    out += fmt::format("{} mean MCAS {:.4f} (published {:.2f} +/- {:.2f})\n", mcas_ok ? "PASS" : "FAIL", mean_mcas,
                       kPublishedMeanMcas, kMeanTolerance);
    for (const auto& r : ratios) {
        out += fmt::format("{} session {} MCAS/MSSS {:.4f} in [{:.2f}, {:.2f}]\n", r.ok ? "PASS" : "FAIL", r.session_id,
                           r.ratio, kRatioLow, kRatioHigh);
    }
    out += fmt::format("mean MSC {:.4f}\n", mean_msc);
    out += passed() ? "table1: all checks passed\n" : "table1: checks FAILED\n";
    return out;
}

Table1Report table1_checks(std::span<const Table1Row> rows) {
    Table1Report report;
    double msc = 0.0, msss = 0.0, mcas = 0.0;
    for (const auto& row : rows) {
        msc += row.msc;
        msss += row.msss;
        mcas += row.mcas;
        RatioCheck check{row.session_id, row.msss > 0.0 ? row.mcas / row.msss : 0.0, false};
        check.ok = row.msss > 0.0 && check.ratio >= kRatioLow && check.ratio <= kRatioHigh;
        report.ratios.push_back(std::move(check));
    }
    report.mean_msc = mean(msc, rows.size());
    report.mean_msss = mean(msss, rows.size());
    report.mean_mcas = mean(mcas, rows.size());
    report.msss_ok = !rows.empty() && std::abs(report.mean_msss - kPublishedMeanMsss) <= kMeanTolerance;
    report.mcas_ok = !rows.empty() && std::abs(report.mean_mcas - kPublishedMeanMcas) <= kMeanTolerance;
    return report;
}

std::string table1_csv(std::span<const Table1Row> rows) {
    std::string out = "session_id,msc,msss,mcas\n";
    for (const auto& r : rows) out += fmt::format("{},{:.2f},{:.2f},{:.2f}\n", r.session_id, r.msc, r.msss, r.mcas);
    return out;
}

}  // namespace segscore::page
