#include "segscore/report/html_report.hpp"

#include <algorithm>
#include <numeric>
#include <regex>
#include <tuple>

#include <fmt/format.h>

namespace segscore::report {

namespace {

constexpr std::string_view kBoundaryStyle =
    "<style data-segscore-style>"
    ".segscore-boundary{display:block;font:11px/1.4 monospace;color:#b00020;}"
    ".segscore-start{border-top:2px dashed #b00020;}"
    ".segscore-start::before{content:\"segment \" attr(data-segscore-start) \" begins\";}"
    ".segscore-end{border-bottom:2px dashed #b00020;}"
    ".segscore-end::before{content:\"segment \" attr(data-segscore-end) \" ends\";}"
    "</style>";

constexpr std::string_view kReportStyle =
    "body{font:14px/1.5 sans-serif;margin:2em;color:#222;}"
    "section.seg{border:2px solid #888;border-radius:4px;margin:1em 0;padding:.5em 1em;}"
    "section.q0{background:#f4f6fb;}section.q1{background:#dfe8f7;}"
    "section.q2{background:#fde9c8;}section.q3{background:#f9c7b5;}"
    "pre.segscore-text{white-space:pre-wrap;font:13px/1.4 serif;}"
    "table{border-collapse:collapse;}td,th{border:1px solid #aaa;padding:2px 8px;text-align:right;}"
    ".flags{color:#b00020;}";

std::string start_marker(std::size_t id) {
    return fmt::format("<span class=\"segscore-boundary segscore-start\" data-segscore-start=\"{}\"></span>", id);
}

std::string end_marker(std::size_t id) {
    return fmt::format("<span class=\"segscore-boundary segscore-end\" data-segscore-end=\"{}\"></span>", id);
}

std::string number(double v) {
    return fmt::format("{:.4f}", v);
}

}  // namespace

std::string escape_html(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&#39;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string segment_boundaries_html(const html::Document& doc, const std::vector<html::Segment>& segments) {
    // (position, kind, id); ends (0) sort before starts (1) at one position.
    std::vector<std::tuple<std::size_t, int, std::size_t>> events;
    for (const auto& s : segments) {
        events.emplace_back(s.source_begin, 1, s.id);
        events.emplace_back(s.source_end, 0, s.id);
    }
    std::sort(events.begin(), events.end());

    const std::string& src = doc.source;
    std::string out;
    out.reserve(src.size() + events.size() * 96 + kBoundaryStyle.size());
    std::size_t cursor = 0;
    bool style_written = false;
    for (const auto& [pos, kind, id] : events) {
        const std::size_t at = std::min(pos, src.size());
        out.append(src, cursor, at - cursor);
        cursor = at;
        if (!style_written) {
            out += kBoundaryStyle;
            style_written = true;
        }
        out += kind == 1 ? start_marker(id) : end_marker(id);
    }
    out.append(src, cursor, std::string::npos);
    return out;
}

std::string strip_boundary_markers(std::string_view annotated) {
    static const std::regex marker(
        R"re(<span class="segscore-boundary segscore-(start|end)" data-segscore-(start|end)="[0-9]+"></span>)re");
    std::string out(annotated);
    if (auto at = out.find(kBoundaryStyle); at != std::string::npos) out.erase(at, kBoundaryStyle.size());
    return std::regex_replace(out, marker, "");
}

std::vector<int> total_quartiles(const std::vector<page::SegmentScoreRecord>& records) {
    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return records[a].total < records[b].total; });
    std::vector<int> quartile(records.size(), 0);
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        quartile[order[rank]] = static_cast<int>(rank * 4 / order.size());
    }
    return quartile;
}

std::string score_report_html(const page::ScoredPage& scored) {
    const auto& report = scored.report;
    const auto quartiles = total_quartiles(report.segments);

    std::string out;
    out += "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">";
    out += "<title>Segment scores: " + escape_html(report.url) + "</title>";
    out += "<style>";
    out += kReportStyle;
    out += "</style></head><body>\n";
    out += "<h1>Segment scores</h1>\n";
    out += fmt::format("<p>URL: <code>{}</code><br>Query: <code>{}</code><br>Provider: {}<br>"
                       "Page score: <strong>{}</strong> over {} segments</p>\n",
                       escape_html(report.url), escape_html(report.query), escape_html(report.provider),
                       number(report.page_score), report.segments.size());
    if (!report.flags.empty()) {
        out += "<ul class=\"flags\">";
        for (const auto& f : report.flags) out += "<li>" + escape_html(f) + "</li>";
        out += "</ul>\n";
    }

    for (std::size_t i = 0; i < report.segments.size(); ++i) {
        const auto& r = report.segments[i];
        const auto& seg = scored.segments[i];
        out += fmt::format("<section class=\"seg q{}\" id=\"segment-{}\">\n", quartiles[i], r.segment_id);
        out += fmt::format("<h2>Segment {}: total {}</h2>\n", r.segment_id, number(r.total));
        out += fmt::format("<pre class=\"segscore-text\" data-segment=\"{}\">{}</pre>\n", r.segment_id,
                           escape_html(seg.text));
        out += "<table><tr><th>link</th><th>image</th><th>theme</th><th>visual</th><th>freshness</th>"
               "<th>profile</th><th>structural</th><th>annotation</th><th>total</th></tr>\n<tr>";
        for (auto d : scoring::kAllDimensions) out += "<td>" + number(r.dimensions[d]) + "</td>";
        out += "<td>" + number(r.delta) + "</td><td>" + number(r.annotation) + "</td><td>" + number(r.total) +
               "</td></tr></table>\n";
        out += "<h3>Context annotations</h3>\n";
        if (r.entities.empty()) {
            out += "<p>none</p>\n";
        } else {
            out += "<ul class=\"entities\">";
            for (const auto& e : r.entities) {
                out += fmt::format("<li><b>{}</b>: {} (relevance {})</li>", escape_html(e.category),
                                   escape_html(e.name), number(e.relevance));
            }
            out += "</ul>\n";
        }
        out += "</section>\n";
    }
    out += "</body></html>\n";
    return out;
}

}  // namespace segscore::report
