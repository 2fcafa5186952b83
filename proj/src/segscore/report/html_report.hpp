#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "segscore/html/dom.hpp"
#include "segscore/html/segmenter.hpp"
#include "segscore/page/page_scorer.hpp"

namespace segscore::report {

// The source page with an inline style block and empty marker elements
// injected at each segment's start and end. Deleting every marker and the
// style block (see strip_boundary_markers) gives back the source unchanged.
std::string segment_boundaries_html(const html::Document& doc, const std::vector<html::Segment>& segments);

std::string strip_boundary_markers(std::string_view annotated);

// Self-contained report: one section per segment holding its escaped text,
// the six dimension scores, delta, annotation score, total and the entity
// listing. Sections are shaded by the quartile of their total.
std::string score_report_html(const page::ScoredPage& scored);

std::string escape_html(std::string_view text);

// Quartile (0..3) of each record's total; ties keep segment order.
std::vector<int> total_quartiles(const std::vector<page::SegmentScoreRecord>& records);

}  // namespace segscore::report
