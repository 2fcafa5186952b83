#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "segscore/html/segmenter.hpp"

namespace segscore::html {

// Segment Pool persisted form:
// {"v":1,"url":..,"segments":[{id, dom_path, text, tokens, links, images,
//   visual_spans, fingerprint}], "flags":[..]}
// Fingerprints are 16-digit lowercase hex strings.
nlohmann::json segment_to_json(const Segment& segment);
Segment segment_from_json(const nlohmann::json& j);

nlohmann::json segment_pool_to_json(const std::string& url, const SegmentationResult& result);
std::vector<Segment> segment_pool_from_json(const nlohmann::json& j);

}  // namespace segscore::html
