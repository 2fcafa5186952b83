#include "segscore/html/segment_json.hpp"

#include "segscore/error.hpp"

namespace segscore::html {

using nlohmann::json;

namespace {

constexpr int kPoolVersion = 1;

text::TermVector tokens_from(const json& j, const char* key) {
    return j.at(key).get<text::TermVector>();
}

}  // namespace

json segment_to_json(const Segment& s) {
    json links = json::array();
    for (const auto& l : s.links) {
        links.push_back({{"anchor_tokens", l.anchor_tokens}, {"href_tokens", l.href_tokens}, {"href", l.href}});
    }
    json images = json::array();
    for (const auto& i : s.images) {
        images.push_back({{"alt_tokens", i.alt_tokens},
                          {"title_tokens", i.title_tokens},
                          {"src_filename_tokens", i.src_filename_tokens},
                          {"src", i.src}});
    }
    json spans = json::array();
    for (const auto& v : s.visual_spans) spans.push_back({{"tag", v.tag}, {"tokens", v.tokens}});

    return {{"id", s.id},
            {"dom_path", s.dom_path},
            {"text", s.text},
            {"tokens", s.tokens},
            {"links", std::move(links)},
            {"images", std::move(images)},
            {"visual_spans", std::move(spans)},
            {"fingerprint", fingerprint_hex(s.fingerprint)}};
}

Segment segment_from_json(const json& j) {
    try {
        Segment s;
        s.id = j.at("id").get<std::size_t>();
        s.dom_path = j.at("dom_path").get<std::vector<std::size_t>>();
        s.text = j.at("text").get<std::string>();
        s.tokens = tokens_from(j, "tokens");
        for (const auto& l : j.at("links")) {
            s.links.push_back({tokens_from(l, "anchor_tokens"), tokens_from(l, "href_tokens"),
                               l.value("href", std::string{})});
        }
        for (const auto& i : j.at("images")) {
            s.images.push_back({tokens_from(i, "alt_tokens"), tokens_from(i, "title_tokens"),
                                tokens_from(i, "src_filename_tokens"), i.value("src", std::string{})});
        }
        for (const auto& v : j.at("visual_spans")) {
            s.visual_spans.push_back({v.at("tag").get<std::string>(), tokens_from(v, "tokens")});
        }
        s.fingerprint = parse_fingerprint_hex(j.at("fingerprint").get<std::string>());
        return s;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("segment JSON: ") + e.what());
    }
}

json segment_pool_to_json(const std::string& url, const SegmentationResult& result) {
    json segments = json::array();
    for (const auto& s : result.segments) segments.push_back(segment_to_json(s));
    json flags = json::array();
    if (result.empty_page) flags.push_back("empty_page");
    return {{"v", kPoolVersion}, {"url", url}, {"segments", std::move(segments)}, {"flags", std::move(flags)}};
}

std::vector<Segment> segment_pool_from_json(const json& j) {
    if (!j.is_object() || !j.contains("segments")) {
        throw Error(ErrorCode::MalformedInput, "segment pool JSON needs a 'segments' list");
    }
    std::vector<Segment> out;
    for (const auto& s : j.at("segments")) out.push_back(segment_from_json(s));
    return out;
}

}  // namespace segscore::html
