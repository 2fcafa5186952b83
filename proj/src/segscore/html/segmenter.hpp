#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "segscore/html/dom.hpp"
#include "segscore/text/terms.hpp"

namespace segscore::html {

struct LinkRef {
    text::TermVector anchor_tokens;
    text::TermVector href_tokens;  // URL path and query string only
    std::string href;
};

struct ImageRef {
    text::TermVector alt_tokens;
    text::TermVector title_tokens;
    text::TermVector src_filename_tokens;
    std::string src;
};

struct VisualSpan {
    std::string tag;
    text::TermVector tokens;
};

// One unit of a segmented page.
struct Segment {
    std::size_t id = 0;
    std::vector<std::size_t> dom_path;  // child indices from the document root to the first node
    std::string text;                   // visible text, whitespace collapsed
    text::TermVector tokens;
    std::vector<LinkRef> links;
    std::vector<ImageRef> images;
    std::vector<VisualSpan> visual_spans;
    std::uint64_t fingerprint = 0;

    // Byte range in Document::source covered by the segment's nodes.
    std::size_t source_begin = 0;
    std::size_t source_end = 0;
};

struct SegmentationConfig {
    std::set<std::string> block_tags;
    std::size_t min_tokens = 10;
    std::size_t max_tokens = 400;
    double density_floor = 2.0;
    // Elements recorded as visual spans; the scorer sets this to the VMWT keys.
    std::set<std::string> visual_tags;

    static SegmentationConfig defaults();

    // Throws Error(MalformedConfig).
    void validate() const;
};

// Reads {"block_tags":[..], "min_tokens":n, "max_tokens":n, "density_floor":x};
// absent keys keep their defaults.
SegmentationConfig parse_segmentation_config(const std::string& document);

struct SegmentationResult {
    std::vector<Segment> segments;
    bool empty_page = false;  // body has no visible tokens; segments is empty
};

// Visible text of a subtree: script, style, head, title and template content
// is skipped, and a line break is emitted around every element that renders
// as a block (the configured block tags, common layout elements, and any
// element containing one of those).
std::string visible_text(const DomNode& node, const std::set<std::string>& block_tags);

// Collapses whitespace runs to one space and trims.
std::string collapse_whitespace(std::string_view text);

// Width of the rendered line used by the density measure.
inline constexpr std::size_t kDensityLineWidth = 80;

// tokens / max(1, ceil(code_points / 80)) over collapsed visible text.
double text_density(const DomNode& node, const std::set<std::string>& block_tags);
double text_density_of(std::string_view collapsed_text, std::size_t token_count);

SegmentationResult segment_page(const Document& doc, const SegmentationConfig& cfg);

// Tokens of the whole body's visible text.
text::TermVector body_tokens(const Document& doc, const SegmentationConfig& cfg);
text::TermVector title_tokens(const Document& doc);

// FNV-1a over the ordered tokens; a function of the tokens only.
std::uint64_t fingerprint(const text::TermVector& tokens);
inline std::uint64_t fingerprint(const Segment& segment) { return fingerprint(segment.tokens); }

std::string fingerprint_hex(std::uint64_t value);
std::uint64_t parse_fingerprint_hex(const std::string& hex);

text::TermVector href_tokens(std::string_view href);
text::TermVector src_filename_tokens(std::string_view src);

}  // namespace segscore::html
