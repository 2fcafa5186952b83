#include "segscore/html/segmenter.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>
#include <unicode/utf8.h>

#include "segscore/error.hpp"

namespace segscore::html {

namespace {

const std::unordered_set<std::string_view> kInvisible = {"script", "style", "head", "title", "template"};

// Rendered as blocks by every browser regardless of the segmentation config.
const std::unordered_set<std::string_view> kLayoutBreaks = {
    "li", "td", "th", "tr", "dt", "dd", "br", "hr", "option", "caption", "figcaption",
    "figure", "main", "form", "fieldset", "legend", "address", "center", "details", "summary",
    "dl", "menu", "tbody", "thead", "tfoot", "body", "html", "select", "textarea", "iframe"};

bool is_invisible(const DomNode& node) {
    return node.is_element() && kInvisible.count(node.tag) != 0;
}

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}

std::size_t code_points(std::string_view text) {
    std::size_t n = 0;
    for (unsigned char c : text) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

class TextWalker {
public:
    explicit TextWalker(const std::set<std::string>& block_tags) : blocks_(block_tags) {}

    bool is_block(const DomNode& node) const {
        return node.is_element() && blocks_.count(node.tag) != 0;
    }

    bool contains_block(const DomNode& node) const {
        if (!node.is_element() || is_invisible(node)) return false;
        auto it = contains_block_.find(&node);
        if (it != contains_block_.end()) return it->second;
        bool found = false;
        for (const auto& child : node.children) {
            if (child->is_element() && !is_invisible(*child) && (is_block(*child) || contains_block(*child))) {
                found = true;
                break;
            }
        }
        contains_block_.emplace(&node, found);
        return found;
    }

    bool breaks_line(const DomNode& node) const {
        return is_block(node) || kLayoutBreaks.count(node.tag) != 0 || contains_block(node);
    }

    void append(const DomNode& node, std::string& out) const {
        if (node.is_text()) {
            out += node.text;
            return;
        }
        if (is_invisible(node)) return;
        const bool brk = node.kind == DomNode::Kind::Element && breaks_line(node);
        if (brk) out.push_back('\n');
        for (const auto& child : node.children) append(*child, out);
        if (brk) out.push_back('\n');
    }

    std::string text_of(const DomNode& node) const {
        std::string out;
        append(node, out);
        return out;
    }

private:
    const std::set<std::string>& blocks_;
    mutable std::unordered_map<const DomNode*, bool> contains_block_;
};

struct Candidate {
    std::vector<const DomNode*> nodes;
    std::vector<std::size_t> path;  // path of nodes.front()
    const DomNode* block = nullptr;  // set when the candidate is one block element
    std::string raw_text;
    std::string text;
    std::size_t token_count = 0;
};

bool has_scorable_media(const DomNode& node) {
    if (is_invisible(node)) return false;
    if (node.is_element("img")) return true;
    if (node.is_element("a") && node.attribute("href")) return true;
    return std::any_of(node.children.begin(), node.children.end(),
                       [](const auto& child) { return has_scorable_media(*child); });
}

class Segmenter {
public:
    Segmenter(const Document& doc, const SegmentationConfig& cfg) : doc_(doc), cfg_(cfg), walker_(cfg.block_tags) {}

    SegmentationResult run() {
        SegmentationResult result;
        const DomNode* body = doc_.body();
        if (body == nullptr || text::tokenize(walker_.text_of(*body)).empty()) {
            result.empty_page = true;
            return result;
        }

        std::vector<Candidate> candidates;
        decompose(*body, path_to(body), candidates);

        std::vector<Candidate> refined;
        for (auto& c : candidates) refine(std::move(c), refined);

        // Merge rule: a short candidate joins the segment before it.
        std::vector<std::vector<Candidate>> groups;
        for (auto& c : refined) {
            if (!groups.empty() && c.token_count < cfg_.min_tokens) {
                groups.back().push_back(std::move(c));
            } else {
                groups.emplace_back();
                groups.back().push_back(std::move(c));
            }
        }

        for (auto& group : groups) result.segments.push_back(build(group, result.segments.size()));
        return result;
    }

private:
    const Document& doc_;
    const SegmentationConfig& cfg_;
    TextWalker walker_;

    std::vector<std::size_t> path_to(const DomNode* target) const {
        std::vector<std::size_t> path;
        find_path(*doc_.root, target, path);
        return path;
    }

    static bool find_path(const DomNode& node, const DomNode* target, std::vector<std::size_t>& path) {
        if (&node == target) return true;
        for (std::size_t i = 0; i < node.children.size(); ++i) {
            path.push_back(i);
            if (find_path(*node.children[i], target, path)) return true;
            path.pop_back();
        }
        return false;
    }

    void finish(Candidate& c) const {
        for (const DomNode* node : c.nodes) walker_.append(*node, c.raw_text);
        c.text = collapse_whitespace(c.raw_text);
        c.token_count = text::tokenize(c.text).size();
    }

    void push_candidate(Candidate c, std::vector<Candidate>& out) const {
        finish(c);
        const bool media = std::any_of(c.nodes.begin(), c.nodes.end(),
                                       [](const DomNode* n) { return has_scorable_media(*n); });
        if (c.text.empty() && !media) return;
        out.push_back(std::move(c));
    }

    // Splits the children of a container into maximal block subtrees and the
    // inline runs between them, looking through non-block elements that wrap
    // blocks.
    void decompose(const DomNode& container, const std::vector<std::size_t>& container_path,
                   std::vector<Candidate>& out) const {
        Candidate run;
        auto flush = [&] {
            if (!run.nodes.empty()) push_candidate(std::move(run), out);
            run = Candidate{};
        };
        for (std::size_t i = 0; i < container.children.size(); ++i) {
            const DomNode& child = *container.children[i];
            auto child_path = container_path;
            child_path.push_back(i);
            if (walker_.is_block(child)) {
                flush();
                Candidate block;
                block.nodes.push_back(&child);
                block.path = std::move(child_path);
                block.block = &child;
                push_candidate(std::move(block), out);
            } else if (walker_.contains_block(child)) {
                flush();
                decompose(child, child_path, out);
            } else {
                if (run.nodes.empty()) run.path = std::move(child_path);
                run.nodes.push_back(&child);
            }
        }
        flush();
    }

    void refine(Candidate c, std::vector<Candidate>& out) const {
        if (c.block != nullptr && c.token_count > cfg_.max_tokens) {
            std::vector<Candidate> parts;
            decompose(*c.block, c.path, parts);
            const bool has_block_part = std::any_of(parts.begin(), parts.end(),
                                                    [](const Candidate& p) { return p.block != nullptr; });
            if (has_block_part && !densities_close(parts)) {
                for (auto& p : parts) refine(std::move(p), out);
                return;
            }
        }
        out.push_back(std::move(c));
    }

    bool densities_close(const std::vector<Candidate>& parts) const {
        if (parts.empty()) return true;
        double lo = 0.0;
        double hi = 0.0;
        bool first = true;
        for (const auto& p : parts) {
            const double d = text_density_of(p.text, p.token_count);
            lo = first ? d : std::min(lo, d);
            hi = first ? d : std::max(hi, d);
            first = false;
        }
        return hi - lo <= cfg_.density_floor;
    }

    void harvest(const DomNode& node, Segment& seg) const {
        if (node.is_text() || is_invisible(node)) return;
        if (node.is_element("a")) {
            if (auto href = node.attribute("href")) {
                seg.links.push_back({text::tokenize(walker_.text_of(node)), href_tokens(*href), std::string(*href)});
            }
        } else if (node.is_element("img")) {
            ImageRef image;
            image.alt_tokens = text::tokenize(node.attribute("alt").value_or(""));
            image.title_tokens = text::tokenize(node.attribute("title").value_or(""));
            image.src = std::string(node.attribute("src").value_or(""));
            image.src_filename_tokens = src_filename_tokens(image.src);
            seg.images.push_back(std::move(image));
        }
        if (cfg_.visual_tags.count(node.tag) != 0) {
            seg.visual_spans.push_back({node.tag, text::tokenize(walker_.text_of(node))});
        }
        for (const auto& child : node.children) harvest(*child, seg);
    }

    Segment build(const std::vector<Candidate>& group, std::size_t id) const {
        Segment seg;
        seg.id = id;
        seg.dom_path = group.front().path;
        std::string raw;
        for (const auto& c : group) {
            raw += c.raw_text;
            raw.push_back('\n');
        }
        seg.text = collapse_whitespace(raw);
        seg.tokens = text::tokenize(seg.text);
        seg.fingerprint = fingerprint(seg.tokens);
        seg.source_begin = group.front().nodes.front()->source_begin;
        seg.source_end = group.back().nodes.back()->source_end;
        for (const auto& c : group) {
            for (const DomNode* node : c.nodes) harvest(*node, seg);
        }
        return seg;
    }
};

}  // namespace

SegmentationConfig SegmentationConfig::defaults() {
    SegmentationConfig cfg;
    cfg.block_tags = {"div", "p", "section", "article", "aside", "nav", "header", "footer", "ul", "ol",
                      "table", "blockquote", "h1", "h2", "h3", "h4", "h5", "h6", "pre"};
    cfg.visual_tags = {"h1", "h2", "h3", "h4", "h5", "h6", "strong", "b", "em", "i", "u"};
    return cfg;
}

void SegmentationConfig::validate() const {
    if (min_tokens < 1) throw Error(ErrorCode::MalformedConfig, "min_tokens must be >= 1");
    if (max_tokens <= min_tokens) throw Error(ErrorCode::MalformedConfig, "max_tokens must exceed min_tokens");
    if (!(density_floor >= 0.0)) throw Error(ErrorCode::MalformedConfig, "density_floor must be non-negative");
}

SegmentationConfig parse_segmentation_config(const std::string& document) {
    SegmentationConfig cfg = SegmentationConfig::defaults();
    try {
        const auto doc = nlohmann::json::parse(document);
        if (!doc.is_object()) throw Error(ErrorCode::MalformedConfig, "segmentation config must be a JSON object");
        if (doc.contains("block_tags")) {
            cfg.block_tags.clear();
            for (const auto& tag : doc.at("block_tags")) cfg.block_tags.insert(tag.get<std::string>());
        }
        if (doc.contains("min_tokens")) {
            const auto v = doc.at("min_tokens").get<long long>();
            if (v < 1) throw Error(ErrorCode::MalformedConfig, "min_tokens must be >= 1");
            cfg.min_tokens = static_cast<std::size_t>(v);
        }
        if (doc.contains("max_tokens")) {
            const auto v = doc.at("max_tokens").get<long long>();
            if (v < 1) throw Error(ErrorCode::MalformedConfig, "max_tokens must be >= 1");
            cfg.max_tokens = static_cast<std::size_t>(v);
        }
        if (doc.contains("density_floor")) cfg.density_floor = doc.at("density_floor").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedConfig, std::string("segmentation config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::string visible_text(const DomNode& node, const std::set<std::string>& block_tags) {
    return TextWalker(block_tags).text_of(node);
}

std::string collapse_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        if (is_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

double text_density_of(std::string_view collapsed_text, std::size_t token_count) {
    const std::size_t chars = code_points(collapsed_text);
    const std::size_t lines = (chars + kDensityLineWidth - 1) / kDensityLineWidth;
    return static_cast<double>(token_count) / static_cast<double>(std::max<std::size_t>(1, lines));
}

double text_density(const DomNode& node, const std::set<std::string>& block_tags) {
    const std::string text = collapse_whitespace(visible_text(node, block_tags));
    return text_density_of(text, text::tokenize(text).size());
}

SegmentationResult segment_page(const Document& doc, const SegmentationConfig& cfg) {
    cfg.validate();
    return Segmenter(doc, cfg).run();
}

text::TermVector body_tokens(const Document& doc, const SegmentationConfig& cfg) {
    const DomNode* body = doc.body();
    return body == nullptr ? text::TermVector{} : text::tokenize(visible_text(*body, cfg.block_tags));
}

text::TermVector title_tokens(const Document& doc) {
    const DomNode* title = doc.title();
    if (title == nullptr) return {};
    std::string text;
    for (const auto& child : title->children) {
        if (child->is_text()) text += child->text;
    }
    return text::tokenize(text);
}

std::uint64_t fingerprint(const text::TermVector& tokens) {
    constexpr std::uint64_t kOffset = 0xcbf29ce484222325ULL;
    constexpr std::uint64_t kPrime = 0x100000001b3ULL;
    std::uint64_t h = kOffset;
    for (const auto& token : tokens) {
        for (unsigned char c : token) {
            h ^= c;
            h *= kPrime;
        }
        // Token terminator; tokens never contain 0xFF bytes.
        h ^= 0xFF;
        h *= kPrime;
    }
    return h;
}

std::string fingerprint_hex(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::uint64_t parse_fingerprint_hex(const std::string& hex) {
    if (hex.size() != 16 || hex.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos) {
        throw Error(ErrorCode::MalformedInput, "fingerprint must be 16 hex digits: " + hex);
    }
    return std::stoull(hex, nullptr, 16);
}

text::TermVector href_tokens(std::string_view href) {
    href = href.substr(0, href.find('#'));
    // Drop "scheme:" and "//authority".
    const auto colon = href.find(':');
    if (colon != std::string_view::npos && colon > 0) {
        const bool scheme = std::all_of(href.begin(), href.begin() + static_cast<std::ptrdiff_t>(colon), [](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
        }) && std::isalpha(static_cast<unsigned char>(href.front()));
        if (scheme) href.remove_prefix(colon + 1);
    }
    if (href.substr(0, 2) == "//") {
        href.remove_prefix(2);
        const auto slash = href.find_first_of("/?");
        href = slash == std::string_view::npos ? std::string_view{} : href.substr(slash);
    }
    return text::tokenize(href);
}

text::TermVector src_filename_tokens(std::string_view src) {
    if (src.substr(0, 5) == "data:") return {};
    src = src.substr(0, src.find_first_of("?#"));
    const auto slash = src.find_last_of('/');
    if (slash != std::string_view::npos) src.remove_prefix(slash + 1);
    return text::tokenize(src);
}

}  // namespace segscore::html
