#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include <unicode/utf8.h>

#include "segscore/error.hpp"
#include "segscore/html/dom.hpp"

namespace segscore::html {

namespace {

using TagSet = std::unordered_set<std::string_view>;

const TagSet kVoidTags = {"area", "base", "br", "col", "embed", "hr", "img", "input", "keygen",
                          "link", "meta", "param", "source", "track", "wbr"};

// Elements whose content is not markup.
const TagSet kRawTextTags = {"script", "style", "xmp", "iframe", "noembed", "noframes", "textarea", "title"};
const TagSet kEscapableRawTextTags = {"textarea", "title"};

const TagSet kHeadTags = {"base", "link", "meta", "script", "style", "title", "noscript", "template"};

// Start tags that close an open <p>.
const TagSet kClosesParagraph = {
    "address", "article", "aside", "blockquote", "center", "details", "dialog", "dir", "div",
    "dl", "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5",
    "h6", "header", "hgroup", "hr", "main", "menu", "nav", "ol", "p", "pre", "section",
    "summary", "table", "ul", "li", "dd", "dt", "listing", "xmp"};

const TagSet kHeadings = {"h1", "h2", "h3", "h4", "h5", "h6"};

const TagSet kFormatting = {"a", "b", "big", "code", "em", "font", "i", "nobr", "s", "small",
                            "strike", "strong", "tt", "u", "mark", "span", "abbr", "cite", "q",
                            "sub", "sup", "label", "kbd", "samp", "var", "del", "ins"};

// Elements that stop the search of an inline end tag.
const TagSet kSpecial = {
    "address", "article", "aside", "blockquote", "body", "center", "dd", "details", "dir",
    "div", "dl", "dt", "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2", "h3",
    "h4", "h5", "h6", "header", "hgroup", "html", "li", "main", "menu", "nav", "ol", "p", "pre",
    "section", "summary", "table", "tbody", "td", "tfoot", "th", "thead", "tr", "ul", "caption",
    "select", "button", "object", "applet", "marquee", "template"};

const TagSet kScopeBoundary = {"html", "table", "td", "th", "caption", "template", "object",
                               "marquee", "applet", "button"};

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}

bool is_alpha(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

char lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

const std::unordered_map<std::string_view, char32_t>& entity_table() {
    static const std::unordered_map<std::string_view, char32_t> table = {
        {"amp", U'&'}, {"lt", U'<'}, {"gt", U'>'}, {"quot", U'"'}, {"apos", U'\''},
        {"nbsp", 0xA0}, {"copy", 0xA9}, {"reg", 0xAE}, {"trade", 0x2122}, {"hellip", 0x2026},
        {"mdash", 0x2014}, {"ndash", 0x2013}, {"lsquo", 0x2018}, {"rsquo", 0x2019},
        {"sbquo", 0x201A}, {"ldquo", 0x201C}, {"rdquo", 0x201D}, {"bdquo", 0x201E},
        {"laquo", 0xAB}, {"raquo", 0xBB}, {"bull", 0x2022}, {"middot", 0xB7}, {"deg", 0xB0},
        {"plusmn", 0xB1}, {"times", 0xD7}, {"divide", 0xF7}, {"euro", 0x20AC}, {"pound", 0xA3},
        {"yen", 0xA5}, {"cent", 0xA2}, {"sect", 0xA7}, {"para", 0xB6}, {"shy", 0xAD},
        {"iexcl", 0xA1}, {"iquest", 0xBF}, {"ensp", 0x2002}, {"emsp", 0x2003},
        {"thinsp", 0x2009}, {"zwnj", 0x200C}, {"zwj", 0x200D}, {"larr", 0x2190},
        {"uarr", 0x2191}, {"rarr", 0x2192}, {"darr", 0x2193}, {"hearts", 0x2665},
        {"szlig", 0xDF}, {"aelig", 0xE6}, {"AElig", 0xC6}, {"oslash", 0xF8}, {"Oslash", 0xD8},
        {"aring", 0xE5}, {"Aring", 0xC5}, {"ccedil", 0xE7}, {"Ccedil", 0xC7},
        {"ntilde", 0xF1}, {"Ntilde", 0xD1}, {"yuml", 0xFF}, {"yacute", 0xFD}, {"Yacute", 0xDD},
        {"agrave", 0xE0}, {"aacute", 0xE1}, {"acirc", 0xE2}, {"atilde", 0xE3}, {"auml", 0xE4},
        {"Agrave", 0xC0}, {"Aacute", 0xC1}, {"Acirc", 0xC2}, {"Atilde", 0xC3}, {"Auml", 0xC4},
        {"egrave", 0xE8}, {"eacute", 0xE9}, {"ecirc", 0xEA}, {"euml", 0xEB},
        {"Egrave", 0xC8}, {"Eacute", 0xC9}, {"Ecirc", 0xCA}, {"Euml", 0xCB},
        {"igrave", 0xEC}, {"iacute", 0xED}, {"icirc", 0xEE}, {"iuml", 0xEF},
        {"Igrave", 0xCC}, {"Iacute", 0xCD}, {"Icirc", 0xCE}, {"Iuml", 0xCF},
        {"ograve", 0xF2}, {"oacute", 0xF3}, {"ocirc", 0xF4}, {"otilde", 0xF5}, {"ouml", 0xF6},
        {"Ograve", 0xD2}, {"Oacute", 0xD3}, {"Ocirc", 0xD4}, {"Otilde", 0xD5}, {"Ouml", 0xD6},
        {"ugrave", 0xF9}, {"uacute", 0xFA}, {"ucirc", 0xFB}, {"uuml", 0xFC},
        {"Ugrave", 0xD9}, {"Uacute", 0xDA}, {"Ucirc", 0xDB}, {"Uuml", 0xDC},
    };
    return table;
}

// References that browsers still honour without the trailing semicolon.
const TagSet kLegacyEntities = {"amp", "lt", "gt", "quot", "nbsp", "copy", "reg"};

void append_code_point(std::string& out, char32_t cp) {
    if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
    char buf[U8_MAX_LENGTH];
    int32_t len = 0;
    UBool error = false;
    U8_APPEND(buf, len, U8_MAX_LENGTH, static_cast<UChar32>(cp), error);
    (void)error;
    out.append(buf, static_cast<std::size_t>(len));
}

class TreeBuilder {
public:
    explicit TreeBuilder(std::string source) {
        doc_.source = std::move(source);
        auto root = std::make_unique<DomNode>();
        root->kind = DomNode::Kind::Document;
        root->tag = "#document";
        root->source_end = doc_.source.size();
        doc_.root = std::move(root);
    }

    Document run() {
        const std::string_view src = doc_.source;
        std::size_t pos = 0;
        if (src.substr(0, 3) == "\xEF\xBB\xBF") pos = 3;

        while (pos < src.size()) {
            if (src[pos] != '<') {
                const std::size_t next = src.find('<', pos + 1);
                const std::size_t end = next == std::string_view::npos ? src.size() : next;
                on_text(pos, end, decode_entities(src.substr(pos, end - pos)));
                pos = end;
                continue;
            }
            pos = on_markup(pos);
        }
        close_all(src.size());
        return std::move(doc_);
    }

private:
    Document doc_;
    std::vector<DomNode*> stack_;  // open elements, innermost last
    DomNode* html_ = nullptr;
    DomNode* head_ = nullptr;
    DomNode* body_ = nullptr;
    bool after_head_ = false;

    struct StartTag {
        std::string name;
        std::vector<std::pair<std::string, std::string>> attributes;
        bool self_closing = false;
    };

    // Returns the position after the consumed markup.
    std::size_t on_markup(std::size_t pos) {
        const std::string_view src = doc_.source;
        if (pos + 1 >= src.size()) {
            on_text(pos, src.size(), std::string(src.substr(pos)));
            return src.size();
        }
        const char next = src[pos + 1];
        if (next == '!') {
            if (src.substr(pos, 4) == "<!--") {
                const std::size_t end = src.find("-->", pos + 4);
                return end == std::string_view::npos ? src.size() : end + 3;
            }
            return skip_to_gt(pos + 2);
        }
        if (next == '?') return skip_to_gt(pos + 2);
        if (next == '/') {
            if (pos + 2 < src.size() && is_alpha(src[pos + 2])) {
                std::size_t p = pos + 2;
                std::string name;
                while (p < src.size() && !is_space(src[p]) && src[p] != '/' && src[p] != '>') {
                    name.push_back(lower(src[p]));
                    ++p;
                }
                const std::size_t end = skip_to_gt(p);
                on_end_tag(name, pos, end);
                return end;
            }
            return skip_to_gt(pos + 2);
        }
        if (!is_alpha(next)) {
            on_text(pos, pos + 1, "<");
            return pos + 1;
        }

        StartTag tag;
        std::size_t p = pos + 1;
        while (p < src.size() && !is_space(src[p]) && src[p] != '/' && src[p] != '>') {
            tag.name.push_back(lower(src[p]));
            ++p;
        }
        bool closed = false;
        while (p < src.size()) {
            while (p < src.size() && (is_space(src[p]) || src[p] == '/')) {
                tag.self_closing = src[p] == '/';
                ++p;
            }
            if (p >= src.size()) break;
            if (src[p] == '>') {
                ++p;
                closed = true;
                break;
            }
            tag.self_closing = false;
            std::string name;
            while (p < src.size() && !is_space(src[p]) && src[p] != '/' && src[p] != '>' &&
                   (src[p] != '=' || name.empty())) {
                name.push_back(lower(src[p]));
                ++p;
            }
            std::size_t q = p;
            while (q < src.size() && is_space(src[q])) ++q;
            std::string value;
            if (q < src.size() && src[q] == '=') {
                ++q;
                while (q < src.size() && is_space(src[q])) ++q;
                if (q < src.size() && (src[q] == '"' || src[q] == '\'')) {
                    const char quote = src[q];
                    const std::size_t close = src.find(quote, q + 1);
                    const std::size_t vend = close == std::string_view::npos ? src.size() : close;
                    value = decode_entities(src.substr(q + 1, vend - q - 1));
                    p = close == std::string_view::npos ? src.size() : close + 1;
                } else {
                    const std::size_t vstart = q;
                    while (q < src.size() && !is_space(src[q]) && src[q] != '>') ++q;
                    value = decode_entities(src.substr(vstart, q - vstart));
                    p = q;
                }
            }
            tag.attributes.emplace_back(std::move(name), std::move(value));
        }
        // A tag cut off by end of input is dropped.
        if (!closed) return src.size();

        if (kRawTextTags.count(tag.name) != 0 && !tag.self_closing) {
            return on_raw_text_element(std::move(tag), pos, p);
        }
        on_start_tag(std::move(tag), pos, p);
        return p;
    }

    std::size_t skip_to_gt(std::size_t pos) const {
        const std::size_t end = doc_.source.find('>', pos);
        return end == std::string::npos ? doc_.source.size() : end + 1;
    }

    std::size_t on_raw_text_element(StartTag tag, std::size_t begin, std::size_t content_begin) {
        const std::string_view src = doc_.source;
        std::size_t search = content_begin;
        std::size_t content_end = src.size();
        std::size_t end = src.size();
        while (true) {
            const std::size_t lt = src.find("</", search);
            if (lt == std::string_view::npos) break;
            const std::size_t after = lt + 2 + tag.name.size();
            bool match = after <= src.size();
            for (std::size_t i = 0; match && i < tag.name.size(); ++i) {
                match = lower(src[lt + 2 + i]) == tag.name[i];
            }
            if (match && (after == src.size() || is_space(src[after]) || src[after] == '>' || src[after] == '/')) {
                content_end = lt;
                end = skip_to_gt(after);
                break;
            }
            search = lt + 2;
        }
        std::string content(src.substr(content_begin, content_end - content_begin));
        if (kEscapableRawTextTags.count(tag.name) != 0) content = decode_entities(content);

        DomNode* parent = insertion_parent_for(tag.name, begin);
        DomNode* element = append_element(parent, tag, begin);
        element->source_end = end;
        if (!content.empty()) {
            auto text = std::make_unique<DomNode>();
            text->kind = DomNode::Kind::Text;
            text->tag = "#text";
            text->text = std::move(content);
            text->source_begin = content_begin;
            text->source_end = content_end;
            element->children.push_back(std::move(text));
        }
        return end;
    }

    DomNode* append_element(DomNode* parent, const StartTag& tag, std::size_t begin) {
        auto node = std::make_unique<DomNode>();
        node->kind = DomNode::Kind::Element;
        node->tag = tag.name;
        node->attributes = tag.attributes;
        node->source_begin = begin;
        node->source_end = begin;
        DomNode* raw = node.get();
        parent->children.push_back(std::move(node));
        return raw;
    }

    void ensure_html(std::size_t pos) {
        if (html_ != nullptr) return;
        StartTag tag{"html", {}, false};
        html_ = append_element(doc_.root.get(), tag, pos);
        stack_.push_back(html_);
    }

    void ensure_head(std::size_t pos) {
        ensure_html(pos);
        if (head_ != nullptr) return;
        StartTag tag{"head", {}, false};
        head_ = append_element(html_, tag, pos);
    }

    void ensure_body(std::size_t pos) {
        ensure_html(pos);
        if (body_ != nullptr) return;
        // Leaving the head: close it if still open.
        if (head_ != nullptr) pop_through(head_, pos, pos);
        after_head_ = true;
        StartTag tag{"body", {}, false};
        body_ = append_element(html_, tag, pos);
        stack_.push_back(body_);
    }

    // Where an element with this name goes before the body exists.
    DomNode* insertion_parent_for(const std::string& name, std::size_t pos) {
        if (body_ == nullptr && kHeadTags.count(name) != 0) {
            ensure_head(pos);
            if (std::find(stack_.begin(), stack_.end(), head_) != stack_.end()) return stack_.back();
            return head_;
        }
        ensure_body(pos);
        return stack_.back();
    }

    bool on_stack(const DomNode* node) const {
        return std::find(stack_.begin(), stack_.end(), node) != stack_.end();
    }

    // Pops elements down to and including target. Elements above target were
    // closed implicitly and end at implicit_end.
    void pop_through(DomNode* target, std::size_t implicit_end, std::size_t target_end) {
        if (!on_stack(target)) return;
        while (!stack_.empty()) {
            DomNode* top = stack_.back();
            stack_.pop_back();
            if (top == target) {
                top->source_end = target_end;
                return;
            }
            top->source_end = implicit_end;
        }
    }

    DomNode* find_open(std::string_view name, const TagSet& boundaries) const {
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
            DomNode* node = *it;
            if (node->tag == name) return node;
            if (node == body_ || boundaries.count(node->tag) != 0) return nullptr;
        }
        return nullptr;
    }

    void close_open(std::string_view name, const TagSet& boundaries, std::size_t pos) {
        if (DomNode* open = find_open(name, boundaries)) pop_through(open, pos, pos);
    }

    void on_start_tag(StartTag tag, std::size_t begin, std::size_t end) {
        const std::string& name = tag.name;
        if (name == "html") {
            if (html_ == nullptr) {
                html_ = append_element(doc_.root.get(), tag, begin);
                stack_.push_back(html_);
            } else {
                merge_attributes(html_, tag);
            }
            return;
        }
        if (name == "head") {
            if (head_ == nullptr && body_ == nullptr) {
                ensure_html(begin);
                head_ = append_element(html_, tag, begin);
                stack_.push_back(head_);
            }
            return;
        }
        if (name == "body") {
            if (body_ == nullptr) {
                ensure_body(begin);
                body_->attributes = tag.attributes;
            } else {
                merge_attributes(body_, tag);
            }
            return;
        }

        DomNode* parent = nullptr;
        if (body_ == nullptr && kHeadTags.count(name) != 0) {
            parent = insertion_parent_for(name, begin);
        } else {
            ensure_body(begin);
            apply_implicit_closes(name, begin);
            parent = stack_.back();
        }

        DomNode* element = append_element(parent, tag, begin);
        if (kVoidTags.count(name) != 0 || tag.self_closing) {
            element->source_end = end;
            return;
        }
        if (parent == head_ && !on_stack(head_)) {
            // Head content arriving after </head>: reopen the head for it.
            stack_.push_back(head_);
        }
        stack_.push_back(element);
    }

    void apply_implicit_closes(const std::string& name, std::size_t pos) {
        if (kClosesParagraph.count(name) != 0) close_open("p", kScopeBoundary, pos);
        if (kHeadings.count(name) != 0 && kHeadings.count(stack_.back()->tag) != 0) {
            pop_through(stack_.back(), pos, pos);
        }
        if (name == "li") {
            close_open("li", {"ul", "ol", "table", "td", "th", "template"}, pos);
        } else if (name == "dd" || name == "dt") {
            DomNode* dd = find_open("dd", {"dl", "table", "template"});
            DomNode* dt = find_open("dt", {"dl", "table", "template"});
            if (dd != nullptr) pop_through(dd, pos, pos);
            if (dt != nullptr) pop_through(dt, pos, pos);
        } else if (name == "tr") {
            close_open("tr", {"table", "template"}, pos);
        } else if (name == "td" || name == "th") {
            close_open("td", {"tr", "table", "template"}, pos);
            close_open("th", {"tr", "table", "template"}, pos);
        } else if (name == "thead" || name == "tbody" || name == "tfoot") {
            for (std::string_view section : {"thead", "tbody", "tfoot"}) {
                close_open(section, {"table", "template"}, pos);
            }
        } else if (name == "option") {
            if (stack_.back()->tag == "option") pop_through(stack_.back(), pos, pos);
        } else if (name == "a") {
            close_open("a", {"table", "template"}, pos);
        }
    }

    void on_end_tag(const std::string& name, std::size_t begin, std::size_t end) {
        if (name == "html" || name == "body") return;
        if (name == "head") {
            if (head_ != nullptr && on_stack(head_)) pop_through(head_, begin, end);
            after_head_ = true;
            return;
        }
        if (name == "br") {
            ensure_body(begin);
            StartTag tag{"br", {}, true};
            append_element(stack_.back(), tag, begin)->source_end = end;
            return;
        }

        DomNode* target = nullptr;
        if (kFormatting.count(name) != 0) {
            target = find_open(name, {});
        } else if (kSpecial.count(name) != 0 || kClosesParagraph.count(name) != 0) {
            TagSet boundaries = kScopeBoundary;
            if (name == "li") boundaries.insert({"ul", "ol"});
            if (name == "table" || name == "td" || name == "th" || name == "caption") {
                boundaries = {"html", "template"};
                if (name != "table") boundaries.insert("table");
            }
            boundaries.erase(name);
            target = find_open(name, boundaries);
        } else {
            for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
                if ((*it)->tag == name) {
                    target = *it;
                    break;
                }
                if (kSpecial.count((*it)->tag) != 0 || *it == head_) break;
            }
        }
        if (target == nullptr || target == html_ || target == body_) return;
        pop_through(target, begin, end);
    }

    void on_text(std::size_t begin, std::size_t end, std::string text) {
        if (text.empty()) return;
        const bool whitespace = std::all_of(text.begin(), text.end(), is_space);
        if (body_ == nullptr) {
            if (whitespace) {
                // Inter-element whitespace before the body; kept only inside
                // open head children such as <noscript>.
                if (stack_.empty() || stack_.back() == html_ || stack_.back() == head_) return;
            } else if (!(head_ != nullptr && on_stack(head_) && stack_.back() != head_)) {
                ensure_body(begin);
            }
        }
        DomNode* parent = stack_.back();
        if (!parent->children.empty() && parent->children.back()->is_text()) {
            DomNode* last = parent->children.back().get();
            last->text += text;
            last->source_end = end;
            return;
        }
        auto node = std::make_unique<DomNode>();
        node->kind = DomNode::Kind::Text;
        node->tag = "#text";
        node->text = std::move(text);
        node->source_begin = begin;
        node->source_end = end;
        parent->children.push_back(std::move(node));
    }

    static void merge_attributes(DomNode* node, const StartTag& tag) {
        for (const auto& attr : tag.attributes) {
            if (!node->attribute(attr.first)) node->attributes.push_back(attr);
        }
    }

    void close_all(std::size_t end) {
        for (DomNode* node : stack_) node->source_end = end;
        stack_.clear();
    }
};

}  // namespace

std::optional<std::string_view> DomNode::attribute(std::string_view name) const {
    for (const auto& [key, value] : attributes) {
        if (key == name) return std::string_view(value);
    }
    return std::nullopt;
}

namespace {

const DomNode* find_child(const DomNode* parent, std::string_view tag) {
    if (parent == nullptr) return nullptr;
    for (const auto& child : parent->children) {
        if (child->is_element(tag)) return child.get();
    }
    return nullptr;
}

const DomNode* find_first(const DomNode& node, std::string_view tag) {
    if (node.is_element(tag)) return &node;
    for (const auto& child : node.children) {
        if (const DomNode* hit = find_first(*child, tag)) return hit;
    }
    return nullptr;
}

}  // namespace

const DomNode* Document::html() const { return find_child(root.get(), "html"); }
const DomNode* Document::head() const { return find_child(html(), "head"); }
const DomNode* Document::body() const { return find_child(html(), "body"); }
const DomNode* Document::title() const { return root ? find_first(*root, "title") : nullptr; }

std::string decode_entities(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c != '&') {
            out.push_back(c);
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        if (j < text.size() && text[j] == '#') {
            ++j;
            const bool hex = j < text.size() && (text[j] == 'x' || text[j] == 'X');
            if (hex) ++j;
            const std::size_t digits_begin = j;
            std::uint32_t value = 0;
            while (j < text.size() && (hex ? std::isxdigit(static_cast<unsigned char>(text[j]))
                                           : std::isdigit(static_cast<unsigned char>(text[j])))) {
                const char d = text[j];
                const std::uint32_t digit = std::isdigit(static_cast<unsigned char>(d))
                                                ? static_cast<std::uint32_t>(d - '0')
                                                : static_cast<std::uint32_t>(lower(d) - 'a' + 10);
                value = std::min<std::uint32_t>(value * (hex ? 16 : 10) + digit, 0x110000);
                ++j;
            }
            if (j == digits_begin) {
                out.push_back('&');
                ++i;
                continue;
            }
            if (j < text.size() && text[j] == ';') ++j;
            append_code_point(out, value);
            i = j;
            continue;
        }
        while (j < text.size() && j - i <= 32 && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
        const std::string_view name = text.substr(i + 1, j - i - 1);
        const bool terminated = j < text.size() && text[j] == ';';
        const auto& table = entity_table();
        auto it = table.find(name);
        if (it != table.end() && (terminated || kLegacyEntities.count(name) != 0)) {
            append_code_point(out, it->second);
            i = terminated ? j + 1 : j;
        } else {
            out.push_back('&');
            ++i;
        }
    }
    return out;
}

std::string lossy_utf8(std::string_view bytes) {
    std::string out;
    out.reserve(bytes.size());
    const auto* data = reinterpret_cast<const uint8_t*>(bytes.data());
    const auto length = static_cast<int32_t>(bytes.size());
    int32_t i = 0;
    while (i < length) {
        const int32_t start = i;
        UChar32 cp = 0;
        U8_NEXT(data, i, length, cp);
        if (cp < 0) {
            out.append("\xEF\xBF\xBD");
        } else {
            out.append(bytes.substr(static_cast<std::size_t>(start), static_cast<std::size_t>(i - start)));
        }
    }
    return out;
}

Document parse_html(std::string_view bytes) {
    if (bytes.substr(0, 2) == "\xFF\xFE" || bytes.substr(0, 2) == "\xFE\xFF") {
        throw Error(ErrorCode::MalformedInput, "input is UTF-16/UTF-32 encoded, expected UTF-8");
    }
    if (bytes.find('\0') != std::string_view::npos) {
        throw Error(ErrorCode::MalformedInput, "input contains NUL bytes; not a UTF-8 text stream");
    }
    return TreeBuilder(lossy_utf8(bytes)).run();
}

}  // namespace segscore::html
