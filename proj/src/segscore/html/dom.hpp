#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace segscore::html {

struct DomNode {
    enum class Kind { Document, Element, Text };

    Kind kind = Kind::Element;
    std::string tag;  // lowercase element name; "#document" / "#text" otherwise
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<std::unique_ptr<DomNode>> children;
    std::string text;  // decoded character data, text nodes only

    // Byte range of the node in Document::source. For elements this runs from
    // the '<' of the start tag to the end of the end tag, or to the token that
    // implicitly closed the element.
    std::size_t source_begin = 0;
    std::size_t source_end = 0;

    bool is_element() const { return kind == Kind::Element; }
    bool is_text() const { return kind == Kind::Text; }
    bool is_element(std::string_view name) const { return kind == Kind::Element && tag == name; }

    // First value wins for duplicated attribute names.
    std::optional<std::string_view> attribute(std::string_view name) const;
};

struct Document {
    std::string source;  // input after lossy UTF-8 repair
    std::unique_ptr<DomNode> root;

    const DomNode* html() const;
    const DomNode* head() const;
    const DomNode* body() const;
    // First <title> in document order, or null.
    const DomNode* title() const;
};

// Error-tolerant HTML parsing: unclosed and misnested tags are recovered,
// comments and doctypes are dropped, script/style bodies are kept as raw text
// under their element. Invalid UTF-8 is replaced with U+FFFD.
// Throws Error(MalformedInput) for input that is not a UTF-8 byte stream at
// all (NUL bytes, UTF-16/UTF-32 byte order marks).
Document parse_html(std::string_view bytes);

// Decodes character references (&amp; &#233; &#xE9; ...). Unknown references
// are kept literally.
std::string decode_entities(std::string_view text);

std::string lossy_utf8(std::string_view bytes);

}  // namespace segscore::html
