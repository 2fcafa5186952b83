#include <gtest/gtest.h>

#include "segscore/error.hpp"
#include "segscore/html/dom.hpp"
#include "segscore/html/segmenter.hpp"

using namespace segscore;
using html::DomNode;

namespace {

const auto kBlocks = html::SegmentationConfig::defaults().block_tags;

std::vector<const DomNode*> elements(const DomNode& parent) {
    std::vector<const DomNode*> out;
    for (const auto& c : parent.children) {
        if (c->is_element()) out.push_back(c.get());
    }
    return out;
}

std::string body_text(const std::string& html) {
    const auto doc = html::parse_html(html);
    return html::collapse_whitespace(html::visible_text(*doc.body(), kBlocks));
}

}  // namespace

TEST(Parser, MinimalDocument) {
    const auto doc = html::parse_html("<p>hi</p>");
    ASSERT_NE(doc.body(), nullptr);
    const auto kids = elements(*doc.body());
    ASSERT_EQ(kids.size(), 1u);
    EXPECT_EQ(kids[0]->tag, "p");
    ASSERT_EQ(kids[0]->children.size(), 1u);
    EXPECT_TRUE(kids[0]->children[0]->is_text());
    EXPECT_EQ(kids[0]->children[0]->text, "hi");
}

TEST(Parser, UnclosedParagraphsBecomeSiblings) {
    const auto doc = html::parse_html("<p>a<p>b");
    const auto kids = elements(*doc.body());
    ASSERT_EQ(kids.size(), 2u);
    EXPECT_EQ(kids[0]->tag, "p");
    EXPECT_EQ(kids[1]->tag, "p");
    EXPECT_EQ(kids[0]->children[0]->text, "a");
    EXPECT_EQ(kids[1]->children[0]->text, "b");
}

TEST(Parser, ScriptIsNotVisible) {
    EXPECT_EQ(body_text("<script>x=1</script><p>a</p>"), "a");
}

TEST(Parser, ScriptBodyIsRawText) {
    EXPECT_EQ(body_text("<script>if (a<b) { x = \"</div>\"; }</script><p>after</p>"), "after");
}

TEST(Parser, ImplicitStructure) {
    const auto doc = html::parse_html("<title>T</title><div>x</div>");
    ASSERT_NE(doc.html(), nullptr);
    ASSERT_NE(doc.head(), nullptr);
    ASSERT_NE(doc.body(), nullptr);
    ASSERT_NE(doc.title(), nullptr);
    EXPECT_EQ(html::title_tokens(doc), (text::TermVector{"t"}));
    EXPECT_EQ(body_text("<title>T</title><div>x</div>"), "x");
}

TEST(Parser, ListItemsCloseImplicitly) {
    const auto doc = html::parse_html("<ul><li>one<li>two<li>three</ul>");
    const auto ul = elements(*doc.body());
    ASSERT_EQ(ul.size(), 1u);
    EXPECT_EQ(elements(*ul[0]).size(), 3u);
}

TEST(Parser, TableCellsCloseImplicitly) {
    const auto doc = html::parse_html("<table><tr><td>a<td>b<tr><td>c</table>");
    const auto table = elements(*doc.body());
    ASSERT_EQ(table.size(), 1u);
    std::size_t rows = 0, cells = 0;
    std::function<void(const DomNode&)> walk = [&](const DomNode& n) {
        if (n.is_element("tr")) ++rows;
        if (n.is_element("td")) ++cells;
        for (const auto& c : n.children) walk(*c);
    };
    walk(*table[0]);
    EXPECT_EQ(rows, 2u);
    EXPECT_EQ(cells, 3u);
}

TEST(Parser, MisnestedInlineKeepsAllText) {
    EXPECT_EQ(body_text("<div><b>one <i>two</b> three</i></div>"), "one two three");
}

TEST(Parser, StrayEndTagsIgnored) {
    EXPECT_EQ(body_text("</span></div><p>ok</p></p></body>"), "ok");
}

TEST(Parser, EntitiesDecoded) {
    EXPECT_EQ(html::decode_entities("a &amp; b &lt;c&gt; &#233;&#xE9; &unknown; &copy"),
              "a & b <c> \xC3\xA9\xC3\xA9 &unknown; \xC2\xA9");
}

TEST(Parser, AttributesDecodedFirstWins) {
    const auto doc = html::parse_html("<a href=\"/x?a=1&amp;b=2\" href='/y' data-x=plain>t</a>");
    const auto kids = elements(*doc.body());
    ASSERT_EQ(kids.size(), 1u);
    EXPECT_EQ(kids[0]->attribute("href"), std::optional<std::string_view>("/x?a=1&b=2"));
    EXPECT_EQ(kids[0]->attribute("data-x"), std::optional<std::string_view>("plain"));
    EXPECT_FALSE(kids[0]->attribute("title").has_value());
}

TEST(Parser, CommentsAndDoctypeDropped) {
    EXPECT_EQ(body_text("<!DOCTYPE html><!-- hidden --><p>shown<!-- also hidden --></p>"), "shown");
}

TEST(Parser, SourceOffsetsCoverElements) {
    const std::string src = "<body><div id=a><p>x</p></div><p>y</p></body>";
    const auto doc = html::parse_html(src);
    const auto kids = elements(*doc.body());
    ASSERT_EQ(kids.size(), 2u);
    EXPECT_EQ(src.substr(kids[0]->source_begin, kids[0]->source_end - kids[0]->source_begin),
              "<div id=a><p>x</p></div>");
    EXPECT_EQ(src.substr(kids[1]->source_begin, kids[1]->source_end - kids[1]->source_begin), "<p>y</p>");
}

TEST(Parser, InvalidUtf8Replaced) {
    const auto doc = html::parse_html("<p>a\xFF" "b</p>");
    EXPECT_EQ(doc.source, "<p>a\xEF\xBF\xBD" "b</p>");
    EXPECT_EQ(html::lossy_utf8("ok\xC3"), "ok\xEF\xBF\xBD");
}

TEST(Parser, RejectsNonUtf8Streams) {
    EXPECT_THROW(html::parse_html(std::string("<p>a\0b</p>", 10)), Error);
    EXPECT_THROW(html::parse_html("\xFF\xFE<\0p\0>\0"), Error);
    try {
        html::parse_html("\xFE\xFF\0<");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MalformedInput);
    }
}

TEST(Parser, Utf8BomAccepted) {
    EXPECT_EQ(body_text("\xEF\xBB\xBF<p>x</p>"), "x");
}

TEST(Parser, VoidElementsHaveNoChildren) {
    const auto doc = html::parse_html("<p>a<br>b<img src=x.png>c</p>");
    const auto p = elements(*doc.body());
    ASSERT_EQ(p.size(), 1u);
    for (const auto* e : elements(*p[0])) EXPECT_TRUE(e->children.empty());
    EXPECT_EQ(body_text("<p>a<br>b<img src=x.png>c</p>"), "a bc");
}

TEST(Parser, UnclosedTitleSwallowsDocument) {
    const auto doc = html::parse_html("<title>t<body><p>x</p>");
    EXPECT_TRUE(html::segment_page(doc, html::SegmentationConfig::defaults()).empty_page);
}
