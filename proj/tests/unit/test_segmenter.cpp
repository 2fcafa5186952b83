#include <gtest/gtest.h>

#include <random>
#include <set>

#include "segscore/error.hpp"
#include "segscore/html/segment_json.hpp"
#include "segscore/html/segmenter.hpp"
#include "support.hpp"

using namespace segscore;
using segscore::testkit::segments_of;
using text::TermVector;

namespace {

std::string words(const std::string& stem, int n) {
    std::string out;
    for (int i = 0; i < n; ++i) out += stem + std::to_string(i) + " ";
    return out;
}

}  // namespace

TEST(Density, EmptyNode) {
    const auto doc = html::parse_html("<div></div>");
    EXPECT_EQ(html::text_density(*doc.body(), html::SegmentationConfig::defaults().block_tags), 0.0);
    EXPECT_EQ(html::text_density_of("", 0), 0.0);
}

TEST(Density, SingleLine) {
    const std::string text(45, 'x');
    EXPECT_DOUBLE_EQ(html::text_density_of(text, 10), 10.0);
}

TEST(Density, WrapsAtEighty) {
    const std::string text(200, 'x');
    EXPECT_DOUBLE_EQ(html::text_density_of(text, 30), 10.0);
    EXPECT_DOUBLE_EQ(html::text_density_of(std::string(80, 'x'), 4), 4.0);
    EXPECT_DOUBLE_EQ(html::text_density_of(std::string(81, 'x'), 4), 2.0);
}

TEST(Density, CountsCodePointsNotBytes) {
    std::string text;
    for (int i = 0; i < 80; ++i) text += "\xC3\xA9";  // 80 code points, 160 bytes
    EXPECT_DOUBLE_EQ(html::text_density_of(text, 1), 1.0);
}

TEST(Density, NeverExceedsTokenCount) {
    const auto doc = html::parse_html("<p>" + words("w", 50) + "</p>");
    const auto blocks = html::SegmentationConfig::defaults().block_tags;
    EXPECT_LE(html::text_density(*doc.body(), blocks), 50.0);
    EXPECT_GT(html::text_density(*doc.body(), blocks), 0.0);
}

TEST(Segmenter, SingleShortParagraph) {
    const auto segs = segments_of("<html><body><p>just a few words</p></body></html>");
    ASSERT_EQ(segs.size(), 1u);
    EXPECT_EQ(segs[0].tokens, (TermVector{"just", "a", "few", "words"}));
    EXPECT_EQ(segs[0].text, "just a few words");
}

TEST(Segmenter, ThreeDivsInOrder) {
    const std::string html = "<body><div>" + words("alpha", 15) + "</div><div>" + words("beta", 20) +
                             "</div><div>" + words("gamma", 12) + "</div></body>";
    const auto segs = segments_of(html);
    ASSERT_EQ(segs.size(), 3u);
    EXPECT_EQ(segs[0].tokens.size(), 15u);
    EXPECT_EQ(segs[1].tokens.size(), 20u);
    EXPECT_EQ(segs[2].tokens.size(), 12u);
    EXPECT_EQ(segs[0].tokens.front(), "alpha0");
    EXPECT_EQ(segs[1].tokens.front(), "beta0");
    EXPECT_EQ(segs[2].tokens.front(), "gamma0");
    for (std::size_t i = 0; i < segs.size(); ++i) EXPECT_EQ(segs[i].id, i);
}

TEST(Segmenter, NavItemsMergedArticleSeparate) {
    const std::string html =
        "<body><nav><ul><li><a href=/a>home page</a></li><li><a href=/b>news feed</a></li>"
        "<li><a href=/c>contact us</a></li></ul></nav><article><p>" +
        words("body", 30) + "</p></article></body>";
    const auto segs = segments_of(html);
    ASSERT_EQ(segs.size(), 2u);
    EXPECT_EQ(segs[0].tokens, (TermVector{"home", "page", "news", "feed", "contact", "us"}));
    EXPECT_EQ(segs[0].links.size(), 3u);
    EXPECT_EQ(segs[1].tokens.size(), 30u);
}

TEST(Segmenter, ShortCandidateJoinsPredecessor) {
    const std::string html =
        "<body><div>" + words("long", 20) + "</div><div>tiny tail</div><div>" + words("next", 12) + "</div></body>";
    const auto segs = segments_of(html);
    ASSERT_EQ(segs.size(), 2u);
    EXPECT_EQ(segs[0].tokens.size(), 22u);
    EXPECT_EQ(segs[0].tokens.back(), "tail");
    EXPECT_EQ(segs[1].tokens.front(), "next0");
}

TEST(Segmenter, InlineRunsBetweenBlocksAreCandidates) {
    const std::string html = "<body>" + words("loose", 12) + "<div>" + words("inner", 12) + "</div>" +
                             words("after", 12) + "</body>";
    const auto segs = segments_of(html);
    ASSERT_EQ(segs.size(), 3u);
    EXPECT_EQ(segs[0].tokens.front(), "loose0");
    EXPECT_EQ(segs[1].tokens.front(), "inner0");
    EXPECT_EQ(segs[2].tokens.front(), "after0");
}

TEST(Segmenter, LargeBlockWithUnevenPartsIsSplit) {
    std::string html = "<body><div><h2>heading</h2>";
    for (int i = 0; i < 8; ++i) html += "<p>" + words("p" + std::to_string(i) + "w", 60) + "</p>";
    html += "</div></body>";
    const auto segs = segments_of(html);
    EXPECT_GT(segs.size(), 1u);

    auto cfg = html::SegmentationConfig::defaults();
    cfg.density_floor = 1000.0;
    EXPECT_EQ(segments_of(html, cfg).size(), 1u);
}

TEST(Segmenter, LargeBlockWithEvenPartsStaysWhole) {
    std::string html = "<body><div>";
    for (int i = 0; i < 8; ++i) html += "<p>" + words("p" + std::to_string(i) + "w", 60) + "</p>";
    html += "</div></body>";
    EXPECT_EQ(segments_of(html).size(), 1u);
}

TEST(Segmenter, EmptyCandidatesDroppedMediaKept) {
    const std::string html = "<body><div></div><div>  </div><div><img src=a.png alt=x></div><div>" +
                             words("text", 12) + "</div></body>";
    const auto segs = segments_of(html);
    ASSERT_EQ(segs.size(), 2u);
    EXPECT_TRUE(segs[0].tokens.empty());
    ASSERT_EQ(segs[0].images.size(), 1u);
    EXPECT_EQ(segs[0].images[0].alt_tokens, (TermVector{"x"}));
}

TEST(Segmenter, EmptyBodyFlagged) {
    const auto result = html::segment_page(html::parse_html("<html><head><title>t</title></head><body> </body>"),
                                           html::SegmentationConfig::defaults());
    EXPECT_TRUE(result.empty_page);
    EXPECT_TRUE(result.segments.empty());
}

TEST(Segmenter, ExtractsLinksImagesAndVisualSpans) {
    auto cfg = html::SegmentationConfig::defaults();
    cfg.visual_tags = {"h1", "b"};
    const auto segs = segments_of(
        "<body><div><h1>Web</h1><p><b>web web</b> <a href='/web/search?q=web#top'>Web Search</a>"
        "<img src='img/web-web.png?x=1' alt='web chart' title='Chart'></p></div></body>",
        cfg);
    ASSERT_EQ(segs.size(), 1u);
    const auto& s = segs[0];
    ASSERT_EQ(s.links.size(), 1u);
    EXPECT_EQ(s.links[0].anchor_tokens, (TermVector{"web", "search"}));
    EXPECT_EQ(s.links[0].href_tokens, (TermVector{"web", "search", "q", "web"}));
    ASSERT_EQ(s.images.size(), 1u);
    EXPECT_EQ(s.images[0].alt_tokens, (TermVector{"web", "chart"}));
    EXPECT_EQ(s.images[0].title_tokens, (TermVector{"chart"}));
    EXPECT_EQ(s.images[0].src_filename_tokens, (TermVector{"web", "web", "png"}));
    ASSERT_EQ(s.visual_spans.size(), 2u);
    EXPECT_EQ(s.visual_spans[0].tag, "h1");
    EXPECT_EQ(s.visual_spans[1].tag, "b");
    EXPECT_EQ(s.visual_spans[1].tokens, (TermVector{"web", "web"}));
}

TEST(Segmenter, HrefTokensIgnoreSchemeHostAndFragment) {
    EXPECT_EQ(html::href_tokens("https://www.example.com/web/search?q=web#frag"),
              (TermVector{"web", "search", "q", "web"}));
    EXPECT_EQ(html::href_tokens("//cdn.example.com/a-b"), (TermVector{"a", "b"}));
    EXPECT_EQ(html::href_tokens("#only"), TermVector{});
}

TEST(Segmenter, SrcFilenameTokens) {
    EXPECT_EQ(html::src_filename_tokens("img/web-web.png"), (TermVector{"web", "web", "png"}));
    EXPECT_EQ(html::src_filename_tokens("/a/b/c_d.jpg?size=1#x"), (TermVector{"c", "d", "jpg"}));
    EXPECT_TRUE(html::src_filename_tokens("data:image/png;base64,AAAA").empty());
}

TEST(Segmenter, DomPathsDisjointAndResolve) {
    const auto doc = html::parse_html(testkit::slurp(testkit::fixtures_dir() / "pages" / "01_news_article.html"));
    const auto segs = html::segment_page(doc, html::SegmentationConfig::defaults()).segments;
    std::set<std::vector<std::size_t>> seen;
    for (const auto& s : segs) {
        EXPECT_TRUE(seen.insert(s.dom_path).second);
        const html::DomNode* node = doc.root.get();
        for (auto i : s.dom_path) {
            ASSERT_LT(i, node->children.size());
            node = node->children[i].get();
        }
    }
}

TEST(Segmenter, Deterministic) {
    for (const auto& page : testkit::corpus_pages()) {
        const auto src = testkit::slurp(page);
        const auto a = html::segment_pool_to_json("u", html::segment_page(html::parse_html(src),
                                                                          html::SegmentationConfig::defaults()));
        const auto b = html::segment_pool_to_json("u", html::segment_page(html::parse_html(src),
                                                                          html::SegmentationConfig::defaults()));
        EXPECT_EQ(a.dump(), b.dump()) << page;
    }
}

TEST(Segmenter, CorpusPartitionsBodyTokens) {
    const auto cfg = html::SegmentationConfig::defaults();
    for (const auto& page : testkit::corpus_pages()) {
        const auto doc = html::parse_html(testkit::slurp(page));
        TermVector all;
        for (const auto& s : html::segment_page(doc, cfg).segments) {
            EXPECT_EQ(s.tokens, text::tokenize(s.text));
            all.insert(all.end(), s.tokens.begin(), s.tokens.end());
        }
        EXPECT_EQ(text::term_counts(all), text::term_counts(html::body_tokens(doc, cfg))) << page;
    }
}

TEST(Fingerprint, EmptyIsFixed) {
    EXPECT_EQ(html::fingerprint(TermVector{}), 0xcbf29ce484222325ULL);
}

TEST(Fingerprint, MarkupIndependent) {
    const auto a = segments_of("<p>web <b>search</b> engine</p>");
    const auto b = segments_of("<div><span>web</span> search <i>engine</i></div>");
    ASSERT_EQ(a.size(), 1u);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(a[0].fingerprint, b[0].fingerprint);
    EXPECT_EQ(a[0].fingerprint, html::fingerprint(a[0].tokens));
}

TEST(Fingerprint, TokenBoundariesMatter) {
    EXPECT_NE(html::fingerprint(TermVector{"ab", "c"}), html::fingerprint(TermVector{"a", "bc"}));
}

TEST(Fingerprint, NoCollisionsOnOneTermChanges) {
    std::mt19937_64 rng(20240611);
    const std::string alphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
    auto word = [&] {
        std::string w(1 + rng() % 8, 'a');
        for (auto& c : w) c = alphabet[rng() % alphabet.size()];
        return w;
    };
    int collisions = 0;
    for (int i = 0; i < 1000; ++i) {
        TermVector a(1 + rng() % 30);
        for (auto& t : a) t = word();
        TermVector b = a;
        const auto pos = rng() % b.size();
        do {
            b[pos] = word();
        } while (b[pos] == a[pos]);
        if (html::fingerprint(a) == html::fingerprint(b)) ++collisions;
    }
    EXPECT_EQ(collisions, 0);
}

TEST(Fingerprint, HexRoundTrip) {
    const std::uint64_t v = 0x00ab12cd34ef5678ULL;
    EXPECT_EQ(html::fingerprint_hex(v), "00ab12cd34ef5678");
    EXPECT_EQ(html::parse_fingerprint_hex("00ab12cd34ef5678"), v);
}

TEST(SegmentationConfig, ParsesAndValidates) {
    const auto cfg = html::parse_segmentation_config(R"({"min_tokens": 5, "max_tokens": 50, "density_floor": 1.5})");
    EXPECT_EQ(cfg.min_tokens, 5u);
    EXPECT_EQ(cfg.max_tokens, 50u);
    EXPECT_DOUBLE_EQ(cfg.density_floor, 1.5);
    EXPECT_EQ(cfg.block_tags, html::SegmentationConfig::defaults().block_tags);
    EXPECT_THROW(html::parse_segmentation_config(R"({"min_tokens": 50, "max_tokens": 50})"), Error);
    EXPECT_THROW(html::parse_segmentation_config(R"({"min_tokens": 0})"), Error);
    EXPECT_THROW(html::parse_segmentation_config(R"({"density_floor": -1})"), Error);
    EXPECT_THROW(html::parse_segmentation_config("not json"), Error);
}

TEST(SegmentJson, RoundTrip) {
    auto cfg = html::SegmentationConfig::defaults();
    cfg.visual_tags = {"h1", "h2", "b", "strong", "em"};
    for (const auto& page : testkit::corpus_pages()) {
        const auto result = html::segment_page(html::parse_html(testkit::slurp(page)), cfg);
        const auto j = html::segment_pool_to_json("url", result);
        const auto back = html::segment_pool_from_json(nlohmann::json::parse(j.dump()));
        ASSERT_EQ(back.size(), result.segments.size());
        for (std::size_t i = 0; i < back.size(); ++i) {
            EXPECT_EQ(html::segment_to_json(back[i]), html::segment_to_json(result.segments[i]));
            EXPECT_EQ(back[i].fingerprint, result.segments[i].fingerprint);
        }
    }
}
