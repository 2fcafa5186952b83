#include "oracle/brute_force.hpp"

#include <cctype>
#include <memory>
#include <set>
#include <stdexcept>

namespace oracle {

namespace {

struct Node {
    std::string tag;  // empty for text
    std::vector<std::pair<std::string, std::string>> attrs;
    std::vector<std::unique_ptr<Node>> kids;
    std::string text;
    Node* parent = nullptr;

    std::string attr(const std::string& name) const {
        for (const auto& [k, v] : attrs) {
            if (k == name) return v;
        }
        return {};
    }
    bool has_attr(const std::string& name) const {
        for (const auto& [k, v] : attrs) {
            if (k == name) return true;
        }
        return false;
    }
};

const std::set<std::string> kVoid = {"img", "br", "meta", "link", "input", "hr"};
const std::set<std::string> kInline = {"a", "b", "strong", "em", "i", "u", "span", "img", "abbr", "code", "small", "br"};

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string decode(const std::string& s) {
    static const std::pair<const char*, const char*> table[] = {
        {"&amp;", "&"}, {"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}, {"&#39;", "'"}};
    std::string out;
    for (std::size_t i = 0; i < s.size();) {
        bool hit = false;
        for (const auto& [from, to] : table) {
            const std::string f = from;
            if (s.compare(i, f.size(), f) == 0) {
                out += to;
                i += f.size();
                hit = true;
                break;
            }
        }
        if (!hit) out += s[i++];
    }
    return out;
}

// Parses "<tag a=b c='d' e="f">" contents (without the angle brackets).
void parse_start_tag(const std::string& inner, Node& node) {
    std::size_t i = 0;
    while (i < inner.size() && !std::isspace(static_cast<unsigned char>(inner[i])) && inner[i] != '/') ++i;
    node.tag = lower(inner.substr(0, i));
    while (i < inner.size()) {
        while (i < inner.size() && (std::isspace(static_cast<unsigned char>(inner[i])) || inner[i] == '/')) ++i;
        if (i >= inner.size()) break;
        std::size_t k = i;
        while (k < inner.size() && inner[k] != '=' && !std::isspace(static_cast<unsigned char>(inner[k]))) ++k;
        std::string name = lower(inner.substr(i, k - i));
        std::string value;
        i = k;
        if (i < inner.size() && inner[i] == '=') {
            ++i;
            if (inner[i] == '"' || inner[i] == '\'') {
                const char q = inner[i++];
                const auto end = inner.find(q, i);
                value = inner.substr(i, end - i);
                i = end + 1;
            } else {
                k = i;
                while (k < inner.size() && !std::isspace(static_cast<unsigned char>(inner[k]))) ++k;
                value = inner.substr(i, k - i);
                i = k;
            }
        }
        node.attrs.emplace_back(name, decode(value));
    }
}

std::unique_ptr<Node> parse(const std::string& html) {
    auto root = std::make_unique<Node>();
    root->tag = "#root";
    Node* cur = root.get();
    std::size_t i = 0;
    while (i < html.size()) {
        if (html[i] == '<') {
            const auto close = html.find('>', i);
            if (close == std::string::npos) throw std::runtime_error("oracle: unterminated tag");
            const std::string inner = html.substr(i + 1, close - i - 1);
            i = close + 1;
            if (inner.empty() || inner[0] == '!') continue;
            if (inner[0] == '/') {
                const std::string tag = lower(inner.substr(1));
                if (cur->tag != tag) throw std::runtime_error("oracle: page is not well formed at </" + tag + ">");
                cur = cur->parent;
                continue;
            }
            auto node = std::make_unique<Node>();
            parse_start_tag(inner, *node);
            node->parent = cur;
            Node* raw = node.get();
            cur->kids.push_back(std::move(node));
            if (kVoid.count(raw->tag) == 0) cur = raw;
        } else {
            const auto next = html.find('<', i);
            auto node = std::make_unique<Node>();
            node->text = decode(html.substr(i, next - i));
            node->parent = cur;
            cur->kids.push_back(std::move(node));
            i = next == std::string::npos ? html.size() : next;
        }
    }
    return root;
}

const Node* find(const Node& n, const std::string& tag) {
    if (n.tag == tag) return &n;
    for (const auto& k : n.kids) {
        if (const Node* hit = find(*k, tag)) return hit;
    }
    return nullptr;
}

void collect(const Node& n, const std::string& tag, std::vector<const Node*>& out) {
    if (n.tag == tag) out.push_back(&n);
    for (const auto& k : n.kids) collect(*k, tag, out);
}

std::string text_of(const Node& n) {
    if (n.tag.empty()) return n.text;
    std::string out;
    const bool pad = kInline.count(n.tag) == 0;
    if (pad) out += ' ';
    for (const auto& k : n.kids) out += text_of(*k);
    if (pad) out += ' ';
    return out;
}

double lookup(const std::vector<std::pair<std::string, double>>& table, const std::string& key, double fallback) {
    for (const auto& [k, v] : table) {
        if (k == key) return v;
    }
    return fallback;
}

double weigh(const std::vector<std::string>& tokens, const std::vector<std::pair<std::string, double>>& fused) {
    double s = 0;
    for (const auto& t : tokens) s += lookup(fused, t, 0.0);
    return s;
}

std::vector<std::string> href_words(std::string href) {
    if (auto h = href.find('#'); h != std::string::npos) href.resize(h);
    if (auto s = href.find("://"); s != std::string::npos) {
        const auto slash = href.find('/', s + 3);
        href = slash == std::string::npos ? "" : href.substr(slash);
    } else if (href.rfind("//", 0) == 0) {
        const auto slash = href.find('/', 2);
        href = slash == std::string::npos ? "" : href.substr(slash);
    }
    return ascii_tokens(href);
}

std::vector<std::string> file_words(std::string src) {
    if (src.rfind("data:", 0) == 0) return {};
    if (auto q = src.find_first_of("?#"); q != std::string::npos) src.resize(q);
    if (auto slash = src.rfind('/'); slash != std::string::npos) src = src.substr(slash + 1);
    return ascii_tokens(src);
}

bool contains_run(const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
    if (needle.empty() || needle.size() > hay.size()) return false;
    for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
        bool all = true;
        for (std::size_t j = 0; j < needle.size(); ++j) all = all && hay[i + j] == needle[j];
        if (all) return true;
    }
    return false;
}

}  // namespace

std::vector<std::string> ascii_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

PageScore score(const std::string& html, const Config& cfg) {
    const auto root = parse(html);
    const Node* body = find(*root, "body");
    if (body == nullptr) throw std::runtime_error("oracle: page has no body");
    const Node* title = find(*root, "title");
    const auto title_words = title ? ascii_tokens(text_of(*title)) : std::vector<std::string>{};

    std::vector<std::pair<std::string, double>> fused;
    for (const auto& w : cfg.query_words) {
        for (const auto& t : ascii_tokens(w)) {
            if (lookup(fused, t, -1.0) < 0) fused.emplace_back(t, 1.0);
        }
    }
    for (const auto& [t, w] : cfg.profile) {
        bool found = false;
        for (auto& [k, v] : fused) {
            if (k == t) {
                v += w;
                found = true;
            }
        }
        if (!found) fused.emplace_back(t, w);
    }

    // Top-level blocks, grouped by the short-joins-previous rule.
    std::vector<std::vector<const Node*>> groups;
    for (const auto& kid : body->kids) {
        if (kid->tag.empty()) continue;
        const auto words = ascii_tokens(text_of(*kid));
        std::vector<const Node*> imgs, anchors;
        collect(*kid, "img", imgs);
        collect(*kid, "a", anchors);
        bool media = !imgs.empty();
        for (const auto* a : anchors) media = media || a->has_attr("href");
        if (words.empty() && !media) continue;
        if (!groups.empty() && words.size() < cfg.min_tokens) {
            groups.back().push_back(kid.get());
        } else {
            groups.push_back({kid.get()});
        }
    }

    PageScore page;
    for (const auto& group : groups) {
        SegmentScore s;
        for (const auto* unit : group) {
            for (const auto& t : ascii_tokens(text_of(*unit))) s.tokens.push_back(t);

            std::vector<const Node*> anchors, imgs;
            collect(*unit, "a", anchors);
            collect(*unit, "img", imgs);
            for (const auto* a : anchors) {
                if (!a->has_attr("href")) continue;
                s.link += weigh(ascii_tokens(text_of(*a)), fused) + weigh(href_words(a->attr("href")), fused);
            }
            for (const auto* img : imgs) {
                s.image += weigh(ascii_tokens(img->attr("alt")), fused) + weigh(ascii_tokens(img->attr("title")), fused) +
                           weigh(file_words(img->attr("src")), fused);
            }
            for (const auto& [tag, w] : cfg.vmwt) {
                std::vector<const Node*> spans;
                collect(*unit, tag, spans);
                for (const auto* span : spans) s.visual += w * weigh(ascii_tokens(text_of(*span)), fused);
            }
        }

        std::vector<std::string> distinct_title;
        for (const auto& t : title_words) {
            bool seen = false;
            for (const auto& d : distinct_title) seen = seen || d == t;
            if (!seen) distinct_title.push_back(t);
        }
        for (const auto& t : distinct_title) {
            bool present = false;
            for (const auto& x : s.tokens) present = present || x == t;
            if (present) s.theme += 1;
        }
        for (const auto& t : s.tokens) s.profile += lookup(cfg.profile, t, 0.0);

        s.delta = s.link + s.image + s.theme + s.visual + s.freshness + s.profile;
        for (const auto& [category, phrases] : cfg.gazetteer) {
            for (const auto& phrase : phrases) {
                const auto words = ascii_tokens(phrase);
                if (contains_run(s.tokens, words)) {
                    s.annotation += lookup(cfg.category_weights, category, 1.0) * 1.0 * weigh(words, fused);
                }
            }
        }
        s.total = s.delta + s.annotation;
        page.page_score += s.total;
        page.segments.push_back(std::move(s));
    }
    return page;
}

}  // namespace oracle
