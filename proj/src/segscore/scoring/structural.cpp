#include "segscore/scoring/structural.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "segscore/error.hpp"

namespace segscore::scoring {

namespace {

std::map<std::string, double> parse_weight_object(const std::string& document, const char* what) {
    std::map<std::string, double> out;
    try {
        const auto doc = nlohmann::json::parse(document);
        if (!doc.is_object()) throw Error(ErrorCode::MalformedConfig, std::string(what) + " must be a JSON object");
        for (const auto& [key, value] : doc.items()) {
            if (!value.is_number()) throw Error(ErrorCode::MalformedConfig, std::string(what) + ": '" + key + "' is not a number");
            const double w = value.get<double>();
            if (!std::isfinite(w) || w < 0.0) {
                throw Error(ErrorCode::MalformedConfig, std::string(what) + ": '" + key + "' must be non-negative");
            }
            out[key] = w;
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedConfig, std::string(what) + ": " + e.what());
    }
    return out;
}

text::TermVector concat(std::initializer_list<const text::TermVector*> parts) {
    text::TermVector out;
    for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
    return out;
}

}  // namespace

Vmwt::Vmwt(std::map<std::string, double> weights) : weights_(std::move(weights)) {
    for (const auto& [tag, w] : weights_) {
        if (!std::isfinite(w) || w < 0.0) throw Error(ErrorCode::MalformedConfig, "VMWT weight for '" + tag + "' must be non-negative");
    }
}

Vmwt Vmwt::defaults() {
    return Vmwt({{"h1", 3.0}, {"h2", 2.5}, {"h3", 2.0}, {"h4", 1.5}, {"h5", 1.5}, {"h6", 1.5},
                 {"strong", 1.5}, {"b", 1.5}, {"em", 1.2}, {"i", 1.2}, {"u", 1.1}});
}

double Vmwt::weight(const std::string& tag) const {
    auto it = weights_.find(tag);
    return it == weights_.end() ? 0.0 : it->second;
}

std::set<std::string> Vmwt::tags() const {
    std::set<std::string> out;
    for (const auto& [tag, w] : weights_) out.insert(tag);
    return out;
}

Vmwt parse_vmwt(const std::string& document) {
    // Element names are matched in lowercase, as the parser stores them.
    std::map<std::string, double> weights;
    for (auto& [tag, w] : parse_weight_object(document, "VMWT")) {
        std::string lower = tag;
        std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
        weights[lower] = w;
    }
    return Vmwt(std::move(weights));
}

const char* dimension_name(Dimension d) {
    switch (d) {
        case Dimension::Link: return "link";
        case Dimension::Image: return "image";
        case Dimension::Theme: return "theme";
        case Dimension::Visual: return "visual";
        case Dimension::Freshness: return "freshness";
        case Dimension::Profile: return "profile";
    }
    return "";
}

double& DimensionScores::operator[](Dimension d) {
    switch (d) {
        case Dimension::Link: return link;
        case Dimension::Image: return image;
        case Dimension::Theme: return theme;
        case Dimension::Visual: return visual;
        case Dimension::Freshness: return freshness;
        case Dimension::Profile: break;
    }
    return profile;
}

double DimensionScores::operator[](Dimension d) const {
    return const_cast<DimensionScores&>(*this)[d];
}

DimensionCoefficients parse_coefficients(const std::string& document) {
    DimensionCoefficients coeffs;
    for (const auto& [name, value] : parse_weight_object(document, "coefficients")) {
        bool known = false;
        for (Dimension d : kAllDimensions) {
            if (name == dimension_name(d)) {
                coeffs.multipliers[d] = value;
                known = true;
            }
        }
        if (!known) throw Error(ErrorCode::MalformedConfig, "coefficients: unknown dimension '" + name + "'");
    }
    return coeffs;
}

double score_links(const html::Segment& segment, const text::WeightedTermSet& fused) {
    double score = 0.0;
    for (const auto& link : segment.links) {
        score += text::match_score(concat({&link.anchor_tokens, &link.href_tokens}), fused);
    }
    return score;
}

double score_images(const html::Segment& segment, const text::WeightedTermSet& fused) {
    double score = 0.0;
    for (const auto& image : segment.images) {
        score += text::match_score(concat({&image.alt_tokens, &image.title_tokens, &image.src_filename_tokens}), fused);
    }
    return score;
}

double score_theme(const html::Segment& segment, const text::TermVector& title_tokens) {
    const std::unordered_set<std::string> present(segment.tokens.begin(), segment.tokens.end());
    const std::unordered_set<std::string> distinct(title_tokens.begin(), title_tokens.end());
    double hits = 0.0;
    for (const auto& t : distinct) {
        if (present.count(t) != 0) hits += 1.0;
    }
    return hits;
}

double score_visual(const html::Segment& segment, const text::WeightedTermSet& fused, const Vmwt& vmwt) {
    double score = 0.0;
    for (const auto& span : segment.visual_spans) {
        const double w = vmwt.weight(span.tag);
        if (w == 0.0) continue;
        score += w * text::match_score(span.tokens, fused);
    }
    return score;
}

double score_profile(const html::Segment& segment, const Profile& profile) {
    return text::match_score(segment.tokens, text::profile_terms(profile));
}

text::TermVector multiset_difference(const text::TermVector& current, const text::TermVector& prior) {
    auto remaining = text::term_counts(prior);
    text::TermVector fresh;
    for (const auto& t : current) {
        auto it = remaining.find(t);
        if (it != remaining.end() && it->second > 0) {
            --it->second;
        } else {
            fresh.push_back(t);
        }
    }
    return fresh;
}

double score_freshness(const html::Segment& segment, const std::optional<text::TermVector>& prior_tokens,
                       const text::WeightedTermSet& fused) {
    if (!prior_tokens) return 0.0;
    return text::match_score(multiset_difference(segment.tokens, *prior_tokens), fused);
}

double combine(const DimensionScores& scores, const DimensionCoefficients& coeffs) {
    double delta = 0.0;
    for (Dimension d : kAllDimensions) delta += coeffs[d] * scores[d];
    return delta;
}

StructuralScore structural_score(const html::Segment& segment, const StructuralInputs& in,
                                 const std::optional<text::TermVector>& prior_tokens) {
    StructuralScore out;
    out.dimensions.link = score_links(segment, in.fused);
    out.dimensions.image = score_images(segment, in.fused);
    out.dimensions.theme = score_theme(segment, in.title_tokens);
    out.dimensions.visual = score_visual(segment, in.fused, in.vmwt);
    out.dimensions.freshness = score_freshness(segment, prior_tokens, in.fused);
    out.dimensions.profile = score_profile(segment, in.profile);
    out.delta = combine(out.dimensions, in.coeffs);
    return out;
}

}  // namespace segscore::scoring
