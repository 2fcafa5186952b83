#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "segscore/html/segmenter.hpp"
#include "segscore/store/profile.hpp"
#include "segscore/text/terms.hpp"

namespace segscore::scoring {

// Visual Markup Weight Table: element name -> weight. Unlisted tags weigh 0.
class Vmwt {
public:
    Vmwt() = default;
    explicit Vmwt(std::map<std::string, double> weights);

    static Vmwt defaults();

    double weight(const std::string& tag) const;
    std::set<std::string> tags() const;
    const std::map<std::string, double>& weights() const { return weights_; }

private:
    std::map<std::string, double> weights_;
};

// Flat JSON object tag -> weight. Throws Error(MalformedConfig).
Vmwt parse_vmwt(const std::string& document);

enum class Dimension { Link, Image, Theme, Visual, Freshness, Profile };

inline constexpr Dimension kAllDimensions[] = {Dimension::Link,   Dimension::Image,     Dimension::Theme,
                                               Dimension::Visual, Dimension::Freshness, Dimension::Profile};

const char* dimension_name(Dimension d);

struct DimensionScores {
    double link = 0.0;
    double image = 0.0;
    double theme = 0.0;
    double visual = 0.0;
    double freshness = 0.0;
    double profile = 0.0;

    double& operator[](Dimension d);
    double operator[](Dimension d) const;

    friend bool operator==(const DimensionScores&, const DimensionScores&) = default;
};

// Per-dimension multipliers for the weighted sum; 1.0 by default.
struct DimensionCoefficients {
    DimensionScores multipliers{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};

    double operator[](Dimension d) const { return multipliers[d]; }
};

// Flat JSON object dimension -> multiplier; unknown names are rejected.
DimensionCoefficients parse_coefficients(const std::string& document);

double score_links(const html::Segment& segment, const text::WeightedTermSet& fused);
double score_images(const html::Segment& segment, const text::WeightedTermSet& fused);
// Number of distinct title tokens present in the segment.
double score_theme(const html::Segment& segment, const text::TermVector& title_tokens);
double score_visual(const html::Segment& segment, const text::WeightedTermSet& fused, const Vmwt& vmwt);
double score_profile(const html::Segment& segment, const Profile& profile);
// No prior -> 0. Otherwise the fused match of the tokens the current segment
// has beyond the prior ones (multiset difference).
double score_freshness(const html::Segment& segment, const std::optional<text::TermVector>& prior_tokens,
                       const text::WeightedTermSet& fused);

text::TermVector multiset_difference(const text::TermVector& current, const text::TermVector& prior);

double combine(const DimensionScores& scores, const DimensionCoefficients& coeffs);

struct StructuralScore {
    DimensionScores dimensions;
    double delta = 0.0;
};

struct StructuralInputs {
    const text::WeightedTermSet& fused;
    const Profile& profile;
    const text::TermVector& title_tokens;
    const Vmwt& vmwt;
    const DimensionCoefficients& coeffs;
};

StructuralScore structural_score(const html::Segment& segment, const StructuralInputs& in,
                                 const std::optional<text::TermVector>& prior_tokens);

}  // namespace segscore::scoring
