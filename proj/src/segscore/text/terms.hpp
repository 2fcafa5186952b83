#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace segscore {
struct Profile;
}

namespace segscore::text {

// Ordered list of normalized tokens: lowercase, alphanumeric only, non-empty.
using TermVector = std::vector<std::string>;

// Splits on maximal runs of non-alphanumeric code points after NFC
// normalization and simple lowercase folding. Invalid UTF-8 sequences act as
// separators. No stemming and no stop words.
TermVector tokenize(std::string_view text);

// Multiset view of a token list.
std::map<std::string, std::size_t> term_counts(const TermVector& tokens);

struct Query {
    std::string raw;
    TermVector terms;

    Query() = default;
    explicit Query(std::string raw_text);
};

// term -> non-negative weight. std::map keeps iteration (and therefore
// serialization) order stable.
class WeightedTermSet {
public:
    WeightedTermSet() = default;

    // Throws Error(InvalidArgument) on a negative or non-finite weight.
    void set(const std::string& term, double weight);
    void add(const std::string& term, double weight);

    double weight(const std::string& term) const;
    bool contains(const std::string& term) const { return entries_.count(term) != 0; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    const std::map<std::string, double>& entries() const { return entries_; }

    WeightedTermSet scaled(double factor) const;

    friend bool operator==(const WeightedTermSet&, const WeightedTermSet&) = default;

private:
    std::map<std::string, double> entries_;
};

// Query/profile fusion: each query term contributes 1.0 and each profile term
// its profile weight; a term in both receives the sum.
WeightedTermSet fuse_terms(const Query& query, const Profile& profile);

// Profile terms only, at their profile weights.
WeightedTermSet profile_terms(const Profile& profile);

// Sum over token occurrences of the term weight (absent terms weigh 0).
double match_score(const TermVector& tokens, const WeightedTermSet& weights);

}  // namespace segscore::text
