#include "segscore/text/terms.hpp"

#include <cmath>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "segscore/error.hpp"
#include "segscore/store/profile.hpp"

namespace segscore::text {

namespace {

void append_utf8(std::string& out, UChar32 cp) {
    char buf[U8_MAX_LENGTH];
    int32_t len = 0;
    UBool error = false;
    U8_APPEND(buf, len, U8_MAX_LENGTH, cp, error);
    if (!error) out.append(buf, static_cast<std::size_t>(len));
}

bool is_ascii(std::string_view text) {
    for (unsigned char c : text) {
        if (c >= 0x80) return false;
    }
    return true;
}

TermVector tokenize_ascii(std::string_view text) {
    TermVector out;
    std::string current;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if ((c >= '0' && c <= '9') || (c >= 'a' && c <= 'z')) {
            current.push_back(ch);
        } else if (c >= 'A' && c <= 'Z') {
            current.push_back(static_cast<char>(c - 'A' + 'a'));
        } else if (!current.empty()) {
            out.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

}  // namespace

TermVector tokenize(std::string_view text) {
    // Pure ASCII needs neither normalization nor table lookups.
    if (is_ascii(text)) return tokenize_ascii(text);

    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    icu::UnicodeString source = icu::UnicodeString::fromUTF8(
        icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
    icu::UnicodeString normalized = U_SUCCESS(status) ? nfc->normalize(source, status) : source;
    if (U_FAILURE(status)) normalized = source;

    TermVector out;
    std::string current;
    for (int32_t i = 0; i < normalized.length(); i = normalized.moveIndex32(i, 1)) {
        const UChar32 cp = normalized.char32At(i);
        if (u_isalnum(cp)) {
            append_utf8(current, u_tolower(cp));
        } else if (!current.empty()) {
            out.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

std::map<std::string, std::size_t> term_counts(const TermVector& tokens) {
    std::map<std::string, std::size_t> counts;
    for (const auto& t : tokens) ++counts[t];
    return counts;
}

Query::Query(std::string raw_text) : raw(std::move(raw_text)), terms(tokenize(raw)) {}

void WeightedTermSet::set(const std::string& term, double weight) {
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
        throw Error(ErrorCode::InvalidArgument, "term weight must be a finite non-negative number: " + term);
    }
    entries_[term] = weight;
}

void WeightedTermSet::add(const std::string& term, double weight) {
    set(term, this->weight(term) + weight);
}

double WeightedTermSet::weight(const std::string& term) const {
    auto it = entries_.find(term);
    return it == entries_.end() ? 0.0 : it->second;
}

WeightedTermSet WeightedTermSet::scaled(double factor) const {
    WeightedTermSet out;
    for (const auto& [term, w] : entries_) out.set(term, w * factor);
    return out;
}

WeightedTermSet fuse_terms(const Query& query, const Profile& profile) {
    WeightedTermSet fused;
    // Query terms are set-valued: a repeated query word still weighs 1.0.
    for (const auto& term : query.terms) fused.set(term, 1.0);
    for (const auto& pt : profile.terms) fused.add(pt.term, pt.weight);
    return fused;
}

WeightedTermSet profile_terms(const Profile& profile) {
    WeightedTermSet out;
    for (const auto& pt : profile.terms) out.add(pt.term, pt.weight);
    return out;
}

double match_score(const TermVector& tokens, const WeightedTermSet& weights) {
    if (weights.empty()) return 0.0;
    double score = 0.0;
    for (const auto& t : tokens) score += weights.weight(t);
    return score;
}

}  // namespace segscore::text
