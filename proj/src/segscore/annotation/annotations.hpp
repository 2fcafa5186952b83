#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "segscore/net/http.hpp"
#include "segscore/text/terms.hpp"

namespace segscore::annotation {

struct Entity {
    std::string category;
    std::string name;
    double relevance = 1.0;

    friend bool operator==(const Entity&, const Entity&) = default;
};

struct AnnotationSet {
    std::vector<Entity> entities;
    std::string provider_id;
    std::size_t segment_id = 0;
};

// category -> weight, 1.0 for unlisted categories.
class CategoryWeights {
public:
    CategoryWeights() = default;
    explicit CategoryWeights(std::map<std::string, double> weights);

    double weight(const std::string& category) const;
    CategoryWeights scaled(double factor) const;

private:
    std::map<std::string, double> weights_;
};

CategoryWeights parse_category_weights(const std::string& document);

// Source of entity annotations for a piece of segment text. Implementations
// throw Error(ProviderUnavailable) when no answer could be obtained and
// Error(ProviderProtocol) when the answer is malformed.
class AnnotationProvider {
public:
    virtual ~AnnotationProvider() = default;
    virtual std::string id() const = 0;
    virtual std::vector<Entity> entities_for(std::string_view text) = 0;
};

// Empty text short-circuits to an empty set without consulting the provider.
AnnotationSet annotate(std::string_view text, AnnotationProvider& provider, std::size_t segment_id = 0);

// Sum over entities of category weight x relevance x fused match of the
// tokenized entity name.
double annotation_score(const AnnotationSet& annotations, const text::WeightedTermSet& fused,
                        const CategoryWeights& weights);

// Wire format shared by the remote and replay providers:
// {"entities":[{"type":string,"name":string,"relevance":number}]}
std::vector<Entity> parse_entities_response(const std::string& body);
std::string entities_response(const std::vector<Entity>& entities);

// Key of replay fixtures: FNV-1a 64 of the UTF-8 text, 16 lowercase hex digits.
std::string text_hash(std::string_view text);

class Gazetteer {
public:
    Gazetteer() = default;
    // Throws Error(MalformedConfig) on phrases with no tokens.
    explicit Gazetteer(std::map<std::string, std::vector<std::string>> phrases);

    // One entity (relevance 1.0) per distinct (category, phrase) occurring as
    // a contiguous token sequence in the text; categories in name order,
    // phrases in file order. Entity names are the phrases as written.
    std::vector<Entity> match(std::string_view text) const;

private:
    struct Phrase {
        std::string category;
        std::string surface;
        text::TermVector tokens;
    };
    std::vector<Phrase> phrases_;
};

// JSON object category -> list of phrases.
Gazetteer parse_gazetteer(const std::string& document);

class GazetteerProvider final : public AnnotationProvider {
public:
    explicit GazetteerProvider(Gazetteer gazetteer) : gazetteer_(std::move(gazetteer)) {}
    std::string id() const override { return "gazetteer"; }
    std::vector<Entity> entities_for(std::string_view text) override { return gazetteer_.match(text); }

private:
    Gazetteer gazetteer_;
};

// Answers from recorded responses keyed by text_hash(). A miss is reported
// as ProviderUnavailable.
class ReplayProvider final : public AnnotationProvider {
public:
    explicit ReplayProvider(std::map<std::string, std::string> bodies) : bodies_(std::move(bodies)) {}
    std::string id() const override { return "replay"; }
    std::vector<Entity> entities_for(std::string_view text) override;

private:
    std::map<std::string, std::string> bodies_;
};

// Fixture file: JSON object text-hash -> response body, where the body is a
// JSON string holding the response or the response object itself.
ReplayProvider parse_replay_fixtures(const std::string& document);

struct RetryPolicy {
    int attempts = 3;
    std::chrono::milliseconds initial_backoff{500};
};

// POSTs raw segment text (text/plain; charset=utf-8) to the endpoint, one
// request per segment, retrying with exponential backoff. At most
// `max_in_flight` requests are outstanding at any time.
class RemoteProvider final : public AnnotationProvider {
public:
    static constexpr std::ptrdiff_t kMaxInFlightLimit = 256;

    RemoteProvider(std::string endpoint, std::shared_ptr<net::HttpTransport> transport, RetryPolicy retry = {},
                   int max_in_flight = 4);

    std::string id() const override { return "remote"; }
    std::vector<Entity> entities_for(std::string_view text) override;

    const std::string& endpoint() const { return endpoint_; }

private:
    std::string endpoint_;
    std::shared_ptr<net::HttpTransport> transport_;
    RetryPolicy retry_;
    std::counting_semaphore<kMaxInFlightLimit> in_flight_;
};

}  // namespace segscore::annotation
