#include "segscore/annotation/annotations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "segscore/error.hpp"

namespace segscore::annotation {

using nlohmann::json;

CategoryWeights::CategoryWeights(std::map<std::string, double> weights) : weights_(std::move(weights)) {
    for (const auto& [category, w] : weights_) {
        if (!std::isfinite(w) || w < 0.0) {
            throw Error(ErrorCode::MalformedConfig, "category weight for '" + category + "' must be non-negative");
        }
    }
}

double CategoryWeights::weight(const std::string& category) const {
    auto it = weights_.find(category);
    return it == weights_.end() ? 1.0 : it->second;
}

CategoryWeights CategoryWeights::scaled(double factor) const {
    // Listed categories only; unlisted ones keep the 1.0 default.
    auto copy = weights_;
    for (auto& [category, w] : copy) w *= factor;
    return CategoryWeights(std::move(copy));
}

CategoryWeights parse_category_weights(const std::string& document) {
    std::map<std::string, double> weights;
    try {
        const auto doc = json::parse(document);
        if (!doc.is_object()) throw Error(ErrorCode::MalformedConfig, "category weights must be a JSON object");
        for (const auto& [category, value] : doc.items()) {
            if (!value.is_number()) throw Error(ErrorCode::MalformedConfig, "category weight '" + category + "' is not a number");
            weights[category] = value.get<double>();
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedConfig, std::string("category weights: ") + e.what());
    }
    return CategoryWeights(std::move(weights));
}

AnnotationSet annotate(std::string_view text, AnnotationProvider& provider, std::size_t segment_id) {
    AnnotationSet set;
    set.provider_id = provider.id();
    set.segment_id = segment_id;
    if (!text.empty()) set.entities = provider.entities_for(text);
    return set;
}

double annotation_score(const AnnotationSet& annotations, const text::WeightedTermSet& fused,
                        const CategoryWeights& weights) {
    if (fused.empty()) return 0.0;
    double score = 0.0;
    for (const auto& e : annotations.entities) {
        score += weights.weight(e.category) * e.relevance * text::match_score(text::tokenize(e.name), fused);
    }
    return score;
}

std::vector<Entity> parse_entities_response(const std::string& body) {
    json doc;
    try {
        doc = json::parse(body);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ProviderProtocol, std::string("annotation response is not JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("entities") || !doc["entities"].is_array()) {
        throw Error(ErrorCode::ProviderProtocol, "annotation response lacks an 'entities' list");
    }
    std::vector<Entity> out;
    for (const auto& item : doc["entities"]) {
        if (!item.is_object() || !item.contains("type") || !item["type"].is_string() || !item.contains("name") ||
            !item["name"].is_string()) {
            throw Error(ErrorCode::ProviderProtocol, "entity needs string 'type' and 'name'");
        }
        Entity e{item["type"].get<std::string>(), item["name"].get<std::string>(), 1.0};
        if (e.category.empty() || e.name.empty()) throw Error(ErrorCode::ProviderProtocol, "entity type and name must be non-empty");
        if (item.contains("relevance") && !item["relevance"].is_null()) {
            if (!item["relevance"].is_number()) throw Error(ErrorCode::ProviderProtocol, "entity relevance is not a number");
            e.relevance = item["relevance"].get<double>();
            if (!(e.relevance >= 0.0 && e.relevance <= 1.0)) {
                throw Error(ErrorCode::ProviderProtocol, "entity relevance outside [0,1]");
            }
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::string entities_response(const std::vector<Entity>& entities) {
    json list = json::array();
    for (const auto& e : entities) list.push_back({{"type", e.category}, {"name", e.name}, {"relevance", e.relevance}});
    return json{{"entities", std::move(list)}}.dump();
}

std::string text_hash(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Gazetteer::Gazetteer(std::map<std::string, std::vector<std::string>> phrases) {
    for (auto& [category, list] : phrases) {
        if (category.empty()) throw Error(ErrorCode::MalformedConfig, "gazetteer category must be non-empty");
        for (auto& phrase : list) {
            auto tokens = text::tokenize(phrase);
            if (tokens.empty()) {
                throw Error(ErrorCode::MalformedConfig, "gazetteer phrase without tokens in '" + category + "'");
            }
            phrases_.push_back({category, phrase, std::move(tokens)});
        }
    }
}

std::vector<Entity> Gazetteer::match(std::string_view text) const {
    const auto tokens = text::tokenize(text);
    std::vector<Entity> out;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& p : phrases_) {
        const auto hit = std::search(tokens.begin(), tokens.end(), p.tokens.begin(), p.tokens.end());
        if (hit == tokens.end()) continue;
        if (!seen.emplace(p.category, p.surface).second) continue;
        out.push_back({p.category, p.surface, 1.0});
    }
    return out;
}

Gazetteer parse_gazetteer(const std::string& document) {
    std::map<std::string, std::vector<std::string>> phrases;
    try {
        const auto doc = json::parse(document);
        if (!doc.is_object()) throw Error(ErrorCode::MalformedConfig, "gazetteer must be a JSON object");
        for (const auto& [category, list] : doc.items()) {
            phrases[category] = list.get<std::vector<std::string>>();
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedConfig, std::string("gazetteer: ") + e.what());
    }
    return Gazetteer(std::move(phrases));
}

std::vector<Entity> ReplayProvider::entities_for(std::string_view text) {
    const std::string key = text_hash(text);
    auto it = bodies_.find(key);
    if (it == bodies_.end()) throw Error(ErrorCode::ProviderUnavailable, "no recorded annotation response for " + key);
    return parse_entities_response(it->second);
}

ReplayProvider parse_replay_fixtures(const std::string& document) {
    std::map<std::string, std::string> bodies;
    try {
        const auto doc = json::parse(document);
        if (!doc.is_object()) throw Error(ErrorCode::MalformedConfig, "replay fixtures must be a JSON object");
        for (const auto& [key, value] : doc.items()) {
            bodies[key] = value.is_string() ? value.get<std::string>() : value.dump();
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedConfig, std::string("replay fixtures: ") + e.what());
    }
    return ReplayProvider(std::move(bodies));
}

RemoteProvider::RemoteProvider(std::string endpoint, std::shared_ptr<net::HttpTransport> transport, RetryPolicy retry,
                               int max_in_flight)
    : endpoint_(std::move(endpoint)),
      transport_(std::move(transport)),
      retry_(retry),
      in_flight_(std::clamp<std::ptrdiff_t>(max_in_flight, 1, kMaxInFlightLimit)) {
    if (endpoint_.empty()) throw Error(ErrorCode::InvalidArgument, "remote provider requires an endpoint URL");
    net::split_url(endpoint_);
    if (!transport_) throw Error(ErrorCode::InvalidArgument, "remote provider requires a transport");
    if (retry_.attempts < 1) retry_.attempts = 1;
}

std::vector<Entity> RemoteProvider::entities_for(std::string_view text) {
    std::string last_error;
    auto backoff = retry_.initial_backoff;
    for (int attempt = 1; attempt <= retry_.attempts; ++attempt) {
        std::optional<net::HttpResponse> response;
        in_flight_.acquire();
        try {
            response = transport_->post(endpoint_, text, "text/plain; charset=utf-8");
        } catch (const Error& e) {
            last_error = e.what();
        }
        in_flight_.release();

        if (response) {
            if (response->status >= 200 && response->status < 300) return parse_entities_response(response->body);
            last_error = "HTTP " + std::to_string(response->status);
        }
        if (attempt < retry_.attempts) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
    }
    throw Error(ErrorCode::ProviderUnavailable,
                "annotation endpoint unavailable after " + std::to_string(retry_.attempts) + " attempts: " + last_error);
}

}  // namespace segscore::annotation
