#include "segscore/store/profile.hpp"

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "segscore/error.hpp"
#include "segscore/io.hpp"
#include "segscore/text/terms.hpp"

namespace segscore::store {

using nlohmann::json;

namespace {

constexpr int kProfileVersion = 1;

[[noreturn]] void malformed(const std::string& what) {
    throw Error(ErrorCode::MalformedProfile, "malformed profile: " + what);
}

ProfileTerm term_from(const std::string& term, const json& weight) {
    if (!weight.is_number()) malformed("weight of '" + term + "' is not a number");
    return {term, weight.get<double>()};
}

}  // namespace

void validate_profile(const Profile& profile) {
    std::set<std::string> seen;
    for (const auto& pt : profile.terms) {
        const auto tokens = text::tokenize(pt.term);
        if (tokens.size() != 1 || tokens.front() != pt.term) {
            malformed("term '" + pt.term + "' is not a single normalized token");
        }
        if (!seen.insert(pt.term).second) malformed("duplicate term '" + pt.term + "'");
        if (!std::isfinite(pt.weight) || pt.weight < 0.0 || pt.weight > 1.0) {
            malformed("weight of '" + pt.term + "' outside [0,1]");
        }
    }
}

Profile parse_profile(const std::string& document) {
    if (document.find_first_not_of(" \t\r\n") == std::string::npos) return {};

    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::exception& e) {
        malformed(e.what());
    }

    Profile profile;
    const json* terms = &doc;
    if (doc.is_object() && doc.contains("terms")) {
        if (doc.contains("v") && doc["v"] != kProfileVersion) malformed("unsupported version " + doc["v"].dump());
        if (doc.contains("owner_id")) {
            if (!doc["owner_id"].is_string()) malformed("owner_id is not a string");
            profile.owner_id = doc["owner_id"].get<std::string>();
        }
        terms = &doc["terms"];
    }

    if (terms->is_array()) {
        for (const auto& entry : *terms) {
            if (!entry.is_object() || !entry.contains("term") || !entry["term"].is_string() ||
                !entry.contains("weight")) {
                malformed("term entries need string 'term' and numeric 'weight'");
            }
            profile.terms.push_back(term_from(entry["term"].get<std::string>(), entry["weight"]));
        }
    } else if (terms->is_object()) {
        for (const auto& [term, weight] : terms->items()) profile.terms.push_back(term_from(term, weight));
    } else {
        malformed("expected a list of {term, weight}");
    }

    validate_profile(profile);
    return profile;
}

Profile load_profile(const std::filesystem::path& path) {
    return parse_profile(io::read_file(path));
}

std::string serialize_profile(const Profile& profile) {
    validate_profile(profile);
    json terms = json::array();
    for (const auto& pt : profile.terms) terms.push_back({{"term", pt.term}, {"weight", pt.weight}});
    json doc = {{"v", kProfileVersion}, {"owner_id", profile.owner_id}, {"terms", std::move(terms)}};
    return doc.dump(2) + "\n";
}

void save_profile(const Profile& profile, const std::filesystem::path& path) {
    io::write_file_atomic(path, serialize_profile(profile));
}

}  // namespace segscore::store
