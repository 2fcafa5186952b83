#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace segscore {

struct ProfileTerm {
    std::string term;
    double weight = 0.0;

    friend bool operator==(const ProfileTerm&, const ProfileTerm&) = default;
};

// Weighted user profile. Terms are single normalized tokens, unique, with
// weights in [0, 1].
struct Profile {
    std::string owner_id;
    std::vector<ProfileTerm> terms;

    bool empty() const { return terms.empty(); }

    friend bool operator==(const Profile&, const Profile&) = default;
};

namespace store {

// Throws Error(MalformedProfile) when the invariants above do not hold.
void validate_profile(const Profile& profile);

// Accepts the canonical {"v":1,"owner_id":..,"terms":[{"term","weight"}]}
// document, a bare list of {term, weight} objects, or a flat term->weight
// object. A file holding only whitespace is an empty profile.
Profile load_profile(const std::filesystem::path& path);
Profile parse_profile(const std::string& document);

// Always writes the canonical versioned form.
void save_profile(const Profile& profile, const std::filesystem::path& path);
std::string serialize_profile(const Profile& profile);

}  // namespace store
}  // namespace segscore
