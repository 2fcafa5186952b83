#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace segscore::io {

// Throws Error(MissingFile) when the path does not exist and
// Error(StorageFailure) on any other read failure.
std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over the target, so
// readers observe either the old or the new content.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace segscore::io
