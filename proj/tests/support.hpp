#pragma once

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "segscore/html/dom.hpp"
#include "segscore/html/segmenter.hpp"

namespace segscore::testkit {

inline std::filesystem::path fixtures_dir() {
    return SEGSCORE_FIXTURES;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::vector<std::filesystem::path> corpus_pages() {
    std::vector<std::filesystem::path> pages;
    for (const auto& e : std::filesystem::directory_iterator(fixtures_dir() / "pages")) {
        if (e.path().extension() == ".html") pages.push_back(e.path());
    }
    std::sort(pages.begin(), pages.end());
    return pages;
}

inline std::vector<html::Segment> segments_of(const std::string& html,
                                              const html::SegmentationConfig& cfg = html::SegmentationConfig::defaults()) {
    return html::segment_page(html::parse_html(html), cfg).segments;
}

// Scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("segscore-test-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace segscore::testkit
