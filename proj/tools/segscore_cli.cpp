// segscore command-line front end. Talks to the library only through the C API.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "segscore/segscore.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 2;

// Thrown for anything that should end the process with exit code 2.
struct Fatal {
    std::string message;
};

struct Options {
    std::vector<std::string> inputs;
    std::string query;
    std::string profile;
    std::string snapshots;
    std::string vmwt;
    std::string coeffs;
    std::string category_weights;
    std::string segmentation;
    std::string provider = "none";
    std::string gazetteer;
    std::string fixtures;
    std::string endpoint;
    std::string format = "json";
    std::string out;
    std::string table1;
    std::string reports_dir;
    unsigned workers = 0;
    int retries = 3;
    unsigned backoff_ms = 500;
    int max_in_flight = 4;
};

struct EngineDeleter {
    void operator()(segscore_engine* e) const { segscore_engine_free(e); }
};
using EnginePtr = std::unique_ptr<segscore_engine, EngineDeleter>;

struct LibString {
    char* ptr = nullptr;
    size_t len = 0;
    LibString() = default;
    LibString(const LibString&) = delete;
    LibString& operator=(const LibString&) = delete;
    ~LibString() { segscore_string_free(ptr); }
    std::string str() const { return ptr == nullptr ? std::string() : std::string(ptr, len ? len : std::strlen(ptr)); }
};

[[noreturn]] void fatal_status(segscore_status status, const std::string& context) {
    std::string msg = segscore_last_error();
    if (msg.empty()) msg = segscore_status_name(status);
    throw Fatal{context.empty() ? msg : context + ": " + msg};
}

void check(segscore_status status, const std::string& context) {
    if (status < 0) fatal_status(status, context);
}

bool is_url(const std::string& s) {
    return s.rfind("http://", 0) == 0 || s.rfind("https://", 0) == 0;
}

std::string read_input(const std::string& input) {
    if (is_url(input)) {
        LibString body;
        check(segscore_fetch_url(input.c_str(), &body.ptr, &body.len), input);
        return std::string(body.ptr, body.len);
    }
    std::error_code ec;
    if (!fs::is_regular_file(input, ec)) throw Fatal{input + ": no such file"};
    std::ifstream in(input, std::ios::binary);
    if (!in) throw Fatal{input + ": cannot open for reading"};
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Fatal{input + ": read error"};
    return buf.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::fwrite(content.data(), 1, content.size(), stdout);
        std::fflush(stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Fatal{path + ": cannot open for writing"};
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Fatal{path + ": write error"};
}

segscore_format parse_format(const std::string& f) {
    if (f == "html") return SEGSCORE_FORMAT_HTML;
    if (f == "csv") return SEGSCORE_FORMAT_CSV;
    return SEGSCORE_FORMAT_JSON;
}

std::string extension_for(segscore_format f) {
    return f == SEGSCORE_FORMAT_HTML ? ".html" : f == SEGSCORE_FORMAT_CSV ? ".csv" : ".json";
}

// Where the output for input i goes. A single input writes to --out (or
// stdout); several inputs need --out naming a directory.
std::string output_path(const Options& o, std::size_t i, segscore_format f) {
    if (o.inputs.size() == 1) return o.out;
    std::string stem = is_url(o.inputs[i]) ? "page" : fs::path(o.inputs[i]).stem().string();
    return (fs::path(o.out) / (std::to_string(i) + "_" + stem + extension_for(f))).string();
}

EnginePtr make_engine(const Options& o) {
    segscore_engine* raw = nullptr;
    check(segscore_engine_new(&raw), "engine");
    EnginePtr engine(raw);
    if (!o.profile.empty()) check(segscore_engine_load_profile(raw, o.profile.c_str()), o.profile);
    if (!o.vmwt.empty()) check(segscore_engine_load_vmwt(raw, o.vmwt.c_str()), o.vmwt);
    if (!o.coeffs.empty()) check(segscore_engine_load_coefficients(raw, o.coeffs.c_str()), o.coeffs);
    if (!o.category_weights.empty()) {
        check(segscore_engine_load_category_weights(raw, o.category_weights.c_str()), o.category_weights);
    }
    if (!o.segmentation.empty()) check(segscore_engine_load_segmentation(raw, o.segmentation.c_str()), o.segmentation);
    if (!o.snapshots.empty()) check(segscore_engine_set_snapshot_dir(raw, o.snapshots.c_str()), o.snapshots);
    check(segscore_engine_set_workers(raw, o.workers), "--workers");
    check(segscore_engine_set_remote_options(raw, o.retries, o.backoff_ms, o.max_in_flight), "remote options");

    if (o.provider == "gazetteer") {
        if (o.gazetteer.empty()) throw Fatal{"--provider gazetteer requires --gazetteer PATH"};
        check(segscore_engine_set_provider(raw, SEGSCORE_PROVIDER_GAZETTEER, o.gazetteer.c_str()), o.gazetteer);
    } else if (o.provider == "replay") {
        if (o.fixtures.empty()) throw Fatal{"--provider replay requires --fixtures PATH"};
        check(segscore_engine_set_provider(raw, SEGSCORE_PROVIDER_REPLAY, o.fixtures.c_str()), o.fixtures);
    } else if (o.provider == "remote") {
        std::string endpoint = o.endpoint;
        if (endpoint.empty()) {
            if (const char* env = std::getenv("SEGSCORE_ENDPOINT")) endpoint = env;
        }
        if (endpoint.empty()) throw Fatal{"--provider remote requires --endpoint URL or SEGSCORE_ENDPOINT"};
        check(segscore_engine_set_provider(raw, SEGSCORE_PROVIDER_REMOTE, endpoint.c_str()), endpoint);
    }
    return engine;
}

void require_outputs(const Options& o) {
    if (o.inputs.size() > 1) {
        if (o.out.empty()) throw Fatal{"several inputs need --out DIR"};
        std::error_code ec;
        fs::create_directories(o.out, ec);
        if (!fs::is_directory(o.out)) throw Fatal{o.out + ": not a directory"};
    }
}

int cmd_segment(const Options& o) {
    const auto format = parse_format(o.format);
    if (format == SEGSCORE_FORMAT_CSV) throw Fatal{"segment supports --format json or html"};
    require_outputs(o);
    auto engine = make_engine(o);
    for (std::size_t i = 0; i < o.inputs.size(); ++i) {
        const std::string html = read_input(o.inputs[i]);
        LibString out;
        const auto status =
            segscore_segment(engine.get(), html.data(), html.size(), o.inputs[i].c_str(), format, &out.ptr);
        check(status, o.inputs[i]);
        if (status == SEGSCORE_WARN_EMPTY_PAGE) {
            std::cerr << "segscore: warning: " << o.inputs[i] << ": page body has no visible text\n";
        }
        write_output(output_path(o, i, format), out.str());
    }
    return kExitOk;
}

int cmd_score(const Options& o) {
    const auto format = parse_format(o.format);
    if (format == SEGSCORE_FORMAT_CSV) throw Fatal{"score supports --format json or html"};
    if (o.query.find_first_not_of(" \t\r\n") == std::string::npos) throw Fatal{"score requires a non-empty --query"};
    require_outputs(o);
    auto engine = make_engine(o);
    for (std::size_t i = 0; i < o.inputs.size(); ++i) {
        const std::string html = read_input(o.inputs[i]);
        LibString out;
        check(segscore_score(engine.get(), html.data(), html.size(), o.inputs[i].c_str(), o.query.c_str(), format,
                             &out.ptr),
              o.inputs[i]);
        write_output(output_path(o, i, format), out.str());
    }
    return kExitOk;
}

int cmd_annotate(const Options& o) {
    if (o.provider == "none") throw Fatal{"annotate requires --provider gazetteer, replay or remote"};
    require_outputs(o);
    auto engine = make_engine(o);
    for (std::size_t i = 0; i < o.inputs.size(); ++i) {
        const std::string html = read_input(o.inputs[i]);
        LibString out;
        check(segscore_annotate(engine.get(), html.data(), html.size(), o.inputs[i].c_str(), &out.ptr), o.inputs[i]);
        write_output(output_path(o, i, SEGSCORE_FORMAT_JSON), out.str());
    }
    return kExitOk;
}

int cmd_session_stats(const Options& o) {
    if (o.reports_dir.empty() && o.table1.empty()) throw Fatal{"session-stats needs a reports directory or --table1"};
    const auto format = o.format == "json" && !o.reports_dir.empty() ? SEGSCORE_FORMAT_JSON : SEGSCORE_FORMAT_CSV;
    LibString stats;
    LibString checks;
    const auto status = segscore_session_stats(o.reports_dir.empty() ? nullptr : o.reports_dir.c_str(),
                                               o.table1.empty() ? nullptr : o.table1.c_str(), format, &stats.ptr,
                                               &checks.ptr);
    check(status, o.reports_dir.empty() ? o.table1 : o.reports_dir);
    if (stats.ptr != nullptr) write_output(o.out, stats.str());
    if (checks.ptr != nullptr) {
        if (stats.ptr != nullptr && o.out.empty()) std::fputs("\n", stdout);
        write_output(stats.ptr != nullptr ? std::string() : o.out, checks.str());
    }
    if (status == SEGSCORE_WARN_CHECKS_FAILED) std::cerr << "segscore: warning: a table check failed\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Segment-level web page evaluation against a query and a weighted profile"};
    app.require_subcommand(1);
    app.set_version_flag("--version", segscore_version());

    auto add_config = [&o](CLI::App* sub) {
        sub->add_option("--profile", o.profile, "Profile JSON");
        sub->add_option("--vmwt", o.vmwt, "Visual markup weight table JSON");
        sub->add_option("--segmentation", o.segmentation, "Segmentation config JSON");
        sub->add_option("--workers", o.workers, "Scoring threads (0: all cores)");
    };
    auto add_provider = [&o](CLI::App* sub) {
        sub->add_option("--provider", o.provider, "Annotation provider")
            ->check(CLI::IsMember({"none", "gazetteer", "replay", "remote"}));
        sub->add_option("--gazetteer", o.gazetteer, "Gazetteer JSON for --provider gazetteer");
        sub->add_option("--fixtures", o.fixtures, "Replay fixture JSON for --provider replay");
        sub->add_option("--endpoint", o.endpoint, "Annotation service URL (default: $SEGSCORE_ENDPOINT)");
        sub->add_option("--retries", o.retries, "Remote attempts per segment")->check(CLI::Range(1, 10));
        sub->add_option("--backoff-ms", o.backoff_ms, "Initial remote retry backoff");
        sub->add_option("--max-in-flight", o.max_in_flight, "Concurrent remote requests")->check(CLI::Range(1, 256));
        sub->add_option("--category-weights", o.category_weights, "Entity category weights JSON");
    };
    auto add_io = [&o](CLI::App* sub) {
        sub->add_option("inputs", o.inputs, "HTML files or http(s) URLs")->required();
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "html", "csv"}));
        sub->add_option("--out", o.out, "Output file (directory for several inputs)");
    };

    auto* segment = app.add_subcommand("segment", "Split pages into scored-segment candidates");
    add_io(segment);
    add_config(segment);

    auto* score = app.add_subcommand("score", "Score pages against a query and profile");
    add_io(score);
    add_config(score);
    add_provider(score);
    score->add_option("--query", o.query, "Query string")->required();
    score->add_option("--snapshots", o.snapshots, "Snapshot directory for freshness");
    score->add_option("--coeffs", o.coeffs, "Dimension coefficient JSON");

    auto* annotate = app.add_subcommand("annotate", "Annotate page segments with entities");
    add_io(annotate);
    add_config(annotate);
    add_provider(annotate);

    auto* stats = app.add_subcommand("session-stats", "Per-session segment statistics and table checks");
    stats->add_option("reports", o.reports_dir, "Directory of <session>__<page>.json reports");
    stats->add_option("--table1", o.table1, "CSV of published session_id,msc,msss,mcas rows");
    stats->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    stats->add_option("--out", o.out, "Output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitFailure;
    }

    try {
        if (segment->parsed()) return cmd_segment(o);
        if (score->parsed()) return cmd_score(o);
        if (annotate->parsed()) return cmd_annotate(o);
        return cmd_session_stats(o);
    } catch (const Fatal& f) {
        std::cerr << "segscore: error: " << f.message << "\n";
    } catch (const std::exception& e) {
        std::cerr << "segscore: error: " << e.what() << "\n";
    }
    return kExitFailure;
}
