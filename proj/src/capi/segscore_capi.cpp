#include "segscore/segscore.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include <nlohmann/json.hpp>

#include "segscore/annotation/annotations.hpp"
#include "segscore/error.hpp"
#include "segscore/html/segment_json.hpp"
#include "segscore/io.hpp"
#include "segscore/net/http.hpp"
#include "segscore/page/page_scorer.hpp"
#include "segscore/report/html_report.hpp"
#include "segscore/store/profile.hpp"

struct segscore_engine {
    segscore::page::ConfigBundle config;
    segscore::Profile profile;
    segscore::annotation::RetryPolicy retry;
    int max_in_flight = 4;
};

namespace {

thread_local std::string g_last_error;

segscore_status to_status(segscore::ErrorCode code) {
    using segscore::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument: return SEGSCORE_ERR_INVALID_ARGUMENT;
        case ErrorCode::MalformedInput: return SEGSCORE_ERR_MALFORMED_INPUT;
        case ErrorCode::MalformedConfig: return SEGSCORE_ERR_MALFORMED_CONFIG;
        case ErrorCode::MalformedProfile: return SEGSCORE_ERR_MALFORMED_PROFILE;
        case ErrorCode::MissingFile: return SEGSCORE_ERR_MISSING_FILE;
        case ErrorCode::EmptyPage: return SEGSCORE_ERR_EMPTY_PAGE;
        case ErrorCode::EmptySession: return SEGSCORE_ERR_EMPTY_SESSION;
        case ErrorCode::ProviderUnavailable: return SEGSCORE_ERR_PROVIDER_UNAVAILABLE;
        case ErrorCode::ProviderProtocol: return SEGSCORE_ERR_PROVIDER_PROTOCOL;
        case ErrorCode::StorageFailure: return SEGSCORE_ERR_STORAGE;
    }
    return SEGSCORE_ERR_INTERNAL;
}

segscore_status fail(segscore_status status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

// Runs body() and converts exceptions into status codes.
template <typename Body>
segscore_status guarded(Body&& body) noexcept {
    try {
        g_last_error.clear();
        return body();
    } catch (const segscore::Error& e) {
        return fail(to_status(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(SEGSCORE_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(SEGSCORE_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(SEGSCORE_ERR_INTERNAL, "unknown error");
    }
}

char* copy_out(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.data(), s.size());
    out[s.size()] = '\0';
    return out;
}

void require(bool condition, const char* message) {
    if (!condition) throw segscore::Error(segscore::ErrorCode::InvalidArgument, message);
}

std::string required_path(const char* path) {
    require(path != nullptr && *path != '\0', "path must be non-empty");
    return path;
}

}  // namespace

extern "C" {

const char* segscore_version(void) {
    return "1.0.0";
}

const char* segscore_status_name(segscore_status status) {
    switch (status) {
        case SEGSCORE_OK: return "ok";
        case SEGSCORE_WARN_EMPTY_PAGE: return "empty page";
        case SEGSCORE_WARN_CHECKS_FAILED: return "checks failed";
        case SEGSCORE_ERR_INVALID_ARGUMENT: return "invalid argument";
        case SEGSCORE_ERR_MALFORMED_INPUT: return "malformed input";
        case SEGSCORE_ERR_MALFORMED_CONFIG: return "malformed config";
        case SEGSCORE_ERR_MALFORMED_PROFILE: return "malformed profile";
        case SEGSCORE_ERR_MISSING_FILE: return "missing file";
        case SEGSCORE_ERR_EMPTY_PAGE: return "empty page";
        case SEGSCORE_ERR_EMPTY_SESSION: return "empty session";
        case SEGSCORE_ERR_PROVIDER_UNAVAILABLE: return "provider unavailable";
        case SEGSCORE_ERR_PROVIDER_PROTOCOL: return "provider protocol error";
        case SEGSCORE_ERR_STORAGE: return "storage failure";
        case SEGSCORE_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* segscore_last_error(void) {
    return g_last_error.c_str();
}

void segscore_string_free(char* str) {
    std::free(str);
}

segscore_status segscore_engine_new(segscore_engine** out) {
    return guarded([&] {
        require(out != nullptr, "out must not be null");
        *out = new segscore_engine();
        return SEGSCORE_OK;
    });
}

void segscore_engine_free(segscore_engine* engine) {
    delete engine;
}

segscore_status segscore_engine_load_profile(segscore_engine* engine, const char* path) {
    return guarded([&] {
        require(engine != nullptr, "engine must not be null");
        engine->profile = segscore::store::load_profile(required_path(path));
        return SEGSCORE_OK;
    });
}

segscore_status segscore_engine_load_vmwt(segscore_engine* engine, const char* path) {
    return guarded([&] {
        require(engine != nullptr, "engine must not be null");
        engine->config.vmwt = segscore::scoring::parse_vmwt(segscore::io::read_file(required_path(path)));
        return SEGSCORE_OK;
    });
}

segscore_status segscore_engine_load_coefficients(segscore_engine* engine, const char* path) {
    return guarded([&] {
        require(engine != nullptr, "engine must not be null");
        engine->config.coeffs = segscore::scoring::parse_coefficients(segscore::io::read_file(required_path(path)));
        return SEGSCORE_OK;
    });
}

segscore_status segscore_engine_load_category_weights(segscore_engine* engine, const char* path) {
    return guarded([&] {
        require(engine != nullptr, "engine must not be null");
        engine->config.category_weights =
            segscore::annotation::parse_category_weights(segscore::io::read_file(required_path(path)));
        return SEGSCORE_OK;
    });
}

segscore_status segscore_engine_load_segmentation(segscore_engine* engine, const char* path) {
    return guarded([&] {
        require(engine != nullptr, "engine must not be null");
        engine->config.segmentation =
            segscore::html::parse_segmentation_config(segscore::io::read_file(required_path(path)));
        return SEGSCORE_OK;
    });
}

segscore_status segscore_engine_set_snapshot_dir(segscore_engine* engine, const char* dir) {
    return guarded([&] {
        require(engine != nullptr, "engine must not be null");
        if (dir == nullptr || *dir == '\0') {
            engine->config.snapshot_dir.reset();
        } else {
            engine->config.snapshot_dir = std::filesystem::path(dir);
        }
        return SEGSCORE_OK;
    });
}

segscore_status segscore_engine_set_provider(segscore_engine* engine, segscore_provider kind, const char* arg) {
    return guarded([&] {
        namespace ann = segscore::annotation;
        require(engine != nullptr, "engine must not be null");
        switch (kind) {
            case SEGSCORE_PROVIDER_NONE:
                engine->config.provider.reset();
                break;
            case SEGSCORE_PROVIDER_GAZETTEER:
                engine->config.provider = std::make_shared<ann::GazetteerProvider>(
                    ann::parse_gazetteer(segscore::io::read_file(required_path(arg))));
                break;
            case SEGSCORE_PROVIDER_REPLAY:
                engine->config.provider = std::make_shared<ann::ReplayProvider>(
                    ann::parse_replay_fixtures(segscore::io::read_file(required_path(arg))));
                break;
            case SEGSCORE_PROVIDER_REMOTE:
                require(arg != nullptr && *arg != '\0', "remote provider requires an endpoint URL");
                engine->config.provider = std::make_shared<ann::RemoteProvider>(
                    arg, std::make_shared<segscore::net::HttplibTransport>(), engine->retry, engine->max_in_flight);
                break;
            default:
                require(false, "unknown provider kind");
        }
        return SEGSCORE_OK;
    });
}

segscore_status segscore_engine_set_workers(segscore_engine* engine, unsigned workers) {
    return guarded([&] {
        require(engine != nullptr, "engine must not be null");
        engine->config.workers = workers;
        return SEGSCORE_OK;
    });
}

segscore_status segscore_engine_set_remote_options(segscore_engine* engine, int attempts, unsigned initial_backoff_ms,
                                                   int max_in_flight) {
    return guarded([&] {
        require(engine != nullptr, "engine must not be null");
        require(attempts >= 1, "attempts must be >= 1");
        require(max_in_flight >= 1, "max_in_flight must be >= 1");
        engine->retry.attempts = attempts;
        engine->retry.initial_backoff = std::chrono::milliseconds(initial_backoff_ms);
        engine->max_in_flight = max_in_flight;
        return SEGSCORE_OK;
    });
}

segscore_status segscore_segment(segscore_engine* engine, const char* html, size_t html_len, const char* url,
                                 segscore_format format, char** out) {
    return guarded([&] {
        require(engine != nullptr && out != nullptr, "engine and out must not be null");
        require(html != nullptr || html_len == 0, "html must not be null");
        const std::string page_url = url != nullptr ? url : "";
        const auto doc = segscore::html::parse_html(std::string_view(html == nullptr ? "" : html, html_len));
        auto cfg = engine->config.segmentation;
        cfg.visual_tags = engine->config.vmwt.tags();
        const auto result = segscore::html::segment_page(doc, cfg);

        std::string rendered;
        if (format == SEGSCORE_FORMAT_HTML) {
            rendered = segscore::report::segment_boundaries_html(doc, result.segments);
        } else {
            require(format == SEGSCORE_FORMAT_JSON, "segment output supports json and html");
            rendered = segscore::html::segment_pool_to_json(page_url, result).dump(2) + "\n";
        }
        *out = copy_out(rendered);
        return result.empty_page ? SEGSCORE_WARN_EMPTY_PAGE : SEGSCORE_OK;
    });
}

segscore_status segscore_score(segscore_engine* engine, const char* html, size_t html_len, const char* url,
                               const char* query, segscore_format format, char** out) {
    return guarded([&] {
        require(engine != nullptr && out != nullptr, "engine and out must not be null");
        require(html != nullptr || html_len == 0, "html must not be null");
        require(format == SEGSCORE_FORMAT_JSON || format == SEGSCORE_FORMAT_HTML, "score output supports json and html");
        const segscore::text::Query q(query != nullptr ? query : "");
        const auto scored = segscore::page::score_document(std::string_view(html == nullptr ? "" : html, html_len),
                                                           url != nullptr ? url : "", q, engine->profile,
                                                           engine->config);
        const std::string rendered = format == SEGSCORE_FORMAT_HTML
                                         ? segscore::report::score_report_html(scored)
                                         : segscore::page::report_to_json(scored.report).dump(2) + "\n";
        *out = copy_out(rendered);
        return SEGSCORE_OK;
    });
}

segscore_status segscore_annotate(segscore_engine* engine, const char* html, size_t html_len, const char* url,
                                  char** out) {
    return guarded([&] {
        require(engine != nullptr && out != nullptr, "engine and out must not be null");
        require(html != nullptr || html_len == 0, "html must not be null");
        const auto result = segscore::page::annotate_page(std::string_view(html == nullptr ? "" : html, html_len),
                                                          url != nullptr ? url : "", engine->config);
        *out = copy_out(result.dump(2) + "\n");
        return SEGSCORE_OK;
    });
}

segscore_status segscore_session_stats(const char* reports_dir, const char* table1_path, segscore_format format,
                                       char** out_stats, char** out_checks) {
    return guarded([&] {
        namespace page = segscore::page;
        const bool have_reports = reports_dir != nullptr && *reports_dir != '\0';
        const bool have_table = table1_path != nullptr && *table1_path != '\0';
        require(out_stats != nullptr && out_checks != nullptr, "outputs must not be null");
        if (!have_reports && !have_table) {
            throw segscore::Error(segscore::ErrorCode::EmptySession, "no reports directory or table given");
        }

        std::string stats_text;
        if (have_reports) {
            std::vector<page::SessionStats> stats;
            for (const auto& [id, reports] : page::load_report_sessions(reports_dir)) {
                stats.push_back(page::compute_session_stats(id, reports));
            }
            if (format == SEGSCORE_FORMAT_JSON) {
                auto list = nlohmann::json::array();
                for (const auto& s : stats) {
                    list.push_back({{"session_id", s.session_id},
                                    {"msc", s.msc},
                                    {"msss", s.msss},
                                    {"mcas", s.mcas},
                                    {"uplift", s.uplift}});
                }
                stats_text = list.dump(2) + "\n";
            } else {
                stats_text = page::session_stats_csv(stats);
            }
        }

        std::string checks_text;
        bool checks_passed = true;
        if (have_table) {
            const auto rows = page::parse_table1_csv(segscore::io::read_file(table1_path));
            const auto report = page::table1_checks(rows);
            checks_passed = report.passed();
            checks_text = report.text() + "\n" + page::table1_csv(rows);
        }

        char* stats_out = have_reports ? copy_out(stats_text) : nullptr;
        try {
            *out_checks = have_table ? copy_out(checks_text) : nullptr;
        } catch (...) {
            std::free(stats_out);
            throw;
        }
        *out_stats = stats_out;
        return checks_passed ? SEGSCORE_OK : SEGSCORE_WARN_CHECKS_FAILED;
    });
}

segscore_status segscore_fetch_url(const char* url, char** out, size_t* out_len) {
    return guarded([&] {
        require(url != nullptr && out != nullptr && out_len != nullptr, "arguments must not be null");
        const std::string body = segscore::net::fetch_url(url);
        *out = copy_out(body);
        *out_len = body.size();
        return SEGSCORE_OK;
    });
}

}  // extern "C"
