/*
 * segscore: segment-level web page evaluation.
 *
 * C interface over the scoring engine. Every call returns a segscore_status;
 * SEGSCORE_OK and the positive warning codes mean the output argument was
 * filled in, negative codes mean failure and leave outputs untouched. The
 * message for the most recent failure on the calling thread is available
 * from segscore_last_error().
 *
 * Strings handed out by the library are NUL-terminated UTF-8 and must be
 * released with segscore_string_free().
 *
 * An engine is not safe for concurrent mutation; distinct engines are
 * independent. Scoring calls on one engine may run concurrently as long as
 * no configuration call runs at the same time.
 */
#ifndef SEGSCORE_SEGSCORE_H
#define SEGSCORE_SEGSCORE_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(SEGSCORE_BUILDING_LIBRARY)
#    define SEGSCORE_API __declspec(dllexport)
#  else
#    define SEGSCORE_API __declspec(dllimport)
#  endif
#else
#  define SEGSCORE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum segscore_status {
    SEGSCORE_OK = 0,
    SEGSCORE_WARN_EMPTY_PAGE = 1,        /* output filled, page body had no visible text */
    SEGSCORE_WARN_CHECKS_FAILED = 2,     /* output filled, a published-table check failed */
    SEGSCORE_ERR_INVALID_ARGUMENT = -1,
    SEGSCORE_ERR_MALFORMED_INPUT = -2,
    SEGSCORE_ERR_MALFORMED_CONFIG = -3,
    SEGSCORE_ERR_MALFORMED_PROFILE = -4,
    SEGSCORE_ERR_MISSING_FILE = -5,
    SEGSCORE_ERR_EMPTY_PAGE = -6,
    SEGSCORE_ERR_EMPTY_SESSION = -7,
    SEGSCORE_ERR_PROVIDER_UNAVAILABLE = -8,
    SEGSCORE_ERR_PROVIDER_PROTOCOL = -9,
    SEGSCORE_ERR_STORAGE = -10,
    SEGSCORE_ERR_INTERNAL = -99
} segscore_status;

typedef enum segscore_provider {
    SEGSCORE_PROVIDER_NONE = 0,
    SEGSCORE_PROVIDER_GAZETTEER = 1,  /* arg: gazetteer JSON path */
    SEGSCORE_PROVIDER_REPLAY = 2,     /* arg: replay fixture JSON path */
    SEGSCORE_PROVIDER_REMOTE = 3      /* arg: endpoint URL */
} segscore_provider;

typedef enum segscore_format {
    SEGSCORE_FORMAT_JSON = 0,
    SEGSCORE_FORMAT_HTML = 1,
    SEGSCORE_FORMAT_CSV = 2
} segscore_format;

typedef struct segscore_engine segscore_engine;

SEGSCORE_API const char* segscore_version(void);
SEGSCORE_API const char* segscore_status_name(segscore_status status);
/* Message of the last failure on this thread; empty string if none. */
SEGSCORE_API const char* segscore_last_error(void);
SEGSCORE_API void segscore_string_free(char* str);

SEGSCORE_API segscore_status segscore_engine_new(segscore_engine** out);
SEGSCORE_API void segscore_engine_free(segscore_engine* engine);

/* Configuration. Each loader replaces the previous value. */
SEGSCORE_API segscore_status segscore_engine_load_profile(segscore_engine* engine, const char* path);
SEGSCORE_API segscore_status segscore_engine_load_vmwt(segscore_engine* engine, const char* path);
SEGSCORE_API segscore_status segscore_engine_load_coefficients(segscore_engine* engine, const char* path);
SEGSCORE_API segscore_status segscore_engine_load_category_weights(segscore_engine* engine, const char* path);
SEGSCORE_API segscore_status segscore_engine_load_segmentation(segscore_engine* engine, const char* path);
/* NULL or "" disables snapshot reads and writes. */
SEGSCORE_API segscore_status segscore_engine_set_snapshot_dir(segscore_engine* engine, const char* dir);
SEGSCORE_API segscore_status segscore_engine_set_provider(segscore_engine* engine, segscore_provider kind,
                                                          const char* arg);
/* 0 selects the hardware concurrency. */
SEGSCORE_API segscore_status segscore_engine_set_workers(segscore_engine* engine, unsigned workers);
/* Remote provider tuning; applies to the next set_provider call. */
SEGSCORE_API segscore_status segscore_engine_set_remote_options(segscore_engine* engine, int attempts,
                                                                unsigned initial_backoff_ms, int max_in_flight);

/* Segment Pool JSON, or with SEGSCORE_FORMAT_HTML the source page with
 * segment boundary markers. Returns SEGSCORE_WARN_EMPTY_PAGE (with an empty
 * segment list) when the body has no visible text. */
SEGSCORE_API segscore_status segscore_segment(segscore_engine* engine, const char* html, size_t html_len,
                                              const char* url, segscore_format format, char** out);

/* PageReport JSON, or with SEGSCORE_FORMAT_HTML a self-contained report.
 * Provider failures are recorded as report flags and do not fail the call. */
SEGSCORE_API segscore_status segscore_score(segscore_engine* engine, const char* html, size_t html_len,
                                            const char* url, const char* query, segscore_format format,
                                            char** out);

/* Per-segment annotation sets plus a replay fixture object. */
SEGSCORE_API segscore_status segscore_annotate(segscore_engine* engine, const char* html, size_t html_len,
                                               const char* url, char** out);

/* Session statistics over a directory of PageReport JSON files named
 * "<session>__<page>.json" (CSV, or JSON with SEGSCORE_FORMAT_JSON), and/or
 * the published-table checks for a CSV of (session_id,msc,msss,mcas) rows.
 * Either input may be NULL, not both; the matching output is then set to
 * NULL. out_checks holds one PASS/FAIL line per check followed by the
 * per-session table as CSV. Returns SEGSCORE_WARN_CHECKS_FAILED when a table check
 * fails and SEGSCORE_ERR_EMPTY_SESSION when there is nothing to summarise. */
SEGSCORE_API segscore_status segscore_session_stats(const char* reports_dir, const char* table1_path,
                                                    segscore_format format, char** out_stats, char** out_checks);

/* HTTP(S) GET with a 30 second timeout. The body may contain NUL bytes;
 * its size is stored in out_len. */
SEGSCORE_API segscore_status segscore_fetch_url(const char* url, char** out, size_t* out_len);

#ifdef __cplusplus
}
#endif

#endif /* SEGSCORE_SEGSCORE_H */
