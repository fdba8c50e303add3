/* C interface to the semantic regular expression matcher.
 *
 * Every function that can fail returns a semre_status. On failure the
 * thread-local message from semre_last_error() describes the problem.
 * Strings returned through char** out-parameters are owned by the caller
 * and must be released with semre_string_free().
 */
#ifndef SEMRE_SEMRE_H
#define SEMRE_SEMRE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SEMRE_API __declspec(dllexport)
#else
#define SEMRE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum semre_status {
    SEMRE_OK = 0,
    SEMRE_ERR_INVALID_ARGUMENT = 1,
    SEMRE_ERR_PARSE = 2,
    SEMRE_ERR_CONFIG = 3,
    SEMRE_ERR_ORACLE = 4,
    SEMRE_ERR_TIMEOUT = 5,
    SEMRE_ERR_TOO_LARGE = 6,
    SEMRE_ERR_IO = 7,
    SEMRE_ERR_INTERNAL = 8
} semre_status;

typedef enum semre_engine {
    SEMRE_ENGINE_SNFA = 0, /* query-graph engine */
    SEMRE_ENGINE_DP = 1,   /* memoized dynamic-programming baseline */
    SEMRE_ENGINE_NAIVE = 2 /* unmemoized recursion; lines of at most 16 bytes */
} semre_engine;

typedef struct semre_pattern semre_pattern;
typedef struct semre_oracle semre_oracle;
typedef struct semre_matcher semre_matcher;

typedef struct semre_metrics {
    uint64_t oracle_calls;
    uint64_t distinct_queries;
    uint64_t submitted_chars;
    double wall_seconds;
    double oracle_seconds;
    int matched;
} semre_metrics;

typedef struct semre_cache_stats {
    uint64_t hits;
    uint64_t misses;
    uint64_t calls_forwarded;
    uint64_t chars_forwarded;
} semre_cache_stats;

/* Compile flags. */
#define SEMRE_COMPILE_FULL_ALPHABET 0x1u /* '.' and [^..] range over all 256 bytes, not just ASCII */
#define SEMRE_COMPILE_WHOLE_LINE 0x2u    /* match the whole input; otherwise r is wrapped as .*r.* */

SEMRE_API const char* semre_version(void);
SEMRE_API const char* semre_status_string(semre_status status);
SEMRE_API const char* semre_last_error(void);
/* Byte offset of the last parse error, or (size_t)-1. */
SEMRE_API size_t semre_last_error_offset(void);
SEMRE_API void semre_string_free(char* s);

SEMRE_API semre_status semre_pattern_compile(const char* text, size_t len, unsigned flags, semre_pattern** out);
SEMRE_API void semre_pattern_free(semre_pattern* p);
/* Canonical text of the compiled pattern (including any .* wrapping). */
SEMRE_API semre_status semre_pattern_to_string(const semre_pattern* p, char** out);
SEMRE_API size_t semre_pattern_size(const semre_pattern* p);
SEMRE_API size_t semre_pattern_query_count(const semre_pattern* p);
/* NULL when i is out of range. Valid while p lives. */
SEMRE_API const char* semre_pattern_query_name(const semre_pattern* p, size_t i);
/* Graphviz text of the normalized SNFA, states annotated with query contexts. */
SEMRE_API semre_status semre_pattern_dump_snfa(const semre_pattern* p, char** out);

/* Oracles are always wrapped in a per-handle answer cache. */
SEMRE_API semre_status semre_oracle_from_config(const char* path, semre_oracle** out);
SEMRE_API semre_status semre_oracle_from_config_text(const char* text, const char* base_dir, semre_oracle** out);
/* A single backend answering every query, e.g. "builtin:palindrome" or "words:list.txt". */
SEMRE_API semre_status semre_oracle_from_backend(const char* spec, const char* base_dir, semre_oracle** out);
SEMRE_API void semre_oracle_free(semre_oracle* o);
SEMRE_API semre_status semre_oracle_cache_stats(const semre_oracle* o, semre_cache_stats* out);
/* SEMRE_ERR_CONFIG if some query of p has no binding in a config oracle. */
SEMRE_API semre_status semre_oracle_check_bound(const semre_oracle* o, const semre_pattern* p);

/* The matcher keeps references to p and o; both must outlive it. Creating a
 * query-graph matcher asks the oracle for each query's answer on the empty
 * string. */
SEMRE_API semre_status semre_matcher_create(const semre_pattern* p, semre_oracle* o, semre_engine engine,
                                            semre_matcher** out);
SEMRE_API void semre_matcher_free(semre_matcher* m);
/* Safe to call concurrently on one matcher. timeout_seconds <= 0 disables
 * the deadline. metrics may be NULL. */
SEMRE_API semre_status semre_matcher_match(const semre_matcher* m, const char* line, size_t len,
                                           double timeout_seconds, int* matched, semre_metrics* metrics);
/* Graphviz text of the query graph for one line; query-graph engine only. */
SEMRE_API semre_status semre_matcher_dump_query_graph(const semre_matcher* m, const char* line, size_t len,
                                                      char** out);

/* Reads an edge list and decides whether the graph has a triangle twice:
 * through the membership reduction (unary encoding when binary == 0) and
 * by brute force. */
SEMRE_API semre_status semre_triangle_check(const char* edge_list_path, int binary, int* reduction_verdict,
                                            int* brute_force_verdict, semre_metrics* metrics);

#ifdef __cplusplus
}
#endif

#endif
