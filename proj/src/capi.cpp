#include "semre/semre.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "semre/matcher.hpp"
#include "semre/parser.hpp"
#include "semre/triangle.hpp"

struct semre_pattern {
    semre::SemRE r;
    semre::Alphabet alphabet;
    std::vector<semre::Query> queries;
};

struct semre_oracle {
    std::shared_ptr<semre::BindingOracle> bindings;  // null for single-backend oracles
    std::shared_ptr<semre::CachingOracle> cached;
};

struct semre_matcher {
    semre_engine engine;
    const semre_pattern* pattern;
    semre_oracle* oracle;
    std::unique_ptr<semre::Matcher> qg;
    std::unique_ptr<semre::DpMatcher> dp;
};

namespace {

thread_local std::string last_error;
thread_local std::size_t last_offset = static_cast<std::size_t>(-1);

semre_status fail(semre_status st, const std::string& msg) {
    last_error = msg;
    last_offset = static_cast<std::size_t>(-1);
    return st;
}

// Runs `fn`, translating exceptions into status codes.
template <class F>
semre_status guarded(F&& fn) {
    try {
        fn();
        last_error.clear();
        last_offset = static_cast<std::size_t>(-1);
        return SEMRE_OK;
    } catch (const semre::ParseError& e) {
        fail(SEMRE_ERR_PARSE, e.what());
        last_offset = e.offset();
        return SEMRE_ERR_PARSE;
    } catch (const semre::ConfigError& e) {
        return fail(SEMRE_ERR_CONFIG, e.what());
    } catch (const semre::OracleError& e) {
        return fail(SEMRE_ERR_ORACLE, e.what());
    } catch (const semre::TimeoutError& e) {
        return fail(SEMRE_ERR_TIMEOUT, e.what());
    } catch (const semre::TooLargeError& e) {
        return fail(SEMRE_ERR_TOO_LARGE, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(SEMRE_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(SEMRE_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(SEMRE_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(SEMRE_ERR_INTERNAL, "unknown error");
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.data(), s.size() + 1);
    return out;
}

void copy_metrics(const semre::MatchMetrics& m, semre_metrics* out) {
    if (!out) return;
    out->oracle_calls = m.oracle_calls;
    out->distinct_queries = m.distinct_queries;
    out->submitted_chars = m.submitted_chars;
    out->wall_seconds = m.wall_seconds;
    out->oracle_seconds = m.oracle_seconds;
    out->matched = m.matched ? 1 : 0;
}

semre_oracle* wrap(std::shared_ptr<semre::BindingOracle> bindings, semre::OraclePtr inner) {
    auto* o = new semre_oracle;
    o->bindings = std::move(bindings);
    o->cached = std::make_shared<semre::CachingOracle>(std::move(inner));
    return o;
}

} // namespace

extern "C" {

const char* semre_version(void) { return "1.0.0"; }

const char* semre_status_string(semre_status status) {
    switch (status) {
    case SEMRE_OK: return "ok";
    case SEMRE_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SEMRE_ERR_PARSE: return "parse error";
    case SEMRE_ERR_CONFIG: return "configuration error";
    case SEMRE_ERR_ORACLE: return "oracle error";
    case SEMRE_ERR_TIMEOUT: return "timeout";
    case SEMRE_ERR_TOO_LARGE: return "input too large";
    case SEMRE_ERR_IO: return "i/o error";
    case SEMRE_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* semre_last_error(void) { return last_error.c_str(); }
size_t semre_last_error_offset(void) { return last_offset; }
void semre_string_free(char* s) { std::free(s); }

semre_status semre_pattern_compile(const char* text, size_t len, unsigned flags, semre_pattern** out) {
    if (!text || !out) return fail(SEMRE_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto alphabet = (flags & SEMRE_COMPILE_FULL_ALPHABET) ? semre::Alphabet::bytes() : semre::Alphabet::ascii();
        auto r = semre::parse_semre(std::string_view(text, len), alphabet);
        if (!(flags & SEMRE_COMPILE_WHOLE_LINE)) {
            auto any = semre::make_star(semre::make_lit(alphabet.sigma));
            r = semre::make_cat_chain({any, r, any});
        }
        auto* p = new semre_pattern{r, alphabet, semre::queries_of(r)};
        *out = p;
    });
}

void semre_pattern_free(semre_pattern* p) { delete p; }

semre_status semre_pattern_to_string(const semre_pattern* p, char** out) {
    if (!p || !out) return fail(SEMRE_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = dup_string(semre::to_pattern(p->r, p->alphabet)); });
}

size_t semre_pattern_size(const semre_pattern* p) { return p ? semre::size(p->r) : 0; }
size_t semre_pattern_query_count(const semre_pattern* p) { return p ? p->queries.size() : 0; }

const char* semre_pattern_query_name(const semre_pattern* p, size_t i) {
    if (!p || i >= p->queries.size()) return nullptr;
    return p->queries[i].name.c_str();
}

semre_status semre_pattern_dump_snfa(const semre_pattern* p, char** out) {
    if (!p || !out) return fail(SEMRE_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = dup_string(semre::normalize(semre::build_snfa(p->r)).to_dot(true)); });
}

semre_status semre_oracle_from_config(const char* path, semre_oracle** out) {
    if (!path || !out) return fail(SEMRE_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto b = semre::OracleConfig::load(path).instantiate();
        *out = wrap(b, b);
    });
}

semre_status semre_oracle_from_config_text(const char* text, const char* base_dir, semre_oracle** out) {
    if (!text || !out) return fail(SEMRE_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto b = semre::OracleConfig::parse(text, base_dir ? base_dir : ".").instantiate();
        *out = wrap(b, b);
    });
}

semre_status semre_oracle_from_backend(const char* spec, const char* base_dir, semre_oracle** out) {
    if (!spec || !out) return fail(SEMRE_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] { *out = wrap(nullptr, semre::make_backend(spec, base_dir ? base_dir : ".")); });
}

void semre_oracle_free(semre_oracle* o) { delete o; }

semre_status semre_oracle_cache_stats(const semre_oracle* o, semre_cache_stats* out) {
    if (!o || !out) return fail(SEMRE_ERR_INVALID_ARGUMENT, "null argument");
    auto st = o->cached->stats();
    out->hits = st.hits;
    out->misses = st.misses;
    out->calls_forwarded = st.calls_forwarded;
    out->chars_forwarded = st.chars_forwarded;
    return SEMRE_OK;
}

semre_status semre_oracle_check_bound(const semre_oracle* o, const semre_pattern* p) {
    if (!o || !p) return fail(SEMRE_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        if (o->bindings) o->bindings->require_bound(p->queries);
    });
}

semre_status semre_matcher_create(const semre_pattern* p, semre_oracle* o, semre_engine engine, semre_matcher** out) {
    if (!p || !o || !out) return fail(SEMRE_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        if (o->bindings) o->bindings->require_bound(p->queries);
        auto m = std::make_unique<semre_matcher>();
        m->engine = engine;
        m->pattern = p;
        m->oracle = o;
        switch (engine) {
        case SEMRE_ENGINE_SNFA: m->qg = std::make_unique<semre::Matcher>(p->r, o->cached); break;
        case SEMRE_ENGINE_DP: m->dp = std::make_unique<semre::DpMatcher>(p->r, o->cached); break;
        case SEMRE_ENGINE_NAIVE: break;
        default: throw std::invalid_argument("unknown engine");
        }
        *out = m.release();
    });
}

void semre_matcher_free(semre_matcher* m) { delete m; }

semre_status semre_matcher_match(const semre_matcher* m, const char* line, size_t len, double timeout_seconds,
                                 int* matched, semre_metrics* metrics) {
    if (!m || (!line && len) || !matched) return fail(SEMRE_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::string_view w(line ? line : "", len);
        semre::Deadline d = timeout_seconds > 0 ? semre::Deadline::after(std::chrono::duration<double>(timeout_seconds))
                                                : semre::Deadline::none();
        semre::MatchMetrics mm;
        bool r = false;
        switch (m->engine) {
        case SEMRE_ENGINE_SNFA: r = m->qg->match(w, &mm, d); break;
        case SEMRE_ENGINE_DP: r = m->dp->match(w, &mm, d); break;
        case SEMRE_ENGINE_NAIVE: {
            auto t0 = semre::Clock::now();
            r = semre::match_naive(m->pattern->r, w, *m->oracle->cached);
            mm.matched = r;
            mm.wall_seconds = std::chrono::duration<double>(semre::Clock::now() - t0).count();
            break;
        }
        }
        *matched = r ? 1 : 0;
        copy_metrics(mm, metrics);
    });
}

semre_status semre_matcher_dump_query_graph(const semre_matcher* m, const char* line, size_t len, char** out) {
    if (!m || (!line && len) || !out) return fail(SEMRE_ERR_INVALID_ARGUMENT, "null argument");
    if (m->engine != SEMRE_ENGINE_SNFA) return fail(SEMRE_ERR_INVALID_ARGUMENT, "query graphs need the snfa engine");
    return guarded([&] { *out = dup_string(m->qg->graph(std::string_view(line ? line : "", len)).to_dot()); });
}

semre_status semre_triangle_check(const char* edge_list_path, int binary, int* reduction_verdict,
                                  int* brute_force_verdict, semre_metrics* metrics) {
    if (!edge_list_path || !reduction_verdict || !brute_force_verdict)
        return fail(SEMRE_ERR_INVALID_ARGUMENT, "null argument");
    std::ifstream in(edge_list_path);
    if (!in) return fail(SEMRE_ERR_IO, std::string("cannot read '") + edge_list_path + "'");
    return guarded([&] {
        auto g = semre::parse_edge_list(in);
        auto inst = binary ? semre::encode_instance_binary(g) : semre::encode_instance(g);
        semre::MatchMetrics mm;
        *reduction_verdict = semre::Matcher(inst.pattern, inst.oracle).match(inst.input, &mm) ? 1 : 0;
        *brute_force_verdict = semre::brute_force_triangle(g) ? 1 : 0;
        copy_metrics(mm, metrics);
    });
}

} // extern "C"
