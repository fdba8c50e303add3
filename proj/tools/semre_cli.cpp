// semre: grep-like front end for semantic regular expressions.
//
//   semre grep -e PATTERN -O oracles.conf [options] [FILE]
//   semre triangle EDGES [--encoding unary|binary|both]

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "semre/semre.h"

namespace {

constexpr int kExitMatch = 0;
constexpr int kExitNoMatch = 1;
constexpr int kExitError = 2;

struct PatternDeleter {
    void operator()(semre_pattern* p) const { semre_pattern_free(p); }
};
struct OracleDeleter {
    void operator()(semre_oracle* o) const { semre_oracle_free(o); }
};
struct MatcherDeleter {
    void operator()(semre_matcher* m) const { semre_matcher_free(m); }
};
using PatternPtr = std::unique_ptr<semre_pattern, PatternDeleter>;
using OraclePtr = std::unique_ptr<semre_oracle, OracleDeleter>;
using MatcherPtr = std::unique_ptr<semre_matcher, MatcherDeleter>;

struct Failure {
    std::string message;
};

void check(semre_status st, const std::string& context) {
    if (st == SEMRE_OK) return;
    std::string msg = context + ": " + semre_status_string(st);
    std::string detail = semre_last_error();
    if (!detail.empty()) msg += ": " + detail;
    throw Failure{msg};
}

std::string take(char* s) {
    std::string out = s ? s : "";
    semre_string_free(s);
    return out;
}

struct GrepOptions {
    std::string pattern;
    std::string oracles;
    std::string input = "-";
    std::string engine = "snfa";
    bool whole_line = false;
    std::size_t max_line_len = 1000;
    bool ascii_only = true;
    std::string bench;
    bool dump_snfa = false;
    bool dump_qg = false;
    unsigned jobs = 1;
    double timeout = 0;
    double line_timeout = 0;
};

struct Line {
    std::size_t number;
    std::string text;
};

struct LineResult {
    bool done = false;
    bool matched = false;
    bool timed_out = false;
    semre_metrics metrics{};
};

struct EngineRun {
    std::string name;
    semre_engine engine;
    OraclePtr oracle;
    MatcherPtr matcher;
    std::vector<LineResult> results;
};

bool is_ascii(const std::string& s) {
    for (unsigned char c : s)
        if (c >= 0x80) return false;
    return true;
}

std::vector<Line> read_lines(std::istream& in, const GrepOptions& opt) {
    std::vector<Line> lines;
    std::string text;
    std::size_t number = 0;
    while (std::getline(in, text)) {
        ++number;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (text.size() > opt.max_line_len) continue;
        if (opt.ascii_only && !is_ascii(text)) continue;
        lines.push_back({number, std::move(text)});
    }
    return lines;
}

OraclePtr open_oracle(const GrepOptions& opt) {
    semre_oracle* o = nullptr;
    if (opt.oracles.empty())
        check(semre_oracle_from_config_text("", ".", &o), "oracle configuration");
    else
        check(semre_oracle_from_config(opt.oracles.c_str(), &o), "oracle configuration '" + opt.oracles + "'");
    return OraclePtr(o);
}

// Matches every line with one engine, spreading lines over `jobs` threads.
void run_engine(EngineRun& run, const std::vector<Line>& lines, const GrepOptions& opt,
                std::chrono::steady_clock::time_point deadline, bool has_deadline) {
    run.results.assign(lines.size(), {});
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::string first_error;
    std::size_t first_error_line = 0;
    std::mutex error_mu;

    auto worker = [&] {
        for (;;) {
            if (stop) return;
            std::size_t i = next++;
            if (i >= lines.size()) return;
            double budget = opt.line_timeout;
            if (has_deadline) {
                double left = std::chrono::duration<double>(deadline - std::chrono::steady_clock::now()).count();
                if (left <= 0) {
                    std::lock_guard lock(error_mu);
                    if (first_error.empty() || lines[i].number < first_error_line) {
                        first_error = "run timed out";
                        first_error_line = lines[i].number;
                    }
                    stop = true;
                    return;
                }
                if (budget <= 0 || left < budget) budget = left;
            }
            LineResult& r = run.results[i];
            int matched = 0;
            semre_status st = semre_matcher_match(run.matcher.get(), lines[i].text.data(), lines[i].text.size(), budget,
                                                  &matched, &r.metrics);
            if (st == SEMRE_ERR_TIMEOUT && opt.line_timeout > 0 &&
                (!has_deadline || std::chrono::steady_clock::now() < deadline)) {
                r.timed_out = true;
                r.done = true;
                continue;
            }
            if (st != SEMRE_OK) {
                std::lock_guard lock(error_mu);
                if (first_error.empty() || lines[i].number < first_error_line) {
                    first_error = std::string(semre_status_string(st)) + ": " + semre_last_error();
                    first_error_line = lines[i].number;
                }
                stop = true;
                return;
            }
            r.matched = matched != 0;
            r.done = true;
        }
    };

    unsigned jobs = std::max(1u, opt.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (!first_error.empty())
        throw Failure{run.name + " engine, line " + std::to_string(first_error_line) + ": " + first_error};
}

void write_bench(std::ostream& out, const std::vector<EngineRun>& runs, const std::vector<Line>& lines) {
    out << "#kind\tengine\tline\tmatched\toracle_calls\tdistinct_queries\tsubmitted_chars\telapsed_ms\toracle_ms\n";
    for (const auto& run : runs)
        for (std::size_t i = 0; i < lines.size(); ++i) {
            const auto& r = run.results[i];
            out << "line\t" << run.name << '\t' << lines[i].number << '\t' << (r.timed_out ? "timeout" : r.matched ? "1" : "0")
                << '\t' << r.metrics.oracle_calls << '\t' << r.metrics.distinct_queries << '\t'
                << r.metrics.submitted_chars << '\t' << r.metrics.wall_seconds * 1e3 << '\t'
                << r.metrics.oracle_seconds * 1e3 << '\n';
        }
    out << "#kind\tengine\tlines\tmatched_lines\trt_total_ms_per_line\trt_matched_ms_per_line\toracle_calls_per_line"
           "\toracle_time_fraction\tquery_chars_per_line\toracle_calls\tdistinct_queries\tsubmitted_chars"
           "\tforwarded_calls\tforwarded_chars\n";
    for (const auto& run : runs) {
        std::size_t matched = 0;
        double total = 0, total_matched = 0, oracle = 0;
        std::uint64_t calls = 0, distinct = 0, chars = 0;
        for (const auto& r : run.results) {
            total += r.metrics.wall_seconds;
            oracle += r.metrics.oracle_seconds;
            calls += r.metrics.oracle_calls;
            distinct += r.metrics.distinct_queries;
            chars += r.metrics.submitted_chars;
            if (r.matched) {
                ++matched;
                total_matched += r.metrics.wall_seconds;
            }
        }
        semre_cache_stats cs{};
        semre_oracle_cache_stats(run.oracle.get(), &cs);
        double n = static_cast<double>(lines.size());
        auto per = [](double x, double d) { return d > 0 ? x / d : 0.0; };
        out << "aggregate\t" << run.name << '\t' << lines.size() << '\t' << matched << '\t' << per(total * 1e3, n) << '\t'
            << per(total_matched * 1e3, static_cast<double>(matched)) << '\t' << per(static_cast<double>(calls), n) << '\t'
            << per(oracle, total) << '\t' << per(static_cast<double>(chars), n) << '\t' << calls << '\t' << distinct
            << '\t' << chars << '\t' << cs.calls_forwarded << '\t' << cs.chars_forwarded << '\n';
    }
}

int run_grep(const GrepOptions& opt) {
    std::vector<std::pair<std::string, semre_engine>> engines;
    if (opt.engine == "all") {
        engines = {{"snfa", SEMRE_ENGINE_SNFA}, {"dp", SEMRE_ENGINE_DP}};
    } else if (opt.engine == "snfa") {
        engines = {{"snfa", SEMRE_ENGINE_SNFA}};
    } else if (opt.engine == "dp") {
        engines = {{"dp", SEMRE_ENGINE_DP}};
    } else {
        if (opt.max_line_len > 16) throw Failure{"--engine naive needs --max-line-len 16 or less"};
        engines = {{"naive", SEMRE_ENGINE_NAIVE}};
    }
    auto started = std::chrono::steady_clock::now();
    bool has_deadline = opt.timeout > 0;
    auto deadline = started + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                  std::chrono::duration<double>(opt.timeout));

    unsigned flags = (opt.whole_line ? SEMRE_COMPILE_WHOLE_LINE : 0u) | (opt.ascii_only ? 0u : SEMRE_COMPILE_FULL_ALPHABET);
    semre_pattern* raw = nullptr;
    check(semre_pattern_compile(opt.pattern.data(), opt.pattern.size(), flags, &raw), "pattern");
    PatternPtr pattern(raw);

    if (opt.dump_snfa) {
        char* dot = nullptr;
        check(semre_pattern_dump_snfa(pattern.get(), &dot), "dump");
        std::cout << take(dot);
        return kExitMatch;
    }

    std::vector<Line> lines;
    if (opt.input == "-") {
        lines = read_lines(std::cin, opt);
    } else {
        std::ifstream in(opt.input, std::ios::binary);
        if (!in) throw Failure{"cannot read '" + opt.input + "'"};
        lines = read_lines(in, opt);
    }

    std::vector<EngineRun> runs;
    for (const auto& [name, engine] : engines) {
        EngineRun run{name, engine, open_oracle(opt), nullptr, {}};
        check(semre_oracle_check_bound(run.oracle.get(), pattern.get()), "oracle configuration");
        semre_matcher* m = nullptr;
        check(semre_matcher_create(pattern.get(), run.oracle.get(), engine, &m), name + " engine");
        run.matcher.reset(m);
        runs.push_back(std::move(run));
    }

    if (opt.dump_qg) {
        if (runs[0].engine != SEMRE_ENGINE_SNFA) throw Failure{"--dump-qg needs the snfa engine"};
        const std::string text = lines.empty() ? std::string() : lines[0].text;
        char* dot = nullptr;
        check(semre_matcher_dump_query_graph(runs[0].matcher.get(), text.data(), text.size(), &dot), "dump");
        std::cout << take(dot);
        return kExitMatch;
    }

    for (auto& run : runs) run_engine(run, lines, opt, deadline, has_deadline);

    for (std::size_t k = 1; k < runs.size(); ++k)
        for (std::size_t i = 0; i < lines.size(); ++i) {
            const auto& a = runs[0].results[i];
            const auto& b = runs[k].results[i];
            if (!a.timed_out && !b.timed_out && a.matched != b.matched)
                throw Failure{"engines " + runs[0].name + " and " + runs[k].name + " disagree on line " +
                              std::to_string(lines[i].number)};
        }

    std::size_t timeouts = 0, matched = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& r = runs[0].results[i];
        if (r.timed_out) {
            ++timeouts;
            continue;
        }
        if (r.matched) {
            ++matched;
            std::cout << lines[i].text << '\n';
        }
    }
    std::cout.flush();
    if (timeouts) std::cerr << "semre: " << timeouts << " line(s) timed out and were not matched\n";

    if (!opt.bench.empty()) {
        std::ofstream out(opt.bench);
        if (!out) throw Failure{"cannot write '" + opt.bench + "'"};
        write_bench(out, runs, lines);
    }
    return matched ? kExitMatch : kExitNoMatch;
}

int run_triangle(const std::string& path, const std::string& encoding) {
    bool agree = true;
    std::cout << "encoding\treduction\tbrute_force\toracle_calls\n";
    for (int binary : {0, 1}) {
        if ((binary && encoding == "unary") || (!binary && encoding == "binary")) continue;
        int reduction = 0, brute = 0;
        semre_metrics m{};
        check(semre_triangle_check(path.c_str(), binary, &reduction, &brute, &m), "triangle");
        std::cout << (binary ? "binary" : "unary") << '\t' << (reduction ? "triangle" : "none") << '\t'
                  << (brute ? "triangle" : "none") << '\t' << m.oracle_calls << '\n';
        agree = agree && reduction == brute;
    }
    return agree ? kExitMatch : kExitNoMatch;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Membership testing for semantic regular expressions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(semre_version()));

    GrepOptions opt;
    auto* grep = app.add_subcommand("grep", "Print the input lines matched by a pattern");
    grep->add_option("-e,--pattern", opt.pattern, "Pattern")->required();
    grep->add_option("-O,--oracles", opt.oracles, "Oracle configuration file (query = backend lines)");
    grep->add_option("input", opt.input, "Input file, '-' for standard input");
    grep->add_option("--engine", opt.engine, "Matching engine")
        ->check(CLI::IsMember({"snfa", "dp", "naive", "all"}))
        ->capture_default_str();
    grep->add_flag("-x,--whole-line", opt.whole_line, "Match whole lines instead of substrings");
    grep->add_option("--max-line-len", opt.max_line_len, "Skip longer lines")->capture_default_str();
    grep->add_flag("--ascii-only,!--no-ascii-only", opt.ascii_only, "Skip lines with non-ASCII bytes")
        ->capture_default_str();
    grep->add_option("--bench", opt.bench, "Write per-line and aggregate metrics (TSV) to this file");
    grep->add_flag("--dump-snfa", opt.dump_snfa, "Print the normalized SNFA as Graphviz and exit");
    grep->add_flag("--dump-qg", opt.dump_qg, "Print the query graph of the first input line as Graphviz and exit");
    grep->add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();
    grep->add_option("--timeout", opt.timeout, "Whole-run time limit in seconds (0: none)");
    grep->add_option("--line-timeout", opt.line_timeout, "Per-line time limit in seconds (0: none)");

    std::string edges, encoding = "both";
    auto* tri = app.add_subcommand("triangle", "Decide triangle existence through the membership reduction");
    tri->add_option("edges", edges, "Edge list file: 'u v' lines, optional 'n N'")->required();
    tri->add_option("--encoding", encoding, "Vertex encoding")
        ->check(CLI::IsMember({"unary", "binary", "both"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    try {
        if (*grep) return run_grep(opt);
        return run_triangle(edges, encoding);
    } catch (const Failure& f) {
        std::cerr << "semre: " << f.message << '\n';
        return kExitError;
    }
}
