#pragma once

#include <atomic>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "semre/ast.hpp"
#include "semre/error.hpp"

namespace semre {

/// The external oracle ♣ : Q × Σ* → Bool. Implementations must tolerate
/// concurrent calls. Backend failures throw OracleError.
class Oracle {
public:
    virtual ~Oracle() = default;
    virtual bool evaluate(const Query& q, std::string_view s) = 0;
};

using OraclePtr = std::shared_ptr<Oracle>;

/// Wraps a callable; mostly for tests.
class FunctionOracle final : public Oracle {
public:
    using Fn = std::function<bool(const Query&, std::string_view)>;
    explicit FunctionOracle(Fn fn) : fn_(std::move(fn)) {}
    bool evaluate(const Query& q, std::string_view s) override { return fn_(q, s); }

private:
    Fn fn_;
};

/// Named pure predicates: palindrome, always_true, always_false, nonempty.
/// Throws ConfigError for an unknown name.
OraclePtr make_builtin_oracle(std::string_view name);

/// Membership in a fixed set of strings; the query name is ignored.
class WordSetOracle final : public Oracle {
public:
    explicit WordSetOracle(std::vector<std::string> words);
    /// One entry per line; a trailing CR is stripped. Throws ConfigError
    /// when the file cannot be read.
    static std::shared_ptr<WordSetOracle> from_file(const std::string& path);

    bool evaluate(const Query& q, std::string_view s) override;
    std::size_t size() const { return words_.size(); }

private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
    };
    std::unordered_set<std::string, Hash, std::equal_to<>> words_;
    std::unordered_set<std::size_t> lengths_;
};

/// Explicit (query, string) -> answer table with a default for missing
/// keys. Lookups of a length absent from the table skip hashing, so a
/// sparse table answers in constant time.
class TableOracle final : public Oracle {
public:
    explicit TableOracle(bool default_answer = false) : default_(default_answer) {}

    void set(const Query& q, std::string s, bool answer);
    /// Entries that apply to every query (used by per-binding table files).
    void set_any(std::string s, bool answer);

    /// File lines are `string<TAB>answer` with answer one of 1/0/true/false;
    /// a line without a tab maps the whole line to true.
    static std::shared_ptr<TableOracle> from_file(const std::string& path, bool default_answer = false);

    bool evaluate(const Query& q, std::string_view s) override;

private:
    bool default_;
    std::unordered_map<std::string, bool> entries_;  // key: query TAB string
    std::map<std::string, bool, std::less<>> any_;
    std::unordered_set<std::size_t> lengths_;
};

/// Escaping used on the process-oracle wire: backslash, tab, newline and
/// carriage return become \\ \t \n \r. Every other byte is sent verbatim.
std::string escape_payload(std::string_view s);
/// Inverse of escape_payload; throws std::invalid_argument on a bad escape.
std::string unescape_payload(std::string_view s);

/// Runs `/bin/sh -c command` and talks the line protocol: each request is
/// `query<TAB>escaped-payload<LF>`, each reply a line `1` or `0`. Calls are
/// serialized. Spawn failure, malformed replies and child exit throw
/// OracleError.
class ProcessOracle final : public Oracle {
public:
    /// `env` entries are exported to the child before `command` runs.
    explicit ProcessOracle(const std::string& command,
                           const std::vector<std::pair<std::string, std::string>>& env = {});
    ~ProcessOracle() override;
    ProcessOracle(const ProcessOracle&) = delete;
    ProcessOracle& operator=(const ProcessOracle&) = delete;

    bool evaluate(const Query& q, std::string_view s) override;

private:
    void shutdown();

    std::mutex mu_;
    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string read_buffer_;
    bool dead_ = false;
    std::string command_;
};

struct CacheStats {
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    std::uint64_t calls_forwarded = 0;
    std::uint64_t chars_forwarded = 0;
};

/// Memoizes (query, string) -> answer for the lifetime of the object, which
/// pins one answer per key even for a nondeterministic backend. Concurrent
/// misses on the same key forward a single call. Errors are not cached.
class CachingOracle final : public Oracle {
public:
    explicit CachingOracle(OraclePtr inner) : inner_(std::move(inner)) {}

    bool evaluate(const Query& q, std::string_view s) override;
    CacheStats stats() const;
    std::size_t entries() const;

private:
    OraclePtr inner_;
    mutable std::mutex mu_;
    std::unordered_map<std::string, std::shared_future<bool>> cache_;
    std::atomic<std::uint64_t> hits_{0}, misses_{0}, chars_{0};
};

/// Routes each query name to its backend.
class BindingOracle final : public Oracle {
public:
    void bind(const std::string& query, OraclePtr backend);
    bool is_bound(const Query& q) const { return bindings_.count(q.name) != 0; }
    /// Throws ConfigError naming the first unbound query.
    void require_bound(const std::vector<Query>& queries) const;
    std::vector<std::string> names() const;

    bool evaluate(const Query& q, std::string_view s) override;

private:
    std::map<std::string, OraclePtr, std::less<>> bindings_;
};

/// One `name = backend` line of an oracle configuration file. Backends:
///   builtin:<palindrome|always_true|always_false|nonempty>
///   always_true | always_false
///   words:<path>      word-list file
///   table:<path>      key/value table file
///   exec:<command>    external process speaking the line protocol
/// Relative paths are resolved against the configuration file's directory.
struct OracleBinding {
    std::string query;
    std::string backend;
};

struct OracleConfig {
    std::vector<OracleBinding> bindings;
    std::string base_dir;

    /// Throws ConfigError on unreadable files or malformed lines.
    static OracleConfig load(const std::string& path);
    static OracleConfig parse(std::string_view text, std::string base_dir = ".");

    /// Instantiates every backend. Duplicate bindings are an error.
    std::shared_ptr<BindingOracle> instantiate() const;
};

OraclePtr make_backend(std::string_view spec, const std::string& base_dir);

} // namespace semre
