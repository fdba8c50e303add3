#include "semre/oracle.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

namespace semre {

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read '" + path + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    return lines;
}

class Builtin final : public Oracle {
public:
    enum class Kind { Palindrome, AlwaysTrue, AlwaysFalse, Nonempty };
    explicit Builtin(Kind k) : kind_(k) {}

    bool evaluate(const Query&, std::string_view s) override {
        switch (kind_) {
        case Kind::Palindrome: return std::equal(s.begin(), s.begin() + s.size() / 2, s.rbegin());
        case Kind::AlwaysTrue: return true;
        case Kind::AlwaysFalse: return false;
        case Kind::Nonempty: return !s.empty();
        }
        return false;
    }

private:
    Kind kind_;
};

} // namespace

OraclePtr make_builtin_oracle(std::string_view name) {
    if (name == "palindrome") return std::make_shared<Builtin>(Builtin::Kind::Palindrome);
    if (name == "always_true") return std::make_shared<Builtin>(Builtin::Kind::AlwaysTrue);
    if (name == "always_false") return std::make_shared<Builtin>(Builtin::Kind::AlwaysFalse);
    if (name == "nonempty") return std::make_shared<Builtin>(Builtin::Kind::Nonempty);
    throw ConfigError("unknown builtin oracle '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------

WordSetOracle::WordSetOracle(std::vector<std::string> words) {
    for (auto& w : words) {
        lengths_.insert(w.size());
        words_.insert(std::move(w));
    }
}

std::shared_ptr<WordSetOracle> WordSetOracle::from_file(const std::string& path) {
    auto lines = read_lines(path);
    // A trailing empty line is an artifact of the final newline, not an entry.
    std::erase_if(lines, [](const std::string& l) { return l.empty(); });
    return std::make_shared<WordSetOracle>(std::move(lines));
}

bool WordSetOracle::evaluate(const Query&, std::string_view s) {
    if (!lengths_.count(s.size())) return false;
    return words_.find(s) != words_.end();
}

// ---------------------------------------------------------------------------

void TableOracle::set(const Query& q, std::string s, bool answer) {
    lengths_.insert(s.size());
    entries_[q.name + '\t' + s] = answer;
}

void TableOracle::set_any(std::string s, bool answer) {
    lengths_.insert(s.size());
    any_[std::move(s)] = answer;
}

std::shared_ptr<TableOracle> TableOracle::from_file(const std::string& path, bool default_answer) {
    auto table = std::make_shared<TableOracle>(default_answer);
    std::size_t lineno = 0;
    for (const auto& line : read_lines(path)) {
        ++lineno;
        if (line.empty()) continue;
        auto tab = line.rfind('\t');
        if (tab == std::string::npos) {
            table->set_any(line, true);
            continue;
        }
        std::string value = trim(std::string_view(line).substr(tab + 1));
        bool answer;
        if (value == "1" || value == "true") {
            answer = true;
        } else if (value == "0" || value == "false") {
            answer = false;
        } else {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": bad table value '" + value + "'");
        }
        table->set_any(line.substr(0, tab), answer);
    }
    return table;
}

bool TableOracle::evaluate(const Query& q, std::string_view s) {
    if (!lengths_.count(s.size())) return default_;
    if (!entries_.empty()) {
        std::string key = q.name;
        key += '\t';
        key += s;
        auto it = entries_.find(key);
        if (it != entries_.end()) return it->second;
    }
    auto it = any_.find(s);
    if (it != any_.end()) return it->second;
    return default_;
}

// ---------------------------------------------------------------------------

std::string escape_payload(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '\\': out += "\\\\"; break;
        case '\t': out += "\\t"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
        }
    }
    return out;
}

std::string unescape_payload(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\') {
            out += s[i];
            continue;
        }
        if (++i == s.size()) throw std::invalid_argument("dangling backslash in payload");
        switch (s[i]) {
        case '\\': out += '\\'; break;
        case 't': out += '\t'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        default: throw std::invalid_argument("bad escape in payload");
        }
    }
    return out;
}

namespace {

void ignore_sigpipe() {
    static std::once_flag once;
    std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

} // namespace

namespace {

std::string shell_quote(std::string_view s) {
    std::string out = "'";
    for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return out + "'";
}

} // namespace

ProcessOracle::ProcessOracle(const std::string& command, const std::vector<std::pair<std::string, std::string>>& env)
    : command_(command) {
    ignore_sigpipe();
    std::string script;
    for (const auto& [name, value] : env) script += name + "=" + shell_quote(value) + "; export " + name + "; ";
    script += command;
    int in_pipe[2], out_pipe[2];
    if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw OracleError("pipe failed: " + std::string(std::strerror(errno)));
    if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
        ::close(in_pipe[0]);
        ::close(in_pipe[1]);
        throw OracleError("pipe failed: " + std::string(std::strerror(errno)));
    }
    pid_t pid = ::fork();
    if (pid < 0) {
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
        throw OracleError("fork failed: " + std::string(std::strerror(errno)));
    }
    if (pid == 0) {
        ::dup2(in_pipe[0], STDIN_FILENO);
        ::dup2(out_pipe[1], STDOUT_FILENO);
        ::execl("/bin/sh", "sh", "-c", script.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    pid_ = pid;
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
}

ProcessOracle::~ProcessOracle() { shutdown(); }

void ProcessOracle::shutdown() {
    if (to_child_ >= 0) ::close(to_child_);
    if (from_child_ >= 0) ::close(from_child_);
    to_child_ = from_child_ = -1;
    if (pid_ > 0) {
        int status = 0;
        for (int i = 0; i < 200; ++i) {
            if (::waitpid(pid_, &status, WNOHANG) == pid_) {
                pid_ = -1;
                return;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(1));
        }
        ::kill(pid_, SIGKILL);
        ::waitpid(pid_, &status, 0);
        pid_ = -1;
    }
}

bool ProcessOracle::evaluate(const Query& q, std::string_view s) {
    std::lock_guard lock(mu_);
    if (dead_) throw OracleError("oracle process '" + command_ + "' is not running");
    std::string request = q.name + '\t' + escape_payload(s) + '\n';
    std::size_t written = 0;
    while (written < request.size()) {
        ssize_t n = ::write(to_child_, request.data() + written, request.size() - written);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) {
            dead_ = true;
            throw OracleError("oracle process '" + command_ + "' closed its input");
        }
        written += static_cast<std::size_t>(n);
    }
    for (;;) {
        auto nl = read_buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string reply = read_buffer_.substr(0, nl);
            read_buffer_.erase(0, nl + 1);
            if (!reply.empty() && reply.back() == '\r') reply.pop_back();
            if (reply == "1") return true;
            if (reply == "0") return false;
            dead_ = true;
            throw OracleError("oracle process '" + command_ + "' sent malformed reply '" + reply + "'");
        }
        char buf[4096];
        ssize_t n = ::read(from_child_, buf, sizeof buf);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) {
            dead_ = true;
            throw OracleError("oracle process '" + command_ + "' exited");
        }
        read_buffer_.append(buf, static_cast<std::size_t>(n));
    }
}

// ---------------------------------------------------------------------------

bool CachingOracle::evaluate(const Query& q, std::string_view s) {
    std::string key;
    key.reserve(q.name.size() + 1 + s.size());
    key += q.name;
    key += '\t';
    key += s;

    std::promise<bool> promise;
    std::shared_future<bool> future;
    bool owner = false;
    {
        std::lock_guard lock(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            future = it->second;
        } else {
            future = promise.get_future().share();
            cache_.emplace(key, future);
            owner = true;
        }
    }
    if (!owner) {
        ++hits_;
        return future.get();
    }
    ++misses_;
    chars_ += s.size();
    try {
        bool answer = inner_->evaluate(q, s);
        promise.set_value(answer);
        return answer;
    } catch (...) {
        {
            std::lock_guard lock(mu_);
            cache_.erase(key);
        }
        promise.set_exception(std::current_exception());
        throw;
    }
}

CacheStats CachingOracle::stats() const {
    CacheStats st;
    st.hits = hits_.load();
    st.misses = misses_.load();
    st.calls_forwarded = st.misses;
    st.chars_forwarded = chars_.load();
    return st;
}

std::size_t CachingOracle::entries() const {
    std::lock_guard lock(mu_);
    return cache_.size();
}

// ---------------------------------------------------------------------------

void BindingOracle::bind(const std::string& query, OraclePtr backend) {
    if (!bindings_.emplace(query, std::move(backend)).second)
        throw ConfigError("query '" + query + "' is bound more than once");
}

void BindingOracle::require_bound(const std::vector<Query>& queries) const {
    for (const auto& q : queries)
        if (!is_bound(q)) throw ConfigError("query '" + q.name + "' has no oracle binding");
}

std::vector<std::string> BindingOracle::names() const {
    std::vector<std::string> out;
    for (const auto& [k, _] : bindings_) out.push_back(k);
    return out;
}

bool BindingOracle::evaluate(const Query& q, std::string_view s) {
    auto it = bindings_.find(q.name);
    if (it == bindings_.end()) throw ConfigError("query '" + q.name + "' has no oracle binding");
    return it->second->evaluate(q, s);
}

// ---------------------------------------------------------------------------

OracleConfig OracleConfig::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read oracle config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    auto dir = std::filesystem::path(path).parent_path();
    return parse(ss.str(), dir.empty() ? "." : dir.string());
}

OracleConfig OracleConfig::parse(std::string_view text, std::string base_dir) {
    OracleConfig cfg;
    cfg.base_dir = std::move(base_dir);
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("oracle config line " + std::to_string(lineno) + ": expected 'name = backend'");
        std::string name = trim(std::string_view(line).substr(0, eq));
        std::string backend = trim(std::string_view(line).substr(eq + 1));
        if (name.empty() || backend.empty())
            throw ConfigError("oracle config line " + std::to_string(lineno) + ": empty name or backend");
        cfg.bindings.push_back({name, backend});
    }
    return cfg;
}

namespace {

std::string resolve(std::string_view p, const std::string& base_dir) {
    std::filesystem::path path(p);
    if (path.is_absolute()) return path.string();
    return (std::filesystem::path(base_dir) / path).string();
}

} // namespace

OraclePtr make_backend(std::string_view spec, const std::string& base_dir) {
    auto colon = spec.find(':');
    std::string_view kind = spec.substr(0, colon);
    std::string arg = colon == std::string_view::npos ? std::string() : trim(spec.substr(colon + 1));
    if (colon == std::string_view::npos) {
        if (kind == "always_true" || kind == "always_false") return make_builtin_oracle(kind);
        throw ConfigError("unknown oracle backend '" + std::string(spec) + "'");
    }
    if (kind == "builtin") return make_builtin_oracle(arg);
    if (kind == "words") return WordSetOracle::from_file(resolve(arg, base_dir));
    if (kind == "table") return TableOracle::from_file(resolve(arg, base_dir));
    if (kind == "exec") {
        if (arg.empty()) throw ConfigError("exec backend needs a command");
        // Commands may refer to files next to the config via $SEMRE_CONFIG_DIR.
        return std::make_shared<ProcessOracle>(arg, std::vector<std::pair<std::string, std::string>>{
                                                        {"SEMRE_CONFIG_DIR", base_dir}});
    }
    throw ConfigError("unknown oracle backend '" + std::string(spec) + "'");
}

std::shared_ptr<BindingOracle> OracleConfig::instantiate() const {
    auto out = std::make_shared<BindingOracle>();
    for (const auto& b : bindings) out->bind(b.query, make_backend(b.backend, base_dir));
    return out;
}

} // namespace semre
