#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "semre/ast.hpp"
#include "semre/oracle.hpp"
#include "semre/query_graph.hpp"
#include "semre/snfa.hpp"

namespace semre {

struct MatchMetrics {
    std::uint64_t oracle_calls = 0;
    /// Distinct (query, start, end) windows among oracle_calls.
    std::uint64_t distinct_queries = 0;
    std::uint64_t submitted_chars = 0;
    double wall_seconds = 0;
    /// Time spent inside oracle calls.
    double oracle_seconds = 0;
    bool matched = false;
};

using Clock = std::chrono::steady_clock;

/// Optional point in time after which a match throws TimeoutError.
struct Deadline {
    std::optional<Clock::time_point> at;

    static Deadline none() { return {}; }
    static Deadline after(std::chrono::duration<double> d) {
        return {Clock::now() + std::chrono::duration_cast<Clock::duration>(d)};
    }
    bool expired() const { return at && Clock::now() >= *at; }
};

enum class Engine { Snfa, Dp, Naive };

/// Longest input accepted by the naive evaluator.
inline constexpr std::size_t kNaiveMaxLength = 16;

/// Demand-driven evaluator of the Alive/LOQ/AQ/Backref recurrences over one
/// query graph. Each quantity is memoized per vertex. Sets are returned as
/// vertex lists sorted by QueryGraph::id.
class QueryGraphEvaluator {
public:
    QueryGraphEvaluator(const QueryGraph& g, Oracle& oracle, MatchMetrics* metrics = nullptr,
                        Deadline deadline = {});
    ~QueryGraphEvaluator();
    QueryGraphEvaluator(const QueryGraphEvaluator&) = delete;
    QueryGraphEvaluator& operator=(const QueryGraphEvaluator&) = delete;

    bool alive(const QGVertex& v);
    std::vector<QGVertex> loq(const QGVertex& v);
    /// Empty for vertices that are not close-labelled.
    std::vector<QGVertex> aq(const QGVertex& v);
    std::vector<QGVertex> backref(const QGVertex& v);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// A pattern compiled for the query-graph engine: normalized SNFA, the
/// empty-string answers of every query, Eps and the gadget. The
/// empty-string answers are requested from `oracle` once, at construction.
class Matcher {
public:
    Matcher(SemRE r, OraclePtr oracle);

    bool match(std::string_view w, MatchMetrics* metrics = nullptr, Deadline deadline = {}) const;
    QueryGraph graph(std::string_view w) const { return QueryGraph(m_, eps_, *gadget_, w); }

    const SemRE& pattern() const { return r_; }
    const Snfa& snfa() const { return m_; }
    const EpsilonAnswers& epsilon_answers() const { return answers_; }
    const EpsRelation& eps() const { return eps_; }
    const Gadget& gadget() const { return *gadget_; }
    Oracle& oracle() const { return *oracle_; }

private:
    SemRE r_;
    OraclePtr oracle_;
    Snfa m_;
    EpsilonAnswers answers_;
    EpsRelation eps_;
    std::unique_ptr<Gadget> gadget_;
};

/// Top-down memoized dynamic program over (subexpression, start, end).
class DpMatcher {
public:
    DpMatcher(SemRE r, OraclePtr oracle);

    bool match(std::string_view w, MatchMetrics* metrics = nullptr, Deadline deadline = {}) const;
    const SemRE& pattern() const { return r_; }

private:
    struct Node {
        Kind kind;
        CharSet chars;
        Query query;
        std::uint32_t left = 0, right = 0;
    };
    SemRE r_;
    OraclePtr oracle_;
    std::vector<Node> nodes_;  // children precede parents; the root is last
};

/// One-shot conveniences. match_naive throws TooLargeError for inputs
/// longer than kNaiveMaxLength.
bool match_semre(const SemRE& r, std::string_view w, OraclePtr oracle, MatchMetrics* metrics = nullptr);
bool match_dp(const SemRE& r, std::string_view w, OraclePtr oracle, MatchMetrics* metrics = nullptr);
bool match_naive(const SemRE& r, std::string_view w, Oracle& oracle);

/// Reference search over SNFA runs: configurations (state, position, stack
/// of open (query, start) pairs). Works on normalized and raw machines.
/// Throws TooLargeError past the configuration budget.
bool snfa_accepts_bruteforce(const Snfa& m, std::string_view w, Oracle& oracle,
                             std::size_t max_configurations = 2000000);

} // namespace semre
