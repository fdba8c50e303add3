#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semre/ast.hpp"

namespace semre {

using StateId = std::uint32_t;
/// Index into Snfa::queries().
using QueryId = std::uint32_t;

struct StateLabel {
    enum class Kind : unsigned char { Blank, Open, Close };
    Kind kind = Kind::Blank;
    QueryId query = 0;

    static StateLabel blank() { return {}; }
    static StateLabel open(QueryId q) { return {Kind::Open, q}; }
    static StateLabel close(QueryId q) { return {Kind::Close, q}; }

    bool is_blank() const { return kind == Kind::Blank; }
    bool is_open() const { return kind == Kind::Open; }
    bool is_close() const { return kind == Kind::Close; }
    bool operator==(const StateLabel&) const = default;
};

/// Semantic NFA: an ε-NFA whose states carry open(q)/close(q)/blank marks.
/// State ids are dense and assigned in construction order. Character
/// transitions are labelled with character sets.
class Snfa {
public:
    struct CharEdge {
        StateId from;
        StateId to;
        CharSet chars;
    };

    StateId add_state(StateLabel label);
    void add_epsilon(StateId from, StateId to);
    void add_char(StateId from, const CharSet& chars, StateId to);
    QueryId intern(const Query& q);

    void set_start(StateId s) { start_ = s; }
    void set_end(StateId s) { end_ = s; }

    std::size_t state_count() const { return labels_.size(); }
    std::size_t transition_count() const { return eps_count_ + char_edges_.size(); }
    StateId start() const { return start_; }
    StateId end() const { return end_; }
    const StateLabel& label(StateId s) const { return labels_[s]; }

    std::span<const StateId> eps_out(StateId s) const { return eps_out_[s]; }
    std::span<const StateId> eps_in(StateId s) const { return eps_in_[s]; }
    /// Indices into char_edges() leaving / entering `s`.
    std::span<const std::uint32_t> char_out(StateId s) const { return char_out_[s]; }
    std::span<const std::uint32_t> char_in(StateId s) const { return char_in_[s]; }
    const std::vector<CharEdge>& char_edges() const { return char_edges_; }

    const std::vector<Query>& queries() const { return queries_; }
    std::optional<QueryId> find_query(const Query& q) const;

    std::string label_string(StateId s) const;

    /// Graphviz rendering; when `annotate_contexts` is set each state also
    /// shows its query context.
    std::string to_dot(bool annotate_contexts = true) const;

private:
    std::vector<StateLabel> labels_;
    std::vector<std::vector<StateId>> eps_out_, eps_in_;
    std::vector<std::vector<std::uint32_t>> char_out_, char_in_;
    std::vector<CharEdge> char_edges_;
    std::vector<Query> queries_;
    std::size_t eps_count_ = 0;
    StateId start_ = 0, end_ = 0;
};

/// Thompson-style construction. Each AST node contributes exactly two
/// states; a refinement's entry and exit states carry open(q) and close(q).
Snfa build_snfa(const SemRE& r);

/// Returns a machine whose start state is blank and in which every
/// character transition targets a blank state, adding fresh states only
/// where needed.
Snfa normalize(const Snfa& m);

bool is_normalized(const Snfa& m);

/// Unmatched close and open queries along any path from the start state,
/// outermost first.
struct QueryContext {
    std::vector<QueryId> unmatched_closes;
    std::vector<QueryId> unmatched_opens;
    bool operator==(const QueryContext&) const = default;
};

/// Context of every state reachable from the start, propagated along
/// transitions. nullopt for unreachable states; throws std::logic_error if
/// two paths disagree or a close does not match the innermost open.
std::vector<std::optional<QueryContext>> compute_query_contexts(const Snfa& m);

/// Throws std::out_of_range when `s` is not reachable from the start.
QueryContext query_context(const Snfa& m, StateId s);

/// Every start-to-end path spells a well-parenthesized label sequence.
bool check_well_parenthesized(const Snfa& m);

/// ♣(q, ε) for every query of a machine, indexed by QueryId.
class EpsilonAnswers {
public:
    EpsilonAnswers() = default;
    explicit EpsilonAnswers(std::vector<bool> answers) : answers_(std::move(answers)) {}

    bool accepts(QueryId q) const { return answers_.at(q); }
    std::size_t size() const { return answers_.size(); }

    static EpsilonAnswers all(const Snfa& m, bool value) {
        return EpsilonAnswers(std::vector<bool>(m.queries().size(), value));
    }

private:
    std::vector<bool> answers_;
};

/// Pairs (s, s') such that s has an ε-successor from which a feasible,
/// ε-labelled path leads to s'.
class EpsRelation {
public:
    explicit EpsRelation(std::size_t states = 0);

    void insert(StateId from, StateId to);
    bool contains(StateId from, StateId to) const {
        return (rows_[static_cast<std::size_t>(from) * words_ + to / 64] >> (to % 64)) & 1U;
    }
    std::span<const StateId> targets(StateId from) const { return targets_[from]; }
    std::size_t pair_count() const { return pairs_; }
    std::size_t state_count() const { return targets_.size(); }

private:
    std::size_t words_;
    std::vector<std::uint64_t> rows_;
    std::vector<std::vector<StateId>> targets_;
    std::size_t pairs_ = 0;
};

/// Depth-first search from every state, tracking the multiset of queries
/// opened since the root; closes are followed only when they match an
/// outstanding open and the query accepts the empty string.
EpsRelation compute_eps(const Snfa& m, const EpsilonAnswers& answers);

} // namespace semre
