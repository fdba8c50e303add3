#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "semre/oracle.hpp"
#include "semre/snfa.hpp"

namespace semre {

/// Vertex (state, layer, index) of a query graph. Layer 1 closes queries,
/// layer 2 (re)opens them, layer 3 holds the remaining ε-moves; `index`
/// runs from 1 to n+1 and means "before consuming character index".
struct QGVertex {
    StateId state = 0;
    std::uint8_t layer = 1;
    std::uint32_t index = 1;

    bool operator==(const QGVertex&) const = default;
};

/// Intra-gadget predecessor lists. They depend only on the machine and its
/// Eps relation, so they are computed once per compiled pattern and shared
/// by every line.
class Gadget {
public:
    Gadget(const Snfa& m, const EpsRelation& eps);

    /// Layer-1 sources s of edges (s,1) -> (t,1); empty unless t is a close state.
    std::span<const StateId> closing_preds(StateId t) const { return close_preds_[t]; }
    /// Layer-2 sources s of edges (s,2) -> (t,2); empty unless t is an open state.
    std::span<const StateId> opening_preds(StateId t) const { return open_preds_[t]; }
    /// Sources s != t of edges (s,2) -> (t,3), i.e. Eps(s, t).
    std::span<const StateId> settle_preds(StateId t) const { return settle_preds_[t]; }

private:
    std::vector<std::vector<StateId>> close_preds_, open_preds_, settle_preds_;
};

/// Implicit query graph over a normalized machine and one input string.
/// Nothing is materialized; adjacency is computed on demand.
class QueryGraph {
public:
    QueryGraph(const Snfa& m, const EpsRelation& eps, const Gadget& gadget, std::string_view input);

    const Snfa& snfa() const { return m_; }
    const EpsRelation& eps() const { return eps_; }
    std::string_view input() const { return w_; }
    std::size_t length() const { return w_.size(); }

    QGVertex start() const { return {m_.start(), 1, 1}; }
    QGVertex end() const { return {m_.end(), 3, static_cast<std::uint32_t>(w_.size() + 1)}; }

    StateLabel label(const QGVertex& v) const;
    std::uint32_t idx(const QGVertex& v) const { return v.index; }

    /// Number of potential vertices, 3 * |S| * (n + 1).
    std::size_t vertex_count() const { return 3 * m_.state_count() * (w_.size() + 1); }
    std::uint32_t id(const QGVertex& v) const {
        return static_cast<std::uint32_t>(((v.index - 1) * 3 + (v.layer - 1)) * m_.state_count() + v.state);
    }
    QGVertex vertex(std::uint32_t id) const;

    /// Raw predecessor candidates of v are numbered 0..raw_pred_count(v)-1;
    /// a candidate from a character transition only counts when the set
    /// contains the consumed character. Returns false for such a non-edge.
    std::size_t raw_pred_count(const QGVertex& v) const;
    bool raw_pred(const QGVertex& v, std::size_t k, QGVertex& out) const;

    std::vector<QGVertex> predecessors(const QGVertex& v) const;
    std::vector<QGVertex> successors(const QGVertex& v) const;

    /// Graphviz rendering of the vertices that lie on some start-to-end
    /// path (ignoring the oracle).
    std::string to_dot() const;

private:
    const Snfa& m_;
    const EpsRelation& eps_;
    const Gadget& gadget_;
    std::string_view w_;
};

/// Feasibility of an edge-connected vertex sequence: every balanced
/// open(q)@i ... close(q)@j span must satisfy ♣(q, w_i..w_{j-1}). Throws
/// std::invalid_argument when the labels are not well-parenthesized.
bool path_feasible(const QueryGraph& g, const std::vector<QGVertex>& path, Oracle& oracle);

/// All start-to-end paths; throws TooLargeError beyond `limit` paths.
std::vector<std::vector<QGVertex>> enumerate_paths(const QueryGraph& g, std::size_t limit = 100000);

/// Reference evaluator: exhaustive search over (vertex, stack of open
/// vertices) configurations reachable from start, i.e. over all paths
/// modulo their identical futures. Throws TooLargeError past the guard.
bool eval_bruteforce(const QueryGraph& g, Oracle& oracle, std::size_t max_configurations = 2000000);

} // namespace semre
