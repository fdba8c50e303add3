#include "semre/query_graph.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace semre {

namespace {

std::vector<std::vector<StateId>> reverse_eps(const EpsRelation& eps) {
    std::vector<std::vector<StateId>> rev(eps.state_count());
    for (StateId s = 0; s < eps.state_count(); ++s)
        for (StateId t : eps.targets(s)) rev[t].push_back(s);
    return rev;
}

} // namespace

Gadget::Gadget(const Snfa& m, const EpsRelation& eps)
    : close_preds_(m.state_count()), open_preds_(m.state_count()), settle_preds_(m.state_count()) {
    auto rev = reverse_eps(eps);
    std::vector<char> seen(m.state_count(), 0);
    for (StateId t = 0; t < m.state_count(); ++t) {
        const StateLabel& l = m.label(t);
        if (!l.is_blank()) {
            // Direct ε-predecessors first, then those reaching one through Eps.
            std::vector<StateId> preds;
            for (StateId mid : m.eps_in(t))
                if (!seen[mid]) { seen[mid] = 1; preds.push_back(mid); }
            for (StateId mid : m.eps_in(t))
                for (StateId s : rev[mid])
                    if (!seen[s]) { seen[s] = 1; preds.push_back(s); }
            for (StateId s : preds) seen[s] = 0;
            (l.is_close() ? close_preds_ : open_preds_)[t] = std::move(preds);
        }
        for (StateId s : rev[t])
            if (s != t) settle_preds_[t].push_back(s);
        // Close states last: the evaluator tries predecessors in this order,
        // and only closes cost oracle calls.
        std::sort(settle_preds_[t].begin(), settle_preds_[t].end(), [&](StateId a, StateId b) {
            bool ca = m.label(a).is_close(), cb = m.label(b).is_close();
            return ca != cb ? cb : a < b;
        });
    }
}

QueryGraph::QueryGraph(const Snfa& m, const EpsRelation& eps, const Gadget& gadget, std::string_view input)
    : m_(m), eps_(eps), gadget_(gadget), w_(input) {
    if (!is_normalized(m)) throw std::invalid_argument("query graph needs a normalized machine");
}

StateLabel QueryGraph::label(const QGVertex& v) const {
    const StateLabel& l = m_.label(v.state);
    if ((v.layer == 1 && l.is_close()) || (v.layer == 2 && l.is_open())) return l;
    return StateLabel::blank();
}

QGVertex QueryGraph::vertex(std::uint32_t id) const {
    std::size_t n = m_.state_count();
    QGVertex v;
    v.state = static_cast<StateId>(id % n);
    std::size_t rest = id / n;
    v.layer = static_cast<std::uint8_t>(rest % 3 + 1);
    v.index = static_cast<std::uint32_t>(rest / 3 + 1);
    return v;
}

std::size_t QueryGraph::raw_pred_count(const QGVertex& v) const {
    switch (v.layer) {
    case 1: return gadget_.closing_preds(v.state).size() + (v.index >= 2 ? m_.char_in(v.state).size() : 0);
    case 2: return 1 + gadget_.opening_preds(v.state).size();
    default: return 1 + gadget_.settle_preds(v.state).size();
    }
}

bool QueryGraph::raw_pred(const QGVertex& v, std::size_t k, QGVertex& out) const {
    switch (v.layer) {
    case 1: {
        auto closing = gadget_.closing_preds(v.state);
        if (k < closing.size()) {
            out = {closing[k], 1, v.index};
            return true;
        }
        const auto& e = m_.char_edges()[m_.char_in(v.state)[k - closing.size()]];
        if (!e.chars.contains(static_cast<unsigned char>(w_[v.index - 2]))) return false;
        out = {e.from, 3, v.index - 1};
        return true;
    }
    case 2:
        out = k == 0 ? QGVertex{v.state, 1, v.index} : QGVertex{gadget_.opening_preds(v.state)[k - 1], 2, v.index};
        return true;
    default:
        out = k == 0 ? QGVertex{v.state, 2, v.index} : QGVertex{gadget_.settle_preds(v.state)[k - 1], 2, v.index};
        return true;
    }
}

std::vector<QGVertex> QueryGraph::predecessors(const QGVertex& v) const {
    std::vector<QGVertex> out;
    QGVertex p;
    for (std::size_t k = 0, n = raw_pred_count(v); k < n; ++k)
        if (raw_pred(v, k, p)) out.push_back(p);
    return out;
}

std::vector<QGVertex> QueryGraph::successors(const QGVertex& v) const {
    std::vector<QGVertex> out;
    auto consider = [&](const QGVertex& cand) {
        for (const auto& p : predecessors(cand))
            if (p == v) {
                out.push_back(cand);
                return;
            }
    };
    for (StateId t = 0; t < m_.state_count(); ++t)
        for (std::uint8_t layer = 1; layer <= 3; ++layer) consider({t, layer, v.index});
    if (v.layer == 3 && v.index <= w_.size())
        for (std::uint32_t ci : m_.char_out(v.state)) {
            QGVertex cand{m_.char_edges()[ci].to, 1, v.index + 1};
            if (std::find(out.begin(), out.end(), cand) == out.end()) consider(cand);
        }
    return out;
}

namespace {

std::vector<char> coreachable(const QueryGraph& g) {
    std::vector<char> mark(g.vertex_count(), 0);
    std::vector<QGVertex> stack{g.end()};
    mark[g.id(g.end())] = 1;
    while (!stack.empty()) {
        QGVertex v = stack.back();
        stack.pop_back();
        for (const auto& p : g.predecessors(v))
            if (!mark[g.id(p)]) {
                mark[g.id(p)] = 1;
                stack.push_back(p);
            }
    }
    return mark;
}

std::string vertex_name(const QGVertex& v) {
    return "v" + std::to_string(v.state) + "_" + std::to_string(v.layer) + "_" + std::to_string(v.index);
}

} // namespace

std::string QueryGraph::to_dot() const {
    auto back = coreachable(*this);
    std::vector<char> on_path(vertex_count(), 0);
    std::vector<QGVertex> stack;
    if (back[id(start())]) {
        on_path[id(start())] = 1;
        stack.push_back(start());
    }
    std::ostringstream edges;
    while (!stack.empty()) {
        QGVertex v = stack.back();
        stack.pop_back();
        for (const auto& s : successors(v)) {
            if (!back[id(s)]) continue;
            edges << "  " << vertex_name(v) << " -> " << vertex_name(s) << ";\n";
            if (!on_path[id(s)]) {
                on_path[id(s)] = 1;
                stack.push_back(s);
            }
        }
    }
    std::ostringstream os;
    os << "digraph query_graph {\n  rankdir=LR;\n";
    for (std::uint32_t i = 0; i < vertex_count(); ++i) {
        if (!on_path[i]) continue;
        QGVertex v = vertex(i);
        StateLabel l = label(v);
        os << "  " << vertex_name(v) << " [label=\"(s" << v.state << "," << int(v.layer) << "," << v.index << ")";
        if (l.is_open()) os << "\\nopen(" << m_.queries()[l.query].name << ")";
        if (l.is_close()) os << "\\nclose(" << m_.queries()[l.query].name << ")";
        os << "\"";
        if (v == start() || v == end()) os << ", shape=doublecircle";
        os << "];\n";
    }
    os << edges.str() << "}\n";
    return os.str();
}

bool path_feasible(const QueryGraph& g, const std::vector<QGVertex>& path, Oracle& oracle) {
    std::vector<QGVertex> opens;
    bool ok = true;
    for (const auto& v : path) {
        StateLabel l = g.label(v);
        if (l.is_open()) {
            opens.push_back(v);
        } else if (l.is_close()) {
            if (opens.empty() || g.label(opens.back()).query != l.query)
                throw std::invalid_argument("path is not well-parenthesized");
            std::uint32_t i = opens.back().index, j = v.index;
            opens.pop_back();
            if (ok && !oracle.evaluate(g.snfa().queries()[l.query], g.input().substr(i - 1, j - i))) ok = false;
        }
    }
    if (!opens.empty()) throw std::invalid_argument("path is not well-parenthesized");
    return ok;
}

std::vector<std::vector<QGVertex>> enumerate_paths(const QueryGraph& g, std::size_t limit) {
    auto back = coreachable(g);
    std::vector<std::vector<QGVertex>> paths;
    if (!back[g.id(g.start())]) return paths;
    std::vector<QGVertex> current{g.start()};
    // Explicit DFS: each frame keeps the successor list and the next position.
    std::vector<std::pair<std::vector<QGVertex>, std::size_t>> frames;
    frames.emplace_back(g.successors(g.start()), 0);
    if (g.start() == g.end()) paths.push_back(current);
    while (!frames.empty()) {
        auto& [succ, pos] = frames.back();
        if (pos == succ.size()) {
            frames.pop_back();
            current.pop_back();
            continue;
        }
        QGVertex next = succ[pos++];
        if (!back[g.id(next)]) continue;
        current.push_back(next);
        if (next == g.end()) {
            if (paths.size() >= limit) throw TooLargeError("more than " + std::to_string(limit) + " paths");
            paths.push_back(current);
        }
        frames.emplace_back(g.successors(next), 0);
    }
    return paths;
}

bool eval_bruteforce(const QueryGraph& g, Oracle& oracle, std::size_t max_configurations) {
    auto back = coreachable(g);
    if (!back[g.id(g.start())]) return false;

    using Config = std::vector<std::uint32_t>;  // vertex id followed by the stack of open vertex ids
    struct Hash {
        std::size_t operator()(const Config& c) const {
            std::size_t h = c.size();
            for (auto x : c) h = h * 1000003u ^ x;
            return h;
        }
    };
    std::unordered_set<Config, Hash> seen;
    std::map<std::tuple<QueryId, std::uint32_t, std::uint32_t>, bool> answers;
    auto ask = [&](QueryId q, std::uint32_t i, std::uint32_t j) {
        auto key = std::make_tuple(q, i, j);
        auto it = answers.find(key);
        if (it != answers.end()) return it->second;
        bool a = oracle.evaluate(g.snfa().queries()[q], g.input().substr(i - 1, j - i));
        answers.emplace(key, a);
        return a;
    };

    std::vector<Config> work;
    auto visit = [&](const QGVertex& v, Config stack_of) -> bool {
        StateLabel l = g.label(v);
        if (l.is_open()) {
            stack_of.push_back(g.id(v));
        } else if (l.is_close()) {
            if (stack_of.empty()) return false;
            QGVertex o = g.vertex(stack_of.back());
            if (g.label(o).query != l.query) throw std::logic_error("query graph is not well-parenthesized");
            if (!ask(l.query, o.index, v.index)) return false;
            stack_of.pop_back();
        }
        if (v == g.end() && stack_of.empty()) return true;
        Config c;
        c.reserve(stack_of.size() + 1);
        c.push_back(g.id(v));
        c.insert(c.end(), stack_of.begin(), stack_of.end());
        if (seen.insert(c).second) {
            if (seen.size() > max_configurations) throw TooLargeError("brute-force search exceeded its budget");
            work.push_back(std::move(c));
        }
        return false;
    };

    if (visit(g.start(), {})) return true;
    while (!work.empty()) {
        Config c = std::move(work.back());
        work.pop_back();
        QGVertex v = g.vertex(c[0]);
        Config stack_of(c.begin() + 1, c.end());
        for (const auto& s : g.successors(v)) {
            if (!back[g.id(s)]) continue;
            if (visit(s, stack_of)) return true;
        }
    }
    return false;
}

} // namespace semre
