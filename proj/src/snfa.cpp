#include "semre/snfa.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace semre {

StateId Snfa::add_state(StateLabel label) {
    labels_.push_back(label);
    eps_out_.emplace_back();
    eps_in_.emplace_back();
    char_out_.emplace_back();
    char_in_.emplace_back();
    return static_cast<StateId>(labels_.size() - 1);
}

void Snfa::add_epsilon(StateId from, StateId to) {
    eps_out_.at(from).push_back(to);
    eps_in_.at(to).push_back(from);
    ++eps_count_;
}

void Snfa::add_char(StateId from, const CharSet& chars, StateId to) {
    auto idx = static_cast<std::uint32_t>(char_edges_.size());
    char_edges_.push_back({from, to, chars});
    char_out_.at(from).push_back(idx);
    char_in_.at(to).push_back(idx);
}

QueryId Snfa::intern(const Query& q) {
    if (auto id = find_query(q)) return *id;
    queries_.push_back(q);
    return static_cast<QueryId>(queries_.size() - 1);
}

std::optional<QueryId> Snfa::find_query(const Query& q) const {
    auto it = std::find(queries_.begin(), queries_.end(), q);
    if (it == queries_.end()) return std::nullopt;
    return static_cast<QueryId>(it - queries_.begin());
}

std::string Snfa::label_string(StateId s) const {
    const StateLabel& l = labels_[s];
    switch (l.kind) {
    case StateLabel::Kind::Open: return "open(" + queries_[l.query].name + ")";
    case StateLabel::Kind::Close: return "close(" + queries_[l.query].name + ")";
    default: return "blank";
    }
}

namespace {

std::string describe_set(const CharSet& cs) {
    if (cs.count() == 1) {
        int c = cs.first();
        if (c >= 0x21 && c < 0x7F && c != '"' && c != '\\') return std::string(1, static_cast<char>(c));
        std::ostringstream os;
        os << "0x" << std::hex << c;
        return os.str();
    }
    return "{" + std::to_string(cs.count()) + " chars}";
}

std::pair<StateId, StateId> build(const SemRE& r, Snfa& m) {
    switch (r->kind) {
    case Kind::Empty: {
        StateId s0 = m.add_state(StateLabel::blank());
        StateId sf = m.add_state(StateLabel::blank());
        return {s0, sf};
    }
    case Kind::Epsilon: {
        StateId s0 = m.add_state(StateLabel::blank());
        StateId sf = m.add_state(StateLabel::blank());
        m.add_epsilon(s0, sf);
        return {s0, sf};
    }
    case Kind::Lit: {
        StateId s0 = m.add_state(StateLabel::blank());
        StateId sf = m.add_state(StateLabel::blank());
        m.add_char(s0, r->chars, sf);
        return {s0, sf};
    }
    case Kind::Alt: {
        StateId s0 = m.add_state(StateLabel::blank());
        auto [a0, af] = build(r->left, m);
        auto [b0, bf] = build(r->right, m);
        StateId sf = m.add_state(StateLabel::blank());
        m.add_epsilon(s0, a0);
        m.add_epsilon(s0, b0);
        m.add_epsilon(af, sf);
        m.add_epsilon(bf, sf);
        return {s0, sf};
    }
    case Kind::Cat: {
        StateId s0 = m.add_state(StateLabel::blank());
        auto [a0, af] = build(r->left, m);
        auto [b0, bf] = build(r->right, m);
        StateId sf = m.add_state(StateLabel::blank());
        m.add_epsilon(s0, a0);
        m.add_epsilon(af, b0);
        m.add_epsilon(bf, sf);
        return {s0, sf};
    }
    case Kind::Star: {
        StateId s0 = m.add_state(StateLabel::blank());
        auto [a0, af] = build(r->left, m);
        StateId sf = m.add_state(StateLabel::blank());
        m.add_epsilon(s0, a0);
        m.add_epsilon(af, s0);
        m.add_epsilon(s0, sf);
        return {s0, sf};
    }
    case Kind::Refine: {
        QueryId q = m.intern(r->query);
        StateId s0 = m.add_state(StateLabel::open(q));
        auto [a0, af] = build(r->left, m);
        StateId sf = m.add_state(StateLabel::close(q));
        m.add_epsilon(s0, a0);
        m.add_epsilon(af, sf);
        return {s0, sf};
    }
    }
    throw std::logic_error("unknown SemRE node");
}

} // namespace

Snfa build_snfa(const SemRE& r) {
    Snfa m;
    auto [s0, sf] = build(r, m);
    m.set_start(s0);
    m.set_end(sf);
    return m;
}

bool is_normalized(const Snfa& m) {
    if (!m.label(m.start()).is_blank()) return false;
    for (const auto& e : m.char_edges())
        if (!m.label(e.to).is_blank()) return false;
    return true;
}

Snfa normalize(const Snfa& m) {
    Snfa out;
    for (const Query& q : m.queries()) out.intern(q);
    for (StateId s = 0; s < m.state_count(); ++s) out.add_state(m.label(s));
    for (StateId s = 0; s < m.state_count(); ++s)
        for (StateId t : m.eps_out(s)) out.add_epsilon(s, t);
    for (const auto& e : m.char_edges()) {
        if (m.label(e.to).is_blank()) {
            out.add_char(e.from, e.chars, e.to);
        } else {
            StateId mid = out.add_state(StateLabel::blank());
            out.add_char(e.from, e.chars, mid);
            out.add_epsilon(mid, e.to);
        }
    }
    StateId start = m.start();
    if (!m.label(start).is_blank()) {
        StateId fresh = out.add_state(StateLabel::blank());
        out.add_epsilon(fresh, start);
        start = fresh;
    }
    out.set_start(start);
    out.set_end(m.end());
    return out;
}

// ---------------------------------------------------------------------------
// Query contexts

namespace {

// Extends a context by entering a state with label `l`. Returns false if a
// close does not match the innermost open.
bool extend(QueryContext& ctx, const StateLabel& l) {
    if (l.is_open()) {
        ctx.unmatched_opens.push_back(l.query);
    } else if (l.is_close()) {
        if (ctx.unmatched_opens.empty()) {
            ctx.unmatched_closes.push_back(l.query);
        } else {
            if (ctx.unmatched_opens.back() != l.query) return false;
            ctx.unmatched_opens.pop_back();
        }
    }
    return true;
}

std::vector<StateId> successors(const Snfa& m, StateId s) {
    std::vector<StateId> out(m.eps_out(s).begin(), m.eps_out(s).end());
    for (auto idx : m.char_out(s)) out.push_back(m.char_edges()[idx].to);
    return out;
}

std::vector<bool> coreachable(const Snfa& m) {
    std::vector<bool> seen(m.state_count(), false);
    std::vector<StateId> stack{m.end()};
    seen[m.end()] = true;
    while (!stack.empty()) {
        StateId s = stack.back();
        stack.pop_back();
        auto visit = [&](StateId p) {
            if (!seen[p]) {
                seen[p] = true;
                stack.push_back(p);
            }
        };
        for (StateId p : m.eps_in(s)) visit(p);
        for (auto idx : m.char_in(s)) visit(m.char_edges()[idx].from);
    }
    return seen;
}

// Propagates contexts over states accepted by `keep`. Returns false on a
// conflict or mismatch.
bool propagate(const Snfa& m, const std::vector<bool>& keep,
               std::vector<std::optional<QueryContext>>& ctx) {
    ctx.assign(m.state_count(), std::nullopt);
    if (!keep[m.start()]) return true;
    QueryContext init;
    if (!extend(init, m.label(m.start()))) return false;
    ctx[m.start()] = init;
    std::deque<StateId> queue{m.start()};
    while (!queue.empty()) {
        StateId s = queue.front();
        queue.pop_front();
        for (StateId t : successors(m, s)) {
            if (!keep[t]) continue;
            QueryContext next = *ctx[s];
            if (!extend(next, m.label(t))) return false;
            if (ctx[t]) {
                if (*ctx[t] != next) return false;
            } else {
                ctx[t] = std::move(next);
                queue.push_back(t);
            }
        }
    }
    return true;
}

} // namespace

std::vector<std::optional<QueryContext>> compute_query_contexts(const Snfa& m) {
    std::vector<std::optional<QueryContext>> ctx;
    if (!propagate(m, std::vector<bool>(m.state_count(), true), ctx))
        throw std::logic_error("query contexts are not path-independent");
    return ctx;
}

QueryContext query_context(const Snfa& m, StateId s) {
    auto all = compute_query_contexts(m);
    if (s >= all.size() || !all[s]) throw std::out_of_range("state not reachable from start");
    return *all[s];
}

bool check_well_parenthesized(const Snfa& m) {
    std::vector<std::optional<QueryContext>> ctx;
    if (!propagate(m, coreachable(m), ctx)) return false;
    for (const auto& c : ctx)
        if (c && !c->unmatched_closes.empty()) return false;
    const auto& end_ctx = ctx[m.end()];
    return !end_ctx || (end_ctx->unmatched_opens.empty() && end_ctx->unmatched_closes.empty());
}

// ---------------------------------------------------------------------------
// Eps relation

EpsRelation::EpsRelation(std::size_t states)
    : words_((states + 63) / 64), rows_(states * words_, 0), targets_(states) {}

void EpsRelation::insert(StateId from, StateId to) {
    auto& w = rows_[static_cast<std::size_t>(from) * words_ + to / 64];
    std::uint64_t bit = std::uint64_t{1} << (to % 64);
    if (w & bit) return;
    w |= bit;
    targets_[from].push_back(to);
    ++pairs_;
}

namespace {

struct EpsSearch {
    const Snfa& m;
    const EpsilonAnswers& answers;
    EpsRelation& out;
    StateId root = 0;
    std::vector<bool> visited{};
    std::vector<std::uint32_t> open_count{};  // multiset of queries opened since the root
    std::uint32_t depth = 0;

    void dfs(StateId s) {
        for (StateId t : m.eps_out(s)) {
            if (visited[t]) continue;
            const StateLabel& l = m.label(t);
            if (l.is_open()) {
                visited[t] = true;
                ++open_count[l.query];
                ++depth;
                dfs(t);
                --depth;
                --open_count[l.query];
            } else if (l.is_close()) {
                if (open_count[l.query] == 0 || !answers.accepts(l.query)) continue;
                visited[t] = true;
                --open_count[l.query];
                --depth;
                if (depth == 0) out.insert(root, t);
                dfs(t);
                ++depth;
                ++open_count[l.query];
            } else {
                visited[t] = true;
                if (depth == 0) out.insert(root, t);
                dfs(t);
            }
        }
    }
};

} // namespace

EpsRelation compute_eps(const Snfa& m, const EpsilonAnswers& answers) {
    if (answers.size() < m.queries().size())
        throw std::invalid_argument("epsilon answers do not cover every query");
    EpsRelation rel(m.state_count());
    EpsSearch search{m, answers, rel};
    search.open_count.assign(m.queries().size(), 0);
    for (StateId r = 0; r < m.state_count(); ++r) {
        search.root = r;
        search.visited.assign(m.state_count(), false);
        search.depth = 0;
        search.dfs(r);
    }
    return rel;
}

// ---------------------------------------------------------------------------

std::string Snfa::to_dot(bool annotate_contexts) const {
    std::vector<std::optional<QueryContext>> ctx;
    if (annotate_contexts) {
        try {
            ctx = compute_query_contexts(*this);
        } catch (const std::logic_error&) {
            ctx.clear();
        }
    }
    auto names = [&](const std::vector<QueryId>& ids, const char* kind) {
        std::string s = "[";
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (i) s += ",";
            s += std::string(kind) + "(" + queries_[ids[i]].name + ")";
        }
        return s + "]";
    };
    std::ostringstream os;
    os << "digraph snfa {\n  rankdir=LR;\n";
    for (StateId s = 0; s < state_count(); ++s) {
        os << "  s" << s << " [label=\"s" << s << "\\n" << label_string(s);
        if (s < ctx.size() && ctx[s]) {
            os << "\\n" << names(ctx[s]->unmatched_closes, "close") << " "
               << names(ctx[s]->unmatched_opens, "open");
        }
        os << "\"";
        if (s == end_) os << ", shape=doublecircle";
        os << "];\n";
    }
    os << "  start [shape=point];\n  start -> s" << start_ << ";\n";
    for (StateId s = 0; s < state_count(); ++s)
        for (StateId t : eps_out_[s]) os << "  s" << s << " -> s" << t << " [label=\"eps\"];\n";
    for (const auto& e : char_edges_)
        os << "  s" << e.from << " -> s" << e.to << " [label=\"" << describe_set(e.chars) << "\"];\n";
    os << "}\n";
    return os.str();
}

} // namespace semre
