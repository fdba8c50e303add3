#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "call_recorder.hpp"
#include "semre/matcher.hpp"

namespace semre {

namespace {

using IdSet = std::shared_ptr<const std::vector<std::uint32_t>>;

enum class Task : std::uint8_t { Alive, Loq, Aq, Backref };

struct Frame {
    Task task;
    std::uint32_t v;
    std::uint32_t k;  // resume position
};

struct AqState {
    std::uint32_t cursor = 0;  // next LOQ member to submit
    bool done = false;
    std::vector<std::uint32_t> accepted;
};

} // namespace

struct QueryGraphEvaluator::Impl {
    enum : std::uint8_t { kUnknown, kFalse, kTrue };

    const QueryGraph& g;
    detail::CallRecorder recorder;
    detail::DeadlineCheck deadline;
    std::uint32_t start_id;
    std::vector<std::uint8_t> alive;
    std::vector<IdSet> loq, backref;
    std::unordered_map<std::uint32_t, AqState> aq;
    std::vector<Frame> stack;
    IdSet empty = std::make_shared<const std::vector<std::uint32_t>>();

    Impl(const QueryGraph& graph, Oracle& oracle, MatchMetrics* metrics, Deadline d)
        : g(graph), recorder(oracle, metrics), deadline(d), start_id(graph.id(graph.start())),
          alive(graph.vertex_count(), kUnknown), loq(graph.vertex_count()), backref(graph.vertex_count()) {}

    bool done(Task t, std::uint32_t v) const {
        switch (t) {
        case Task::Alive: return alive[v] != kUnknown;
        case Task::Loq: return loq[v] != nullptr;
        case Task::Backref: return backref[v] != nullptr;
        case Task::Aq: {
            auto it = aq.find(v);
            return it != aq.end() && it->second.done;
        }
        }
        return false;
    }

    void run(Task t, std::uint32_t v) {
        if (done(t, v)) return;
        stack.push_back({t, v, 0});
        while (!stack.empty()) {
            deadline.tick();
            std::size_t top = stack.size() - 1;
            bool finished = false;
            switch (stack[top].task) {
            case Task::Alive: finished = step_alive(top); break;
            case Task::Loq: finished = step_loq(top); break;
            case Task::Aq: finished = step_aq(top); break;
            case Task::Backref: finished = step_backref(top); break;
            }
            if (finished) {
                // The finished frame is still at `top`; anything pushed
                // meanwhile would have made step_* return false.
                stack.pop_back();
            }
        }
    }

    // Returns true when the dependency is already available; otherwise pushes
    // it and returns false.
    bool need(Task t, std::uint32_t v) {
        if (done(t, v)) return true;
        stack.push_back({t, v, 0});
        return false;
    }

    bool ask(std::uint32_t open_id, std::uint32_t close_id) {
        QGVertex o = g.vertex(open_id), c = g.vertex(close_id);
        QueryId q = g.snfa().label(c.state).query;
        if (g.snfa().label(o.state).query != q) return false;
        if (o.index >= c.index) throw std::logic_error("query graph produced an empty or reversed window");
        return recorder.ask(g.snfa().queries()[q], q, o.index, c.index, g.input().substr(o.index - 1, c.index - o.index));
    }

    // Advances the AQ scan of close vertex v. With `stop_at_first`, returns
    // as soon as one window has been accepted.
    void scan(std::uint32_t v, bool stop_at_first) {
        AqState& st = aq[v];
        const auto& candidates = *loq[v];
        while (st.cursor < candidates.size()) {
            std::uint32_t o = candidates[st.cursor++];
            if (ask(o, v)) {
                st.accepted.push_back(o);
                if (stop_at_first) return;
            }
        }
        st.done = true;
    }

    bool step_alive(std::size_t top) {
        Frame f = stack[top];
        if (alive[f.v] != kUnknown) return true;
        if (f.v == start_id) {
            alive[f.v] = kTrue;
            return true;
        }
        QGVertex x = g.vertex(f.v);
        if (g.label(x).is_close()) {
            if (!need(Task::Loq, f.v)) return false;
            AqState& st = aq[f.v];
            if (st.accepted.empty() && !st.done) scan(f.v, true);
            alive[f.v] = st.accepted.empty() ? kFalse : kTrue;
            return true;
        }
        QGVertex p;
        for (std::size_t k = f.k, n = g.raw_pred_count(x); k < n; ++k) {
            if (!g.raw_pred(x, k, p)) continue;
            std::uint32_t pid = g.id(p);
            if (alive[pid] == kUnknown) {
                stack[top].k = static_cast<std::uint32_t>(k);
                stack.push_back({Task::Alive, pid, 0});
                return false;
            }
            if (alive[pid] == kTrue) {
                alive[f.v] = kTrue;
                return true;
            }
        }
        alive[f.v] = kFalse;
        return true;
    }

    IdSet unite(std::vector<std::uint32_t>& singles, std::vector<const IdSet*>& sets) {
        if (singles.empty() && sets.empty()) return empty;
        if (singles.empty() && sets.size() == 1) return *sets[0];
        std::vector<std::uint32_t> out = std::move(singles);
        for (const IdSet* s : sets) out.insert(out.end(), (*s)->begin(), (*s)->end());
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return std::make_shared<const std::vector<std::uint32_t>>(std::move(out));
    }

    bool step_loq(std::size_t top) {
        Frame f = stack[top];
        if (loq[f.v]) return true;
        QGVertex x = g.vertex(f.v), p;
        std::size_t n = g.raw_pred_count(x);
        for (std::size_t k = f.k; k < n; ++k) {
            if (!g.raw_pred(x, k, p)) continue;
            std::uint32_t pid = g.id(p);
            Task t = g.label(p).is_open() ? Task::Alive : Task::Backref;
            if (!done(t, pid)) {
                stack[top].k = static_cast<std::uint32_t>(k);
                stack.push_back({t, pid, 0});
                return false;
            }
        }
        std::vector<std::uint32_t> singles;
        std::vector<const IdSet*> sets;
        for (std::size_t k = 0; k < n; ++k) {
            if (!g.raw_pred(x, k, p)) continue;
            std::uint32_t pid = g.id(p);
            if (g.label(p).is_open()) {
                if (alive[pid] == kTrue) singles.push_back(pid);
            } else if (!backref[pid]->empty()) {
                sets.push_back(&backref[pid]);
            }
        }
        loq[f.v] = unite(singles, sets);
        return true;
    }

    bool step_aq(std::size_t top) {
        Frame f = stack[top];
        if (!need(Task::Loq, f.v)) return false;
        scan(f.v, false);
        alive[f.v] = aq[f.v].accepted.empty() ? kFalse : kTrue;
        return true;
    }

    bool step_backref(std::size_t top) {
        Frame f = stack[top];
        if (backref[f.v]) return true;
        if (!g.label(g.vertex(f.v)).is_close()) {
            if (!need(Task::Loq, f.v)) return false;
            backref[f.v] = loq[f.v];
            return true;
        }
        if (!need(Task::Aq, f.v)) return false;
        const auto& accepted = aq[f.v].accepted;
        for (std::size_t k = f.k; k < accepted.size(); ++k) {
            if (!backref[accepted[k]]) {
                stack[top].k = static_cast<std::uint32_t>(k);
                stack.push_back({Task::Backref, accepted[k], 0});
                return false;
            }
        }
        std::vector<std::uint32_t> singles;
        std::vector<const IdSet*> sets;
        for (std::uint32_t o : accepted)
            if (!backref[o]->empty()) sets.push_back(&backref[o]);
        backref[f.v] = unite(singles, sets);
        return true;
    }

    std::vector<QGVertex> vertices(const std::vector<std::uint32_t>& ids) const {
        std::vector<QGVertex> out;
        out.reserve(ids.size());
        for (auto id : ids) out.push_back(g.vertex(id));
        return out;
    }
};

QueryGraphEvaluator::QueryGraphEvaluator(const QueryGraph& g, Oracle& oracle, MatchMetrics* metrics, Deadline deadline)
    : impl_(std::make_unique<Impl>(g, oracle, metrics, deadline)) {}

QueryGraphEvaluator::~QueryGraphEvaluator() = default;

bool QueryGraphEvaluator::alive(const QGVertex& v) {
    auto id = impl_->g.id(v);
    impl_->run(Task::Alive, id);
    return impl_->alive[id] == Impl::kTrue;
}

std::vector<QGVertex> QueryGraphEvaluator::loq(const QGVertex& v) {
    auto id = impl_->g.id(v);
    impl_->run(Task::Loq, id);
    return impl_->vertices(*impl_->loq[id]);
}

std::vector<QGVertex> QueryGraphEvaluator::aq(const QGVertex& v) {
    if (!impl_->g.label(v).is_close()) return {};
    auto id = impl_->g.id(v);
    impl_->run(Task::Aq, id);
    return impl_->vertices(impl_->aq[id].accepted);
}

std::vector<QGVertex> QueryGraphEvaluator::backref(const QGVertex& v) {
    auto id = impl_->g.id(v);
    impl_->run(Task::Backref, id);
    return impl_->vertices(*impl_->backref[id]);
}

// ---------------------------------------------------------------------------

Matcher::Matcher(SemRE r, OraclePtr oracle) : r_(std::move(r)), oracle_(std::move(oracle)) {
    if (!r_) throw std::invalid_argument("null pattern");
    if (!oracle_) throw std::invalid_argument("null oracle");
    m_ = normalize(build_snfa(r_));
    if (!check_well_parenthesized(m_)) throw std::logic_error("machine is not well-parenthesized");
    std::vector<bool> answers;
    answers.reserve(m_.queries().size());
    for (const auto& q : m_.queries()) answers.push_back(oracle_->evaluate(q, ""));
    answers_ = EpsilonAnswers(std::move(answers));
    eps_ = compute_eps(m_, answers_);
    gadget_ = std::make_unique<Gadget>(m_, eps_);
}

bool Matcher::match(std::string_view w, MatchMetrics* metrics, Deadline deadline) const {
    if (w.size() >= (1u << 21) - 1) throw TooLargeError("input line too long");
    auto t0 = Clock::now();
    if (metrics) *metrics = {};
    QueryGraph g = graph(w);
    QueryGraphEvaluator ev(g, *oracle_, metrics, deadline);
    bool matched = ev.alive(g.end());
    if (metrics) {
        metrics->matched = matched;
        metrics->wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    }
    return matched;
}

bool match_semre(const SemRE& r, std::string_view w, OraclePtr oracle, MatchMetrics* metrics) {
    return Matcher(r, std::move(oracle)).match(w, metrics);
}

} // namespace semre
