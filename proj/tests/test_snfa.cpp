#include <doctest.h>

#include <deque>
#include <set>

#include "semre/matcher.hpp"
#include "semre/parser.hpp"
#include "semre/snfa.hpp"
#include "support.hpp"

using namespace semre;

namespace {

// Eps by brute force: breadth-first over (state, stack of open queries)
// along ε-edges, starting from the ε-successors of `from`.
std::set<StateId> eps_targets_bruteforce(const Snfa& m, StateId from, const EpsilonAnswers& answers) {
    std::set<StateId> out;
    std::set<std::pair<StateId, std::vector<QueryId>>> seen;
    std::deque<std::pair<StateId, std::vector<QueryId>>> work;
    auto enter = [&](StateId t, std::vector<QueryId> stack) {
        const auto& l = m.label(t);
        if (l.is_open()) {
            stack.push_back(l.query);
        } else if (l.is_close()) {
            if (stack.empty() || stack.back() != l.query || !answers.accepts(l.query)) return;
            stack.pop_back();
        }
        if (stack.empty()) out.insert(t);
        if (seen.emplace(t, stack).second) work.emplace_back(t, std::move(stack));
    };
    for (StateId t : m.eps_out(from)) enter(t, {});
    while (!work.empty()) {
        auto [s, stack] = work.front();
        work.pop_front();
        for (StateId t : m.eps_out(s)) enter(t, stack);
    }
    return out;
}

std::set<StateId> eps_targets(const EpsRelation& e, StateId from) {
    return {e.targets(from).begin(), e.targets(from).end()};
}

} // namespace

TEST_CASE("construction of a literal") {
    auto m = build_snfa(make_lit('a'));
    CHECK(m.state_count() == 2);
    REQUIRE(m.char_edges().size() == 1);
    CHECK(m.char_edges()[0].from == m.start());
    CHECK(m.char_edges()[0].to == m.end());
    CHECK(m.char_edges()[0].chars.contains('a'));
    CHECK(m.label(m.start()).is_blank());
    CHECK(m.label(m.end()).is_blank());
}

TEST_CASE("the empty language has no transitions") {
    auto m = build_snfa(make_empty());
    CHECK(m.state_count() == 2);
    CHECK(m.transition_count() == 0);
    CHECK(m.start() != m.end());
}

TEST_CASE("refinement states carry open and close labels") {
    auto m = build_snfa(make_refine(make_lit('a'), Query{"q"}));
    CHECK(m.state_count() == 4);
    REQUIRE(m.queries().size() == 1);
    CHECK(m.label(m.start()) == StateLabel::open(0));
    CHECK(m.label(m.end()) == StateLabel::close(0));
    CHECK_FALSE(is_normalized(m));
    CHECK(m.label_string(m.start()) == "open(q)");
}

TEST_CASE("normalize leaves a normalized machine alone") {
    auto m = build_snfa(parse_semre("a(b|c)*"));
    REQUIRE(is_normalized(m));
    auto n = normalize(m);
    CHECK(n.state_count() == m.state_count());
    CHECK(n.transition_count() == m.transition_count());
    CHECK(n.start() == m.start());
}

TEST_CASE("normalize reroutes character edges into marked states") {
    // s0 -a-> open(q) -ε-> close(q): the a-edge must land on a blank state.
    Snfa m;
    auto q = m.intern(Query{"q"});
    auto s0 = m.add_state(StateLabel::blank());
    auto o = m.add_state(StateLabel::open(q));
    auto c = m.add_state(StateLabel::close(q));
    m.add_char(s0, CharSet::single('a'), o);
    m.add_epsilon(o, c);
    m.set_start(s0);
    m.set_end(c);
    CHECK_FALSE(is_normalized(m));
    auto n = normalize(m);
    CHECK(is_normalized(n));
    CHECK(n.state_count() == m.state_count() + 1);
    CHECK(n.transition_count() == m.transition_count() + 1);
    REQUIRE(n.char_edges().size() == 1);
    auto mid = n.char_edges()[0].to;
    CHECK(n.label(mid).is_blank());
    REQUIRE(n.eps_out(mid).size() == 1);
    CHECK(n.eps_out(mid)[0] == o);
    auto yes = make_builtin_oracle("always_true");
    CHECK(snfa_accepts_bruteforce(m, "a", *yes) == snfa_accepts_bruteforce(n, "a", *yes));
}

TEST_CASE("Thompson machines only need a fresh start") {
    testsupport::Rng rng(2);
    for (int t = 0; t < 200; ++t) {
        auto m = build_snfa(testsupport::random_semre(rng, 5));
        for (const auto& e : m.char_edges()) CHECK(m.label(e.to).is_blank());
        CHECK(normalize(m).state_count() == m.state_count() + (m.label(m.start()).is_blank() ? 0 : 1));
    }
}

TEST_CASE("normalized Refine(Lit a, q)") {
    auto n = normalize(build_snfa(make_refine(make_lit('a'), Query{"q"})));
    CHECK(is_normalized(n));
    // Fresh blank start before open(q); the a-edge already targets a blank state.
    CHECK(n.state_count() == 5);
    CHECK(n.label(n.start()).is_blank());
    REQUIRE(n.eps_out(n.start()).size() == 1);
    CHECK(n.label(n.eps_out(n.start())[0]) == StateLabel::open(0));
    CHECK(n.label(n.end()) == StateLabel::close(0));
}

TEST_CASE("normalization preserves the language") {
    testsupport::Rng rng(21);
    for (int t = 0; t < 300; ++t) {
        auto r = testsupport::random_semre(rng, 4);
        auto w = testsupport::random_word(rng, 6);
        auto table = testsupport::random_table(rng, w);
        auto raw = build_snfa(r);
        auto n = normalize(raw);
        REQUIRE(is_normalized(n));
        CHECK(snfa_accepts_bruteforce(raw, w, *table) == snfa_accepts_bruteforce(n, w, *table));
    }
}

TEST_CASE("state and transition bounds") {
    testsupport::Rng rng(3);
    for (int t = 0; t < 500; ++t) {
        auto r = testsupport::random_semre(rng, 6);
        auto m = build_snfa(r);
        CHECK(m.state_count() == 2 * size(r));
        CHECK(m.transition_count() <= 4 * size(r));
        auto n = normalize(m);
        CHECK(n.state_count() <= 3 * size(r) + 1);
    }
}

TEST_CASE("query contexts of start and end are empty") {
    auto n = normalize(build_snfa(parse_semre(".*a(.*b<q'>)&<q>")));
    auto ctx = compute_query_contexts(n);
    CHECK(ctx[n.start()]->unmatched_opens.empty());
    CHECK(ctx[n.start()]->unmatched_closes.empty());
    CHECK(ctx[n.end()]->unmatched_opens.empty());
    CHECK(ctx[n.end()]->unmatched_closes.empty());
}

TEST_CASE("context inside nested starred refinements") {
    // ((Σ*∧q1)*∧q2)*: the source of the Σ edge sits inside q2 then q1.
    auto sigma = make_lit(Alphabet::ascii().sigma);
    auto r = make_star(make_refine(make_star(make_refine(make_star(sigma), Query{"q1"})), Query{"q2"}));
    auto m = build_snfa(r);
    REQUIRE(m.char_edges().size() == 1);
    auto q1 = *m.find_query(Query{"q1"});
    auto q2 = *m.find_query(Query{"q2"});
    auto c = query_context(m, m.char_edges()[0].from);
    CHECK(c.unmatched_closes.empty());
    CHECK(c.unmatched_opens == std::vector<QueryId>{q2, q1});
    CHECK(check_well_parenthesized(m));
}

TEST_CASE("query_context rejects unreachable states") {
    Snfa m;
    auto a = m.add_state(StateLabel::blank());
    auto b = m.add_state(StateLabel::blank());
    auto c = m.add_state(StateLabel::blank());
    m.add_epsilon(a, b);
    m.set_start(a);
    m.set_end(b);
    CHECK_THROWS_AS(query_context(m, c), std::out_of_range);
}

TEST_CASE("badly parenthesized machines") {
    SUBCASE("close without open") {
        Snfa m;
        auto q = m.intern(Query{"q"});
        auto s = m.add_state(StateLabel::blank());
        auto c = m.add_state(StateLabel::close(q));
        m.add_epsilon(s, c);
        m.set_start(s);
        m.set_end(c);
        CHECK_FALSE(check_well_parenthesized(m));
    }
    SUBCASE("open never closed") {
        Snfa m;
        auto q = m.intern(Query{"q"});
        auto s = m.add_state(StateLabel::blank());
        auto o = m.add_state(StateLabel::open(q));
        m.add_char(s, CharSet::single('a'), o);
        m.set_start(s);
        m.set_end(o);
        CHECK_FALSE(check_well_parenthesized(m));
    }
    SUBCASE("crossed spans") {
        Snfa m;
        auto q1 = m.intern(Query{"q1"});
        auto q2 = m.intern(Query{"q2"});
        auto s = m.add_state(StateLabel::blank());
        auto o1 = m.add_state(StateLabel::open(q1));
        auto o2 = m.add_state(StateLabel::open(q2));
        auto c1 = m.add_state(StateLabel::close(q1));
        auto c2 = m.add_state(StateLabel::close(q2));
        m.add_epsilon(s, o1);
        m.add_epsilon(o1, o2);
        m.add_epsilon(o2, c1);
        m.add_epsilon(c1, c2);
        m.set_start(s);
        m.set_end(c2);
        CHECK_FALSE(check_well_parenthesized(m));
        CHECK_THROWS_AS(compute_query_contexts(m), std::logic_error);
    }
    SUBCASE("path-dependent context") {
        Snfa m;
        auto q = m.intern(Query{"q"});
        auto s = m.add_state(StateLabel::blank());
        auto o = m.add_state(StateLabel::open(q));
        auto j = m.add_state(StateLabel::blank());
        m.add_epsilon(s, o);
        m.add_epsilon(o, j);
        m.add_epsilon(s, j);
        m.set_start(s);
        m.set_end(j);
        CHECK_FALSE(check_well_parenthesized(m));
    }
}

TEST_CASE("constructed machines are well-parenthesized") {
    testsupport::Rng rng(4);
    for (int t = 0; t < 500; ++t) {
        auto r = testsupport::random_semre(rng, 6);
        CHECK(check_well_parenthesized(build_snfa(r)));
        CHECK(check_well_parenthesized(normalize(build_snfa(r))));
    }
}

TEST_CASE("Eps on a refined epsilon") {
    auto n = normalize(build_snfa(make_refine(make_epsilon(), Query{"q"})));
    auto yes = compute_eps(n, EpsilonAnswers::all(n, true));
    auto no = compute_eps(n, EpsilonAnswers::all(n, false));
    CHECK(yes.contains(n.start(), n.end()));
    CHECK_FALSE(no.contains(n.start(), n.end()));
    // The open state itself is not a target: its span is still unbalanced.
    auto open = n.eps_out(n.start())[0];
    CHECK_FALSE(yes.contains(n.start(), open));
    // Starting from the open state, the close has no matching open.
    CHECK_FALSE(yes.contains(open, n.end()));
}

TEST_CASE("Eps excludes character moves") {
    auto n = normalize(build_snfa(parse_semre("a")));
    auto e = compute_eps(n, EpsilonAnswers::all(n, true));
    CHECK(e.pair_count() == 0);
    auto s = normalize(build_snfa(parse_semre("a*")));
    auto es = compute_eps(s, EpsilonAnswers::all(s, true));
    CHECK(es.contains(s.start(), s.end()));
}

TEST_CASE("Eps agrees with an exhaustive ε-path search") {
    testsupport::Rng rng(17);
    for (int t = 0; t < 400; ++t) {
        auto r = testsupport::random_semre(rng, 5);
        auto n = normalize(build_snfa(r));
        std::vector<bool> bits;
        for (std::size_t q = 0; q < n.queries().size(); ++q) bits.push_back(testsupport::coin(rng));
        EpsilonAnswers answers(bits);
        auto e = compute_eps(n, answers);
        for (StateId s = 0; s < n.state_count(); ++s) {
            INFO(to_pattern(r) << " from s" << s);
            CHECK(eps_targets(e, s) == eps_targets_bruteforce(n, s, answers));
        }
    }
}

TEST_CASE("compute_eps needs an answer per query") {
    auto n = normalize(build_snfa(parse_semre("<q>")));
    CHECK_THROWS_AS(compute_eps(n, EpsilonAnswers{}), std::invalid_argument);
}

TEST_CASE("SNFA runs agree with the relational semantics") {
    testsupport::Rng rng(99);
    for (int t = 0; t < 1000; ++t) {
        auto r = testsupport::random_semre(rng, 4);
        auto w = testsupport::random_word(rng, 7);
        auto table = testsupport::random_table(rng, w);
        testsupport::SpanEvaluator spans(w, *table);
        INFO(to_pattern(r) << " on \"" << w << "\"");
        CHECK(snfa_accepts_bruteforce(build_snfa(r), w, *table) == spans.matches(r));
    }
}

TEST_CASE("dot rendering mentions contexts") {
    auto m = normalize(build_snfa(parse_semre("a&<q>")));
    auto dot = m.to_dot();
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("open(q)") != std::string::npos);
}
