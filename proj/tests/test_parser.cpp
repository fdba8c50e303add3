#include <doctest.h>

#include "semre/parser.hpp"
#include "support.hpp"

using namespace semre;

namespace {

SemRE sigma_star() { return make_star(make_lit(Alphabet::ascii().sigma)); }

std::size_t error_offset(const char* text) {
    try {
        parse_semre(text);
    } catch (const ParseError& e) {
        return e.offset();
    }
    FAIL("expected a parse error for " << text);
    return 0;
}

} // namespace

TEST_CASE("grammar examples") {
    auto a = make_lit('a'), b = make_lit('b'), c = make_lit('c');
    CHECK(structurally_equal(parse_semre("a(b|c)*"), make_cat(a, make_star(make_alt(b, c)))));
    CHECK(structurally_equal(parse_semre("<pal>"), make_refine(sigma_star(), Query{"pal"})));

    auto x = make_lit('x');
    auto xx = make_cat(x, x);
    CHECK(structurally_equal(parse_semre("x{2,3}"), make_alt(xx, make_cat(xx, x))));
    CHECK(structurally_equal(parse_semre("x{2}"), xx));
}

TEST_CASE("sugar expansions") {
    auto r = make_lit('r');
    auto sigma = make_lit(Alphabet::ascii().sigma);
    CHECK(structurally_equal(expand_sugar({Sugar::Form::Optional, r, {}}), make_alt(r, make_epsilon())));
    CHECK(structurally_equal(expand_sugar({Sugar::Form::Plus, r, {}}), make_cat(r, make_star(r))));
    CHECK(structurally_equal(expand_sugar({Sugar::Form::Repeat, r, {}, 1, 1}), r));
    CHECK(structurally_equal(expand_sugar({Sugar::Form::NonemptyRefine, nullptr, Query{"q"}}),
                             make_refine(make_cat(sigma, make_star(sigma)), Query{"q"})));
    CHECK(structurally_equal(expand_sugar({Sugar::Form::AnyRefine, nullptr, Query{"q"}}),
                             make_refine(make_star(sigma), Query{"q"})));
    CHECK(structurally_equal(expand_sugar({Sugar::Form::Dot, nullptr, {}}), sigma));
    CHECK(structurally_equal(expand_sugar({Sugar::Form::Repeat, r, {}, 0, 0}), make_epsilon()));

    CHECK(structurally_equal(parse_semre("r?"), make_alt(r, make_epsilon())));
    CHECK(structurally_equal(parse_semre("<+q>"), make_refine(make_cat(sigma, make_star(sigma)), Query{"q"})));
}

TEST_CASE("expansions use only the core constructors") {
    for (const char* p : {"a?", "a+", "a{0,3}", "<q>", "<+q>", ".", "[^a]{2,4}", "(a|b)+?"}) {
        INFO(p);
        // Any node kind outside the core would fail to print or to size.
        auto r = parse_semre(p);
        CHECK(size(r) >= 1);
        CHECK(structurally_equal(parse_semre(to_pattern(r)), r));
    }
}

TEST_CASE("full-byte alphabet changes what dot means") {
    auto r = parse_semre(".", Alphabet::bytes());
    CHECK(r->chars.contains(0xE9));
    CHECK_FALSE(parse_semre(".")->chars.contains(0xE9));
    CHECK(parse_semre("[^a]", Alphabet::bytes())->chars.contains(0xFF));
}

TEST_CASE("character classes and escapes") {
    auto cls = parse_semre("[a-cx]");
    CHECK(cls->chars.count() == 4);
    CHECK(parse_semre("[^a]")->chars.count() == 127);
    CHECK(parse_semre("\\n")->chars.contains('\n'));
    CHECK(parse_semre("\\t")->chars.contains('\t'));
    CHECK(parse_semre("\\x41")->chars.contains('A'));
    for (const char* e : {"\\\\", "\\.", "\\|", "\\(", "\\)", "\\[", "\\]", "\\<", "\\>", "\\{", "\\}"}) {
        INFO(e);
        auto r = parse_semre(e);
        REQUIRE(r->kind == Kind::Lit);
        CHECK(r->chars.count() == 1);
        CHECK(r->chars.contains(static_cast<unsigned char>(e[1])));
    }
    CHECK(parse_semre("%empty%")->kind == Kind::Empty);
    CHECK(parse_semre("()")->kind == Kind::Epsilon);
    CHECK(parse_semre("")->kind == Kind::Epsilon);
    // '&' and '%' are ordinary outside their constructs.
    CHECK(structurally_equal(parse_semre("a&b"), make_cat_chain({make_lit('a'), make_lit('&'), make_lit('b')})));
    CHECK(parse_semre("%")->chars.contains('%'));
}

TEST_CASE("refinement is postfix and binds like star") {
    auto r = parse_semre("ab&<q>");
    CHECK(structurally_equal(r, make_cat(make_lit('a'), make_refine(make_lit('b'), Query{"q"}))));
    auto s = parse_semre("a*&<q>*");
    CHECK(structurally_equal(s, make_star(make_refine(make_star(make_lit('a')), Query{"q"}))));
    CHECK(parse_semre("<City.Name:x-1>")->query.name == "City.Name:x-1");
}

TEST_CASE("parse errors report byte offsets") {
    CHECK(error_offset("ab)") == 2);
    CHECK(error_offset("(ab") == 0);
    CHECK(error_offset("a<>") == 2);
    CHECK(error_offset("x{3,2}") == 1);
    CHECK(error_offset("\\q") == 0);
    CHECK(error_offset("[abc") == 0);
    CHECK(error_offset("*a") == 0);
    CHECK(error_offset("a&<q") == 3);
    CHECK(error_offset("[z-a]") == 2);
    CHECK_THROWS_AS(parse_semre("a{1,999}"), ParseError);
    CHECK_THROWS_AS(parse_semre("<a b>"), ParseError);
    CHECK_THROWS_WITH_AS(parse_semre("ab)"), doctest::Contains("at offset 2"), ParseError);
}

TEST_CASE("parse inverts to_pattern on random trees") {
    testsupport::Rng rng(11);
    for (int t = 0; t < 2000; ++t) {
        auto r = testsupport::random_semre(rng, 5, {"q1", "q2", "long.name"});
        auto text = to_pattern(r);
        INFO(text);
        CHECK(structurally_equal(parse_semre(text), r));
    }
}

TEST_CASE("round trip over unusual literals") {
    using testsupport::Rng;
    Rng rng(5);
    for (int t = 0; t < 500; ++t) {
        CharSet s;
        int k = testsupport::uniform(rng, 0, 6);
        for (int i = 0; i < k; ++i) s.insert(static_cast<unsigned char>(testsupport::uniform(rng, 0, 127)));
        auto r = make_cat(make_lit(s), make_star(make_lit(static_cast<unsigned char>(testsupport::uniform(rng, 0, 127)))));
        auto text = to_pattern(r);
        INFO(text);
        CHECK(structurally_equal(parse_semre(text), r));
    }
}
