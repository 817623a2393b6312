#include <doctest.h>

#include "lineq/errors.hpp"
#include "lineq/parse.hpp"

using namespace lineq;

TEST_CASE("parse generators") {
    CHECK(parse_arrow("t[x;y;z]") == ArrowTerm::trans(Term::variable("x"), Term::variable("y"), Term::variable("z")));
    ArrowTerm lhs = parse_arrow("t[x;y;y] o (id{x<=y} /\\ r[y])");
    CHECK(lhs.is_compose());
    CHECK(lhs.right().is_tensor());
    CHECK(parse_arrow("b>{x<=y /\\ T; T; (x . y)<=z}").formulas().size() == 3);
}

TEST_CASE("composition is right-associative and tensor binds tighter") {
    ArrowTerm f = parse_arrow("r[x] o id{T} o id{T}");
    CHECK(f.right().is_compose());
    ArrowTerm g = parse_arrow("id{T} /\\ r[x] o del<{T}");
    CHECK(g.is_compose());
    CHECK(g.left().is_tensor());
}

TEST_CASE("parse errors carry positions") {
    try {
        parse_arrow("t[x;y]");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 6);
    }
    try {
        parse_arrow("id{x<=y}\n  o q[x]");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 5);
    }
    CHECK_THROWS_AS(parse_formula("x<=y /\\ y<=z /\\ z<=u"), ParseError);
    CHECK_THROWS_AS(parse_arrow("r[x] /\\ r[x] /\\ r[x]"), ParseError);
    CHECK_THROWS_AS(parse_formula("T<=x"), ParseError);
    CHECK_THROWS_AS(parse_arrow("r[x] extra"), ParseError);
}

TEST_CASE("formulas with product atoms and nesting") {
    Formula a = parse_formula("((x . y)<=z /\\ (z<=(u . v) /\\ T))");
    CHECK(a.is_conj());
    CHECK(a.left().lhs().is_product());
    CHECK(parse_formula(to_string(a)) == a);
}

TEST_CASE("print/parse round trip") {
    // Minimal parentheses: tensor binds tighter than composition.
    CHECK(print_arrow(parse_arrow("t[x;y;y] o (id{x<=y} /\\ r[y])")) == "t[x;y;y] o id{x<=y} /\\ r[y]");
    for (const char* s : {"t[x;y;y] o id{x<=y} /\\ r[y]", "(r[x] o id{T}) o id{T}", "(r[x] /\\ r[y]) /\\ id{T}",
                          "b>{x<=y; y<=z /\\ T; T}", "a[(x . y);x;y;(y . (x . x))]", "s[x;y] o s[y;x]",
                          "(id{T} o r[x]) /\\ id{x<=y /\\ T}"}) {
        ArrowTerm f = parse_arrow(s);
        CHECK(print_arrow(f) == s);
        CHECK(parse_arrow(print_arrow(f)) == f);
    }
    for (Theory th : Theory::all())
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            ArrowTerm f = random_term(th, 20, seed, {"x", "y", "z"});
            CHECK(parse_arrow(print_arrow(f)) == f);
        }
}
