#include <doctest.h>

#include "lineq/diagram.hpp"
#include "lineq/errors.hpp"
#include "lineq/parse.hpp"

using namespace lineq;

namespace {
const Theory mleq(TheoryId::MLeq), sleq(TheoryId::SLeq), mequiv(TheoryId::MEquiv), sequiv(TheoryId::SEquiv),
    sdotleq(TheoryId::SDotLeq), sdotequiv(TheoryId::SDotEquiv);

ArrowType type_of(const char* f, Theory th) { return infer_type(parse_arrow(f), th); }
Formula F(const char* s) { return parse_formula(s); }
} // namespace

TEST_CASE("theory flags are functions of the id") {
    CHECK_FALSE(mleq.symmetric());
    CHECK(sleq.symmetric());
    CHECK(sdotleq.symmetric());
    CHECK(sdotleq.dotted());
    CHECK(sdotequiv.has_s());
    CHECK_FALSE(sleq.has_s());
    CHECK(mequiv.relation() == Relation::Equiv);
    for (Theory t : Theory::all()) CHECK(Theory::from_name(t.name()) == t);
}

TEST_CASE("generator signatures") {
    CHECK(type_of("t[x;y;z]", mleq) == ArrowType{F("x<=y /\\ y<=z"), F("x<=z")});
    CHECK(type_of("id{T}", sdotequiv) == ArrowType{F("T"), F("T")});
    CHECK(type_of("r[x]", mequiv) == ArrowType{F("T"), F("x==x")});
    CHECK(type_of("s[x;y]", mequiv) == ArrowType{F("x==y"), F("y==x")});
    CHECK(type_of("c{x<=y; T}", sleq) == ArrowType{F("x<=y /\\ T"), F("T /\\ x<=y")});
    CHECK(type_of("a[x;y;u;v]", sdotleq) == ArrowType{F("x<=y /\\ u<=v"), F("(x . u)<=(y . v)")});
    CHECK(type_of("b>{x<=y; T; y<=z}", mleq) ==
          ArrowType{F("x<=y /\\ (T /\\ y<=z)"), F("(x<=y /\\ T) /\\ y<=z")});
    CHECK(type_of("b<{x<=y; T; y<=z}", mleq) ==
          ArrowType{F("(x<=y /\\ T) /\\ y<=z"), F("x<=y /\\ (T /\\ y<=z)")});
    CHECK(type_of("del>{x<=y}", mleq) == ArrowType{F("x<=y /\\ T"), F("x<=y")});
    CHECK(type_of("del<{x<=y}", mleq) == ArrowType{F("x<=y"), F("x<=y /\\ T")});
    CHECK(type_of("sig>{x<=y}", mleq) == ArrowType{F("T /\\ x<=y"), F("x<=y")});
    CHECK(type_of("sig<{x<=y}", mleq) == ArrowType{F("x<=y"), F("T /\\ x<=y")});
}

TEST_CASE("typing errors") {
    CHECK_THROWS_AS(type_of("t[x;y;z] o r[x]", mleq), CompositionMismatch);
    try {
        type_of("id{x<=x} o (t[x;y;z] o r[x])", mleq);
        FAIL("expected a mismatch");
    } catch (const CompositionMismatch& e) {
        CHECK(e.path() == "[CR]");
        CHECK(e.expected() == "x<=y /\\ y<=z");
        CHECK(e.found() == "x<=x");
    }
    CHECK_THROWS_AS(type_of("c{x<=y; y<=z}", mleq), GeneratorNotInTheory);
    CHECK_THROWS_AS(type_of("s[x;y]", sleq), GeneratorNotInTheory);
    CHECK_THROWS_AS(type_of("a[x;y;u;v]", sequiv), GeneratorNotInTheory);
    CHECK_THROWS_AS(type_of("r[(x . y)]", sequiv), GeneratorNotInTheory);
    CHECK_THROWS_AS(type_of("id{x==y}", mleq), RelationMismatch);
    CHECK_NOTHROW(type_of("r[(x . y)]", sdotequiv));
}

TEST_CASE("rename_arrow commutes with typing") {
    CHECK(rename_arrow(parse_arrow("t[x;y;z]"), {{"y", "x"}}) == parse_arrow("t[x;x;z]"));
    CHECK(rename_arrow(parse_arrow("r[x]"), {{"x", "w"}}) == parse_arrow("r[w]"));
    ArrowTerm c = rename_arrow(parse_arrow("c{x==y; y==x}"), {{"x", "y"}});
    CHECK(infer_type(c, sequiv) == ArrowType{F("y==y /\\ y==y"), F("y==y /\\ y==y")});

    Renaming rho{{"x", "u"}, {"y", "x"}};
    for (Theory th : Theory::all())
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            ArrowTerm f = random_term(th, 15, seed, {"x", "y", "z"});
            ArrowType t = infer_type(f, th);
            CHECK(infer_type(rename_arrow(f, rho), th) ==
                  ArrowType{rename_formula(t.source, rho), rename_formula(t.target, rho)});
        }
}

TEST_CASE("random_term is deterministic and well-typed") {
    for (Theory th : Theory::all()) {
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            ArrowTerm f = random_term(th, 12, seed, {"x", "y"});
            CHECK(f.size() <= 12);
            CHECK(well_typed(f, th));
        }
        CHECK(random_term(th, 20, 7, {"x"}) == random_term(th, 20, 7, {"x"}));
        CHECK(random_term(th, 1, 3, {"x"}).size() == 1);
    }
}

TEST_CASE("top_iso") {
    CHECK(top_iso(F("x<=y /\\ T"), mleq) == parse_arrow("del>{x<=y}"));
    CHECK(top_iso(F("x<=y"), mleq) == parse_arrow("id{x<=y}"));
    CHECK(top_iso(F("(T /\\ x<=y) /\\ T"), mleq) == parse_arrow("sig>{x<=y} o del>{T /\\ x<=y}"));

    for (const char* s : {"x<=y /\\ T", "(T /\\ x<=y) /\\ T", "((x<=y /\\ T) /\\ (T /\\ T)) /\\ (T /\\ y<=z)",
                          "T", "T /\\ T", "x<=y /\\ (y<=z /\\ T)", "(T /\\ (T /\\ x<=x)) /\\ (y<=y /\\ T)"}) {
        Formula a = F(s);
        ArrowTerm iso = top_iso(a, mleq), inv = top_iso_inverse(a, mleq);
        CHECK(infer_type(iso, mleq) == ArrowType{a, top_purge(a)});
        CHECK(infer_type(inv, mleq) == ArrowType{top_purge(a), a});
        CHECK(eval(iso, mleq).identical(identity_diagram(a)));
        CHECK(eval(inv, mleq).identical(identity_diagram(a)));
    }
}

TEST_CASE("paths address and replace subterms") {
    ArrowTerm f = parse_arrow("t[x;y;y] o (id{x<=y} /\\ r[y])");
    CHECK(subterm_at(f, {Step::ComposeRight, Step::TensorRight}) == parse_arrow("r[y]"));
    CHECK(replace_at(f, {Step::ComposeRight, Step::TensorRight}, parse_arrow("r[z]")) ==
          parse_arrow("t[x;y;y] o (id{x<=y} /\\ r[z])"));
    CHECK_THROWS_AS(subterm_at(f, {Step::TensorLeft}), std::out_of_range);
}
