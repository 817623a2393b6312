#include <doctest.h>

#include "lineq/parse.hpp"
#include "lineq/syntax.hpp"

using namespace lineq;

namespace {
Formula F(const char* s) { return parse_formula(s); }
} // namespace

TEST_CASE("occurrences walk atoms left to right") {
    CHECK(occurrences(F("x<=y /\\ z<=x")) == std::vector<Variable>{"x", "y", "z", "x"});
    CHECK(occurrences(F("T")).empty());
    CHECK(occurrences(F("(x . y)<=z")) == std::vector<Variable>{"x", "y", "z"});
}

TEST_CASE("top_purge") {
    CHECK(top_purge(F("x<=y /\\ T")) == F("x<=y"));
    CHECK(top_purge(F("T")) == F("T"));
    CHECK(top_purge(F("(T /\\ T) /\\ x<=y")) == F("x<=y"));
    CHECK(top_purge(F("T /\\ (T /\\ T)")) == F("T"));
    CHECK(top_purge(F("(x<=y /\\ T) /\\ (T /\\ y<=z)")) == F("x<=y /\\ y<=z"));

    for (const char* s : {"x<=y /\\ T", "((T /\\ x<=y) /\\ T) /\\ (y<=z /\\ T)", "T /\\ T"}) {
        Formula p = top_purge(F(s));
        CHECK(top_purge(p) == p);
        CHECK((p.is_top() || !contains_top(p)));
    }
}

TEST_CASE("renaming preserves occurrence count") {
    CHECK(rename_formula(F("x<=y"), {{"x", "z"}}) == F("z<=y"));
    CHECK(rename_formula(F("x==x"), {{"x", "y"}}) == F("y==y"));
    CHECK(rename_formula(F("(x . y)<=x"), {{"x", "u"}, {"y", "u"}}) == F("(u . u)<=u"));
    Formula a = F("(x<=y /\\ (x . z)<=y) /\\ T");
    CHECK(occurrences(rename_formula(a, {{"x", "y"}})).size() == occurrences(a).size());
}

TEST_CASE("renaming injectivity") {
    CHECK(Renaming{{"x", "y"}, {"y", "x"}}.is_injective());
    CHECK_FALSE(Renaming{{"x", "z"}, {"y", "z"}}.is_injective());
}
