#include <doctest.h>

#include <map>
#include <set>

#include "lineq/analysis.hpp"
#include "lineq/errors.hpp"
#include "lineq/parse.hpp"
#include "lineq/rewrite.hpp"

using namespace lineq;

namespace {

const Theory mleq(TheoryId::MLeq), sleq(TheoryId::SLeq), mequiv(TheoryId::MEquiv), sequiv(TheoryId::SEquiv),
    sdotleq(TheoryId::SDotLeq), sdotequiv(TheoryId::SDotEquiv);

ArrowTerm A(const char* s) { return parse_arrow(s); }
Formula F(const char* s) { return parse_formula(s); }

Endpoint src(std::size_t i) { return {Side::Src, i}; }

// Renames variables to w1, w2, ... by first occurrence, source then target.
ArrowType canonical(const ArrowType& t) {
    Renaming rho;
    std::set<Variable> seen;
    std::size_t n = 0;
    auto visit = [&](const Formula& a) {
        for (const auto& v : occurrences(a))
            if (seen.insert(v).second) rho.set(v, "w" + std::to_string(++n));
    };
    visit(t.source);
    visit(t.target);
    return {rename_formula(t.source, rho), rename_formula(t.target, rho)};
}

} // namespace

TEST_CASE("decide_equal") {
    CHECK(decide_equal(A("t[x;x;x] o (id{x<=x} /\\ t[x;x;x])"),
                       A("t[x;x;x] o (t[x;x;x] /\\ id{x<=x}) o b>{x<=x; x<=x; x<=x}"), mleq));
    CHECK(decide_equal(A("t[x;y;z]"), A("t[x;y;z]"), mleq));
    CHECK_FALSE(decide_equal(A("id{x<=x /\\ x<=x}"), A("c{x<=x; x<=x}"), sleq));
    CHECK(decide_equal(A("t[x;y;y] o (id{x<=y} /\\ r[y])"), A("del>{x<=y}"), mleq));
    CHECK(decide_equal(A("del>{x<=y} o del<{x<=y}"), A("id{x<=y}"), mleq));
    CHECK_THROWS_AS(decide_equal(A("c{x<=y; y<=z}"), A("id{x<=y}"), mleq), GeneratorNotInTheory);

    // Invariant under injective renaming.
    Renaming rho{{"x", "p"}, {"y", "q"}, {"z", "r"}};
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        ArrowTerm f = random_term(sleq, 15, seed, {"x", "y", "z"});
        ArrowTerm g = random_term(sleq, 15, seed + 1000, {"x", "y", "z"});
        CHECK(decide_equal(f, g, sleq) == decide_equal(rename_arrow(f, rho), rename_arrow(g, rho), sleq));
    }
}

TEST_CASE("diversify") {
    auto t = diversify(A("t[x;x;x]"), mleq);
    CHECK(t.term == A("t[v1;v2;v3]"));
    CHECK(t.renaming == Renaming{{"v1", "x"}, {"v2", "x"}, {"v3", "x"}});
    CHECK(infer_type(t.term, mleq) == ArrowType{F("v1<=v2 /\\ v2<=v3"), F("v1<=v3")});

    auto i = diversify(A("id{x<=x}"), mleq);
    CHECK(i.term == A("id{v1<=v2}"));
    CHECK(i.renaming == Renaming{{"v1", "x"}, {"v2", "x"}});

    auto already = diversify(A("s[p;q]"), mequiv);
    CHECK(already.term == A("s[v1;v2]"));
    CHECK(already.renaming.is_injective());

    // A closed loop still gets its own variable.
    auto loop = diversify(A("t[x;x;x] o (id{x<=x} /\\ r[x]) o del<{x<=x}"), mleq);
    CHECK(rename_arrow(loop.term, loop.renaming) == A("t[x;x;x] o (id{x<=x} /\\ r[x]) o del<{x<=x}"));

    for (Theory th : Theory::all())
        for (std::uint64_t seed = 0; seed < 300; ++seed) {
            ArrowTerm f = random_term(th, 20, seed, {"x", "y"});
            INFO(print_arrow(f));
            auto d = diversify(f, th);
            CHECK(rename_arrow(d.term, d.renaming) == f);
            if (!contains_product(infer_type(d.term, th).source) && !contains_product(infer_type(d.term, th).target))
                CHECK(is_diversified_type(infer_type(d.term, th)));
            Diagram a = eval(f, th), b = eval(d.term, th);
            CHECK(a.edges() == b.edges());
        }
}

TEST_CASE("same_generality") {
    CHECK(same_generality(A("t[x;x;x]"), A("t[x;x;x] o id{x<=x /\\ x<=x}"), mleq));
    CHECK_FALSE(same_generality(A("s[x;x]"), A("id{x==x}"), sequiv));
    CHECK(same_generality(A("t[y;y;x] o (r[y] /\\ id{y<=x})"), A("sig>{y<=x}"), mleq));
    CHECK_THROWS_AS(same_generality(A("t[x;y;z]"), A("id{x<=z}"), mleq), TypeMismatch);

    // Agrees with comparing diversified types up to renaming.
    for (Theory th : {mleq, sleq, mequiv, sequiv}) {
        std::map<std::string, std::vector<ArrowTerm>> by_type;
        for (std::uint64_t seed = 0; seed < 600; ++seed) {
            ArrowTerm f = random_term(th, 9, seed, {"x"});
            by_type[to_string(infer_type(f, th))].push_back(f);
        }
        std::size_t pairs = 0, differing = 0;
        for (const auto& [type, terms] : by_type)
            for (std::size_t i = 0; i < terms.size() && pairs < 1000; ++i)
                for (std::size_t j = i + 1; j < terms.size() && pairs < 1000; ++j, ++pairs) {
                    bool oracle = canonical(infer_type(diversify(terms[i], th).term, th)) ==
                                  canonical(infer_type(diversify(terms[j], th).term, th));
                    bool got = same_generality(terms[i], terms[j], th);
                    CHECK(got == oracle);
                    differing += !got;
                }
        CHECK(pairs > 200);
        if (th.symmetric() || th.has_s()) CHECK(differing > 0);
    }
}

TEST_CASE("maximal_sequences") {
    auto t = maximal_sequences(A("t[x;y;z]"), mleq);
    REQUIRE(t.size() == 1);
    CHECK(t[0] == MaximalSequence{src(0), src(1), src(2), src(3)});

    auto i = maximal_sequences(A("id{x<=y}"), mleq);
    REQUIRE(i.size() == 1);
    CHECK(i[0] == MaximalSequence{src(0), src(1)});

    auto chain = maximal_sequences(
        A("t[x;z;u] o (t[x;y;z] /\\ id{z<=u}) o b>{x<=y; y<=z; z<=u}"), mleq);
    REQUIRE(chain.size() == 1);
    CHECK(chain[0].size() == 6);

    auto two = maximal_sequences(A("t[x;y;z] /\\ id{u<=v}"), mleq);
    REQUIRE(two.size() == 2);
    CHECK(two[1] == MaximalSequence{src(4), src(5)});

    CHECK_THROWS_AS(maximal_sequences(A("r[x]"), mleq), PreconditionNotRLess);

    // Every source occurrence in exactly one sequence; pairs are atoms.
    for (Theory th : {mleq, sleq, mequiv, sequiv})
        for (std::uint64_t seed = 0; seed < 300; ++seed) {
            ArrowTerm f = random_term(th, 20, seed, {"x", "y", "z"});
            if (!is_r_less(f)) continue;
            auto seqs = maximal_sequences(f, th);
            std::multiset<std::size_t> all;
            for (const auto& s : seqs) {
                CHECK(s.size() % 2 == 0);
                for (std::size_t k = 0; k < s.size(); k += 2) CHECK((s[k].index ^ 1) == s[k + 1].index);
                for (auto e : s) all.insert(e.index);
            }
            CHECK(all.size() == occurrences(infer_type(f, th).source).size());
            CHECK(std::set<std::size_t>(all.begin(), all.end()).size() == all.size());
        }
}

TEST_CASE("check_star") {
    CHECK(check_star(A("t[x;y;z]"), mleq));
    CHECK(check_star(A("id{x<=y}"), mleq));
    CHECK_THROWS_AS(check_star(A("r[x] o del<{T}"), mleq), PreconditionNotRLess);
    std::size_t tried = 0;
    for (Theory th : Theory::all())
        for (std::uint64_t seed = 0; seed < 400; ++seed) {
            ArrowTerm f = random_term(th, 25, seed, {"x", "y", "z"});
            if (!is_r_less(f) || contains_product(infer_type(f, th).source)) continue;
            ++tried;
            INFO(print_arrow(f));
            CHECK(check_star(f, th));
        }
    CHECK(tried > 1000);
}

TEST_CASE("covered_conjunctions") {
    CHECK(covered_conjunctions(A("t[x;y;z]"), mleq) == std::vector<std::size_t>{0});
    CHECK(covered_conjunctions(A("id{x<=y /\\ y<=z}"), mleq).empty());
    ArrowTerm worked = A("(t[z;x;u] /\\ id{u==v}) o ((s[x;z] /\\ id{x==u}) /\\ id{u==v}) o "
                         "((t[x;y;z] /\\ id{x==u}) /\\ id{u==v})");
    CHECK(infer_type(worked, mequiv).source == F("((x==y /\\ y==z) /\\ x==u) /\\ u==v"));
    CHECK(covered_conjunctions(worked, mequiv) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("adjunction functors") {
    AdjunctionContext ctx("y", "z", mleq);
    CHECK(ctx.F(F("x<=x")) == F("y<=z /\\ x<=x"));
    CHECK(ctx.F(F("T")) == F("y<=z /\\ T"));
    ArrowTerm fr = ctx.F(A("r[x]"));
    CHECK(fr == A("id{y<=z} /\\ r[x]"));
    CHECK(infer_type(fr, mleq) == ArrowType{F("y<=z /\\ T"), F("y<=z /\\ x<=x")});
    CHECK_THROWS_AS(ctx.F(F("y<=x")), VariableYOccurs);

    CHECK(ctx.G(F("y<=u /\\ x<=x")) == F("z<=u /\\ x<=x"));
    CHECK(ctx.G(A("id{y<=u /\\ T}")) == A("id{z<=u /\\ T}"));
    CHECK(ctx.G(ctx.F(F("x<=w"))) == F("z<=z /\\ x<=w"));
    CHECK_THROWS_AS(ctx.G(F("u<=y /\\ T")), NotInSubcategory);
    CHECK_THROWS_AS(ctx.G(F("y<=u /\\ y<=v")), NotInSubcategory);
    CHECK(AdjunctionContext("y", "z", mequiv).G(F("u==y /\\ T")) == F("u==z /\\ T"));

    CHECK(ctx.unit(F("x<=x")) == A("(r[z] /\\ id{x<=x}) o sig<{x<=x}"));
    CHECK(infer_type(ctx.unit(F("x<=x")), mleq) == ArrowType{F("x<=x"), F("z<=z /\\ x<=x")});
    CHECK(infer_type(ctx.unit(F("T")), mleq) == ArrowType{F("T"), F("z<=z /\\ T")});
    CHECK(ctx.counit(F("y<=u /\\ T")) == A("(t[y;z;u] /\\ id{T}) o b>{y<=z; z<=u; T}"));
    CHECK(infer_type(ctx.counit(F("y<=u /\\ T")), mleq) == ArrowType{F("y<=z /\\ (z<=u /\\ T)"), F("y<=u /\\ T")});
    AdjunctionContext eq("y", "z", mequiv);
    CHECK(infer_type(eq.counit(F("u==y /\\ x==x")), mequiv) ==
          ArrowType{F("y==z /\\ (u==z /\\ x==x)"), F("u==y /\\ x==x")});
    CHECK_THROWS_AS(AdjunctionContext("y", "y", mleq), PreconditionError);
}

TEST_CASE("check_adjunction") {
    for (Theory th : Theory::all()) {
        AdjunctionContext ctx("y", "z", th);
        std::vector<Formula> objects{Formula::top()};
        std::vector<ArrowTerm> arrows;
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            ArrowTerm f = random_term(th, 12, seed, {"x", "z", "w"});
            arrows.push_back(f);
            ArrowType ty = infer_type(f, th);
            objects.push_back(ty.source);
            objects.push_back(ty.target);
        }
        auto report = check_adjunction(ctx, objects, arrows);
        for (const auto& c : report.checks) {
            INFO(th.name() << " " << c.name << " " << c.instance << " " << c.error);
            CHECK(c.passed);
        }
        CHECK(report.checks.size() > 100);
        auto names = std::set<std::string>();
        for (const auto& c : report.checks) names.insert(c.name);
        CHECK(names.count("r from unit") == 1);
        CHECK(names.count("t from counit (y-free)") == 1);
        CHECK(names.count("s from unit and counit") == (th.has_s() ? 1u : 0u));
        CHECK(report.json(ctx).find("\"passed\": true") != std::string::npos);
    }
}

TEST_CASE("middle_four") {
    Formula a = F("p<=q"), b = F("q<=r"), c = F("u<=v"), d = F("v<=w");
    ArrowTerm m = middle_four(a, b, c, d, sleq);
    CHECK(infer_type(m, sleq) == ArrowType{F("(p<=q /\\ q<=r) /\\ (u<=v /\\ v<=w)"),
                                           F("(p<=q /\\ u<=v) /\\ (q<=r /\\ v<=w)")});
    // Blocks A, B, C, D go to positions A, C, B, D.
    Diagram dm = eval(m, sleq);
    std::vector<std::size_t> block_target{0, 1, 4, 5, 2, 3, 6, 7};
    for (std::size_t i = 0; i < 8; ++i) CHECK(dm.mate(src(i)) == Endpoint{Side::Tgt, block_target[i]});

    ArrowTerm tops = middle_four(F("x<=y"), Formula::top(), Formula::top(), F("u<=v"), sleq);
    CHECK(eval(tops, sleq) == identity_diagram(F("x<=y /\\ u<=v")));
    CHECK_THROWS_AS(middle_four(a, b, c, d, mleq), GeneratorNotInTheory);

    // Both sides of (ta).
    ArrowTerm lhs = A("a[x;z;u;w] o (t[x;y;z] /\\ t[u;v;w])");
    ArrowTerm rhs = ArrowTerm::compose(
        A("t[(x . u);(y . v);(z . w)] o (a[x;y;u;v] /\\ a[y;z;v;w])"),
        middle_four(F("x<=y"), F("y<=z"), F("u<=v"), F("v<=w"), sdotleq));
    CHECK(decide_equal(lhs, rhs, sdotleq));
}
