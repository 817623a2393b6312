// Command-line front end. Verdicts of `eq`, `generality` and `star` are
// reported through the exit code; everything printed is informational.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lineq/analysis.hpp"
#include "lineq/errors.hpp"
#include "lineq/parse.hpp"
#include "lineq/rewrite.hpp"

using namespace lineq;
using json = nlohmann::ordered_json;

namespace {

struct Globals {
    std::string theory;
    std::string format = "json";
    std::uint64_t seed = 0;
    std::size_t size = 25;
    std::optional<std::size_t> budget;
};

json type_json(const ArrowType& t) { return {{"source", to_string(t.source)}, {"target", to_string(t.target)}}; }

json endpoint_json(Endpoint e) { return json::array({e.side == Side::Src ? "s" : "t", e.index}); }

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_type(const Globals& g, const std::string& text) {
    Theory th = Theory::from_name(g.theory);
    ArrowType t = infer_type(parse_arrow(text), th);
    if (g.format == "text")
        std::cout << to_string(t) << "\n";
    else
        emit(type_json(t));
    return 0;
}

int cmd_diagram(const Globals& g, const std::string& text) {
    Diagram d = eval(parse_arrow(text), Theory::from_name(g.theory));
    if (g.format == "dot")
        std::cout << diagram_dot(d);
    else if (g.format == "ascii" || g.format == "text")
        std::cout << diagram_ascii(d);
    else
        std::cout << diagram_json(d) << "\n";
    return 0;
}

int cmd_compare(const Globals& g, const std::string& a, const std::string& b, bool generality) {
    Theory th = Theory::from_name(g.theory);
    ArrowTerm f = parse_arrow(a), h = parse_arrow(b);
    bool verdict = generality ? same_generality(f, h, th) : decide_equal(f, h, th);
    emit({{generality ? "same_generality" : "equal", verdict}});
    return verdict ? 0 : 1;
}

int cmd_normalize(const Globals& g, const std::string& text, const std::string& pass) {
    Theory th = Theory::from_name(g.theory);
    ArrowTerm f = parse_arrow(text);
    json out{{"pass", pass}};
    const Derivation* d = nullptr;
    NormalForm nf;
    RNormalForm rn;
    if (pass == "develop") {
        nf = develop(f, th, g.budget);
    } else if (pass == "ds") {
        nf = delta_sigma_purge(f, th, g.budget);
    } else if (pass == "s") {
        nf = s_normal(f, th, g.budget);
    } else {
        rn = r_normal(f, th, g.budget);
        out["f_r"] = print_arrow(rn.f_r);
        out["f_prime"] = print_arrow(rn.f_prime);
        out["result"] = print_arrow(rn.derivation.result());
        d = &rn.derivation;
    }
    if (!d) {
        out["result"] = print_arrow(nf.term);
        d = &nf.derivation;
    }
    out["steps"] = d->steps.size();
    out["derivation"] = json::parse(d->to_json());
    emit(out);
    return 0;
}

int cmd_diversify(const Globals& g, const std::string& text) {
    Theory th = Theory::from_name(g.theory);
    Diversified d = diversify(parse_arrow(text), th);
    json rho = json::object();
    for (const auto& [from, to] : d.renaming.entries()) rho[from] = to;
    emit({{"term", print_arrow(d.term)}, {"type", type_json(infer_type(d.term, th))}, {"renaming", rho}});
    return 0;
}

const char* mode_name(InstanceMode m) {
    switch (m) {
    case InstanceMode::Distinct: return "distinct";
    case InstanceMode::Equal: return "equal";
    case InstanceMode::Mixed: return "mixed";
    case InstanceMode::Nested: return "nested";
    }
    return "";
}

int cmd_axioms(const Globals& g) {
    Theory th = Theory::from_name(g.theory);
    json rows = json::array();
    bool all = true;
    for (const auto& schema : equation_table(th))
        for (InstanceMode m : {InstanceMode::Distinct, InstanceMode::Equal, InstanceMode::Mixed, InstanceMode::Nested}) {
            auto inst = instantiate_schema(th, schema.name, m);
            if (!inst) continue;
            bool types = infer_type(inst->lhs, th) == infer_type(inst->rhs, th);
            bool diagrams = eval(inst->lhs, th) == eval(inst->rhs, th);
            all = all && types && diagrams;
            rows.push_back({{"schema", schema.name},
                            {"mode", mode_name(m)},
                            {"lhs", print_arrow(inst->lhs)},
                            {"rhs", print_arrow(inst->rhs)},
                            {"pass", types && diagrams}});
        }
    if (g.format == "text") {
        for (const auto& r : rows)
            std::printf("%-12s %-9s %s\n", r["schema"].get<std::string>().c_str(), r["mode"].get<std::string>().c_str(),
                        r["pass"].get<bool>() ? "pass" : "FAIL");
    } else {
        emit({{"theory", th.name()}, {"rows", rows}, {"passed", all}});
    }
    return all ? 0 : 1;
}

int cmd_adjoint(const Globals& g, const std::string& y, const std::string& z, std::size_t arrows) {
    Theory th = Theory::from_name(g.theory);
    AdjunctionContext ctx(y, z, th);
    std::vector<ArrowTerm> sample;
    for (std::size_t i = 0; i < arrows; ++i) sample.push_back(random_term(th, g.size, g.seed + i, {"x", "u", z}));
    auto report = check_adjunction(ctx, enumerate_objects(th, {"x", "u"}, 3), sample);
    std::cout << report.json(ctx) << "\n";
    return report.passed() ? 0 : 1;
}

int cmd_fuzz(const Globals& g, std::size_t n, std::size_t steps) {
    Theory th = Theory::from_name(g.theory);
    std::size_t failures = 0, max_loops = 0;
    json failed = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        ArrowTerm f = random_term(th, g.size, g.seed + i, {"x", "y", "z"});
        Derivation walk = random_walk(f, th, steps, g.seed + i);
        max_loops = std::max(max_loops, eval(f, th).loops_discarded());
        for (const auto& s : walk.steps) max_loops = std::max(max_loops, eval(s.term, th).loops_discarded());
        if (!decide_equal(f, walk.result(), th)) {
            ++failures;
            failed.push_back(g.seed + i);
        }
    }
    emit({{"theory", th.name()},
          {"walks", n},
          {"steps", steps},
          {"failures", failures},
          {"failed_seeds", failed},
          {"max_loops_discarded", max_loops}});
    return failures == 0 ? 0 : 1;
}

int cmd_star(const Globals& g, const std::string& text) {
    Theory th = Theory::from_name(g.theory);
    ArrowTerm f = parse_arrow(text);
    bool ok = check_star(f, th);
    json seqs = json::array();
    for (const auto& s : maximal_sequences(f, th)) {
        json one = json::array();
        for (Endpoint e : s) one.push_back(endpoint_json(e));
        seqs.push_back(one);
    }
    emit({{"star", ok}, {"maximal_sequences", seqs}});
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coherence checks for the lineq calculi"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--theory", g.theory, "m-leq, s-leq, m-equiv, s-equiv, sdot-leq or sdot-equiv")
        ->required()
        ->check(CLI::IsMember({"m-leq", "s-leq", "m-equiv", "s-equiv", "sdot-leq", "sdot-equiv"}));
    app.add_option("--format", g.format, "json, text, dot or ascii")
        ->check(CLI::IsMember({"json", "text", "dot", "ascii"}));
    app.add_option("--seed", g.seed, "Base seed for sampled terms");
    app.add_option("--size", g.size, "AST size bound for sampled terms");
    app.add_option("--budget", g.budget, "Rewrite step budget (default 10*size^2)");

    std::string a, b, pass = "develop", y = "y", z = "z";
    std::size_t n = 100, steps = 20, arrows = 100;
    std::function<int()> run;

    auto* type = app.add_subcommand("type", "Infer the type of a term");
    type->add_option("term", a)->required();
    type->callback([&] { run = [&] { return cmd_type(g, a); }; });

    auto* diagram = app.add_subcommand("diagram", "Evaluate a term to its diagram");
    diagram->add_option("term", a)->required();
    diagram->callback([&] { run = [&] { return cmd_diagram(g, a); }; });

    auto* eq = app.add_subcommand("eq", "Exit 0 iff the terms are equal");
    eq->add_option("f", a)->required();
    eq->add_option("g", b)->required();
    eq->callback([&] { run = [&] { return cmd_compare(g, a, b, false); }; });

    auto* gen = app.add_subcommand("generality", "Exit 0 iff the terms are equally general");
    gen->add_option("f", a)->required();
    gen->add_option("g", b)->required();
    gen->callback([&] { run = [&] { return cmd_compare(g, a, b, true); }; });

    auto* norm = app.add_subcommand("normalize", "Run a normal-form pass and print its derivation");
    norm->add_option("term", a)->required();
    norm->add_option("--pass", pass)->check(CLI::IsMember({"develop", "r", "ds", "s"}));
    norm->callback([&] { run = [&] { return cmd_normalize(g, a, pass); }; });

    auto* div = app.add_subcommand("diversify", "Most general instance of a term");
    div->add_option("term", a)->required();
    div->callback([&] { run = [&] { return cmd_diversify(g, a); }; });

    auto* ax = app.add_subcommand("axioms", "Check every equation schema on sample instances");
    ax->callback([&] { run = [&] { return cmd_axioms(g); }; });

    auto* adj = app.add_subcommand("adjoint", "Check the F -| G adjunction on samples");
    adj->add_option("--y", y);
    adj->add_option("--z", z);
    adj->add_option("--arrows", arrows, "Number of sampled arrows");
    adj->callback([&] { run = [&] { return cmd_adjoint(g, y, z, arrows); }; });

    auto* fuzz = app.add_subcommand("fuzz", "Random rewrite walks must preserve the diagram");
    fuzz->add_option("--n", n);
    fuzz->add_option("--steps", steps);
    fuzz->callback([&] { run = [&] { return cmd_fuzz(g, n, steps); }; });

    auto* star = app.add_subcommand("star", "Check the closure property of an r-less term");
    star->add_option("term", a)->required();
    star->callback([&] { run = [&] { return cmd_star(g, a); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    try {
        return run();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code();
    }
}
