// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 only
// if every criterion passes. Limits and sample counts are pinned below.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lineq/analysis.hpp"
#include "lineq/errors.hpp"
#include "lineq/parse.hpp"
#include "lineq/rewrite.hpp"

using namespace lineq;

namespace {

constexpr double kAxiomSeconds = 5.0;
constexpr double kFunctorSeconds = 30.0;
constexpr double kCompletenessSeconds = 60.0;
constexpr std::size_t kFunctorTerms = 1000;
constexpr std::size_t kWalkSeeds = 200;
constexpr std::size_t kWalkSteps = 20;
constexpr std::size_t kNormalFormTerms = 500;
constexpr std::size_t kTermSize = 25;
constexpr std::size_t kEnumSize = 6;
constexpr std::size_t kSearchSize = 10;
constexpr std::size_t kSearchStates = 100000;
constexpr std::size_t kAdjointArrows = 100;
constexpr std::size_t kLoopTerms = 10000;

const std::vector<Variable> kVars{"x", "y", "z"};

struct Verdict {
    bool pass = true;
    std::string detail;
};

ArrowTerm A(const std::string& s) { return parse_arrow(s); }

// ------------------------------------------------------------- oracles

// Path-following composition written independently of the library: wires
// of f and g meet at the shared interface; follow each outer endpoint to
// its partner, count closed loops among interface points.
struct Composed {
    Diagram diagram;
    std::size_t new_loops = 0;
};

Composed oracle_compose(const Diagram& g, const Diagram& f) {
    const std::size_t a = f.source().size(), b = f.target().size(), c = g.target().size();
    // Nodes: [0,a) f-source, [a,a+b) interface, [a+b,a+b+c) g-target.
    auto f_node = [&](Endpoint e) { return e.side == Side::Src ? e.index : a + e.index; };
    auto g_node = [&](Endpoint e) { return e.side == Side::Src ? a + e.index : a + b + e.index; };
    std::vector<std::size_t> via_f(a + b + c, SIZE_MAX), via_g(a + b + c, SIZE_MAX);
    for (const auto& [p, q] : f.edges()) via_f[f_node(p)] = f_node(q), via_f[f_node(q)] = f_node(p);
    for (const auto& [p, q] : g.edges()) via_g[g_node(p)] = g_node(q), via_g[g_node(q)] = g_node(p);
    auto outer = [&](std::size_t n) { return n < a || n >= a + b; };
    auto endpoint = [&](std::size_t n) {
        return n < a ? Endpoint{Side::Src, n} : Endpoint{Side::Tgt, n - a - b};
    };
    std::vector<bool> used(a + b + c, false);
    std::vector<Edge> edges;
    for (std::size_t start = 0; start < a + b + c; ++start) {
        if (!outer(start) || used[start]) continue;
        std::size_t cur = start;
        bool on_f = start < a;
        used[cur] = true;
        for (;;) {
            cur = on_f ? via_f[cur] : via_g[cur];
            used[cur] = true;
            if (outer(cur)) break;
            on_f = !on_f;
        }
        Endpoint p = endpoint(start), q = endpoint(cur);
        edges.push_back(p < q ? Edge{p, q} : Edge{q, p});
    }
    std::size_t loops = 0;
    for (std::size_t start = a; start < a + b; ++start) {
        if (used[start]) continue;
        ++loops;
        for (std::size_t cur = start; !used[cur];) {
            used[cur] = true;
            std::size_t next = via_f[cur];
            used[next] = true;
            cur = via_g[next];
        }
    }
    return {Diagram(f.source(), g.target(), edges, f.loops_discarded() + g.loops_discarded() + loops), loops};
}

Diagram oracle_tensor(const Diagram& d1, const Diagram& d2) {
    auto shift = [&](Endpoint e) {
        return Endpoint{e.side, e.index + (e.side == Side::Src ? d1.source().size() : d1.target().size())};
    };
    std::vector<Edge> edges(d1.edges().begin(), d1.edges().end());
    for (const auto& [p, q] : d2.edges()) edges.push_back({shift(p), shift(q)});
    std::vector<Variable> src = d1.source(), tgt = d1.target();
    src.insert(src.end(), d2.source().begin(), d2.source().end());
    tgt.insert(tgt.end(), d2.target().begin(), d2.target().end());
    return Diagram(src, tgt, edges, d1.loops_discarded() + d2.loops_discarded());
}

Diagram oracle_identity(const Formula& a) {
    auto occ = occurrences(a);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < occ.size(); ++i) edges.push_back({{Side::Src, i}, {Side::Tgt, i}});
    return Diagram(occ, occ, edges);
}

bool preserved(const ArrowTerm& f, const ArrowTerm& g, const Derivation& d, Theory th) {
    return d.start == f && d.result() == g && infer_type(f, th) == infer_type(g, th) && eval(f, th) == eval(g, th) &&
           replay(d, th);
}

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

// ---------------------------------------------------------- criteria

Verdict axiom_soundness() {
    auto t0 = std::chrono::steady_clock::now();
    std::size_t schemas = 0, instances = 0, failures = 0, thin = 0;
    for (Theory th : Theory::all())
        for (const auto& s : equation_table(th)) {
            ++schemas;
            std::size_t here = 0;
            for (InstanceMode m :
                 {InstanceMode::Distinct, InstanceMode::Equal, InstanceMode::Mixed, InstanceMode::Nested}) {
                auto inst = instantiate_schema(th, s.name, m);
                if (!inst) continue;
                ++here;
                if (!(infer_type(inst->lhs, th) == infer_type(inst->rhs, th)) ||
                    !(eval(inst->lhs, th) == eval(inst->rhs, th)))
                    ++failures;
            }
            instances += here;
            if (here < 3) ++thin;
        }
    double secs = seconds_since(t0);
    std::ostringstream out;
    out << schemas << " schemas, " << instances << " instances, " << failures << " failures, " << thin
        << " schemas with < 3 instances, " << secs << " s";
    return {failures == 0 && thin == 0 && secs < kAxiomSeconds, out.str()};
}

Verdict figure_fidelity() {
    const std::vector<std::string> figures{"r", "t", "s", "c", "a", "rtdelta", "rtsigma", "tb"};
    std::size_t matched = 0, total = 0;
    std::string bad;
    for (const auto& name : figures) {
        std::ifstream in(std::string(LINEQ_GOLDEN_DIR) + "/" + name + ".json");
        auto j = nlohmann::json::parse(in);
        Theory th = Theory::from_name(j.at("theory"));
        Diagram want = diagram_from_json(j.at("diagram").dump());
        for (const auto& term : j.at("terms")) {
            ++total;
            if (eval(A(term.get<std::string>()), th) == want)
                ++matched;
            else
                bad += " " + name;
        }
    }
    return {matched == total, std::to_string(matched) + "/" + std::to_string(total) + " figure terms match" + bad};
}

// Checks every node of f against the oracle constructions.
bool functorial(const ArrowTerm& f, Theory th) {
    Diagram d = eval(f, th);
    if (!d.label_consistent()) return false;
    if (f.is_compose()) {
        if (!functorial(f.left(), th) || !functorial(f.right(), th)) return false;
        return d.identical(oracle_compose(eval(f.left(), th), eval(f.right(), th)).diagram);
    }
    if (f.is_tensor()) {
        if (!functorial(f.left(), th) || !functorial(f.right(), th)) return false;
        return d.identical(oracle_tensor(eval(f.left(), th), eval(f.right(), th)));
    }
    if (f.is_id()) return d.identical(oracle_identity(f.formulas()[0])) && d == identity_diagram(f.formulas()[0]);
    return true;
}

Verdict functoriality() {
    auto t0 = std::chrono::steady_clock::now();
    std::size_t ok = 0, total = 0;
    for (Theory th : Theory::all())
        for (std::uint64_t seed = 0; seed < kFunctorTerms; ++seed) {
            ++total;
            ok += functorial(random_term(th, kTermSize, seed, kVars), th);
        }
    double secs = seconds_since(t0);
    return {ok == total && secs < kFunctorSeconds,
            std::to_string(ok) + "/" + std::to_string(total) + " terms, " + std::to_string(secs) + " s"};
}

Verdict walk_soundness() {
    std::size_t ok = 0, total = 0, steps = 0;
    for (Theory th : Theory::all())
        for (std::uint64_t seed = 0; seed < kWalkSeeds; ++seed) {
            ArrowTerm f = random_term(th, kTermSize, seed, kVars);
            Derivation walk = random_walk(f, th, kWalkSteps, seed);
            ++total;
            steps += walk.steps.size();
            ok += decide_equal(f, walk.result(), th) && replay(walk, th);
        }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " walks (" + std::to_string(steps) +
                             " steps)"};
}

Verdict normal_forms() {
    std::map<std::string, std::pair<std::size_t, std::size_t>> tally; // pass -> (ok, tried)
    std::size_t r_ineligible = 0;
    std::string first_failure;
    auto record = [&](const std::string& pass, bool ok, const ArrowTerm& f, Theory th) {
        auto& [good, tried] = tally[pass];
        ++tried;
        good += ok;
        if (!ok && first_failure.empty()) first_failure = pass + " on " + print_arrow(f) + " in " + th.name();
    };
    auto guarded = [&](const std::string& pass, const ArrowTerm& f, Theory th, auto&& body) {
        try {
            record(pass, body(), f, th);
        } catch (const Error& e) {
            record(pass, false, f, th);
        }
    };
    for (Theory th : Theory::all())
        for (std::uint64_t seed = 0; seed < kNormalFormTerms; ++seed) {
            ArrowTerm f = random_term(th, kTermSize, seed, kVars);
            guarded("develop", f, th, [&] {
                auto nf = develop(f, th);
                return is_developed(nf.term) && preserved(f, nf.term, nf.derivation, th);
            });

            std::optional<RNormalForm> rn;
            try {
                rn = r_normal(f, th);
            } catch (const PreconditionError&) {
                ++r_ineligible; // no r-normal form in the dotted theories, see notes
            } catch (const Error&) {
                record("r_normal", false, f, th);
            }
            if (rn) {
                guarded("r_normal", f, th, [&] {
                    std::size_t caps = eval(f, th).caps(), width = 0;
                    for (const auto& g : factors(rn->f_r)) {
                        if (is_one_term(g)) continue;
                        const ArrowTerm* t = &g;
                        while (t->is_tensor()) t = t->left().is_id() ? &t->right() : &t->left();
                        width += occurrences(t->terms()[0]).size();
                    }
                    bool bijection = th.dotted() ? width == caps : count_kind(rn->f_r, ArrowKind::Refl) == caps;
                    return is_r_factorized(rn->f_r) && is_r_less(rn->f_prime) && is_developed(rn->f_prime) &&
                           bijection && preserved(f, ArrowTerm::compose(rn->f_r, rn->f_prime), rn->derivation, th);
                });
            }

            // Purge: the r-less part of the r-normal form, and f itself when r-less.
            std::vector<ArrowTerm> purge_inputs;
            if (rn) purge_inputs.push_back(rn->f_prime);
            if (is_r_less(f)) purge_inputs.push_back(f);
            for (const auto& p : purge_inputs) {
                ArrowType ty = infer_type(p, th);
                bool eligible = (!contains_top(ty.source) && !contains_top(ty.target)) ||
                                (ty.source.is_top() && ty.target.is_top());
                if (!eligible) continue;
                guarded("delta_sigma_purge", p, th, [&] {
                    auto nf = delta_sigma_purge(p, th);
                    return is_delta_sigma_less(nf.term) && is_r_less(nf.term) && preserved(p, nf.term, nf.derivation, th);
                });
            }

            if (th.has_s()) {
                ArrowTerm d = diversify(f, th).term;
                ArrowType ty = infer_type(d, th);
                if (!contains_product(ty.source) && !contains_product(ty.target))
                    guarded("s_normal", d, th, [&] {
                        auto nf = s_normal(d, th);
                        return is_s_normal(nf.term) && preserved(d, nf.term, nf.derivation, th);
                    });
            }
        }
    bool pass = true;
    std::ostringstream out;
    for (const auto& [name, counts] : tally) {
        out << name << " " << counts.first << "/" << counts.second << ", ";
        pass = pass && counts.first == counts.second;
    }
    out << r_ineligible << " r_normal inputs ineligible";
    if (!first_failure.empty()) out << "; first failure: " << first_failure;
    return {pass, out.str()};
}

std::size_t leaves(const Formula& a) { return a.is_conj() ? leaves(a.left()) + leaves(a.right()) : 1; }

// All M≤ terms over {x} up to kEnumSize nodes. A binary AST has an odd node
// count, and from a two-leaf source at most two compositions fit, so every
// intermediate object has at most four leaves.
std::vector<ArrowTerm> enumerate_terms(Theory th, const ArrowType& want) {
    constexpr std::size_t cap = 4;
    std::vector<Formula> objs = enumerate_objects(th, {"x"}, cap);
    std::vector<std::vector<std::pair<ArrowTerm, ArrowType>>> by_size(kEnumSize + 1);
    auto add_generator = [&](ArrowTerm g) {
        ArrowType t = infer_type(g, th);
        if (leaves(t.source) <= cap && leaves(t.target) <= cap) by_size[1].push_back({g, t});
    };
    for (const auto& a : objs) {
        add_generator(ArrowTerm::id(a));
        add_generator(ArrowTerm::delta_fwd(a));
        add_generator(ArrowTerm::delta_bwd(a));
        add_generator(ArrowTerm::sigma_fwd(a));
        add_generator(ArrowTerm::sigma_bwd(a));
        for (const auto& b : objs)
            for (const auto& c : objs)
                if (leaves(a) + leaves(b) + leaves(c) <= cap) {
                    add_generator(ArrowTerm::b_fwd(a, b, c));
                    add_generator(ArrowTerm::b_bwd(a, b, c));
                }
    }
    const Term x = Term::variable("x");
    add_generator(ArrowTerm::refl(x));
    add_generator(ArrowTerm::trans(x, x, x));
    for (std::size_t n = 3; n <= kEnumSize; n += 2)
        for (std::size_t i = 1; i + 1 < n; i += 2)
            for (const auto& [f, tf] : by_size[i])
                for (const auto& [g, tg] : by_size[n - 1 - i]) {
                    if (leaves(tf.source) + leaves(tg.source) <= cap && leaves(tf.target) + leaves(tg.target) <= cap)
                        by_size[n].push_back({ArrowTerm::tensor(f, g), {Formula::conj(tf.source, tg.source),
                                                                         Formula::conj(tf.target, tg.target)}});
                    if (tg.target == tf.source) by_size[n].push_back({ArrowTerm::compose(f, g), {tg.source, tf.target}});
                }
    std::vector<ArrowTerm> out;
    for (const auto& level : by_size)
        for (const auto& [f, t] : level)
            if (t == want) out.push_back(f);
    return out;
}

Verdict completeness() {
    auto t0 = std::chrono::steady_clock::now();
    const Theory th(TheoryId::MLeq);
    auto terms = enumerate_terms(th, {parse_formula("x<=x /\\ x<=x"), parse_formula("x<=x")});
    std::size_t pairs = 0, connected = 0;
    for (std::size_t i = 0; i < terms.size(); ++i)
        for (std::size_t j = i + 1; j < terms.size(); ++j) {
            if (!(eval(terms[i], th) == eval(terms[j], th))) continue;
            ++pairs;
            auto d = find_derivation(terms[i], terms[j], th, kSearchSize, kSearchStates);
            connected += d && replay(*d, th) && d->result() == terms[j];
        }
    double secs = seconds_since(t0);
    std::ostringstream out;
    out << terms.size() << " terms, " << connected << "/" << pairs << " diagram-equal pairs connected, " << secs
        << " s";
    return {connected == pairs && pairs > 0 && secs < kCompletenessSeconds, out.str()};
}

Verdict derivation_replay() {
    const Theory th(TheoryId::SEquiv);
    const std::vector<ArrowTerm> lines{
        A("t[x;y;y] o (id{x==y} /\\ r[y])"),
        A("s[y;x] o t[y;y;x] o c{y==x; y==y} o (s[x;y] /\\ s[y;y]) o (id{x==y} /\\ r[y])"),
        A("s[y;x] o t[y;y;x] o (r[y] /\\ s[x;y]) o c{x==y; T}"),
        A("s[y;x] o sig>{y==x} o (id{T} /\\ s[x;y]) o c{x==y; T}"),
        A("del>{x==y}"),
    };
    std::size_t ok = 0;
    for (std::size_t i = 0; i + 1 < lines.size(); ++i) ok += decide_equal(lines[i], lines[i + 1], th);
    ok += decide_equal(lines.front(), lines.back(), th);
    return {ok == 5, std::to_string(ok) + "/5 checks"};
}

Verdict adjunction() {
    std::size_t checks = 0, failed = 0;
    std::string first;
    for (Theory th : Theory::all()) {
        AdjunctionContext ctx("y", "z", th);
        std::vector<ArrowTerm> arrows;
        for (std::uint64_t seed = 0; seed < kAdjointArrows; ++seed)
            arrows.push_back(random_term(th, 12, seed, {"x", "u", "z"}));
        auto report = check_adjunction(ctx, enumerate_objects(th, {"x", "u"}, 3), arrows);
        for (const auto& c : report.checks) {
            ++checks;
            if (!c.passed) {
                ++failed;
                if (first.empty()) first = th.name() + " " + c.name + " " + c.instance + " " + c.error;
            }
        }
    }
    return {failed == 0 && checks > 0,
            std::to_string(checks - failed) + "/" + std::to_string(checks) + " checks" + (first.empty() ? "" : "; " + first)};
}

Verdict dotted_equations() {
    std::size_t ok = 0, total = 0;
    auto tally = [&](bool b) { ++total, ok += b; };
    const Theory leq(TheoryId::SDotLeq), equiv(TheoryId::SDotEquiv);
    for (const auto& [name, th] : std::vector<std::pair<std::string, Theory>>{{"ra", leq}, {"ta", leq}, {"sa", equiv}})
        for (InstanceMode m : {InstanceMode::Distinct, InstanceMode::Equal, InstanceMode::Mixed, InstanceMode::Nested}) {
            auto inst = instantiate_schema(th, name, m);
            tally(inst && decide_equal(inst->lhs, inst->rhs, th));
        }

    // The equation the coherence proof leans on, at variable and depth-2
    // product instances.
    auto essential = [&](const std::string& t1, const std::string& s1, const std::string& t2, const std::string& s2,
                         const std::string& r) {
        auto f = [&](const std::string& x) { return parse_formula(x); };
        ArrowTerm lhs = A("a[" + t1 + ";" + s1 + ";" + t2 + ";" + s2 + "] o (t[" + t1 + ";" + r + ";" + s1 +
                          "] /\\ id{" + t2 + "<=" + s2 + "})");
        ArrowTerm tail = A("id{" + t1 + "<=" + r + " /\\ " + r + "<=" + s1 + "} /\\ ((id{" + t2 + "<=" + s2 +
                           "} /\\ r[" + s2 + "]) o del<{" + t2 + "<=" + s2 + "})");
        ArrowTerm head = A("t[(" + t1 + " . " + t2 + ");(" + r + " . " + s2 + ");(" + s1 + " . " + s2 + ")] o (a[" +
                           t1 + ";" + r + ";" + t2 + ";" + s2 + "] /\\ a[" + r + ";" + s1 + ";" + s2 + ";" + s2 + "])");
        ArrowTerm cm = middle_four(f(t1 + "<=" + r), f(r + "<=" + s1), f(t2 + "<=" + s2), f(s2 + "<=" + s2), leq);
        ArrowTerm rhs = ArrowTerm::compose(head, ArrowTerm::compose(cm, tail));
        return decide_equal(lhs, rhs, leq);
    };
    tally(essential("x", "y", "u", "v", "w"));
    tally(essential("x", "x", "x", "x", "x"));
    tally(essential("x", "y", "x", "y", "z"));
    tally(essential("((x . y) . z)", "(u . (v . w))", "(p . q)", "((p . q) . r)", "x"));
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " instances"};
}

Verdict loop_diagnostic() {
    std::size_t max_loops = 0, terms = 0;
    for (std::uint64_t seed = 0; seed < kLoopTerms; ++seed) {
        Theory th = Theory::all()[seed % 6];
        ArrowTerm f = random_term(th, kTermSize, seed, kVars);
        ++terms;
        max_loops = std::max(max_loops, eval(f, th).loops_discarded());
    }
    // Construction: a cap closed by a cup leaves one loop; equality must
    // ignore it while identical() must not.
    Diagram cap({}, {"x", "x"}, {{{Side::Tgt, 0}, {Side::Tgt, 1}}});
    Diagram cup({"x", "x"}, {}, {{{Side::Src, 0}, {Side::Src, 1}}});
    Diagram looped = compose(cup, cap);
    Diagram empty({}, {}, {});
    bool insensitive = looped.loops_discarded() == 1 && looped == empty && !looped.identical(empty) &&
                       oracle_compose(cup, cap).new_loops == 1;
    return {insensitive, "max loops_discarded over " + std::to_string(terms) + " random terms: " +
                             std::to_string(max_loops) + "; loop-insensitive equality " +
                             (insensitive ? "confirmed" : "VIOLATED")};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"axiom soundness", axiom_soundness},
        {"figure fidelity", figure_fidelity},
        {"functoriality", functoriality},
        {"rewrite-walk soundness", walk_soundness},
        {"normal-form contracts", normal_forms},
        {"desk-scale completeness", completeness},
        {"derivation replay", derivation_replay},
        {"adjunction", adjunction},
        {"dotted equations", dotted_equations},
        {"loop diagnostic", loop_diagnostic},
    };
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        all = all && v.pass;
        std::printf("criterion %2zu %-24s %s  %s\n", i + 1, criteria[i].first, v.pass ? "PASS" : "FAIL",
                    v.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
