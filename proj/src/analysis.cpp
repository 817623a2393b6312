#include "lineq/analysis.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include <json.hpp>

#include "lineq/errors.hpp"
#include "lineq/parse.hpp"
#include "lineq/rewrite.hpp"

namespace lineq {

bool decide_equal(const ArrowTerm& f, const ArrowTerm& g, Theory theory) {
    return infer_type(f, theory) == infer_type(g, theory) && eval(f, theory) == eval(g, theory);
}

namespace {

// Variable occurrences of a generator's indices, formulas first.
std::vector<Variable> index_variables(const ArrowTerm& g) {
    std::vector<Variable> out;
    for (const auto& a : g.formulas())
        for (auto& v : occurrences(a)) out.push_back(v);
    for (const auto& t : g.terms())
        for (auto& v : occurrences(t)) out.push_back(v);
    return out;
}

ArrowTerm relabel_generator(const ArrowTerm& g, const std::vector<Variable>& labels) {
    std::size_t pos = 0;
    std::vector<Formula> fs;
    std::vector<Term> ts;
    for (const auto& a : g.formulas()) fs.push_back(relabel(a, labels, pos));
    for (const auto& t : g.terms()) ts.push_back(relabel(t, labels, pos));
    return ArrowTerm::generator(g.kind(), std::move(fs), std::move(ts));
}

// For each local position of `g` (source occurrences, then target), the
// index occurrence it comes from.
std::vector<std::size_t> position_origins(const ArrowTerm& g, Relation rel) {
    std::vector<Variable> marks;
    for (std::size_t i = 0, n = index_variables(g).size(); i < n; ++i) marks.push_back(std::to_string(i));
    ArrowType ty = generator_type(relabel_generator(g, marks), rel);
    std::vector<std::size_t> out;
    for (const auto& v : occurrences(ty.source)) out.push_back(std::stoul(v));
    for (const auto& v : occurrences(ty.target)) out.push_back(std::stoul(v));
    return out;
}

ArrowTerm rebuild(const ArrowTerm& f, Path& path, const std::map<Path, const GeneratorTrace*>& traces,
                  const std::vector<Variable>& wire_name, Relation rel) {
    if (f.is_generator()) {
        const GeneratorTrace& tr = *traces.at(path);
        std::vector<Variable> labels = index_variables(f);
        auto origins = position_origins(f, rel);
        for (std::size_t p = 0; p < origins.size(); ++p) labels[origins[p]] = wire_name[tr.wires[p]];
        return relabel_generator(f, labels);
    }
    const bool tensor = f.is_tensor();
    path.push_back(tensor ? Step::TensorLeft : Step::ComposeLeft);
    ArrowTerm l = rebuild(f.left(), path, traces, wire_name, rel);
    path.back() = tensor ? Step::TensorRight : Step::ComposeRight;
    ArrowTerm r = rebuild(f.right(), path, traces, wire_name, rel);
    path.pop_back();
    return tensor ? ArrowTerm::tensor(l, r) : ArrowTerm::compose(l, r);
}

} // namespace

Diversified diversify(const ArrowTerm& f, Theory theory) {
    TracedDiagram td = eval_traced(f, theory);
    const Diagram& d = td.diagram;
    const auto& edges = d.edges();

    std::map<Endpoint, std::size_t> edge_of;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        edge_of[edges[i].first] = i;
        edge_of[edges[i].second] = i;
    }
    std::vector<Variable> wire_name(td.wire_count);
    Diversified out;
    std::size_t fresh = 0;
    auto name = [&](std::size_t wire, const Variable& original) {
        if (!wire_name[wire].empty()) return;
        wire_name[wire] = "v" + std::to_string(++fresh);
        out.renaming.set(wire_name[wire], original);
    };
    for (std::size_t i = 0; i < d.source().size(); ++i) name(edge_of.at({Side::Src, i}), d.source()[i]);
    for (std::size_t i = 0; i < d.target().size(); ++i) name(edge_of.at({Side::Tgt, i}), d.target()[i]);

    // Closed loops only live inside the term.
    std::map<std::size_t, Variable> loop_label;
    std::map<Path, const GeneratorTrace*> traces;
    for (const auto& g : td.generators) {
        traces[g.path] = &g;
        if (std::none_of(g.wires.begin(), g.wires.end(), [&](std::size_t w) { return w >= edges.size(); }))
            continue;
        const ArrowTerm& gen = subterm_at(f, g.path);
        std::vector<Variable> orig = index_variables(gen);
        auto origins = position_origins(gen, theory.relation());
        for (std::size_t p = 0; p < origins.size(); ++p)
            if (g.wires[p] >= edges.size()) loop_label.emplace(g.wires[p], orig[origins[p]]);
    }
    for (const auto& [wire, label] : loop_label) name(wire, label);

    Path path;
    out.term = rebuild(f, path, traces, wire_name, theory.relation());
    return out;
}

bool same_generality(const ArrowTerm& f, const ArrowTerm& g, Theory theory) {
    ArrowType tf = infer_type(f, theory), tg = infer_type(g, theory);
    if (tf != tg) throw TypeMismatch("types differ: " + to_string(tf) + " vs " + to_string(tg));
    return eval(f, theory) == eval(g, theory);
}

namespace {

struct AtomSpan {
    std::size_t begin, middle, end; // lhs occurrences [begin, middle), rhs [middle, end)
};

void atom_spans(const Formula& a, std::size_t& pos, std::vector<AtomSpan>& out) {
    switch (a.kind()) {
    case Formula::Kind::Top: return;
    case Formula::Kind::Atom: {
        std::size_t b = pos, m = b + occurrences(a.lhs()).size();
        pos = m + occurrences(a.rhs()).size();
        out.push_back({b, m, pos});
        return;
    }
    case Formula::Kind::Conj:
        atom_spans(a.left(), pos, out);
        atom_spans(a.right(), pos, out);
    }
}

std::vector<AtomSpan> atom_spans(const Formula& a) {
    std::vector<AtomSpan> out;
    std::size_t pos = 0;
    atom_spans(a, pos, out);
    return out;
}

void require_r_less(const ArrowTerm& f) {
    if (!is_r_less(f)) throw PreconditionNotRLess(print_arrow(f) + " contains r");
}

} // namespace

std::vector<MaximalSequence> maximal_sequences(const ArrowTerm& f, Theory theory) {
    require_r_less(f);
    ArrowType ty = infer_type(f, theory);
    if (contains_product(ty.source))
        throw PreconditionError("maximal sequences need variable atoms in the source of " + print_arrow(f));
    Diagram d = eval(f, theory);
    const std::size_t n = d.source().size();

    // Source atoms occupy consecutive pairs of positions.
    auto partner = [](std::size_t i) { return i ^ 1; };
    auto cup = [&](std::size_t i) -> std::optional<std::size_t> {
        Endpoint m = d.mate({Side::Src, i});
        if (m.side == Side::Tgt) return std::nullopt;
        return m.index;
    };

    std::vector<MaximalSequence> out;
    std::vector<bool> seen(n, false);
    for (std::size_t first = 0; first < n; ++first) {
        if (seen[first]) continue;
        std::vector<std::size_t> members;
        for (std::vector<std::size_t> todo{first}; !todo.empty();) {
            std::size_t i = todo.back();
            todo.pop_back();
            if (seen[i]) continue;
            seen[i] = true;
            members.push_back(i);
            todo.push_back(partner(i));
            if (auto c = cup(i)) todo.push_back(*c);
        }
        // Start from an end leaving to the target, preferring the left side
        // of an atom; a closed cycle starts from its least member.
        std::vector<std::size_t> ends;
        for (std::size_t i : members)
            if (!cup(i)) ends.push_back(i);
        std::sort(ends.begin(), ends.end());
        std::size_t start = *std::min_element(members.begin(), members.end());
        if (!ends.empty()) {
            auto left = std::find_if(ends.begin(), ends.end(), [](std::size_t i) { return i % 2 == 0; });
            start = left != ends.end() ? *left : ends.front();
        }
        MaximalSequence seq;
        for (std::size_t cur = start;;) {
            seq.push_back({Side::Src, cur});
            seq.push_back({Side::Src, partner(cur)});
            auto next = cup(partner(cur));
            if (!next || *next == start) break;
            cur = *next;
        }
        out.push_back(std::move(seq));
    }
    return out;
}

bool check_star(const ArrowTerm& f, Theory theory) {
    auto sequences = maximal_sequences(f, theory);
    Diagram d = eval(f, theory);
    auto atoms = atom_spans(infer_type(f, theory).target);
    for (const auto& seq : sequences) {
        std::set<std::size_t> reached;
        for (Endpoint u : seq)
            if (Endpoint m = d.mate(u); m.side == Side::Tgt) reached.insert(m.index);
        auto hits = [&](std::size_t b, std::size_t e) {
            auto it = reached.lower_bound(b);
            return it != reached.end() && *it < e;
        };
        for (const auto& a : atoms)
            if (hits(a.begin, a.middle) != hits(a.middle, a.end)) return false;
    }
    return true;
}

namespace {

struct ConjSpan {
    std::size_t begin, middle, end;
};

// Conjunctions in infix order with the occurrence ranges of their sides.
void conj_spans(const Formula& a, std::size_t& pos, std::vector<ConjSpan>& out) {
    if (!a.is_conj()) {
        pos += occurrences(a).size();
        return;
    }
    std::size_t begin = pos;
    conj_spans(a.left(), pos, out);
    std::size_t slot = out.size();
    out.push_back({begin, pos, 0});
    conj_spans(a.right(), pos, out);
    out[slot].end = pos;
}

} // namespace

std::vector<std::size_t> covered_conjunctions(const ArrowTerm& f, Theory theory) {
    ArrowType ty = infer_type(f, theory);
    Diagram d = eval(f, theory);
    std::vector<ConjSpan> spans;
    std::size_t pos = 0;
    conj_spans(ty.source, pos, spans);
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < spans.size(); ++k) {
        const auto& s = spans[k];
        bool covered = std::any_of(d.edges().begin(), d.edges().end(), [&](const Edge& e) {
            if (e.second.side != Side::Src) return false;
            std::size_t i = e.first.index, j = e.second.index;
            return s.begin <= i && i < s.middle && s.middle <= j && j < s.end;
        });
        if (covered) out.push_back(k);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Adjunction

namespace {

bool occurs(const Formula& a, const Variable& v) {
    auto occ = occurrences(a);
    return std::find(occ.begin(), occ.end(), v) != occ.end();
}

bool occurs(const Term& t, const Variable& v) {
    auto occ = occurrences(t);
    return std::find(occ.begin(), occ.end(), v) != occ.end();
}

Term var(const Variable& v) { return Term::variable(v); }

} // namespace

AdjunctionContext::AdjunctionContext(Variable y_, Variable z_, Theory theory_)
    : y(std::move(y_)), z(std::move(z_)), theory(theory_) {
    if (y == z) throw PreconditionError("the adjunction needs two distinct variables, got " + y + " twice");
}

Formula AdjunctionContext::F(const Formula& a) const {
    if (occurs(a, y)) throw VariableYOccurs(y + " occurs in " + to_string(a));
    return Formula::conj(Formula::atom(theory.relation(), var(y), var(z)), a);
}

ArrowTerm AdjunctionContext::F(const ArrowTerm& f) const {
    ArrowType ty = infer_type(f, theory);
    F(ty.source);
    F(ty.target);
    return ArrowTerm::tensor(ArrowTerm::id(Formula::atom(theory.relation(), var(y), var(z))), f);
}

namespace {

// y R u ∧ A (or u ≡ y ∧ A): returns whether y is on the right.
bool subcategory_shape(const Formula& b, const Variable& y, Theory theory) {
    auto reject = [&] { return NotInSubcategory(to_string(b) + " is not of the form " + y + " R u /\\ A"); };
    if (!b.is_conj() || !b.left().is_atom() || occurs(b.right(), y)) throw reject();
    const Formula& head = b.left();
    const Term y_term = Term::variable(y);
    if (head.lhs() == y_term && !occurs(head.rhs(), y)) return false;
    if (theory.relation() == Relation::Equiv && head.rhs() == y_term && !occurs(head.lhs(), y)) return true;
    throw reject();
}

} // namespace

Formula AdjunctionContext::G(const Formula& b) const {
    subcategory_shape(b, y, theory);
    return rename_formula(b, Renaming{{y, z}});
}

ArrowTerm AdjunctionContext::G(const ArrowTerm& f) const {
    ArrowType ty = infer_type(f, theory);
    subcategory_shape(ty.source, y, theory);
    subcategory_shape(ty.target, y, theory);
    return rename_arrow(f, Renaming{{y, z}});
}

ArrowTerm AdjunctionContext::unit(const Formula& a) const {
    if (occurs(a, y)) throw VariableYOccurs(y + " occurs in " + to_string(a));
    return ArrowTerm::compose(ArrowTerm::tensor(ArrowTerm::refl(var(z)), ArrowTerm::id(a)), ArrowTerm::sigma_bwd(a));
}

ArrowTerm AdjunctionContext::counit(const Formula& b) const {
    const bool flipped = subcategory_shape(b, y, theory);
    const Relation rel = theory.relation();
    const Formula& head = b.left();
    const Formula& rest = b.right();
    const Term u = flipped ? head.lhs() : head.rhs();
    const Formula y_z = Formula::atom(rel, var(y), var(z));
    if (!flipped) {
        return ArrowTerm::compose(ArrowTerm::tensor(ArrowTerm::trans(var(y), var(z), u), ArrowTerm::id(rest)),
                                  ArrowTerm::b_fwd(y_z, Formula::atom(rel, var(z), u), rest));
    }
    // u ≡ y ∧ A: F(G(B)) = y ≡ z ∧ (u ≡ z ∧ A); turn both atoms around t.
    ArrowTerm head_arrow = ArrowTerm::compose(
        ArrowTerm::inv(var(y), u),
        ArrowTerm::compose(ArrowTerm::trans(var(y), var(z), u), ArrowTerm::tensor(ArrowTerm::id(y_z), ArrowTerm::inv(u, var(z)))));
    return ArrowTerm::compose(ArrowTerm::tensor(head_arrow, ArrowTerm::id(rest)),
                              ArrowTerm::b_fwd(y_z, Formula::atom(rel, u, var(z)), rest));
}

bool AdjunctionReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string AdjunctionReport::json(const AdjunctionContext& ctx) const {
    nlohmann::ordered_json j;
    j["theory"] = ctx.theory.name();
    j["y"] = ctx.y;
    j["z"] = ctx.z;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json item;
        item["name"] = c.name;
        item["instance"] = c.instance;
        item["verdict"] = c.passed;
        if (!c.error.empty()) item["error"] = c.error;
        arr.push_back(std::move(item));
    }
    j["checks"] = std::move(arr);
    j["passed"] = passed();
    return j.dump(2);
}

std::vector<Formula> enumerate_objects(Theory theory, const std::vector<Variable>& vars, std::size_t max_atoms) {
    // by_leaves[n]: formulas with exactly n leaves.
    std::vector<std::vector<Formula>> by_leaves(max_atoms + 1);
    if (max_atoms == 0) return {};
    by_leaves[1].push_back(Formula::top());
    for (const auto& a : vars)
        for (const auto& b : vars) by_leaves[1].push_back(Formula::atom(theory.relation(), var(a), var(b)));
    for (std::size_t n = 2; n <= max_atoms; ++n)
        for (std::size_t k = 1; k < n; ++k)
            for (const auto& l : by_leaves[k])
                for (const auto& r : by_leaves[n - k]) by_leaves[n].push_back(Formula::conj(l, r));
    std::vector<Formula> out;
    for (auto& level : by_leaves) out.insert(out.end(), level.begin(), level.end());
    return out;
}

AdjunctionReport check_adjunction(const AdjunctionContext& ctx, const std::vector<Formula>& objects,
                                  const std::vector<ArrowTerm>& arrows) {
    AdjunctionReport report;
    const Theory th = ctx.theory;
    const Relation rel = th.relation();
    auto atom = [&](const Variable& a, const Variable& b) { return Formula::atom(rel, var(a), var(b)); };
    auto check = [&](std::string name, std::string instance, auto&& lhs, auto&& rhs) {
        CheckResult c;
        c.name = std::move(name);
        c.instance = std::move(instance);
        try {
            c.passed = decide_equal(lhs(), rhs(), th);
        } catch (const Error& e) {
            c.error = e.what();
        }
        report.checks.push_back(std::move(c));
    };

    // A variable other than y and z for the second slot of F-shaped objects.
    auto other = [&](std::initializer_list<const char*> pool) {
        for (const char* v : pool)
            if (v != ctx.y && v != ctx.z) return Variable(v);
        return Variable("w0");
    };
    const Variable u = other({"u", "w", "x1"});
    const Variable v = other({"v", "x2", "x3"});
    auto compose = [](const ArrowTerm& g, const ArrowTerm& f) { return ArrowTerm::compose(g, f); };
    auto tensor = [](const ArrowTerm& f, const ArrowTerm& g) { return ArrowTerm::tensor(f, g); };
    auto id = [](const Formula& a) { return ArrowTerm::id(a); };

    for (const Formula& a : objects) {
        if (occurs(a, ctx.y)) continue;
        const std::string inst = "A = " + to_string(a);
        check("triangle (F side)", inst, [&] { return compose(ctx.counit(ctx.F(a)), ctx.F(ctx.unit(a))); },
              [&] { return id(ctx.F(a)); });
        std::vector<Formula> shapes{Formula::conj(atom(ctx.y, u), a)};
        if (rel == Relation::Equiv) shapes.push_back(Formula::conj(atom(u, ctx.y), a));
        for (const Formula& b : shapes)
            check("triangle (G side)", "B = " + to_string(b),
                  [&] { return compose(ctx.G(ctx.counit(b)), ctx.unit(ctx.G(b))); }, [&] { return id(ctx.G(b)); });
        check("unit from unit at T", inst, [&] { return ctx.unit(a); },
              [&] {
                  ArrowTerm r = compose(ArrowTerm::delta_fwd(atom(ctx.z, ctx.z)), ctx.unit(Formula::top()));
                  return compose(tensor(r, id(a)), ArrowTerm::sigma_bwd(a));
              });
    }

    for (const ArrowTerm& f : arrows) {
        ArrowType ty;
        try {
            ty = infer_type(f, th);
        } catch (const Error&) {
            continue;
        }
        if (occurs(ty.source, ctx.y) || occurs(ty.target, ctx.y)) continue;
        const std::string inst = "f = " + print_arrow(f);
        check("unit naturality", inst, [&] { return compose(ctx.G(ctx.F(f)), ctx.unit(ty.source)); },
              [&] { return compose(ctx.unit(ty.target), f); });
        const ArrowTerm g = tensor(id(atom(ctx.y, u)), f);
        const Formula b = Formula::conj(atom(ctx.y, u), ty.source), b2 = Formula::conj(atom(ctx.y, u), ty.target);
        check("counit naturality", "g = " + print_arrow(g), [&] { return compose(g, ctx.counit(b)); },
              [&] { return compose(ctx.counit(b2), ctx.F(ctx.G(g))); });
    }

    check("r from unit", "r[" + ctx.z + "]",
          [&] { return compose(ArrowTerm::delta_fwd(atom(ctx.z, ctx.z)), ctx.unit(Formula::top())); },
          [&] { return ArrowTerm::refl(var(ctx.z)); });
    auto t_from_counit = [&](const Variable& head) {
        ArrowTerm phi = ctx.counit(Formula::conj(atom(ctx.y, u), Formula::top()));
        if (head != ctx.y) phi = rename_arrow(phi, Renaming{{ctx.y, head}});
        return compose(ArrowTerm::delta_fwd(atom(head, u)),
                       compose(phi, tensor(id(atom(head, ctx.z)), ArrowTerm::delta_bwd(atom(ctx.z, u)))));
    };
    check("t from counit", "t[" + ctx.y + ";" + ctx.z + ";" + u + "]", [&] { return t_from_counit(ctx.y); },
          [&] { return ArrowTerm::trans(var(ctx.y), var(ctx.z), var(u)); });
    check("t from counit (y-free)", "t[" + v + ";" + ctx.z + ";" + u + "]", [&] { return t_from_counit(v); },
          [&] { return ArrowTerm::trans(var(v), var(ctx.z), var(u)); });
    if (th.has_s()) {
        check("s from unit and counit", "s[" + ctx.y + ";" + ctx.z + "]",
              [&] {
                  ArrowTerm phi = ctx.counit(Formula::conj(atom(ctx.z, ctx.y), Formula::top()));
                  return compose(ArrowTerm::delta_fwd(atom(ctx.z, ctx.y)),
                                 compose(phi, compose(tensor(id(atom(ctx.y, ctx.z)), ctx.unit(Formula::top())),
                                                      ArrowTerm::delta_bwd(atom(ctx.y, ctx.z)))));
              },
              [&] { return ArrowTerm::inv(var(ctx.y), var(ctx.z)); });
    }
    return report;
}

ArrowTerm middle_four(const Formula& a, const Formula& b, const Formula& c, const Formula& d, Theory theory) {
    if (!theory.symmetric()) throw GeneratorNotInTheory("c", theory.name());
    using T = ArrowTerm;
    T inner = T::compose(T::b_bwd(c, b, d), T::compose(T::tensor(T::sym(b, c), T::id(d)), T::b_fwd(b, c, d)));
    return T::compose(T::b_fwd(a, c, Formula::conj(b, d)),
                      T::compose(T::tensor(T::id(a), inner), T::b_bwd(a, b, Formula::conj(c, d))));
}

} // namespace lineq
