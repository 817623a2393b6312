#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <random>
#include <unordered_map>

#include <json.hpp>

#include "cursor.hpp"
#include "lineq/errors.hpp"
#include "lineq/parse.hpp"
#include "lineq/rewrite.hpp"

namespace lineq {

std::string to_string(Direction d) { return d == Direction::L2R ? "L2R" : "R2L"; }

Direction direction_from_string(const std::string& s) {
    if (s == "L2R") return Direction::L2R;
    if (s == "R2L") return Direction::R2L;
    throw std::invalid_argument("bad direction '" + s + "'");
}

namespace {

// ---------------------------------------------------------------- patterns

struct FPat;
using FPatPtr = std::shared_ptr<const FPat>;
struct FPat {
    enum class Kind { Meta, Top, Atom, Conj } kind;
    std::string meta;
    Term lhs, rhs;
    FPatPtr left, right;
};

struct APat;
using APatPtr = std::shared_ptr<const APat>;
struct APat {
    enum class Kind { Meta, Gen, Compose, Tensor } kind;
    std::string meta;
    ArrowKind gen = ArrowKind::Id;
    std::vector<FPatPtr> formulas;
    std::vector<Term> terms;
    APatPtr left, right;
};

struct Typing {
    std::string arrow;
    FPatPtr source, target;
};

struct CompiledSchema {
    std::string name;
    APatPtr lhs, rhs;
    std::vector<Typing> typing;
};

struct GenSpec {
    std::string_view name;
    ArrowKind kind;
    int formulas;
    int terms;
};

constexpr GenSpec kGens[] = {
    {"id", ArrowKind::Id, 1, 0},         {"b>", ArrowKind::BFwd, 3, 0},
    {"b<", ArrowKind::BBwd, 3, 0},       {"del>", ArrowKind::DeltaFwd, 1, 0},
    {"del<", ArrowKind::DeltaBwd, 1, 0}, {"sig>", ArrowKind::SigmaFwd, 1, 0},
    {"sig<", ArrowKind::SigmaBwd, 1, 0}, {"c", ArrowKind::Sym, 2, 0},
    {"r", ArrowKind::Refl, 0, 1},        {"t", ArrowKind::Trans, 0, 3},
    {"s", ArrowKind::Inv, 0, 2},         {"a", ArrowKind::Cong, 0, 4},
};

class PatternParser {
public:
    explicit PatternParser(std::string_view text) : cur_(text) {}

    void finish() {
        if (!cur_.at_end()) cur_.fail("end of pattern");
    }

    Term term() {
        if (cur_.accept("(")) {
            Term l = term();
            cur_.expect(".");
            Term r = term();
            cur_.expect(")");
            return Term::product(std::move(l), std::move(r));
        }
        return Term::variable(cur_.ident());
    }

    FPatPtr top_formula() {
        FPatPtr l = formula();
        if (!cur_.accept("/\\")) return l;
        return conj(l, formula());
    }

    FPatPtr formula() {
        if (cur_.peek() == '(') {
            std::size_t save = cur_.pos();
            try {
                cur_.expect("(");
                FPatPtr l = formula();
                cur_.expect("/\\");
                FPatPtr r = formula();
                cur_.expect(")");
                return conj(l, r);
            } catch (const ParseError&) {
                cur_.reset(save);
            }
            return atom();
        }
        std::size_t save = cur_.pos();
        std::string id = cur_.ident();
        if (id == "T") return std::make_shared<FPat>(FPat{FPat::Kind::Top, {}, {}, {}, {}, {}});
        if (cur_.lookahead("<=") || cur_.lookahead("==")) {
            cur_.reset(save);
            return atom();
        }
        return std::make_shared<FPat>(FPat{FPat::Kind::Meta, id, {}, {}, {}, {}});
    }

    FPatPtr atom() {
        Term l = term();
        if (!cur_.accept("<=") && !cur_.accept("==")) cur_.fail("relation");
        Term r = term();
        return std::make_shared<FPat>(FPat{FPat::Kind::Atom, {}, l, r, {}, {}});
    }

    APatPtr arrow() {
        APatPtr g = tensor();
        if (cur_.peek_ident() == "o") {
            cur_.ident();
            return node(APat::Kind::Compose, g, arrow());
        }
        return g;
    }

    APatPtr tensor() {
        APatPtr f = primary();
        if (!cur_.accept("/\\")) return f;
        return node(APat::Kind::Tensor, f, primary());
    }

    APatPtr primary() {
        if (cur_.accept("(")) {
            APatPtr f = arrow();
            cur_.expect(")");
            return f;
        }
        std::string id = cur_.ident();
        std::string full = id;
        if (cur_.lookahead(">") || cur_.lookahead("<")) {
            full += cur_.peek();
            cur_.accept(std::string(1, full.back()));
        }
        for (const auto& g : kGens) {
            if (g.name != full) continue;
            if (!cur_.lookahead("{") && !cur_.lookahead("[")) break;
            auto p = std::make_shared<APat>();
            p->kind = APat::Kind::Gen;
            p->gen = g.kind;
            if (g.formulas) {
                cur_.expect("{");
                for (int i = 0; i < g.formulas; ++i) {
                    if (i) cur_.expect(";");
                    p->formulas.push_back(top_formula());
                }
                cur_.expect("}");
            } else {
                cur_.expect("[");
                for (int i = 0; i < g.terms; ++i) {
                    if (i) cur_.expect(";");
                    p->terms.push_back(term());
                }
                cur_.expect("]");
            }
            return p;
        }
        if (full != id) cur_.fail("generator");
        auto p = std::make_shared<APat>();
        p->kind = APat::Kind::Meta;
        p->meta = id;
        return p;
    }

    Typing typing() {
        Typing t;
        t.arrow = cur_.ident();
        cur_.expect(":");
        t.source = top_formula();
        cur_.expect("|-");
        t.target = top_formula();
        return t;
    }

private:
    static FPatPtr conj(FPatPtr l, FPatPtr r) {
        return std::make_shared<FPat>(FPat{FPat::Kind::Conj, {}, {}, {}, std::move(l), std::move(r)});
    }
    static APatPtr node(APat::Kind k, APatPtr l, APatPtr r) {
        auto p = std::make_shared<APat>();
        p->kind = k;
        p->left = std::move(l);
        p->right = std::move(r);
        return p;
    }

    detail::Cursor cur_;
};

// ---------------------------------------------------------------- matching

struct Binding {
    std::map<std::string, Formula> formulas;
    std::map<std::string, Term> terms;
    std::map<std::string, ArrowTerm> arrows;
};

template <class Map, class Value>
bool bind(Map& m, const std::string& key, const Value& v) {
    auto [it, fresh] = m.emplace(key, v);
    return fresh || it->second == v;
}

bool match(const Term& pat, const Term& v, Binding& b) {
    if (pat.is_variable()) return bind(b.terms, pat.name(), v);
    return v.is_product() && match(pat.left(), v.left(), b) && match(pat.right(), v.right(), b);
}

bool match(const FPat& pat, const Formula& v, Binding& b) {
    switch (pat.kind) {
    case FPat::Kind::Meta: return bind(b.formulas, pat.meta, v);
    case FPat::Kind::Top: return v.is_top();
    case FPat::Kind::Atom: return v.is_atom() && match(pat.lhs, v.lhs(), b) && match(pat.rhs, v.rhs(), b);
    case FPat::Kind::Conj: return v.is_conj() && match(*pat.left, v.left(), b) && match(*pat.right, v.right(), b);
    }
    return false;
}

bool match(const APat& pat, const ArrowTerm& v, Binding& b) {
    switch (pat.kind) {
    case APat::Kind::Meta: return bind(b.arrows, pat.meta, v);
    case APat::Kind::Compose: return v.is_compose() && match(*pat.left, v.left(), b) && match(*pat.right, v.right(), b);
    case APat::Kind::Tensor: return v.is_tensor() && match(*pat.left, v.left(), b) && match(*pat.right, v.right(), b);
    case APat::Kind::Gen:
        if (v.kind() != pat.gen) return false;
        for (std::size_t i = 0; i < pat.formulas.size(); ++i)
            if (!match(*pat.formulas[i], v.formulas()[i], b)) return false;
        for (std::size_t i = 0; i < pat.terms.size(); ++i)
            if (!match(pat.terms[i], v.terms()[i], b)) return false;
        return true;
    }
    return false;
}

struct Unbound {};

Term build(const Term& pat, const Binding& b) {
    if (pat.is_variable()) {
        auto it = b.terms.find(pat.name());
        if (it == b.terms.end()) throw Unbound{};
        return it->second;
    }
    return Term::product(build(pat.left(), b), build(pat.right(), b));
}

Formula build(const FPat& pat, const Binding& b, Relation rel) {
    switch (pat.kind) {
    case FPat::Kind::Meta: {
        auto it = b.formulas.find(pat.meta);
        if (it == b.formulas.end()) throw Unbound{};
        return it->second;
    }
    case FPat::Kind::Top: return Formula::top();
    case FPat::Kind::Atom: return Formula::atom(rel, build(pat.lhs, b), build(pat.rhs, b));
    case FPat::Kind::Conj: return Formula::conj(build(*pat.left, b, rel), build(*pat.right, b, rel));
    }
    return {};
}

ArrowTerm build(const APat& pat, const Binding& b, Relation rel) {
    switch (pat.kind) {
    case APat::Kind::Meta: {
        auto it = b.arrows.find(pat.meta);
        if (it == b.arrows.end()) throw Unbound{};
        return it->second;
    }
    case APat::Kind::Compose: return ArrowTerm::compose(build(*pat.left, b, rel), build(*pat.right, b, rel));
    case APat::Kind::Tensor: return ArrowTerm::tensor(build(*pat.left, b, rel), build(*pat.right, b, rel));
    case APat::Kind::Gen: {
        std::vector<Formula> fs;
        for (const auto& f : pat.formulas) fs.push_back(build(*f, b, rel));
        std::vector<Term> ts;
        for (const auto& t : pat.terms) ts.push_back(build(t, b));
        return ArrowTerm::generator(pat.gen, std::move(fs), std::move(ts));
    }
    }
    return {};
}

// Binds metavariables through the typing side conditions.
bool resolve_typing(const CompiledSchema& s, Binding& b, Theory theory) {
    for (const auto& t : s.typing) {
        auto it = b.arrows.find(t.arrow);
        if (it == b.arrows.end()) continue;
        ArrowType type;
        try {
            type = infer_type(it->second, theory);
        } catch (const TypeError&) {
            return false;
        }
        if (!match(*t.source, type.source, b) || !match(*t.target, type.target, b)) return false;
    }
    return true;
}

std::optional<ArrowTerm> try_schema(const CompiledSchema& s, Direction dir, const ArrowTerm& sub,
                                    const ArrowType& sub_type, Theory theory) {
    const APat& from = dir == Direction::L2R ? *s.lhs : *s.rhs;
    const APat& to = dir == Direction::L2R ? *s.rhs : *s.lhs;
    Binding b;
    if (!match(from, sub, b) || !resolve_typing(s, b, theory)) return std::nullopt;
    ArrowTerm out;
    try {
        out = build(to, b, theory.relation());
    } catch (const Unbound&) {
        return std::nullopt;
    }
    try {
        if (!(infer_type(out, theory) == sub_type)) return std::nullopt;
    } catch (const TypeError&) {
        return std::nullopt;
    }
    return out;
}

// ---------------------------------------------------------------- tables

const std::vector<EquationSchema>& base_schemas() {
    static const std::vector<EquationSchema> table = {
        {"cat1L", "id{B} o f", "f", {"f : A |- B"}},
        {"cat1R", "f o id{A}", "f", {"f : A |- B"}},
        {"cat2", "(h o g) o f", "h o g o f", {}},
        {"and1", "id{A} /\\ id{B}", "id{A /\\ B}", {}},
        {"and2", "(g1 o f1) /\\ (g2 o f2)", "(g1 /\\ g2) o (f1 /\\ f2)", {}},
        {"b nat", "((f /\\ g) /\\ h) o b>{A; B; C}", "b>{D; E; F} o (f /\\ (g /\\ h))",
         {"f : A |- D", "g : B |- E", "h : C |- F"}},
        {"delta nat", "f o del>{A}", "del>{D} o (f /\\ id{T})", {"f : A |- D"}},
        {"sigma nat", "f o sig>{A}", "sig>{D} o (id{T} /\\ f)", {"f : A |- D"}},
        {"bb1", "b<{A; B; C} o b>{A; B; C}", "id{A /\\ (B /\\ C)}", {}},
        {"bb2", "b>{A; B; C} o b<{A; B; C}", "id{(A /\\ B) /\\ C}", {}},
        {"b5", "b>{A /\\ B; C; D} o b>{A; B; C /\\ D}",
         "(b>{A; B; C} /\\ id{D}) o b>{A; B /\\ C; D} o (id{A} /\\ b>{B; C; D})", {}},
        {"deltadelta1", "del<{A} o del>{A}", "id{A /\\ T}", {}},
        {"deltadelta2", "del>{A} o del<{A}", "id{A}", {}},
        {"sigmasigma1", "sig<{A} o sig>{A}", "id{T /\\ A}", {}},
        {"sigmasigma2", "sig>{A} o sig<{A}", "id{A}", {}},
        {"bdeltasigma", "b>{A; T; C}", "(del<{A} /\\ id{C}) o (id{A} /\\ sig>{C})", {}},
        {"rtdelta", "t[x;y;y] o (id{x<=y} /\\ r[y])", "del>{x<=y}", {}},
        {"rtsigma", "t[y;y;x] o (r[y] /\\ id{y<=x})", "sig>{y<=x}", {}},
        {"tb", "t[x;y;u] o (id{x<=y} /\\ t[y;z;u])",
         "t[x;z;u] o (t[x;y;z] /\\ id{z<=u}) o b>{x<=y; y<=z; z<=u}", {}},
    };
    return table;
}

const std::vector<EquationSchema>& symmetric_schemas() {
    static const std::vector<EquationSchema> table = {
        {"c nat", "(g /\\ f) o c{A; B}", "c{D; E} o (f /\\ g)", {"f : A |- D", "g : B |- E"}},
        {"cc", "c{B; A} o c{A; B}", "id{A /\\ B}", {}},
        {"bc", "c{A; B /\\ C}", "b>{B; C; A} o (id{B} /\\ c{A; C}) o b<{B; A; C} o (c{A; B} /\\ id{C}) o b>{A; B; C}",
         {}},
    };
    return table;
}

const std::vector<EquationSchema>& inverse_schemas() {
    static const std::vector<EquationSchema> table = {
        {"ss", "s[y;x] o s[x;y]", "id{x<=y}", {}},
        {"rs", "s[x;x] o r[x]", "r[x]", {}},
    };
    return table;
}

const EquationSchema kTs{"ts", "s[x;z] o t[x;y;z]", "t[z;y;x] o (s[y;z] /\\ s[x;y]) o c{x<=y; y<=z}", {}};

const std::vector<EquationSchema>& dotted_schemas() {
    static const std::vector<EquationSchema> table = {
        {"ra", "a[t;t;s;s] o (r[t] /\\ r[s]) o del<{T}", "r[(t . s)]", {}},
        {"ta", "a[t1;r1;t2;r2] o (t[t1;s1;r1] /\\ t[t2;s2;r2])",
         "t[(t1 . t2);(s1 . s2);(r1 . r2)] o (a[t1;s1;t2;s2] /\\ a[s1;r1;s2;r2]) o "
         "b>{t1<=s1; t2<=s2; s1<=r1 /\\ s2<=r2} o "
         "(id{t1<=s1} /\\ (b<{t2<=s2; s1<=r1; s2<=r2} o (c{s1<=r1; t2<=s2} /\\ id{s2<=r2}) o "
         "b>{s1<=r1; t2<=s2; s2<=r2})) o b<{t1<=s1; s1<=r1; t2<=s2 /\\ s2<=r2}",
         {}},
    };
    return table;
}

const EquationSchema kSa{"sa", "s[(t1 . t2);(s1 . s2)] o a[t1;s1;t2;s2]", "a[s1;t1;s2;t2] o (s[t1;s1] /\\ s[t2;s2])",
                         {}};

std::vector<EquationSchema> build_table(Theory theory) {
    std::vector<EquationSchema> out = base_schemas();
    auto add = [&](const std::vector<EquationSchema>& more) { out.insert(out.end(), more.begin(), more.end()); };
    if (theory.symmetric()) add(symmetric_schemas());
    if (theory.has_s()) add(inverse_schemas());
    if (theory.has_s() && theory.symmetric()) out.push_back(kTs);
    if (theory.dotted()) add(dotted_schemas());
    if (theory.dotted() && theory.has_s()) out.push_back(kSa);
    return out;
}

CompiledSchema compile(const EquationSchema& s) {
    CompiledSchema c;
    c.name = s.name;
    PatternParser lhs(s.lhs);
    c.lhs = lhs.arrow();
    lhs.finish();
    PatternParser rhs(s.rhs);
    c.rhs = rhs.arrow();
    rhs.finish();
    for (const auto& t : s.typing) {
        PatternParser p(t);
        c.typing.push_back(p.typing());
        p.finish();
    }
    return c;
}

struct Tables {
    std::array<std::vector<EquationSchema>, 6> plain;
    std::array<std::vector<CompiledSchema>, 6> compiled;
};

const Tables& tables() {
    static const Tables t = [] {
        Tables out;
        for (Theory th : Theory::all()) {
            auto i = static_cast<std::size_t>(th.id());
            out.plain[i] = build_table(th);
            for (const auto& s : out.plain[i]) out.compiled[i].push_back(compile(s));
        }
        return out;
    }();
    return t;
}

const std::vector<CompiledSchema>& compiled_table(Theory theory) {
    return tables().compiled[static_cast<std::size_t>(theory.id())];
}

const CompiledSchema& find_schema(Theory theory, const std::string& name) {
    for (const auto& s : compiled_table(theory))
        if (s.name == name) return s;
    throw SchemaNotInTheory("equation '" + name + "' is not in the table of " + theory.name());
}

void collect_rewrites(const ArrowTerm& root, const ArrowTerm& sub, Path& path, Theory theory, std::size_t max_size,
                      std::vector<Rewrite>& out) {
    ArrowType type = infer_type(sub, theory);
    for (const auto& s : compiled_table(theory))
        for (Direction d : {Direction::L2R, Direction::R2L}) {
            auto r = try_schema(s, d, sub, type, theory);
            if (!r) continue;
            if (root.size() - sub.size() + r->size() > max_size) continue;
            out.push_back({s.name, path, d, replace_at(root, path, *r)});
        }
    if (sub.is_generator()) return;
    bool comp = sub.is_compose();
    path.push_back(comp ? Step::ComposeLeft : Step::TensorLeft);
    collect_rewrites(root, sub.left(), path, theory, max_size, out);
    path.back() = comp ? Step::ComposeRight : Step::TensorRight;
    collect_rewrites(root, sub.right(), path, theory, max_size, out);
    path.pop_back();
}

} // namespace

const std::vector<EquationSchema>& equation_table(Theory theory) {
    return tables().plain[static_cast<std::size_t>(theory.id())];
}

bool has_schema(Theory theory, const std::string& name) {
    const auto& t = equation_table(theory);
    return std::any_of(t.begin(), t.end(), [&](const EquationSchema& s) { return s.name == name; });
}

ArrowTerm apply_equation(const ArrowTerm& f, const std::string& name, const Path& path, Direction dir,
                         Theory theory) {
    const CompiledSchema& s = find_schema(theory, name);
    const ArrowTerm* sub;
    try {
        sub = &subterm_at(f, path);
    } catch (const std::out_of_range&) {
        throw NoMatchAtPath("path " + to_string(path) + " does not resolve in " + print_arrow(f));
    }
    auto out = try_schema(s, dir, *sub, infer_type(*sub, theory), theory);
    if (!out)
        throw NoMatchAtPath("'" + name + "' " + to_string(dir) + " does not apply at " + to_string(path) + " to " +
                            print_arrow(*sub));
    return replace_at(f, path, std::move(*out));
}

std::vector<Rewrite> all_rewrites(const ArrowTerm& f, Theory theory, std::size_t max_size) {
    std::vector<Rewrite> out;
    Path path;
    collect_rewrites(f, f, path, theory, max_size, out);
    return out;
}

namespace {

struct Metas {
    std::vector<std::string> terms, formulas, arrows;
    void add(std::vector<std::string>& v, const std::string& name) {
        if (std::find(v.begin(), v.end(), name) == v.end()) v.push_back(name);
    }
    void collect(const Term& t) {
        if (t.is_variable()) return add(terms, t.name());
        collect(t.left());
        collect(t.right());
    }
    void collect(const FPat& p) {
        switch (p.kind) {
        case FPat::Kind::Meta: return add(formulas, p.meta);
        case FPat::Kind::Top: return;
        case FPat::Kind::Atom: collect(p.lhs), collect(p.rhs); return;
        case FPat::Kind::Conj: collect(*p.left), collect(*p.right); return;
        }
    }
    void collect(const APat& p) {
        switch (p.kind) {
        case APat::Kind::Meta: return add(arrows, p.meta);
        case APat::Kind::Gen:
            for (const auto& f : p.formulas) collect(*f);
            for (const auto& t : p.terms) collect(t);
            return;
        default: collect(*p.left), collect(*p.right);
        }
    }
};

// Metavariables composed in sequence, innermost first, per composition spine.
void compose_chains(const APat& p, std::vector<std::vector<std::string>>& out) {
    switch (p.kind) {
    case APat::Kind::Meta:
    case APat::Kind::Gen: return;
    case APat::Kind::Tensor:
        compose_chains(*p.left, out);
        compose_chains(*p.right, out);
        return;
    case APat::Kind::Compose: {
        std::vector<const APat*> items;
        auto flatten = [&](auto&& self, const APat& q) -> void {
            if (q.kind != APat::Kind::Compose) return items.push_back(&q);
            self(self, *q.right);
            self(self, *q.left);
        };
        flatten(flatten, p);
        std::vector<std::string> chain;
        for (const APat* q : items) {
            if (q->kind == APat::Kind::Meta) {
                chain.push_back(q->meta);
                continue;
            }
            if (chain.size() > 1) out.push_back(chain);
            chain.clear();
            compose_chains(*q, out);
        }
        if (chain.size() > 1) out.push_back(chain);
    }
    }
}

} // namespace

std::optional<SchemaInstance> instantiate_schema(Theory theory, const std::string& name, InstanceMode mode) {
    const CompiledSchema& s = find_schema(theory, name);
    if (mode == InstanceMode::Nested && !theory.dotted()) return std::nullopt;
    Metas m;
    m.collect(*s.lhs);
    m.collect(*s.rhs);
    const Relation rel = theory.relation();
    auto v = [](const std::string& n) { return Term::variable(n); };
    auto atom = [&](Term a, Term b) { return Formula::atom(rel, std::move(a), std::move(b)); };
    auto numbered = [](const char* stem, std::size_t k) { return stem + std::to_string(k + 1); };
    auto nested = [&](std::size_t k) {
        return Term::product(Term::product(v(numbered("p", k)), v(numbered("q", k))), v(numbered("u", k)));
    };

    Binding b;
    for (std::size_t k = 0; k < m.arrows.size(); ++k) {
        ArrowTerm a;
        switch (mode) {
        case InstanceMode::Distinct:
            a = ArrowTerm::trans(v(numbered("a", k)), v(numbered("b", k)), v(numbered("c", k)));
            break;
        case InstanceMode::Equal: a = ArrowTerm::trans(v("x"), v("x"), v("x")); break;
        case InstanceMode::Mixed:
            a = k % 2 == 0 ? ArrowTerm::refl(v("x")) : ArrowTerm::delta_fwd(atom(v("x"), v("y")));
            break;
        case InstanceMode::Nested: a = ArrowTerm::trans(nested(k), v(numbered("b", k)), nested(k + 7)); break;
        }
        b.arrows.emplace(m.arrows[k], a);
    }
    // Later arrows of a composite start where the previous one ends.
    std::vector<std::vector<std::string>> chains;
    compose_chains(*s.lhs, chains);
    for (const auto& chain : chains)
        for (std::size_t i = 1; i < chain.size(); ++i) {
            Formula end = infer_type(b.arrows.at(chain[i - 1]), theory).target;
            b.arrows[chain[i]] = end.is_conj() && end.right().is_top() ? ArrowTerm::delta_fwd(end.left())
                                                                       : ArrowTerm::delta_bwd(end);
        }
    if (!resolve_typing(s, b, theory)) return std::nullopt;
    for (std::size_t k = 0; k < m.formulas.size(); ++k) {
        Formula f;
        switch (mode) {
        case InstanceMode::Distinct: f = atom(v(numbered("f", k)), v(numbered("g", k))); break;
        case InstanceMode::Equal: f = atom(v("x"), v("x")); break;
        case InstanceMode::Mixed:
            f = k % 3 == 0   ? Formula::top()
                : k % 3 == 1 ? Formula::conj(atom(v("x"), v("y")), atom(v("y"), v("x")))
                             : atom(v("y"), v("y"));
            break;
        case InstanceMode::Nested: f = atom(nested(k + 3), v(numbered("g", k))); break;
        }
        b.formulas.emplace(m.formulas[k], f);
    }
    for (std::size_t k = 0; k < m.terms.size(); ++k) {
        Term t;
        switch (mode) {
        case InstanceMode::Distinct: t = v(numbered("v", k)); break;
        case InstanceMode::Equal: t = v("x"); break;
        case InstanceMode::Mixed: t = v(k % 2 == 0 ? "x" : "y"); break;
        case InstanceMode::Nested: t = nested(k); break;
        }
        b.terms.emplace(m.terms[k], t);
    }
    SchemaInstance out;
    try {
        out.lhs = build(*s.lhs, b, rel);
        out.rhs = build(*s.rhs, b, rel);
        infer_type(out.lhs, theory);
        infer_type(out.rhs, theory);
    } catch (const Unbound&) {
        return std::nullopt;
    } catch (const TypeError&) {
        return std::nullopt;
    }
    return out;
}

Derivation random_walk(const ArrowTerm& f, Theory theory, std::size_t steps, std::uint64_t seed,
                       std::size_t max_size) {
    std::mt19937_64 rng(seed);
    Derivation d{f, {}};
    for (std::size_t i = 0; i < steps; ++i) {
        auto options = all_rewrites(d.result(), theory, max_size);
        if (options.empty()) break;
        auto& pick = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
        d.steps.push_back({pick.eq, pick.path, pick.dir, pick.result});
    }
    return d;
}

std::string Derivation::to_json() const {
    nlohmann::ordered_json steps_json = nlohmann::ordered_json::array();
    for (const auto& s : steps) {
        nlohmann::ordered_json path = nlohmann::ordered_json::array();
        for (Step st : s.path) path.push_back(to_string(st));
        steps_json.push_back({{"eq", s.eq}, {"path", path}, {"dir", to_string(s.dir)}, {"term", print_arrow(s.term)}});
    }
    return steps_json.dump();
}

bool replay(const Derivation& d, Theory theory) {
    ArrowTerm cur = d.start;
    for (const auto& s : d.steps) {
        try {
            cur = apply_equation(cur, s.eq, s.path, s.dir, theory);
        } catch (const Error&) {
            return false;
        }
        if (cur != s.term) return false;
    }
    return true;
}

Derivation reversed(const Derivation& d) {
    Derivation out;
    out.start = d.result();
    for (std::size_t i = d.steps.size(); i-- > 0;) {
        const ArrowTerm& before = i == 0 ? d.start : d.steps[i - 1].term;
        out.steps.push_back({d.steps[i].eq, d.steps[i].path, flip(d.steps[i].dir), before});
    }
    return out;
}

std::optional<Derivation> find_derivation(const ArrowTerm& f, const ArrowTerm& g, Theory theory,
                                          std::size_t max_size, std::size_t max_states) {
    if (f == g) return Derivation{f, {}};
    struct Visit {
        std::string parent;
        DerivationStep step; // step from parent to this term
    };
    using Side = std::unordered_map<std::string, Visit>;
    Side fwd, bwd;
    std::deque<ArrowTerm> fq{f}, bq{g};
    fwd.emplace(print_arrow(f), Visit{});
    bwd.emplace(print_arrow(g), Visit{});

    // Steps from the root of `side` to `key`, in order.
    auto chain = [](const Side& side, std::string key) {
        std::vector<DerivationStep> steps;
        for (;;) {
            const Visit& v = side.at(key);
            if (v.parent.empty()) break;
            steps.push_back(v.step);
            key = v.parent;
        }
        std::reverse(steps.begin(), steps.end());
        return steps;
    };
    auto join = [&](const std::string& meet) {
        Derivation d{f, chain(fwd, meet)};
        Derivation back{g, chain(bwd, meet)};
        for (auto& s : reversed(back).steps) d.steps.push_back(s);
        return d;
    };

    while ((!fq.empty() || !bq.empty()) && fwd.size() + bwd.size() < max_states) {
        bool forward = !fq.empty() && (bq.empty() || fq.size() <= bq.size());
        auto& queue = forward ? fq : bq;
        Side& mine = forward ? fwd : bwd;
        Side& other = forward ? bwd : fwd;
        // Expand one whole layer.
        for (std::size_t n = queue.size(); n > 0; --n) {
            ArrowTerm cur = queue.front();
            queue.pop_front();
            std::string key = print_arrow(cur);
            for (auto& r : all_rewrites(cur, theory, max_size)) {
                std::string next = print_arrow(r.result);
                if (mine.count(next)) continue;
                mine.emplace(next, Visit{key, {r.eq, r.path, r.dir, r.result}});
                if (other.count(next)) return join(next);
                queue.push_back(r.result);
            }
        }
    }
    return std::nullopt;
}

Session::Session(ArrowTerm start, Theory theory, std::size_t budget)
    : theory_(theory), budget_(budget), derivation_{std::move(start), {}} {}

void Session::apply(const std::string& eq, const Path& path, Direction dir) {
    if (charged_ >= budget_) throw BudgetExceeded("step budget of " + std::to_string(budget_) + " exhausted");
    ++charged_;
    ArrowTerm next = apply_equation(term(), eq, path, dir, theory_);
    derivation_.steps.push_back({eq, path, dir, std::move(next)});
}

void Session::splice_lemma(const Path& path, const Derivation& local) {
    if (charged_ >= budget_) throw BudgetExceeded("step budget of " + std::to_string(budget_) + " exhausted");
    ++charged_;
    for (const auto& s : local.steps) {
        Path full = path;
        full.insert(full.end(), s.path.begin(), s.path.end());
        derivation_.steps.push_back(
            {s.eq, full, s.dir, apply_equation(term(), s.eq, full, s.dir, theory_)});
    }
}

void Session::splice(const Path& path, const Derivation& local) {
    for (const auto& s : local.steps) {
        Path full = path;
        full.insert(full.end(), s.path.begin(), s.path.end());
        apply(s.eq, full, s.dir);
    }
}

} // namespace lineq
