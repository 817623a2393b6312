#include "lineq/proofterm.hpp"

#include <stdexcept>

#include "lineq/errors.hpp"
#include "lineq/parse.hpp"

namespace lineq {

Relation Theory::relation() const {
    switch (id_) {
    case TheoryId::MEquiv:
    case TheoryId::SEquiv:
    case TheoryId::SDotEquiv:
        return Relation::Equiv;
    default:
        return Relation::Leq;
    }
}

bool Theory::symmetric() const { return id_ != TheoryId::MLeq && id_ != TheoryId::MEquiv; }
bool Theory::has_s() const { return relation() == Relation::Equiv; }
bool Theory::dotted() const { return id_ == TheoryId::SDotLeq || id_ == TheoryId::SDotEquiv; }

std::string Theory::name() const {
    switch (id_) {
    case TheoryId::MLeq: return "m-leq";
    case TheoryId::SLeq: return "s-leq";
    case TheoryId::MEquiv: return "m-equiv";
    case TheoryId::SEquiv: return "s-equiv";
    case TheoryId::SDotLeq: return "sdot-leq";
    case TheoryId::SDotEquiv: return "sdot-equiv";
    }
    return {};
}

Theory Theory::from_name(const std::string& name) {
    for (Theory t : all())
        if (t.name() == name) return t;
    throw std::invalid_argument("unknown theory '" + name + "'");
}

const std::array<Theory, 6>& Theory::all() {
    static const std::array<Theory, 6> theories = {
        Theory(TheoryId::MLeq),   Theory(TheoryId::SLeq),    Theory(TheoryId::MEquiv),
        Theory(TheoryId::SEquiv), Theory(TheoryId::SDotLeq), Theory(TheoryId::SDotEquiv)};
    return theories;
}

std::string to_string(ArrowKind k) {
    switch (k) {
    case ArrowKind::Id: return "id";
    case ArrowKind::BFwd: return "b>";
    case ArrowKind::BBwd: return "b<";
    case ArrowKind::DeltaFwd: return "del>";
    case ArrowKind::DeltaBwd: return "del<";
    case ArrowKind::SigmaFwd: return "sig>";
    case ArrowKind::SigmaBwd: return "sig<";
    case ArrowKind::Sym: return "c";
    case ArrowKind::Refl: return "r";
    case ArrowKind::Trans: return "t";
    case ArrowKind::Inv: return "s";
    case ArrowKind::Cong: return "a";
    case ArrowKind::Compose: return "o";
    case ArrowKind::Tensor: return "/\\";
    }
    return {};
}

ArrowTerm ArrowTerm::generator(ArrowKind kind, std::vector<Formula> formulas, std::vector<Term> terms) {
    ArrowTerm f;
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->formulas = std::move(formulas);
    node->terms = std::move(terms);
    f.node_ = std::move(node);
    return f;
}

ArrowTerm ArrowTerm::id(Formula a) { return generator(ArrowKind::Id, {std::move(a)}, {}); }
ArrowTerm ArrowTerm::b_fwd(Formula a, Formula b, Formula c) {
    return generator(ArrowKind::BFwd, {std::move(a), std::move(b), std::move(c)}, {});
}
ArrowTerm ArrowTerm::b_bwd(Formula a, Formula b, Formula c) {
    return generator(ArrowKind::BBwd, {std::move(a), std::move(b), std::move(c)}, {});
}
ArrowTerm ArrowTerm::delta_fwd(Formula a) { return generator(ArrowKind::DeltaFwd, {std::move(a)}, {}); }
ArrowTerm ArrowTerm::delta_bwd(Formula a) { return generator(ArrowKind::DeltaBwd, {std::move(a)}, {}); }
ArrowTerm ArrowTerm::sigma_fwd(Formula a) { return generator(ArrowKind::SigmaFwd, {std::move(a)}, {}); }
ArrowTerm ArrowTerm::sigma_bwd(Formula a) { return generator(ArrowKind::SigmaBwd, {std::move(a)}, {}); }
ArrowTerm ArrowTerm::sym(Formula a, Formula b) {
    return generator(ArrowKind::Sym, {std::move(a), std::move(b)}, {});
}
ArrowTerm ArrowTerm::refl(Term t) { return generator(ArrowKind::Refl, {}, {std::move(t)}); }
ArrowTerm ArrowTerm::trans(Term t1, Term t2, Term t3) {
    return generator(ArrowKind::Trans, {}, {std::move(t1), std::move(t2), std::move(t3)});
}
ArrowTerm ArrowTerm::inv(Term t1, Term t2) { return generator(ArrowKind::Inv, {}, {std::move(t1), std::move(t2)}); }
ArrowTerm ArrowTerm::cong(Term t1, Term t2, Term t3, Term t4) {
    return generator(ArrowKind::Cong, {}, {std::move(t1), std::move(t2), std::move(t3), std::move(t4)});
}

ArrowTerm ArrowTerm::compose(ArrowTerm g, ArrowTerm f) {
    ArrowTerm h;
    auto node = std::make_shared<Node>();
    node->kind = ArrowKind::Compose;
    node->size = 1 + g.size() + f.size();
    node->left = std::move(g);
    node->right = std::move(f);
    h.node_ = std::move(node);
    return h;
}

ArrowTerm ArrowTerm::tensor(ArrowTerm f, ArrowTerm g) {
    ArrowTerm h;
    auto node = std::make_shared<Node>();
    node->kind = ArrowKind::Tensor;
    node->size = 1 + f.size() + g.size();
    node->left = std::move(f);
    node->right = std::move(g);
    h.node_ = std::move(node);
    return h;
}

int ArrowTerm::compare(const ArrowTerm& a, const ArrowTerm& b) {
    if (a.node_ == b.node_) return 0;
    if (a.kind() != b.kind()) return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
    if (!a.is_generator()) {
        if (int c = compare(a.left(), b.left())) return c;
        return compare(a.right(), b.right());
    }
    for (std::size_t i = 0; i < a.formulas().size(); ++i)
        if (int c = Formula::compare(a.formulas()[i], b.formulas()[i])) return c;
    for (std::size_t i = 0; i < a.terms().size(); ++i)
        if (int c = Term::compare(a.terms()[i], b.terms()[i])) return c;
    return 0;
}

std::string to_string(const ArrowType& t) { return to_string(t.source) + " |- " + to_string(t.target); }

std::string to_string(Step s) {
    switch (s) {
    case Step::ComposeLeft: return "CL";
    case Step::ComposeRight: return "CR";
    case Step::TensorLeft: return "TL";
    case Step::TensorRight: return "TR";
    }
    return {};
}

Step step_from_string(const std::string& s) {
    if (s == "CL") return Step::ComposeLeft;
    if (s == "CR") return Step::ComposeRight;
    if (s == "TL") return Step::TensorLeft;
    if (s == "TR") return Step::TensorRight;
    throw std::invalid_argument("bad path step '" + s + "'");
}

std::string to_string(const Path& p) {
    std::string out = "[";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += ",";
        out += to_string(p[i]);
    }
    return out + "]";
}

Path child(Path p, Step s) {
    p.push_back(s);
    return p;
}

namespace {

bool step_fits(const ArrowTerm& f, Step s) {
    if (s == Step::ComposeLeft || s == Step::ComposeRight) return f.is_compose();
    return f.is_tensor();
}

const ArrowTerm& step_into(const ArrowTerm& f, Step s) {
    return (s == Step::ComposeLeft || s == Step::TensorLeft) ? f.left() : f.right();
}

ArrowTerm replace_rec(const ArrowTerm& f, const Path& path, std::size_t i, ArrowTerm replacement) {
    if (i == path.size()) return replacement;
    Step s = path[i];
    if (!step_fits(f, s)) throw std::out_of_range("path " + to_string(path) + " does not resolve");
    bool left = s == Step::ComposeLeft || s == Step::TensorLeft;
    ArrowTerm l = left ? replace_rec(f.left(), path, i + 1, std::move(replacement)) : f.left();
    ArrowTerm r = left ? f.right() : replace_rec(f.right(), path, i + 1, std::move(replacement));
    return f.is_compose() ? ArrowTerm::compose(std::move(l), std::move(r))
                          : ArrowTerm::tensor(std::move(l), std::move(r));
}

} // namespace

const ArrowTerm& subterm_at(const ArrowTerm& f, const Path& path) {
    const ArrowTerm* cur = &f;
    for (Step s : path) {
        if (!step_fits(*cur, s)) throw std::out_of_range("path " + to_string(path) + " does not resolve");
        cur = &step_into(*cur, s);
    }
    return *cur;
}

ArrowTerm replace_at(const ArrowTerm& f, const Path& path, ArrowTerm replacement) {
    return replace_rec(f, path, 0, std::move(replacement));
}

ArrowType generator_type(const ArrowTerm& g, Relation rel) {
    const auto& fs = g.formulas();
    const auto& ts = g.terms();
    auto atom = [rel](const Term& a, const Term& b) { return Formula::atom(rel, a, b); };
    const Formula top;
    switch (g.kind()) {
    case ArrowKind::Id:
        return {fs[0], fs[0]};
    case ArrowKind::BFwd:
        return {Formula::conj(fs[0], Formula::conj(fs[1], fs[2])), Formula::conj(Formula::conj(fs[0], fs[1]), fs[2])};
    case ArrowKind::BBwd:
        return {Formula::conj(Formula::conj(fs[0], fs[1]), fs[2]), Formula::conj(fs[0], Formula::conj(fs[1], fs[2]))};
    case ArrowKind::DeltaFwd:
        return {Formula::conj(fs[0], top), fs[0]};
    case ArrowKind::DeltaBwd:
        return {fs[0], Formula::conj(fs[0], top)};
    case ArrowKind::SigmaFwd:
        return {Formula::conj(top, fs[0]), fs[0]};
    case ArrowKind::SigmaBwd:
        return {fs[0], Formula::conj(top, fs[0])};
    case ArrowKind::Sym:
        return {Formula::conj(fs[0], fs[1]), Formula::conj(fs[1], fs[0])};
    case ArrowKind::Refl:
        return {top, atom(ts[0], ts[0])};
    case ArrowKind::Trans:
        return {Formula::conj(atom(ts[0], ts[1]), atom(ts[1], ts[2])), atom(ts[0], ts[2])};
    case ArrowKind::Inv:
        return {atom(ts[0], ts[1]), atom(ts[1], ts[0])};
    case ArrowKind::Cong:
        return {Formula::conj(atom(ts[0], ts[1]), atom(ts[2], ts[3])),
                atom(Term::product(ts[0], ts[2]), Term::product(ts[1], ts[3]))};
    case ArrowKind::Compose:
    case ArrowKind::Tensor:
        break;
    }
    throw std::logic_error("generator_type on a non-generator");
}

void check_formula(const Formula& a, Theory theory) {
    switch (a.kind()) {
    case Formula::Kind::Top:
        return;
    case Formula::Kind::Atom:
        if (a.relation() != theory.relation())
            throw RelationMismatch("atom " + to_string(a) + " does not use the relation of " + theory.name());
        if (!theory.dotted() && (a.lhs().is_product() || a.rhs().is_product()))
            throw GeneratorNotInTheory("product term in " + to_string(a), theory.name());
        return;
    case Formula::Kind::Conj:
        check_formula(a.left(), theory);
        check_formula(a.right(), theory);
        return;
    }
}

namespace {

void check_generator(const ArrowTerm& g, Theory theory) {
    switch (g.kind()) {
    case ArrowKind::Sym:
        if (!theory.symmetric()) throw GeneratorNotInTheory(print_arrow(g), theory.name());
        break;
    case ArrowKind::Inv:
        if (!theory.has_s()) throw GeneratorNotInTheory(print_arrow(g), theory.name());
        break;
    case ArrowKind::Cong:
        if (!theory.dotted()) throw GeneratorNotInTheory(print_arrow(g), theory.name());
        break;
    default:
        break;
    }
    for (const auto& a : g.formulas()) check_formula(a, theory);
    if (!theory.dotted())
        for (const auto& t : g.terms())
            if (t.is_product()) throw GeneratorNotInTheory(print_arrow(g), theory.name());
}

ArrowType infer_rec(const ArrowTerm& f, Theory theory, Path& path) {
    if (f.is_generator()) {
        check_generator(f, theory);
        return generator_type(f, theory.relation());
    }
    bool compose = f.is_compose();
    path.push_back(compose ? Step::ComposeLeft : Step::TensorLeft);
    ArrowType l = infer_rec(f.left(), theory, path);
    path.back() = compose ? Step::ComposeRight : Step::TensorRight;
    ArrowType r = infer_rec(f.right(), theory, path);
    path.pop_back();
    if (!compose) return {Formula::conj(l.source, r.source), Formula::conj(l.target, r.target)};
    // Compose(g, f): target(f) must be syntactically source(g).
    if (r.target != l.source) throw CompositionMismatch(to_string(l.source), to_string(r.target), to_string(path));
    return {r.source, l.target};
}

} // namespace

ArrowType infer_type(const ArrowTerm& f, Theory theory) {
    Path path;
    return infer_rec(f, theory, path);
}

bool well_typed(const ArrowTerm& f, Theory theory) {
    try {
        infer_type(f, theory);
        return true;
    } catch (const TypeError&) {
        return false;
    }
}

ArrowTerm rename_arrow(const ArrowTerm& f, const Renaming& rho) {
    if (f.is_compose()) return ArrowTerm::compose(rename_arrow(f.left(), rho), rename_arrow(f.right(), rho));
    if (f.is_tensor()) return ArrowTerm::tensor(rename_arrow(f.left(), rho), rename_arrow(f.right(), rho));
    std::vector<Formula> fs;
    for (const auto& a : f.formulas()) fs.push_back(rename_formula(a, rho));
    std::vector<Term> ts;
    for (const auto& t : f.terms()) ts.push_back(rename(t, rho));
    return ArrowTerm::generator(f.kind(), std::move(fs), std::move(ts));
}

ArrowTerm substitute_atoms(const ArrowTerm& f, const std::map<Formula, Formula>& table) {
    if (f.is_compose())
        return ArrowTerm::compose(substitute_atoms(f.left(), table), substitute_atoms(f.right(), table));
    if (f.is_tensor())
        return ArrowTerm::tensor(substitute_atoms(f.left(), table), substitute_atoms(f.right(), table));
    if (f.formulas().empty()) return f;
    std::vector<Formula> fs;
    for (const auto& a : f.formulas()) fs.push_back(substitute_atoms(a, table));
    return ArrowTerm::generator(f.kind(), std::move(fs), f.terms());
}

namespace {

// g ∘ f with identities dropped.
ArrowTerm then(ArrowTerm g, ArrowTerm f) {
    if (f.is_id()) return g;
    if (g.is_id()) return f;
    return ArrowTerm::compose(std::move(g), std::move(f));
}

// Canonical construction: purge the conjunct that vanishes, delete it with
// δ→ (right) or σ→ (left), then purge what is left. Identities are omitted.
ArrowTerm purge_iso(const Formula& a) {
    if (!a.is_conj()) return ArrowTerm::id(a);
    const Formula& b = a.left();
    const Formula& c = a.right();
    Formula bp = top_purge(b), cp = top_purge(c);
    if (cp.is_top()) {
        ArrowTerm inner = c.is_top() ? ArrowTerm::id(a) : ArrowTerm::tensor(ArrowTerm::id(b), purge_iso(c));
        return then(purge_iso(b), then(ArrowTerm::delta_fwd(b), inner));
    }
    if (bp.is_top()) {
        ArrowTerm inner = b.is_top() ? ArrowTerm::id(a) : ArrowTerm::tensor(purge_iso(b), ArrowTerm::id(c));
        return then(purge_iso(c), then(ArrowTerm::sigma_fwd(c), inner));
    }
    if (bp == b && cp == c) return ArrowTerm::id(a);
    return ArrowTerm::tensor(purge_iso(b), purge_iso(c));
}

ArrowTerm mirror(const ArrowTerm& f) {
    if (f.is_compose()) return ArrowTerm::compose(mirror(f.right()), mirror(f.left()));
    if (f.is_tensor()) return ArrowTerm::tensor(mirror(f.left()), mirror(f.right()));
    switch (f.kind()) {
    case ArrowKind::DeltaFwd: return ArrowTerm::delta_bwd(f.formulas()[0]);
    case ArrowKind::DeltaBwd: return ArrowTerm::delta_fwd(f.formulas()[0]);
    case ArrowKind::SigmaFwd: return ArrowTerm::sigma_bwd(f.formulas()[0]);
    case ArrowKind::SigmaBwd: return ArrowTerm::sigma_fwd(f.formulas()[0]);
    case ArrowKind::BFwd: return ArrowTerm::generator(ArrowKind::BBwd, f.formulas(), {});
    case ArrowKind::BBwd: return ArrowTerm::generator(ArrowKind::BFwd, f.formulas(), {});
    default: return f;
    }
}

} // namespace

ArrowTerm top_iso(const Formula& a, Theory theory) {
    check_formula(a, theory);
    return purge_iso(a);
}

ArrowTerm top_iso_inverse(const Formula& a, Theory theory) { return mirror(top_iso(a, theory)); }

std::size_t count_kind(const ArrowTerm& f, ArrowKind k) {
    if (f.is_generator()) return f.kind() == k ? 1 : 0;
    return (f.kind() == k ? 1 : 0) + count_kind(f.left(), k) + count_kind(f.right(), k);
}

} // namespace lineq
