// δσ-purge by conjugation. Every object C gets a canonical isomorphism
// φ_C : C → C† onto its ⊤-purged form; each factor F : C → C' of the
// developed input is rewritten into φ_{C'}⁻¹ ∘ F† ∘ φ_C, after which the
// isomorphisms between neighbouring factors cancel. F† is δσ-less.

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "lemmas.hpp"
#include "lineq/errors.hpp"
#include "lineq/parse.hpp"

namespace lineq {

using namespace detail;

namespace {

constexpr Step CL = Step::ComposeLeft, CR = Step::ComposeRight, TL = Step::TensorLeft, TR = Step::TensorRight;

ArrowTerm mirror(const ArrowTerm& f) {
    if (f.is_compose()) return ArrowTerm::compose(mirror(f.right()), mirror(f.left()));
    if (f.is_tensor()) return ArrowTerm::tensor(mirror(f.left()), mirror(f.right()));
    const auto& a = f.formulas();
    switch (f.kind()) {
    case ArrowKind::Id: return f;
    case ArrowKind::BFwd: return ArrowTerm::b_bwd(a[0], a[1], a[2]);
    case ArrowKind::BBwd: return ArrowTerm::b_fwd(a[0], a[1], a[2]);
    case ArrowKind::DeltaFwd: return ArrowTerm::delta_bwd(a[0]);
    case ArrowKind::DeltaBwd: return ArrowTerm::delta_fwd(a[0]);
    case ArrowKind::SigmaFwd: return ArrowTerm::sigma_bwd(a[0]);
    case ArrowKind::SigmaBwd: return ArrowTerm::sigma_fwd(a[0]);
    case ArrowKind::Sym: return ArrowTerm::sym(a[1], a[0]);
    default: throw std::logic_error("mirror of a non-structural generator");
    }
}

/// Joins purged conjuncts: drops a ⊤ side, otherwise an identity.
ArrowTerm joiner(const Formula& l, const Formula& r) {
    if (r.is_top()) return ArrowTerm::delta_fwd(l);
    if (l.is_top()) return ArrowTerm::sigma_fwd(r);
    return ArrowTerm::id(Formula::conj(l, r));
}

/// φ_C: an identity on ⊤-free objects, otherwise a joiner over the
/// conjuncts' isomorphisms.
ArrowTerm purge_iso(const Formula& c) {
    if (!c.is_conj() || !contains_top(c)) return ArrowTerm::id(c);
    return ArrowTerm::compose(joiner(top_purge(c.left()), top_purge(c.right())),
                              ArrowTerm::tensor(purge_iso(c.left()), purge_iso(c.right())));
}

/// mirror(φ_C) ∘ φ_C rewritten into id{C}, reversed: id{C} to mirror(φ) ∘ φ.
Derivation insert_iso(const Formula& c, Theory theory) {
    ArrowTerm phi = purge_iso(c);
    Session local(ArrowTerm::compose(mirror(phi), phi), theory, SIZE_MAX);
    Engine(local).cancel({});
    return reversed(local.derivation());
}

// Conjunction skeleton of a structural generator's source or target; leaves
// are arguments or ⊤.
struct Shape {
    const Shape* left = nullptr;
    const Shape* right = nullptr;
    bool leaf() const { return !left; }
};
const Shape kLeaf{};
const Shape kPair{&kLeaf, &kLeaf};
const Shape kRightNested{&kLeaf, &kPair};
const Shape kLeftNested{&kPair, &kLeaf};

std::pair<const Shape*, const Shape*> skeletons(ArrowKind k) {
    switch (k) {
    case ArrowKind::BFwd: return {&kRightNested, &kLeftNested};
    case ArrowKind::BBwd: return {&kLeftNested, &kRightNested};
    case ArrowKind::Sym: return {&kPair, &kPair};
    case ArrowKind::DeltaFwd:
    case ArrowKind::SigmaFwd: return {&kPair, &kLeaf};
    case ArrowKind::DeltaBwd:
    case ArrowKind::SigmaBwd: return {&kLeaf, &kPair};
    default: throw std::logic_error("no skeleton for this generator");
    }
}

class Purger {
public:
    Purger(Session& s) : e_(s), lib_(LemmaLibrary::of(s.theory())) {}

    void run();
    /// Drops identity factors, the last one included unless it is alone.
    void tidy_tail();
    /// φ_{C'} ∘ (F ∘ φ_C⁻¹) at `p`, F ∘-free, becomes F†.
    void conjugate(const Path& p);

private:
    void block(const Path& fp);
    void finish_context(const Path& p);
    void head(const Path& p);
    void extract(const Path& p, const Shape& shape, bool inverse);
    void unfold(const Path& p, bool inverse);
    void slide(const Path& p);

    Engine e_;
    const LemmaLibrary& lib_;
};

void Purger::block(const Path& fp) {
    ArrowType type = infer_type(e_.at(fp), e_.session().theory());
    e_.apply("cat1L", fp, R2L);
    e_.apply("cat1R", fp + CR, R2L);
    if (!contains_top(type.source) && !contains_top(type.target)) return;
    e_.session().splice(fp + CL, insert_iso(type.target, e_.session().theory()));
    e_.session().splice(fp + CR + CR, insert_iso(type.source, e_.session().theory()));
    e_.apply("cat2", fp, L2R);
    e_.apply("cat2", fp + CR + CR, R2L);
    e_.apply("cat2", fp + CR, R2L);
    conjugate(fp + CR + CL);
}

void Purger::conjugate(const Path& p) {
    const ArrowTerm& f = e_.at(p + CR + CL);
    ArrowType type = infer_type(f, e_.session().theory());
    if (!contains_top(type.source) && !contains_top(type.target)) {
        e_.collapse_ids(p + CL);
        e_.collapse_ids(p + CR + CR);
        e_.apply("cat1L", p, L2R);
        e_.apply("cat1R", p, L2R);
        return;
    }
    if (f.is_id()) {
        e_.apply("cat1L", p + CR, L2R);
        e_.cancel(p);
        return;
    }
    if (f.is_generator()) return head(p);

    // Context 1 ∧ G or G ∧ 1.
    Step h = f.left().is_id() ? TR : TL, side = other(h);
    unfold(p + CL, false);
    unfold(p + CR + CR, true);
    e_.apply("cat2", p + CR, R2L);
    e_.apply("and2", p + CR + CL, R2L);
    e_.apply("cat1L", p + CR + CL + side, L2R);
    e_.apply("cat2", p, L2R);
    e_.apply("cat2", p + CR, R2L);
    e_.apply("and2", p + CR + CL, R2L);
    e_.cancel(p + CR + CL + side);
    conjugate(p + CR + CL + h);
    finish_context(p);
}

// P' ∘ (K ∘ P⁻¹) with P, P' joiners and K = 1 ∧ G† or G† ∧ 1.
void Purger::finish_context(const Path& p) {
    if (is_id_tree(e_.at(p + CR + CL))) {
        e_.collapse_ids(p + CR + CL);
        e_.apply("cat1L", p + CR, L2R);
        e_.cancel(p);
        return;
    }
    switch (e_.at(p).left().kind()) {
    case ArrowKind::Id:
        e_.apply("cat1L", p, L2R);
        e_.apply("cat1R", p, L2R);
        return;
    case ArrowKind::DeltaFwd:
    case ArrowKind::SigmaFwd: {
        bool delta = e_.at(p).left().kind() == ArrowKind::DeltaFwd;
        e_.apply("cat2", p, R2L);
        e_.apply(delta ? "delta nat" : "sigma nat", p + CL, R2L);
        e_.apply("cat2", p, L2R);
        e_.apply(delta ? "deltadelta2" : "sigmasigma2", p + CR, L2R);
        e_.apply("cat1R", p, L2R);
        return;
    }
    default: throw std::logic_error("unexpected joiner");
    }
}

// φ over `shape` at p becomes Q ∘ Sk (Sk the tensor of the leaf φ's), or
// with `inverse`, mirror(φ) becomes Sk⁻¹ ∘ Q⁻¹.
void Purger::extract(const Path& p, const Shape& shape, bool inverse) {
    if (shape.leaf()) {
        e_.apply(inverse ? "cat1R" : "cat1L", p, R2L);
        return;
    }
    unfold(p, inverse);
    Path pair = p + (inverse ? CL : CR);
    extract(pair + TL, *shape.left, inverse);
    extract(pair + TR, *shape.right, inverse);
    e_.apply("and2", pair, L2R);
    e_.apply("cat2", p, inverse ? L2R : R2L);
}

// The identity φ of a ⊤-free conjunction in joiner form.
void Purger::unfold(const Path& p, bool inverse) {
    if (!e_.at(p).is_id()) return;
    e_.apply("and1", p, R2L);
    e_.apply(inverse ? "cat1R" : "cat1L", p, R2L);
}

// Sk' ∘ H becomes H' ∘ Sk, H' the generator on purged arguments.
void Purger::slide(const Path& p) {
    const ArrowTerm& t = e_.at(p);
    const ArrowTerm& gen = t.right();
    switch (gen.kind()) {
    case ArrowKind::BFwd: return e_.apply("b nat", p, L2R);
    case ArrowKind::Sym: return e_.apply("c nat", p, L2R);
    case ArrowKind::DeltaFwd: return e_.apply("delta nat", p, L2R);
    case ArrowKind::SigmaFwd: return e_.apply("sigma nat", p, L2R);
    default: break;
    }
    // Backward generators: run the lift from the expected result and reverse.
    const ArrowTerm& sk = t.left();
    ArrowTerm lower;
    switch (gen.kind()) {
    case ArrowKind::BBwd:
        lower = ArrowTerm::tensor(ArrowTerm::tensor(sk.left(), sk.right().left()), sk.right().right());
        break;
    case ArrowKind::DeltaBwd: lower = sk.left(); break;
    case ArrowKind::SigmaBwd: lower = sk.right(); break;
    default: throw std::logic_error("slide through a non-structural generator");
    }
    std::vector<Formula> args;
    for (const auto& a : gen.formulas()) args.push_back(top_purge(a));
    Session local(ArrowTerm::compose(ArrowTerm::generator(gen.kind(), args, {}), lower), e_.session().theory(),
                  SIZE_MAX);
    Engine(local).lift_through({}, false);
    if (local.term() != t) throw std::logic_error("slide: lift produced " + print_arrow(local.term()));
    e_.session().splice(p, reversed(local.derivation()));
}

// Q' ∘ (H' ∘ Q⁻¹) → H† for one head kind and ⊤-pattern, proved once over
// placeholder atoms.
const Derivation& head_lemma(Theory theory, ArrowKind kind, const std::vector<bool>& tops, const ArrowTerm& lhs,
                             const ArrowTerm& rhs);

void Purger::head(const Path& p) {
    const ArrowTerm gen = e_.at(p + CR + CL);
    auto [src, tgt] = skeletons(gen.kind());
    extract(p + CL, *tgt, false);
    extract(p + CR + CR, *src, true);
    e_.apply("cat2", p, L2R);
    e_.apply("cat2", p + CR, R2L);
    slide(p + CR + CL);
    e_.apply("cat2", p + CR, L2R);
    e_.apply("cat2", p + CR + CR, R2L);
    e_.cancel(p + CR + CR + CL);
    e_.apply("cat1L", p + CR + CR, L2R);

    // Abstract the purged arguments into placeholders.
    Theory theory = e_.session().theory();
    std::vector<bool> tops;
    std::vector<Formula> ph_args;
    for (std::size_t i = 0; i < gen.formulas().size(); ++i) {
        Formula a = top_purge(gen.formulas()[i]);
        tops.push_back(a.is_top());
        Formula ph = a.is_top() ? a : LemmaLibrary::placeholder(std::string(1, char('A' + i)), theory.relation());
        ph_args.push_back(ph);
    }
    ArrowTerm ph_gen = ArrowTerm::generator(gen.kind(), ph_args, {});
    ArrowType ph_type = infer_type(ph_gen, theory);
    Session local(ArrowTerm::compose(purge_iso(ph_type.target),
                                     ArrowTerm::compose(ph_gen, mirror(purge_iso(ph_type.source)))),
                  theory, SIZE_MAX);
    Purger inner(local);
    inner.extract({CL}, *tgt, false);
    inner.extract({CR, CR}, *src, true);
    local.apply("cat2", {}, L2R);
    local.apply("cat2", {CR}, R2L);
    inner.slide({CR, CL});
    local.apply("cat2", {CR}, L2R);
    local.apply("cat2", {CR, CR}, R2L);
    inner.e_.cancel({CR, CR, CL});
    local.apply("cat1L", {CR, CR}, L2R);

    bool identity = gen.kind() != ArrowKind::BFwd && gen.kind() != ArrowKind::BBwd && gen.kind() != ArrowKind::Sym;
    for (bool t : tops) identity = identity || t;
    ArrowTerm ph_rhs = ArrowTerm::id(top_purge(ph_type.source));
    if (!identity) {
        std::vector<Formula> purged;
        for (const auto& a : ph_args) purged.push_back(top_purge(a));
        ph_rhs = ArrowTerm::generator(gen.kind(), purged, {});
    }
    const Derivation& d = head_lemma(theory, gen.kind(), tops, local.term(), ph_rhs);
    e_.session().splice_lemma(p, d);
}

const Derivation& head_lemma(Theory theory, ArrowKind kind, const std::vector<bool>& tops, const ArrowTerm& lhs,
                             const ArrowTerm& rhs) {
    static std::mutex mu;
    static std::map<std::tuple<TheoryId, ArrowKind, std::vector<bool>>, Derivation> cache;
    std::lock_guard lock(mu);
    auto key = std::make_tuple(theory.id(), kind, tops);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Session s(lhs, theory, SIZE_MAX);
    Engine(s).tidy({});
    if (!LemmaLibrary::of(theory).bridge(s, {}, rhs, 3, 400000))
        throw std::logic_error("no coherence proof for " + print_arrow(s.term()) + " = " + print_arrow(rhs));
    return cache.emplace(key, s.derivation()).first->second;
}

Path factor_path(std::size_t k, std::size_t n) {
    Path p(k, CR);
    if (k + 1 < n) p.push_back(CL);
    return p;
}

bool structural(const ArrowTerm& f) {
    switch (f.kind()) {
    case ArrowKind::Compose:
    case ArrowKind::Tensor: return structural(f.left()) && structural(f.right());
    case ArrowKind::Refl:
    case ArrowKind::Trans:
    case ArrowKind::Inv:
    case ArrowKind::Cong: return false;
    default: return true;
    }
}

// On ⊤ the two unitors agree; identify them when looking for inverse pairs.
ArrowTerm unitors_as_delta(const ArrowTerm& f) {
    if (f.kind() == ArrowKind::SigmaFwd && f.formulas()[0].is_top()) return ArrowTerm::delta_fwd(Formula::top());
    if (f.kind() == ArrowKind::SigmaBwd && f.formulas()[0].is_top()) return ArrowTerm::delta_bwd(Formula::top());
    return f;
}

ArrowTerm with_delta_unitors(const ArrowTerm& f) {
    if (f.is_generator()) return unitors_as_delta(f);
    ArrowTerm l = with_delta_unitors(f.left()), r = with_delta_unitors(f.right());
    return f.is_tensor() ? ArrowTerm::tensor(l, r) : ArrowTerm::compose(l, r);
}

void Purger::run() {
    // Adjacent factors that are mutually inverse cancel outright.
    auto to_delta = [&](const Path& q) {
        const ArrowTerm& g = e_.at(q);
        if (g == unitors_as_delta(g)) return;
        lib_.apply(e_.session(), g.kind() == ArrowKind::SigmaFwd ? "unitors agree" : "inverse unitors agree", q,
                   L2R);
    };
    for (bool again = true; again;) {
        again = false;
        auto fs = factors(e_.at({}));
        for (std::size_t i = 0; i + 1 < fs.size() && !again; ++i) {
            if (is_one_term(fs[i]) || !structural(fs[i])) continue;
            if (with_delta_unitors(fs[i + 1]) != mirror(with_delta_unitors(fs[i]))) continue;
            e_.pair_op({}, i, [&](const Path& q, const Path&, const Path&) {
                to_delta(q + CL);
                to_delta(q + CR);
                e_.cancel(q);
            });
            e_.drop_identity_factors({});
            again = true;
        }
    }
    if (is_delta_sigma_less(e_.at({}))) return tidy_tail();

    std::size_t n = chain_length(e_.at({}));
    for (std::size_t k = 0; k < n; ++k) block(factor_path(k, n));

    // Blocks U ∘ (G ∘ V); V of one block meets U of the next. A developed
    // term that is not δσ-less has at least two factors.
    if (n < 2) throw std::logic_error("purge of a single factor");
    e_.apply("cat2", {}, L2R);
    e_.apply("cat2", {CR}, L2R);
    e_.collapse_ids({CL});
    e_.apply("cat1L", {}, L2R);
    Path q{CR};
    for (std::size_t k = n - 1; k > 1; --k) {
        e_.apply("cat2", q, R2L);
        e_.apply("cat2", q + CL, R2L);
        e_.cancel(q + CL + CL);
        e_.apply("cat1L", q + CL, L2R);
        e_.apply("cat2", q, L2R);
        q = q + CR;
    }
    e_.apply("cat2", q, R2L);
    e_.cancel(q + CL);
    e_.apply("cat1L", q, L2R);
    e_.collapse_ids(q + CR);
    e_.apply("cat1R", q, L2R);

    tidy_tail();
}

void Purger::tidy_tail() {
    e_.drop_identity_factors({});
    std::size_t m = chain_length(e_.at({}));
    if (m > 1 && is_id_tree(e_.at(Path(m - 1, CR)))) {
        e_.collapse_ids(Path(m - 1, CR));
        e_.apply("cat1R", Path(m - 2, CR), L2R);
    }
}

} // namespace

NormalForm delta_sigma_purge(const ArrowTerm& f, Theory theory, std::optional<std::size_t> budget) {
    ArrowType type = infer_type(f, theory);
    if (!is_r_less(f)) throw PreconditionNotRLess(print_arrow(f) + " contains r");
    bool both_top = type.source.is_top() && type.target.is_top();
    if (!both_top && (contains_top(type.source) || contains_top(type.target)))
        throw PreconditionTopInType("T occurs in " + to_string(type));
    Session s(f, theory, budget.value_or(Session::default_budget(f)));
    if (is_delta_sigma_less(f)) return {f, s.derivation()};
    Engine e(s);
    e.develop_chain({});
    Purger(s).run();
    return {s.term(), s.derivation()};
}

} // namespace lineq
