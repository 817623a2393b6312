#include "engine.hpp"

#include <stdexcept>

#include "lineq/errors.hpp"

namespace lineq::detail {

Path operator+(Path p, Step s) {
    p.push_back(s);
    return p;
}

Path operator+(Path p, const Path& q) {
    p.insert(p.end(), q.begin(), q.end());
    return p;
}

Step other(Step s) {
    switch (s) {
    case Step::TensorLeft: return Step::TensorRight;
    case Step::TensorRight: return Step::TensorLeft;
    case Step::ComposeLeft: return Step::ComposeRight;
    case Step::ComposeRight: return Step::ComposeLeft;
    }
    return s;
}

std::size_t chain_length(const ArrowTerm& f) {
    std::size_t n = 1;
    for (const ArrowTerm* t = &f; t->is_compose(); t = &t->right()) ++n;
    return n;
}

bool is_id_tree(const ArrowTerm& f) {
    if (f.is_generator()) return f.is_id();
    return is_id_tree(f.left()) && is_id_tree(f.right());
}

Path head_path(const ArrowTerm& beta) {
    Path p;
    for (const ArrowTerm* t = &beta; t->is_tensor();) {
        bool right = t->left().is_id();
        p.push_back(right ? Step::TensorRight : Step::TensorLeft);
        t = right ? &t->right() : &t->left();
    }
    return p;
}

std::optional<ArrowKind> head_kind(const ArrowTerm& factor) {
    ArrowKind k;
    if (!is_beta_term(factor, &k)) return std::nullopt;
    return k;
}

namespace {

Path rows(std::size_t k) { return Path(k, Step::ComposeRight); }

} // namespace

void Engine::collapse_ids(const Path& p) {
    const ArrowTerm& t = at(p);
    if (t.is_id()) return;
    if (t.is_generator()) throw std::logic_error("collapse_ids on a non-identity");
    bool tensor = t.is_tensor();
    collapse_ids(p + (tensor ? Step::TensorLeft : Step::ComposeLeft));
    collapse_ids(p + (tensor ? Step::TensorRight : Step::ComposeRight));
    apply(tensor ? "and1" : "cat1L", p, L2R);
}

void Engine::contract(const Path& p) {
    const ArrowTerm& t = at(p);
    if (!t.is_tensor()) return;
    contract(p + Step::TensorLeft);
    contract(p + Step::TensorRight);
    if (at(p).left().is_id() && at(p).right().is_id()) apply("and1", p, L2R);
}

// ---------------------------------------------------------------- develop

void Engine::develop(const Path& p) {
    const ArrowTerm& t = at(p);
    if (t.is_generator()) {
        if (!t.is_id()) apply("cat1R", p, R2L);
        return;
    }
    if (t.is_compose()) {
        develop(p + Step::ComposeLeft);
        develop(p + Step::ComposeRight);
        concat(p);
    } else {
        develop(p + Step::TensorLeft);
        develop(p + Step::TensorRight);
        split(p);
    }
}

void Engine::develop_chain(const Path& p) {
    if (!is_developed(at(p))) return develop(p);
    for (Path q = p; at(q).is_compose();) {
        if (at(q).left().is_compose())
            apply("cat2", q, L2R);
        else
            q = q + Step::ComposeRight;
    }
}

// (G_m ∘ … ∘ G_1) ∘ F: walk down the G-chain, then absorb the 1-term G_1.
void Engine::concat(const Path& p) {
    Path q = p;
    while (at(q).left().is_compose()) {
        apply("cat2", q, L2R);
        q = q + Step::ComposeRight;
    }
    collapse_ids(q + Step::ComposeLeft);
    apply("cat1L", q, L2R);
}

// Chain ∧ chain: peel the top factor off one side at a time.
void Engine::split(const Path& p) {
    const ArrowTerm& t = at(p);
    if (t.left().is_compose() || t.right().is_compose()) {
        Step pad = t.left().is_compose() ? Step::TensorRight : Step::TensorLeft;
        apply("cat1L", p + pad, R2L);
        apply("and2", p, L2R);
        split(p + Step::ComposeRight);
        return;
    }
    collapse_ids(p + Step::TensorLeft);
    collapse_ids(p + Step::TensorRight);
    apply("and1", p, L2R);
}

// ---------------------------------------------------------------- pairs

void Engine::pair_op(const Path& base, std::size_t i, const PairOp& op) {
    std::size_t n = chain_length(at(base));
    if (i + 1 >= n) throw std::logic_error("pair_op past the end of the chain");
    Path row = base + rows(i);
    bool rest = i + 2 < n;
    if (rest) apply("cat2", row, R2L);
    Path q = rest ? row + Step::ComposeLeft : row;

    Path hu = head_path(at(q).left());
    Path hl = head_path(at(q).right());
    std::size_t c = 0;
    while (c < hu.size() && c < hl.size() && hu[c] == hl[c]) ++c;
    for (std::size_t k = 0; k < c; ++k) {
        apply("and2", q, R2L);
        apply("cat1L", q + other(hu[k]), L2R);
        q = q + hu[k];
    }
    op(q, Path(hu.begin() + c, hu.end()), Path(hl.begin() + c, hl.end()));
    for (std::size_t k = c; k-- > 0;) {
        q.pop_back();
        unsplit(q, hu[k]);
    }
    if (rest) {
        Path r = row;
        while (at(r).left().is_compose()) {
            apply("cat2", r, L2R);
            r = r + Step::ComposeRight;
        }
    }
}

// Tensor node whose `side` child was rewritten into a chain and whose other
// child is a primitive identity: distribute the chain over the node.
void Engine::unsplit(const Path& p, Step side) {
    const ArrowTerm& child = at(p + side);
    if (child.is_compose()) {
        apply("cat1L", p + other(side), R2L);
        apply("and2", p, L2R);
        if (at(p + Step::ComposeRight + side).is_compose()) unsplit(p + Step::ComposeRight, side);
    } else if (child.is_id() && at(p + other(side)).is_id()) {
        apply("and1", p, L2R);
    }
}

void Engine::drop_identity_factors(const Path& base) {
    std::size_t k = 0;
    for (;;) {
        std::size_t n = chain_length(at(base));
        Path row = base + rows(k);
        if (k + 1 >= n) {
            if (is_id_tree(at(row)) && !is_one_term(at(row))) collapse_ids(row);
            return;
        }
        if (is_id_tree(at(row).left())) {
            collapse_ids(row + Step::ComposeLeft);
            apply("cat1L", row, L2R);
            continue;
        }
        ++k;
    }
}

// ---------------------------------------------------------------- moves

void Engine::swap(const Path& p, Step upper_side) {
    Step lower_side = other(upper_side);
    apply("and2", p, R2L);
    apply("cat1R", p + upper_side, L2R);
    apply("cat1L", p + lower_side, L2R);
    apply("cat1L", p + upper_side, R2L);
    apply("cat1R", p + lower_side, R2L);
    apply("and2", p, L2R);
}

// h ∘ K with h ∈ {b←, δ←, σ←}: conjugate by the forward generator so the
// primitive naturality equation applies.
void Engine::naturality_macro(const Path& p, const char* nat, const char* insert, const char* remove) {
    const Path cr = p + Step::ComposeRight;
    apply("cat1R", cr, R2L);
    apply(insert, cr + Step::ComposeRight, R2L);
    apply("cat2", cr, R2L);
    apply(nat, cr + Step::ComposeLeft, L2R);
    apply("cat2", cr, L2R);
    apply("cat2", p, R2L);
    apply(remove, p + Step::ComposeLeft, L2R);
    apply("cat1L", p, L2R);
}

void Engine::lift_through(const Path& p, bool tidy) {
    const Path lower = p + Step::ComposeRight;
    auto expand = [&](const Path& q) {
        if (at(q).is_id()) apply("and1", q, R2L);
    };
    switch (at(p).left().kind()) {
    case ArrowKind::BFwd:
        expand(lower + Step::TensorRight);
        apply("b nat", p, R2L);
        break;
    case ArrowKind::BBwd:
        expand(lower + Step::TensorLeft);
        naturality_macro(p, "b nat", "bb2", "bb1");
        break;
    case ArrowKind::Sym: apply("c nat", p, R2L); break;
    case ArrowKind::DeltaFwd: apply("delta nat", p, R2L); break;
    case ArrowKind::SigmaFwd: apply("sigma nat", p, R2L); break;
    case ArrowKind::DeltaBwd: naturality_macro(p, "delta nat", "deltadelta2", "deltadelta1"); break;
    case ArrowKind::SigmaBwd: naturality_macro(p, "sigma nat", "sigmasigma2", "sigmasigma1"); break;
    default: throw std::logic_error("lift_through a non-structural generator");
    }
    if (tidy) contract(p + Step::ComposeLeft);
}

void Engine::cancel(const Path& p) {
    const ArrowTerm& t = at(p);
    const ArrowTerm& a = t.left();
    if (a.is_tensor()) {
        apply("and2", p, R2L);
        cancel(p + Step::TensorLeft);
        cancel(p + Step::TensorRight);
        apply("and1", p, L2R);
        return;
    }
    if (a.is_compose()) {
        apply("cat2", p, L2R);
        apply("cat2", p + Step::ComposeRight, R2L);
        cancel(p + Step::ComposeRight + Step::ComposeLeft);
        apply("cat1L", p + Step::ComposeRight, L2R);
        cancel(p);
        return;
    }
    const char* eq = nullptr;
    switch (a.kind()) {
    case ArrowKind::Id: eq = "cat1L"; break;
    case ArrowKind::BFwd: eq = "bb2"; break;
    case ArrowKind::BBwd: eq = "bb1"; break;
    case ArrowKind::DeltaFwd: eq = "deltadelta2"; break;
    case ArrowKind::DeltaBwd: eq = "deltadelta1"; break;
    case ArrowKind::SigmaFwd: eq = "sigmasigma2"; break;
    case ArrowKind::SigmaBwd: eq = "sigmasigma1"; break;
    case ArrowKind::Sym: eq = "cc"; break;
    default: throw std::logic_error("cancel on a non-structural generator");
    }
    apply(eq, p, L2R);
}

void Engine::tidy(const Path& p) {
    const ArrowTerm& t = at(p);
    if (t.is_generator()) return;
    bool tensor = t.is_tensor();
    tidy(p + (tensor ? Step::TensorLeft : Step::ComposeLeft));
    tidy(p + (tensor ? Step::TensorRight : Step::ComposeRight));
    const ArrowTerm& u = at(p);
    if (tensor) {
        if (u.left().is_id() && u.right().is_id()) apply("and1", p, L2R);
    } else if (u.left().is_id()) {
        apply("cat1L", p, L2R);
    } else if (u.right().is_id()) {
        apply("cat1R", p, L2R);
    }
}

} // namespace lineq::detail
