#pragma once

// Rewriting tactics over a Session: development into factor chains,
// pairwise operations on adjacent factors, and the naturality moves used by
// the normal-form passes. Chains are right-nested: F_n ∘ (… ∘ (F_2 ∘ F_1)).

#include <functional>
#include <optional>

#include "lineq/rewrite.hpp"

namespace lineq::detail {

constexpr Direction L2R = Direction::L2R;
constexpr Direction R2L = Direction::R2L;

Path operator+(Path p, Step s);
Path operator+(Path p, const Path& q);
Step other(Step s);

std::size_t chain_length(const ArrowTerm& f);
/// Primitive identities joined by ∧ and ∘ only.
bool is_id_tree(const ArrowTerm& f);
/// Tensor steps from the factor root to the head of a β-term.
Path head_path(const ArrowTerm& beta);
/// Head generator of a β-term, or nullopt for 1-terms.
std::optional<ArrowKind> head_kind(const ArrowTerm& factor);

class Engine {
public:
    explicit Engine(Session& s) : s_(s) {}

    Session& session() { return s_; }
    const ArrowTerm& at(const Path& p) const { return s_.at(p); }
    void apply(const char* eq, const Path& p, Direction d) { s_.apply(eq, p, d); }

    /// Turns an identity tree at `p` into one primitive identity.
    void collapse_ids(const Path& p);
    /// Contracts every tensor node with two primitive identity children.
    void contract(const Path& p);

    /// Rewrites the subterm at `p` into a developed chain.
    void develop(const Path& p);
    /// Developed terms are only re-nested to the right; others developed.
    void develop_chain(const Path& p);

    /// Core operation on U_c ∘ L_c at the given path, where both sides are
    /// the factors restricted to the common prefix of their head paths. It
    /// must leave a right-nested chain (possibly a single factor) there.
    using PairOp = std::function<void(const Path& at, const Path& head_u, const Path& head_l)>;

    /// Runs `op` on factors i (upper) and i+1 of the chain rooted at `base`,
    /// then re-nests the resulting factors into the chain.
    void pair_op(const Path& base, std::size_t i, const PairOp& op);

    /// Removes identity factors other than the last one.
    void drop_identity_factors(const Path& base);

    // Moves usable as pair operations.
    /// (U1 ∧ 1) ∘ (1 ∧ L1) becomes (1 ∧ L1) ∘ (U1 ∧ 1), and mirrored.
    void swap(const Path& p, Step upper_side);
    /// h ∘ L for a structural generator h: moves L above h by naturality.
    /// With `tidy`, identity pairs left in the lifted factor are contracted.
    void lift_through(const Path& p, bool tidy = true);
    /// X ∘ mirror(X) for an isomorphism X built from structural generators,
    /// identities, ∧ and ∘: rewrites it into an identity.
    void cancel(const Path& p);
    /// Removes identities bottom-up: and1 on identity pairs, cat1 on
    /// identity composites.
    void tidy(const Path& p);

private:
    void concat(const Path& p);
    void split(const Path& p);
    void unsplit(const Path& p, Step side);
    void naturality_macro(const Path& p, const char* nat, const char* insert, const char* remove);

    Session& s_;
};

} // namespace lineq::detail
