#pragma once

// Arrow terms of the six calculi, their typing, and a few constructions on
// them (renaming, ⊤-purging isomorphisms, seeded random generation).

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lineq/syntax.hpp"

namespace lineq {

enum class TheoryId { MLeq, SLeq, MEquiv, SEquiv, SDotLeq, SDotEquiv };

class Theory {
public:
    constexpr Theory(TheoryId id = TheoryId::MLeq) : id_(id) {}

    TheoryId id() const { return id_; }
    Relation relation() const;
    /// Has the symmetry generator c.
    bool symmetric() const;
    /// Has the inversion generator s.
    bool has_s() const;
    /// Has product terms and the congruence generator a.
    bool dotted() const;

    /// CLI spelling: m-leq, s-leq, m-equiv, s-equiv, sdot-leq, sdot-equiv.
    std::string name() const;
    static Theory from_name(const std::string& name);
    static const std::array<Theory, 6>& all();

    friend bool operator==(Theory a, Theory b) { return a.id_ == b.id_; }

private:
    TheoryId id_;
};

enum class ArrowKind {
    Id,
    BFwd,
    BBwd,
    DeltaFwd,
    DeltaBwd,
    SigmaFwd,
    SigmaBwd,
    Sym,   // c
    Refl,  // r
    Trans, // t
    Inv,   // s
    Cong,  // a
    Compose,
    Tensor,
};

std::string to_string(ArrowKind k);

class ArrowTerm {
public:
    ArrowTerm() = default;

    static ArrowTerm id(Formula a);
    static ArrowTerm b_fwd(Formula a, Formula b, Formula c);
    static ArrowTerm b_bwd(Formula a, Formula b, Formula c);
    static ArrowTerm delta_fwd(Formula a);
    static ArrowTerm delta_bwd(Formula a);
    static ArrowTerm sigma_fwd(Formula a);
    static ArrowTerm sigma_bwd(Formula a);
    static ArrowTerm sym(Formula a, Formula b);
    static ArrowTerm refl(Term t);
    static ArrowTerm trans(Term t1, Term t2, Term t3);
    static ArrowTerm inv(Term t1, Term t2);
    static ArrowTerm cong(Term t1, Term t2, Term t3, Term t4);
    /// g ∘ f: f is applied first.
    static ArrowTerm compose(ArrowTerm g, ArrowTerm f);
    static ArrowTerm tensor(ArrowTerm f, ArrowTerm g);
    static ArrowTerm generator(ArrowKind kind, std::vector<Formula> formulas, std::vector<Term> terms);

    bool valid() const { return node_ != nullptr; }
    ArrowKind kind() const;
    bool is_generator() const { return kind() != ArrowKind::Compose && kind() != ArrowKind::Tensor; }
    bool is_compose() const { return kind() == ArrowKind::Compose; }
    bool is_tensor() const { return kind() == ArrowKind::Tensor; }
    bool is_id() const { return kind() == ArrowKind::Id; }

    const std::vector<Formula>& formulas() const;
    const std::vector<Term>& terms() const;
    /// Compose: the outer arrow g. Tensor: the left factor.
    const ArrowTerm& left() const;
    /// Compose: the inner arrow f. Tensor: the right factor.
    const ArrowTerm& right() const;

    /// AST node count: generators, compositions and tensors.
    std::size_t size() const;

    friend bool operator==(const ArrowTerm& a, const ArrowTerm& b) { return compare(a, b) == 0; }
    friend bool operator!=(const ArrowTerm& a, const ArrowTerm& b) { return !(a == b); }
    friend bool operator<(const ArrowTerm& a, const ArrowTerm& b) { return compare(a, b) < 0; }
    static int compare(const ArrowTerm& a, const ArrowTerm& b);

private:
    struct Node;
    std::shared_ptr<const Node> node_;
};

struct ArrowTerm::Node {
    ArrowKind kind = ArrowKind::Id;
    std::vector<Formula> formulas;
    std::vector<Term> terms;
    ArrowTerm left, right;
    std::size_t size = 1;
};

inline ArrowKind ArrowTerm::kind() const { return node_->kind; }
inline const std::vector<Formula>& ArrowTerm::formulas() const { return node_->formulas; }
inline const std::vector<Term>& ArrowTerm::terms() const { return node_->terms; }
inline const ArrowTerm& ArrowTerm::left() const { return node_->left; }
inline const ArrowTerm& ArrowTerm::right() const { return node_->right; }
inline std::size_t ArrowTerm::size() const { return node_->size; }

struct ArrowType {
    Formula source;
    Formula target;
    friend bool operator==(const ArrowType&, const ArrowType&) = default;
};

std::string to_string(const ArrowType& t);

enum class Step : std::uint8_t { ComposeLeft, ComposeRight, TensorLeft, TensorRight };
using Path = std::vector<Step>;

std::string to_string(Step s);
std::string to_string(const Path& p);
Step step_from_string(const std::string& s);

/// Subterm addressed by `path`; throws std::out_of_range if it does not resolve.
const ArrowTerm& subterm_at(const ArrowTerm& f, const Path& path);
ArrowTerm replace_at(const ArrowTerm& f, const Path& path, ArrowTerm replacement);
Path child(Path p, Step s);

/// Type of a generator node, computed from its indices alone.
ArrowType generator_type(const ArrowTerm& g, Relation rel);

/// Infers the type of `f` in `theory`. Throws CompositionMismatch,
/// GeneratorNotInTheory or RelationMismatch.
ArrowType infer_type(const ArrowTerm& f, Theory theory);
bool well_typed(const ArrowTerm& f, Theory theory);
/// Checks that a formula is an object of `theory`.
void check_formula(const Formula& a, Theory theory);

ArrowTerm rename_arrow(const ArrowTerm& f, const Renaming& rho);
ArrowTerm substitute_atoms(const ArrowTerm& f, const std::map<Formula, Formula>& table);

/// Isomorphism A ⊢ A† built from b, δ, σ, identities, ∧ and ∘.
ArrowTerm top_iso(const Formula& a, Theory theory);
/// Mirror image of top_iso: A† ⊢ A.
ArrowTerm top_iso_inverse(const Formula& a, Theory theory);

/// Deterministic in its arguments; always well-typed in `theory` with at
/// most `size_budget` AST nodes.
ArrowTerm random_term(Theory theory, std::size_t size_budget, std::uint64_t seed,
                      const std::vector<Variable>& vars);

/// Number of generator occurrences of the given kind.
std::size_t count_kind(const ArrowTerm& f, ArrowKind k);

} // namespace lineq
