#pragma once

// Decisions read off diagrams: equality, generality, diversification, the
// closure analysis of r-less terms, and the F ⊣ G adjunction with the
// generators it defines.

#include <string>
#include <utility>
#include <vector>

#include "lineq/diagram.hpp"

namespace lineq {

/// Same type and same diagram (loop counts ignored). By coherence this is
/// provable equality in the theory.
bool decide_equal(const ArrowTerm& f, const ArrowTerm& g, Theory theory);

struct Diversified {
    ArrowTerm term;
    /// Sends the fresh variables back: rename_arrow(term, renaming) == f.
    Renaming renaming;
};

/// One fresh variable per wire of eval(f), named v1, v2, ... in order of
/// first source-then-target occurrence (closed loops last).
Diversified diversify(const ArrowTerm& f, Theory theory);

/// Throws TypeMismatch if the types differ.
bool same_generality(const ArrowTerm& f, const ArrowTerm& g, Theory theory);

/// Source occurrences u1..u2n: (u1,u2), (u3,u4), ... are atoms of the
/// source, (u2,u3), (u4,u5), ... cups.
using MaximalSequence = std::vector<Endpoint>;

/// Needs an r-less term over variable-only atoms. Every source occurrence
/// lands in exactly one sequence; sequences are ordered by their least
/// member.
std::vector<MaximalSequence> maximal_sequences(const ArrowTerm& f, Theory theory);

/// For every maximal sequence U and target atom x R y, U reaches the x
/// occurrence iff it reaches the y occurrence.
bool check_star(const ArrowTerm& f, Theory theory);

/// Conjunctions of the source, numbered left to right from 0, that some cup
/// of eval(f) straddles.
std::vector<std::size_t> covered_conjunctions(const ArrowTerm& f, Theory theory);

/// The adjunction between objects free of `y` and objects `y R u ∧ A`
/// (also `u ≡ y ∧ A` in the ≡ theories).
struct AdjunctionContext {
    Variable y, z;
    Theory theory;

    AdjunctionContext(Variable y, Variable z, Theory theory);

    /// y R z ∧ A. Throws VariableYOccurs.
    Formula F(const Formula& a) const;
    /// id{y R z} ∧ f.
    ArrowTerm F(const ArrowTerm& f) const;
    /// z for y. Throws NotInSubcategory unless the object has the shape.
    Formula G(const Formula& b) const;
    /// z for y; source and target must have the shape.
    ArrowTerm G(const ArrowTerm& f) const;

    /// A ⊢ G(F(A)).
    ArrowTerm unit(const Formula& a) const;
    /// F(G(B)) ⊢ B.
    ArrowTerm counit(const Formula& b) const;
};

struct CheckResult {
    std::string name;
    std::string instance;
    bool passed = false;
    std::string error;
};

struct AdjunctionReport {
    std::vector<CheckResult> checks;
    bool passed() const;
    std::string json(const AdjunctionContext& ctx) const;
};

/// Every object with at most `max_atoms` leaves, each ⊤ or an atom over
/// `vars`, in every bracketing.
std::vector<Formula> enumerate_objects(Theory theory, const std::vector<Variable>& vars, std::size_t max_atoms);

/// Triangle identities and naturality at the samples, plus the definitions
/// of r, t (and s in the ≡ theories) through the unit and counit. Objects
/// and arrows containing y are skipped.
AdjunctionReport check_adjunction(const AdjunctionContext& ctx, const std::vector<Formula>& objects,
                                  const std::vector<ArrowTerm>& arrows);

/// (A ∧ B) ∧ (C ∧ D) ⊢ (A ∧ C) ∧ (B ∧ D). Needs c: throws
/// GeneratorNotInTheory in the non-symmetric theories.
ArrowTerm middle_four(const Formula& a, const Formula& b, const Formula& c, const Formula& d, Theory theory);

} // namespace lineq
