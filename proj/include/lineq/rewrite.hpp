#pragma once

// Equation schemas of the six theories, one-step rewriting, derivation
// traces, shape predicates on arrow terms and the normal-form passes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lineq/proofterm.hpp"

namespace lineq {

enum class Direction { L2R, R2L };

std::string to_string(Direction d);
Direction direction_from_string(const std::string& s);
inline Direction flip(Direction d) { return d == Direction::L2R ? Direction::R2L : Direction::L2R; }

/// A schema in the pattern syntax: the arrow grammar where a bare
/// identifier in formula position is a formula metavariable, one in arrow
/// position an arrow metavariable, and every term variable is a term
/// metavariable. Atoms match either relation. `typing` entries read
/// "f : A |- B" and bind metavariables occurring on one side only.
struct EquationSchema {
    std::string name;
    std::string lhs;
    std::string rhs;
    std::vector<std::string> typing;
};

/// The exact table of `theory`, in a fixed order.
const std::vector<EquationSchema>& equation_table(Theory theory);
bool has_schema(Theory theory, const std::string& name);

/// One schema instance at `path`. Throws SchemaNotInTheory, or NoMatchAtPath
/// when the path does not resolve, the side does not match, or the
/// instantiated side would not have the same type.
ArrowTerm apply_equation(const ArrowTerm& f, const std::string& name, const Path& path, Direction dir,
                         Theory theory);

struct DerivationStep {
    std::string eq;
    Path path;
    Direction dir;
    ArrowTerm term; // the term after this step
};

struct Derivation {
    ArrowTerm start;
    std::vector<DerivationStep> steps;

    const ArrowTerm& result() const { return steps.empty() ? start : steps.back().term; }
    std::string to_json() const;
};

/// Re-applies every step with apply_equation and checks the recorded terms.
bool replay(const Derivation& d, Theory theory);
/// The same equalities read backwards: from result() to start.
Derivation reversed(const Derivation& d);

/// How metavariables are filled when instantiating a schema: all term
/// metavariables distinct, all the same variable, a mix of two variables
/// with ⊤ and conjunctions for formula metavariables, or depth-2 product
/// terms (dotted theories only).
enum class InstanceMode { Distinct, Equal, Mixed, Nested };

struct SchemaInstance {
    ArrowTerm lhs, rhs;
};

/// Throws SchemaNotInTheory. Returns nullopt when the mode does not yield a
/// well-typed instance.
std::optional<SchemaInstance> instantiate_schema(Theory theory, const std::string& name, InstanceMode mode);

/// Every single-step rewrite of `f` (all schemas, paths and directions).
struct Rewrite {
    std::string eq;
    Path path;
    Direction dir;
    ArrowTerm result;
};
std::vector<Rewrite> all_rewrites(const ArrowTerm& f, Theory theory, std::size_t max_size = SIZE_MAX);

/// `steps` uniformly chosen single-step rewrites from `f`, skipping results
/// larger than `max_size`. Stops early when no rewrite applies.
Derivation random_walk(const ArrowTerm& f, Theory theory, std::size_t steps, std::uint64_t seed,
                       std::size_t max_size = 60);

/// Bidirectional breadth-first search for a derivation from `f` to `g`
/// through terms of at most `max_size` nodes, visiting at most `max_states`.
std::optional<Derivation> find_derivation(const ArrowTerm& f, const ArrowTerm& g, Theory theory,
                                          std::size_t max_size, std::size_t max_states);

// Shape predicates. Factors are the maximal ∘-free subterms of a term whose
// ∘-nodes all lie above its ∧-nodes; bracketing of ∘ is irrelevant.
bool is_one_term(const ArrowTerm& f);
bool is_beta_term(const ArrowTerm& f, ArrowKind* head = nullptr);
bool is_headed_factor(const ArrowTerm& f);
bool is_factorized(const ArrowTerm& f);
bool is_developed(const ArrowTerm& f);
bool is_r_less(const ArrowTerm& f);
bool is_r_factorized(const ArrowTerm& f);
bool is_delta_sigma_less(const ArrowTerm& f);
bool is_s_normal(const ArrowTerm& f);
/// Every variable occurs exactly twice in source and target together.
bool is_diversified_type(const ArrowType& t);

/// Factors of a factorized term, outermost (applied last) first.
std::vector<ArrowTerm> factors(const ArrowTerm& f);

/// Rewrites a term step by step under a step budget. Every step goes
/// through apply_equation, so the recorded derivation always replays.
class Session {
public:
    static std::size_t default_budget(const ArrowTerm& f) { return 10 * f.size() * f.size(); }

    Session(ArrowTerm start, Theory theory, std::size_t budget);
    Session(ArrowTerm start, Theory theory) : Session(start, theory, default_budget(start)) {}

    const ArrowTerm& term() const { return derivation_.result(); }
    const ArrowTerm& at(const Path& p) const { return subterm_at(term(), p); }
    Theory theory() const { return theory_; }
    std::size_t steps() const { return derivation_.steps.size(); }

    /// Throws BudgetExceeded once the budget is spent.
    void apply(const std::string& eq, const Path& path, Direction dir);
    /// Appends a derivation of the subterm at `path`.
    void splice(const Path& path, const Derivation& local);
    /// Same, for an instance of a pre-proved lemma: every step is recorded
    /// but the budget is charged once.
    void splice_lemma(const Path& path, const Derivation& local);

    const Derivation& derivation() const { return derivation_; }

private:
    Theory theory_;
    std::size_t budget_;
    std::size_t charged_ = 0;
    Derivation derivation_;
};

struct NormalForm {
    ArrowTerm term;
    Derivation derivation;
};

/// A developed term equal to `f`, using categorial and bifunctoriality
/// equations only. Developed inputs come back unchanged.
NormalForm develop(const ArrowTerm& f, Theory theory, std::optional<std::size_t> budget = std::nullopt);

struct RNormalForm {
    ArrowTerm f_r;     // r-factorized
    ArrowTerm f_prime; // developed and r-less
    Derivation derivation; // ends in Compose(f_r, f_prime)
};

/// Throws PreconditionError when a congruence generator consumes the output
/// of a reflexivity arrow: such terms have no r-normal form.
RNormalForm r_normal(const ArrowTerm& f, Theory theory, std::optional<std::size_t> budget = std::nullopt);

/// Throws PreconditionNotRLess, PreconditionTopInType.
NormalForm delta_sigma_purge(const ArrowTerm& f, Theory theory, std::optional<std::size_t> budget = std::nullopt);

/// Throws PreconditionNotDiversified, or GeneratorNotInTheory without s.
NormalForm s_normal(const ArrowTerm& f, Theory theory, std::optional<std::size_t> budget = std::nullopt);

} // namespace lineq
