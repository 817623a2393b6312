#pragma once

// Object language: variables, terms built with the binary product, and
// formulae over ⊤, relational atoms and conjunction.

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace lineq {

using Variable = std::string;

class Term {
public:
    Term() = default;
    static Term variable(Variable name);
    static Term product(Term left, Term right);

    bool valid() const { return node_ != nullptr; }
    bool is_variable() const;
    bool is_product() const { return !is_variable(); }
    const Variable& name() const;
    const Term& left() const;
    const Term& right() const;

    friend bool operator==(const Term& a, const Term& b);
    friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
    friend bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }
    static int compare(const Term& a, const Term& b);

private:
    struct Node;
    std::shared_ptr<const Node> node_;
};

struct Term::Node {
    Variable name;
    Term left, right;
};

enum class Relation { Leq, Equiv };

class Formula {
public:
    enum class Kind { Top, Atom, Conj };

    /// Default-constructed formula is ⊤.
    Formula() = default;
    static Formula top() { return {}; }
    static Formula atom(Relation rel, Term lhs, Term rhs);
    static Formula conj(Formula left, Formula right);

    Kind kind() const;
    bool is_top() const { return kind() == Kind::Top; }
    bool is_atom() const { return kind() == Kind::Atom; }
    bool is_conj() const { return kind() == Kind::Conj; }
    Relation relation() const;
    const Term& lhs() const;
    const Term& rhs() const;
    const Formula& left() const;
    const Formula& right() const;

    friend bool operator==(const Formula& a, const Formula& b);
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
    friend bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }
    static int compare(const Formula& a, const Formula& b);

private:
    struct Node;
    std::shared_ptr<const Node> node_;
};

struct Formula::Node {
    Formula::Kind kind = Formula::Kind::Top;
    Relation rel = Relation::Leq;
    Term lhs, rhs;
    Formula left, right;
};

/// Total by default: variables absent from the map are left unchanged.
class Renaming {
public:
    Renaming() = default;
    Renaming(std::initializer_list<std::pair<const Variable, Variable>> init) : map_(init) {}

    void set(const Variable& from, const Variable& to) { map_[from] = to; }
    const Variable& operator()(const Variable& v) const;
    const std::map<Variable, Variable>& entries() const { return map_; }
    bool is_injective() const;

    friend bool operator==(const Renaming&, const Renaming&) = default;

private:
    std::map<Variable, Variable> map_;
};

/// Left-to-right variable occurrences of a term (products flattened).
std::vector<Variable> occurrences(const Term& t);
/// Left-to-right variable occurrences of a formula. Its length is the
/// object the formula is sent to in the diagram category.
std::vector<Variable> occurrences(const Formula& a);

/// Remove every eliminable ⊤ conjunct. The result has no ⊤ or is ⊤.
Formula top_purge(const Formula& a);

Term rename(const Term& t, const Renaming& rho);
Formula rename_formula(const Formula& a, const Renaming& rho);

/// Rebuild `t` with its occurrences replaced, in order, by `labels[pos...]`.
/// `pos` is advanced past the consumed labels.
Term relabel(const Term& t, const std::vector<Variable>& labels, std::size_t& pos);
Formula relabel(const Formula& a, const std::vector<Variable>& labels, std::size_t& pos);

/// Replace whole atoms of `a` by formulas. Used to instantiate lemma
/// derivations recorded over placeholder atoms.
Formula substitute_atoms(const Formula& a, const std::map<Formula, Formula>& table);

bool contains_top(const Formula& a);
bool contains_product(const Formula& a);
/// Number of nodes (⊤, atoms and conjunctions).
std::size_t formula_size(const Formula& a);

std::string to_string(const Term& t);
std::string to_string(const Formula& a);
std::string to_string(Relation r);

} // namespace lineq
