#include "lineq/syntax.hpp"

#include <cassert>
#include <set>

namespace lineq {

Term Term::variable(Variable name) {
    Term t;
    auto node = std::make_shared<Node>();
    node->name = std::move(name);
    t.node_ = std::move(node);
    return t;
}

Term Term::product(Term left, Term right) {
    Term t;
    auto node = std::make_shared<Node>();
    node->left = std::move(left);
    node->right = std::move(right);
    t.node_ = std::move(node);
    return t;
}

bool Term::is_variable() const { return !node_->left.valid(); }
const Variable& Term::name() const { return node_->name; }
const Term& Term::left() const { return node_->left; }
const Term& Term::right() const { return node_->right; }

int Term::compare(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return 0;
    if (a.is_variable() != b.is_variable()) return a.is_variable() ? -1 : 1;
    if (a.is_variable()) return a.name().compare(b.name());
    if (int c = compare(a.left(), b.left())) return c;
    return compare(a.right(), b.right());
}

bool operator==(const Term& a, const Term& b) { return Term::compare(a, b) == 0; }

Formula Formula::atom(Relation rel, Term lhs, Term rhs) {
    Formula f;
    auto node = std::make_shared<Node>();
    node->kind = Kind::Atom;
    node->rel = rel;
    node->lhs = std::move(lhs);
    node->rhs = std::move(rhs);
    f.node_ = std::move(node);
    return f;
}

Formula Formula::conj(Formula left, Formula right) {
    Formula f;
    auto node = std::make_shared<Node>();
    node->kind = Kind::Conj;
    node->left = std::move(left);
    node->right = std::move(right);
    f.node_ = std::move(node);
    return f;
}

Formula::Kind Formula::kind() const { return node_ ? node_->kind : Kind::Top; }
Relation Formula::relation() const { return node_->rel; }
const Term& Formula::lhs() const { return node_->lhs; }
const Term& Formula::rhs() const { return node_->rhs; }
const Formula& Formula::left() const { return node_->left; }
const Formula& Formula::right() const { return node_->right; }

int Formula::compare(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return 0;
    if (a.kind() != b.kind()) return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
    switch (a.kind()) {
    case Kind::Top:
        return 0;
    case Kind::Atom:
        if (a.relation() != b.relation()) return a.relation() < b.relation() ? -1 : 1;
        if (int c = Term::compare(a.lhs(), b.lhs())) return c;
        return Term::compare(a.rhs(), b.rhs());
    case Kind::Conj:
        if (int c = compare(a.left(), b.left())) return c;
        return compare(a.right(), b.right());
    }
    return 0;
}

bool operator==(const Formula& a, const Formula& b) { return Formula::compare(a, b) == 0; }

const Variable& Renaming::operator()(const Variable& v) const {
    auto it = map_.find(v);
    return it == map_.end() ? v : it->second;
}

bool Renaming::is_injective() const {
    // Only explicit images are compared.
    std::set<Variable> images;
    for (const auto& [from, to] : map_)
        if (!images.insert(to).second) return false;
    return true;
}

namespace {

void collect(const Term& t, std::vector<Variable>& out) {
    if (t.is_variable()) {
        out.push_back(t.name());
        return;
    }
    collect(t.left(), out);
    collect(t.right(), out);
}

void collect(const Formula& a, std::vector<Variable>& out) {
    switch (a.kind()) {
    case Formula::Kind::Top:
        return;
    case Formula::Kind::Atom:
        collect(a.lhs(), out);
        collect(a.rhs(), out);
        return;
    case Formula::Kind::Conj:
        collect(a.left(), out);
        collect(a.right(), out);
        return;
    }
}

} // namespace

std::vector<Variable> occurrences(const Term& t) {
    std::vector<Variable> out;
    collect(t, out);
    return out;
}

std::vector<Variable> occurrences(const Formula& a) {
    std::vector<Variable> out;
    collect(a, out);
    return out;
}

Formula top_purge(const Formula& a) {
    if (!a.is_conj()) return a;
    Formula l = top_purge(a.left());
    Formula r = top_purge(a.right());
    if (r.is_top()) return l;
    if (l.is_top()) return r;
    if (l == a.left() && r == a.right()) return a;
    return Formula::conj(std::move(l), std::move(r));
}

Term rename(const Term& t, const Renaming& rho) {
    if (t.is_variable()) {
        const Variable& v = rho(t.name());
        return v == t.name() ? t : Term::variable(v);
    }
    return Term::product(rename(t.left(), rho), rename(t.right(), rho));
}

Formula rename_formula(const Formula& a, const Renaming& rho) {
    switch (a.kind()) {
    case Formula::Kind::Top:
        return a;
    case Formula::Kind::Atom:
        return Formula::atom(a.relation(), rename(a.lhs(), rho), rename(a.rhs(), rho));
    case Formula::Kind::Conj:
        return Formula::conj(rename_formula(a.left(), rho), rename_formula(a.right(), rho));
    }
    return a;
}

Term relabel(const Term& t, const std::vector<Variable>& labels, std::size_t& pos) {
    if (t.is_variable()) return Term::variable(labels.at(pos++));
    Term l = relabel(t.left(), labels, pos);
    Term r = relabel(t.right(), labels, pos);
    return Term::product(std::move(l), std::move(r));
}

Formula relabel(const Formula& a, const std::vector<Variable>& labels, std::size_t& pos) {
    switch (a.kind()) {
    case Formula::Kind::Top:
        return a;
    case Formula::Kind::Atom: {
        Term l = relabel(a.lhs(), labels, pos);
        Term r = relabel(a.rhs(), labels, pos);
        return Formula::atom(a.relation(), std::move(l), std::move(r));
    }
    case Formula::Kind::Conj: {
        Formula l = relabel(a.left(), labels, pos);
        Formula r = relabel(a.right(), labels, pos);
        return Formula::conj(std::move(l), std::move(r));
    }
    }
    return a;
}

Formula substitute_atoms(const Formula& a, const std::map<Formula, Formula>& table) {
    switch (a.kind()) {
    case Formula::Kind::Top:
        return a;
    case Formula::Kind::Atom: {
        auto it = table.find(a);
        return it == table.end() ? a : it->second;
    }
    case Formula::Kind::Conj:
        return Formula::conj(substitute_atoms(a.left(), table), substitute_atoms(a.right(), table));
    }
    return a;
}

bool contains_top(const Formula& a) {
    if (a.is_top()) return true;
    if (a.is_conj()) return contains_top(a.left()) || contains_top(a.right());
    return false;
}

bool contains_product(const Formula& a) {
    if (a.is_atom()) return a.lhs().is_product() || a.rhs().is_product();
    if (a.is_conj()) return contains_product(a.left()) || contains_product(a.right());
    return false;
}

std::size_t formula_size(const Formula& a) {
    if (a.is_conj()) return 1 + formula_size(a.left()) + formula_size(a.right());
    return 1;
}

std::string to_string(Relation r) { return r == Relation::Leq ? "<=" : "=="; }

std::string to_string(const Term& t) {
    if (t.is_variable()) return t.name();
    return "(" + to_string(t.left()) + " . " + to_string(t.right()) + ")";
}

namespace {

std::string print_formula(const Formula& a, bool nested) {
    switch (a.kind()) {
    case Formula::Kind::Top:
        return "T";
    case Formula::Kind::Atom:
        return to_string(a.lhs()) + to_string(a.relation()) + to_string(a.rhs());
    case Formula::Kind::Conj: {
        std::string s = print_formula(a.left(), true) + " /\\ " + print_formula(a.right(), true);
        return nested ? "(" + s + ")" : s;
    }
    }
    return {};
}

} // namespace

std::string to_string(const Formula& a) { return print_formula(a, false); }

} // namespace lineq
