#pragma once

// Coherence lemmas over placeholder atoms. A lemma is proved once per theory
// as a chain of intermediate terms, each gap closed by a short search; its
// recorded steps then replay on any instance, because every schema instance
// is determined by the matched side and the typing.

#include <optional>
#include <string>
#include <vector>

#include "engine.hpp"

namespace lineq::detail {

struct Lemma {
    std::string name;
    ArrowTerm lhs, rhs;
    Derivation proof; // lhs to rhs, schema steps only
};

/// One rewrite: a schema (lemma < 0) or a lemma instance at a path.
struct Move {
    int lemma = -1;
    std::string eq;
    Path path;
    Direction dir = Direction::L2R;
};

class LemmaLibrary {
public:
    /// Built lazily, once per theory.
    static const LemmaLibrary& of(Theory theory);

    /// Placeholder atom used by lemma templates: `%A` in a template.
    static Formula placeholder(const std::string& name, Relation rel);
    /// Parses a template, replacing `%X` by placeholder atoms.
    ArrowTerm parse(const std::string& text) const;

    void apply(Session& s, const Move& m, const Path& at) const;
    /// Applies the named lemma at `at`; the budget is charged once.
    void apply(Session& s, const std::string& lemma, const Path& at, Direction dir) const;
    /// Rewrites the subterm at `p` into `to` with a bounded bidirectional
    /// search over schema and lemma moves. Returns false if none was found.
    bool bridge(Session& s, const Path& p, const ArrowTerm& to, std::size_t slack, std::size_t max_states) const;

    Theory theory() const { return theory_; }
    const std::vector<Lemma>& lemmas() const { return lemmas_; }

private:
    explicit LemmaLibrary(Theory theory);
    void prove(const std::string& name, const std::vector<std::string>& chain);
    std::vector<std::pair<Move, ArrowTerm>> moves(const ArrowTerm& f, std::size_t max_size) const;

    Theory theory_;
    std::vector<Lemma> lemmas_;
};

} // namespace lineq::detail
