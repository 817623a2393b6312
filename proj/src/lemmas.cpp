#include "lemmas.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include "lineq/parse.hpp"

namespace lineq::detail {

namespace {

constexpr const char* kPrefix = "Ph_";

bool is_placeholder(const Formula& a) {
    return a.is_atom() && a.lhs().is_variable() && a.lhs().name().rfind(kPrefix, 0) == 0;
}

using Binding = std::map<Formula, Formula>;

bool match(const Formula& pat, const Formula& f, Binding& b) {
    if (is_placeholder(pat)) {
        auto [it, fresh] = b.emplace(pat, f);
        return fresh || it->second == f;
    }
    if (pat.kind() != f.kind()) return false;
    if (pat.is_conj()) return match(pat.left(), f.left(), b) && match(pat.right(), f.right(), b);
    return pat == f;
}

bool match(const ArrowTerm& pat, const ArrowTerm& t, Binding& b) {
    if (pat.kind() != t.kind()) return false;
    if (!pat.is_generator()) return match(pat.left(), t.left(), b) && match(pat.right(), t.right(), b);
    if (pat.terms() != t.terms() || pat.formulas().size() != t.formulas().size()) return false;
    for (std::size_t i = 0; i < pat.formulas().size(); ++i)
        if (!match(pat.formulas()[i], t.formulas()[i], b)) return false;
    return true;
}

void all_paths(const ArrowTerm& f, Path& cur, std::vector<Path>& out) {
    out.push_back(cur);
    if (f.is_generator()) return;
    bool tensor = f.is_tensor();
    cur.push_back(tensor ? Step::TensorLeft : Step::ComposeLeft);
    all_paths(f.left(), cur, out);
    cur.back() = tensor ? Step::TensorRight : Step::ComposeRight;
    all_paths(f.right(), cur, out);
    cur.pop_back();
}

Direction opposite(Direction d) { return d == Direction::L2R ? Direction::R2L : Direction::L2R; }

} // namespace

Formula LemmaLibrary::placeholder(const std::string& name, Relation rel) {
    Term v = Term::variable(kPrefix + name);
    return Formula::atom(rel, v, v);
}

ArrowTerm LemmaLibrary::parse(const std::string& text) const {
    std::string rel = theory_.relation() == Relation::Leq ? "<=" : "==";
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '%') {
            out += text[i];
            continue;
        }
        std::string v = kPrefix + std::string(1, text[++i]);
        out += v + rel + v;
    }
    return parse_arrow(out);
}

std::vector<std::pair<Move, ArrowTerm>> LemmaLibrary::moves(const ArrowTerm& f, std::size_t max_size) const {
    std::vector<std::pair<Move, ArrowTerm>> out;
    for (auto& r : all_rewrites(f, theory_, max_size)) out.push_back({{-1, r.eq, r.path, r.dir}, r.result});
    std::vector<Path> paths;
    Path cur;
    all_paths(f, cur, paths);
    for (const Path& p : paths) {
        const ArrowTerm& sub = subterm_at(f, p);
        for (std::size_t i = 0; i < lemmas_.size(); ++i)
            for (Direction d : {Direction::L2R, Direction::R2L}) {
                const Lemma& l = lemmas_[i];
                Binding b;
                if (!match(d == Direction::L2R ? l.lhs : l.rhs, sub, b)) continue;
                ArrowTerm next = replace_at(f, p, substitute_atoms(d == Direction::L2R ? l.rhs : l.lhs, b));
                if (next.size() <= max_size) out.push_back({{int(i), l.name, p, d}, next});
            }
    }
    return out;
}

void LemmaLibrary::apply(Session& s, const Move& m, const Path& at) const {
    if (m.lemma < 0) return s.apply(m.eq, at + m.path, m.dir);
    const Derivation& proof = lemmas_[m.lemma].proof;
    s.splice_lemma(at + m.path, m.dir == Direction::L2R ? proof : reversed(proof));
}

void LemmaLibrary::apply(Session& s, const std::string& lemma, const Path& at, Direction dir) const {
    for (std::size_t i = 0; i < lemmas_.size(); ++i)
        if (lemmas_[i].name == lemma) return apply(s, Move{int(i), lemma, {}, dir}, at);
    throw std::logic_error("no lemma named " + lemma);
}

bool LemmaLibrary::bridge(Session& s, const Path& p, const ArrowTerm& to, std::size_t slack,
                          std::size_t max_states) const {
    const ArrowTerm from = s.at(p);
    if (from == to) return true;
    const std::size_t max_size = std::max(from.size(), to.size()) + slack;
    struct Visit {
        std::string parent;
        Move move;
    };
    using Side = std::unordered_map<std::string, Visit>;
    Side fwd, bwd;
    std::deque<ArrowTerm> fq{from}, bq{to};
    fwd.emplace(print_arrow(from), Visit{});
    bwd.emplace(print_arrow(to), Visit{});

    auto chain = [](const Side& side, std::string key) {
        std::vector<Move> ms;
        for (;;) {
            const Visit& v = side.at(key);
            if (v.parent.empty()) break;
            ms.push_back(v.move);
            key = v.parent;
        }
        return ms;
    };
    auto finish = [&](const std::string& meet) {
        auto head = chain(fwd, meet);
        std::reverse(head.begin(), head.end());
        for (const Move& m : head) apply(s, m, p);
        for (Move m : chain(bwd, meet)) {
            m.dir = opposite(m.dir);
            apply(s, m, p);
        }
        if (s.at(p) != to) throw std::logic_error("lemma search replay diverged");
        return true;
    };

    while ((!fq.empty() || !bq.empty()) && fwd.size() + bwd.size() < max_states) {
        bool forward = !fq.empty() && (bq.empty() || fq.size() <= bq.size());
        auto& queue = forward ? fq : bq;
        Side& mine = forward ? fwd : bwd;
        Side& theirs = forward ? bwd : fwd;
        for (std::size_t n = queue.size(); n > 0; --n) {
            ArrowTerm cur = queue.front();
            queue.pop_front();
            std::string key = print_arrow(cur);
            for (auto& [m, next] : moves(cur, max_size)) {
                std::string k = print_arrow(next);
                if (mine.count(k)) continue;
                mine.emplace(k, Visit{key, m});
                if (theirs.count(k)) return finish(k);
                queue.push_back(next);
            }
        }
    }
    return false;
}

void LemmaLibrary::prove(const std::string& name, const std::vector<std::string>& chain) {
    ArrowTerm lhs = parse(chain.front());
    Session s(lhs, theory_, SIZE_MAX);
    for (std::size_t i = 1; i < chain.size(); ++i) {
        ArrowTerm next = parse(chain[i]);
        if (!bridge(s, {}, next, 3, 400000))
            throw std::logic_error("lemma " + name + ": no bridge to line " + std::to_string(i));
    }
    lemmas_.push_back({name, lhs, s.term(), s.derivation()});
}

LemmaLibrary::LemmaLibrary(Theory theory) : theory_(theory) {
    // Triangle, solved for the unitors.
    prove("unit left of assoc", {
        "(del>{%X} /\\ id{%Z}) o b>{%X; T; %Z}",
        "(del>{%X} /\\ id{%Z}) o (del<{%X} /\\ id{%Z}) o (id{%X} /\\ sig>{%Z})",
        "((del>{%X} o del<{%X}) /\\ (id{%Z} o id{%Z})) o (id{%X} /\\ sig>{%Z})",
        "(id{%X} /\\ id{%Z}) o (id{%X} /\\ sig>{%Z})",
        "id{%X} /\\ sig>{%Z}",
    });
    prove("unit right of assoc inverse", {
        "(id{%X} /\\ sig>{%Z}) o b<{%X; T; %Z}",
        "((del>{%X} /\\ id{%Z}) o b>{%X; T; %Z}) o b<{%X; T; %Z}",
        "del>{%X} /\\ id{%Z}",
    });
    // sig>{T /\ X} = id{T} /\ sig>{X}, by naturality of sig> at sig>{X}.
    prove("left unit of unit", {
        "sig>{T /\\ %X}",
        "(sig<{%X} o sig>{%X}) o sig>{T /\\ %X}",
        "sig<{%X} o sig>{%X} o (id{T} /\\ sig>{%X})",
        "id{T} /\\ sig>{%X}",
    });
    // Pentagon at (T, T, B, C) with the triangle.
    prove("assoc past left unit", {
        "b>{T; %B; %C} o (id{T} /\\ ((sig>{%B} /\\ id{%C}) o b>{T; %B; %C}))",
        "b>{T; %B; %C} o (id{T} /\\ (sig>{%B} /\\ id{%C})) o (id{T} /\\ b>{T; %B; %C})",
        "((id{T} /\\ sig>{%B}) /\\ id{%C}) o b>{T; T /\\ %B; %C} o (id{T} /\\ b>{T; %B; %C})",
        "(((del>{T} /\\ id{%B}) o b>{T; T; %B}) /\\ id{%C}) o b>{T; T /\\ %B; %C} o (id{T} /\\ b>{T; %B; %C})",
        "((del>{T} /\\ id{%B}) /\\ id{%C}) o (b>{T; T; %B} /\\ id{%C}) o b>{T; T /\\ %B; %C} o "
        "(id{T} /\\ b>{T; %B; %C})",
        "((del>{T} /\\ id{%B}) /\\ id{%C}) o b>{T /\\ T; %B; %C} o b>{T; T; %B /\\ %C}",
        "b>{T; %B; %C} o (del>{T} /\\ (id{%B} /\\ id{%C})) o b>{T; T; %B /\\ %C}",
        "b>{T; %B; %C} o (del>{T} /\\ id{%B /\\ %C}) o b>{T; T; %B /\\ %C}",
        "b>{T; %B; %C} o (id{T} /\\ sig>{%B /\\ %C})",
    });
    // (sig>{B} /\ id{C}) o b>{T; B; C} = sig>{B /\ C}; id{T} /\ - is cancelled
    // by conjugating with sig>.
    prove("left unit of assoc", {
        "(sig>{%B} /\\ id{%C}) o b>{T; %B; %C}",
        "((sig>{%B} /\\ id{%C}) o b>{T; %B; %C}) o sig>{T /\\ (%B /\\ %C)} o sig<{T /\\ (%B /\\ %C)}",
        "(sig>{%B /\\ %C} o (id{T} /\\ ((sig>{%B} /\\ id{%C}) o b>{T; %B; %C}))) o sig<{T /\\ (%B /\\ %C)}",
        "(sig>{%B /\\ %C} o b<{T; %B; %C} o b>{T; %B; %C} o (id{T} /\\ ((sig>{%B} /\\ id{%C}) o "
        "b>{T; %B; %C}))) o sig<{T /\\ (%B /\\ %C)}",
        "(sig>{%B /\\ %C} o b<{T; %B; %C} o b>{T; %B; %C} o (id{T} /\\ sig>{%B /\\ %C})) o "
        "sig<{T /\\ (%B /\\ %C)}",
        "(sig>{%B /\\ %C} o (id{T} /\\ sig>{%B /\\ %C})) o sig<{T /\\ (%B /\\ %C)}",
        "(sig>{%B /\\ %C} o sig>{T /\\ (%B /\\ %C)}) o sig<{T /\\ (%B /\\ %C)}",
        "sig>{%B /\\ %C}",
    });
    prove("left unit split", {
        "sig>{%B} /\\ id{%C}",
        "(sig>{%B} /\\ id{%C}) o b>{T; %B; %C} o b<{T; %B; %C}",
        "((sig>{%B} /\\ id{%C}) o b>{T; %B; %C}) o b<{T; %B; %C}",
        "sig>{%B /\\ %C} o b<{T; %B; %C}",
    });
    // Pentagon at (A, B, T, T); then id{T} faithfulness through del>.
    prove("right unit of assoc, tensored", {
        "((del>{%A /\\ %B} o b>{%A; %B; T}) /\\ id{T}) o b>{%A; %B /\\ T; T}",
        "(del>{%A /\\ %B} /\\ id{T}) o (b>{%A; %B; T} /\\ id{T}) o b>{%A; %B /\\ T; T}",
        "(del>{%A /\\ %B} /\\ id{T}) o (b>{%A; %B; T} /\\ id{T}) o b>{%A; %B /\\ T; T} o "
        "(id{%A} /\\ id{(%B /\\ T) /\\ T})",
        "(del>{%A /\\ %B} /\\ id{T}) o (b>{%A; %B; T} /\\ id{T}) o b>{%A; %B /\\ T; T} o "
        "(id{%A} /\\ (b>{%B; T; T} o b<{%B; T; T}))",
        "(del>{%A /\\ %B} /\\ id{T}) o ((b>{%A; %B; T} /\\ id{T}) o b>{%A; %B /\\ T; T} o "
        "(id{%A} /\\ b>{%B; T; T})) o (id{%A} /\\ b<{%B; T; T})",
        "(del>{%A /\\ %B} /\\ id{T}) o (b>{%A /\\ %B; T; T} o b>{%A; %B; T /\\ T}) o (id{%A} /\\ b<{%B; T; T})",
        "(id{%A /\\ %B} /\\ sig>{T}) o b>{%A; %B; T /\\ T} o (id{%A} /\\ b<{%B; T; T})",
        "b>{%A; %B; T} o (id{%A} /\\ (id{%B} /\\ sig>{T})) o (id{%A} /\\ b<{%B; T; T})",
        "b>{%A; %B; T} o (id{%A} /\\ ((id{%B} /\\ sig>{T}) o b<{%B; T; T}))",
        "b>{%A; %B; T} o (id{%A} /\\ (del>{%B} /\\ id{T}))",
        "((id{%A} /\\ del>{%B}) /\\ id{T}) o b>{%A; %B /\\ T; T}",
    });
    prove("right unit of assoc", {
        "del>{%A /\\ %B} o b>{%A; %B; T}",
        "(del>{%A /\\ %B} o b>{%A; %B; T}) o del>{%A /\\ (%B /\\ T)} o del<{%A /\\ (%B /\\ T)}",
        "(del>{%A /\\ %B} o ((del>{%A /\\ %B} o b>{%A; %B; T}) /\\ id{T})) o del<{%A /\\ (%B /\\ T)}",
        "(del>{%A /\\ %B} o ((((del>{%A /\\ %B} o b>{%A; %B; T}) /\\ id{T}) o b>{%A; %B /\\ T; T}) o "
        "b<{%A; %B /\\ T; T})) o del<{%A /\\ (%B /\\ T)}",
        "(del>{%A /\\ %B} o ((((id{%A} /\\ del>{%B}) /\\ id{T}) o b>{%A; %B /\\ T; T}) o "
        "b<{%A; %B /\\ T; T})) o del<{%A /\\ (%B /\\ T)}",
        "(del>{%A /\\ %B} o ((id{%A} /\\ del>{%B}) /\\ id{T})) o del<{%A /\\ (%B /\\ T)}",
        "((id{%A} /\\ del>{%B}) o del>{%A /\\ (%B /\\ T)}) o del<{%A /\\ (%B /\\ T)}",
        "id{%A} /\\ del>{%B}",
    });
    // The two unitors agree on T.
    prove("unitors agree", {
        "sig>{T}",
        "sig>{T} o del>{T /\\ T} o del<{T /\\ T}",
        "(del>{T} o (sig>{T} /\\ id{T})) o del<{T /\\ T}",
        "(del>{T} o ((sig>{T} /\\ id{T}) o b>{T; T; T} o b<{T; T; T})) o del<{T /\\ T}",
        "(del>{T} o (((sig>{T} /\\ id{T}) o b>{T; T; T}) o b<{T; T; T})) o del<{T /\\ T}",
        "(del>{T} o (sig>{T /\\ T} o b<{T; T; T})) o del<{T /\\ T}",
        "(del>{T} o ((id{T} /\\ sig>{T}) o b<{T; T; T})) o del<{T /\\ T}",
        "(del>{T} o (del>{T} /\\ id{T})) o del<{T /\\ T}",
        "del>{T}",
    });
    prove("inverse unitors agree", {
        "sig<{T}",
        "(del<{T} o del>{T}) o sig<{T}",
        "(del<{T} o sig>{T}) o sig<{T}",
        "del<{T}",
    });
    if (!theory.symmetric()) return;
    // Hexagon at (A, T, T).
    prove("symmetry into unit, tensored", {
        "((sig>{%A} o c{%A; T}) /\\ id{T}) o b>{%A; T; T}",
        "(sig>{%A} /\\ id{T}) o (c{%A; T} /\\ id{T}) o b>{%A; T; T}",
        "c{T; %A} o c{%A; T} o (sig>{%A} /\\ id{T}) o (c{%A; T} /\\ id{T}) o b>{%A; T; T}",
        "c{T; %A} o c{%A; T} o (sig>{%A /\\ T} o b<{T; %A; T}) o (c{%A; T} /\\ id{T}) o b>{%A; T; T}",
        "c{T; %A} o c{%A; T} o sig>{%A /\\ T} o b<{T; %A; T} o (c{%A; T} /\\ id{T}) o b>{%A; T; T}",
        "c{T; %A} o sig>{T /\\ %A} o (id{T} /\\ c{%A; T}) o b<{T; %A; T} o (c{%A; T} /\\ id{T}) o b>{%A; T; T}",
        "c{T; %A} o ((sig>{T} /\\ id{%A}) o b>{T; T; %A}) o (id{T} /\\ c{%A; T}) o b<{T; %A; T} o "
        "(c{%A; T} /\\ id{T}) o b>{%A; T; T}",
        "c{T; %A} o (sig>{T} /\\ id{%A}) o b>{T; T; %A} o (id{T} /\\ c{%A; T}) o b<{T; %A; T} o "
        "(c{%A; T} /\\ id{T}) o b>{%A; T; T}",
        "c{T; %A} o (sig>{T} /\\ id{%A}) o c{%A; T /\\ T}",
        "c{T; %A} o c{%A; T} o (id{%A} /\\ sig>{T})",
        "id{%A} /\\ sig>{T}",
        "(del>{%A} /\\ id{T}) o b>{%A; T; T}",
    });
    prove("symmetry into unit", {
        "sig>{%A} o c{%A; T}",
        "(sig>{%A} o c{%A; T}) o del>{%A /\\ T} o del<{%A /\\ T}",
        "(del>{%A} o ((sig>{%A} o c{%A; T}) /\\ id{T})) o del<{%A /\\ T}",
        "(del>{%A} o ((((sig>{%A} o c{%A; T}) /\\ id{T}) o b>{%A; T; T}) o b<{%A; T; T})) o del<{%A /\\ T}",
        "(del>{%A} o (((del>{%A} /\\ id{T}) o b>{%A; T; T}) o b<{%A; T; T})) o del<{%A /\\ T}",
        "(del>{%A} o (del>{%A} /\\ id{T})) o del<{%A /\\ T}",
        "del>{%A}",
    });
    prove("symmetry out of unit", {
        "del>{%A} o c{T; %A}",
        "(sig>{%A} o c{%A; T}) o c{T; %A}",
        "sig>{%A}",
    });
}

const LemmaLibrary& LemmaLibrary::of(Theory theory) {
    static std::mutex mu;
    static std::map<TheoryId, std::unique_ptr<LemmaLibrary>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[theory.id()];
    if (!slot) slot.reset(new LemmaLibrary(theory));
    return *slot;
}

} // namespace lineq::detail
