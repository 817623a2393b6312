#include "lineq/parse.hpp"

#include <optional>

#include "cursor.hpp"

namespace lineq {

namespace {

using detail::Cursor;

struct GeneratorSpec {
    std::string_view name;
    ArrowKind kind;
    int formulas;
    int terms;
};

constexpr GeneratorSpec kGenerators[] = {
    {"id", ArrowKind::Id, 1, 0},         {"b>", ArrowKind::BFwd, 3, 0},
    {"b<", ArrowKind::BBwd, 3, 0},       {"del>", ArrowKind::DeltaFwd, 1, 0},
    {"del<", ArrowKind::DeltaBwd, 1, 0}, {"sig>", ArrowKind::SigmaFwd, 1, 0},
    {"sig<", ArrowKind::SigmaBwd, 1, 0}, {"c", ArrowKind::Sym, 2, 0},
    {"r", ArrowKind::Refl, 0, 1},        {"t", ArrowKind::Trans, 0, 3},
    {"s", ArrowKind::Inv, 0, 2},         {"a", ArrowKind::Cong, 0, 4},
};

bool later(const ParseError& a, const ParseError& b) {
    return a.line() != b.line() ? a.line() > b.line() : a.column() > b.column();
}

class Parser {
public:
    explicit Parser(std::string_view text) : cur_(text) {}

    void finish() {
        if (!cur_.at_end()) cur_.fail("end of input");
    }

    Term term() {
        if (cur_.accept("(")) {
            Term l = term();
            cur_.expect(".");
            Term r = term();
            cur_.expect(")");
            return Term::product(std::move(l), std::move(r));
        }
        if (cur_.peek_ident() == "T") cur_.fail("variable");
        return Term::variable(cur_.ident());
    }

    // A formula that may be a single unbracketed conjunction.
    Formula top_formula() {
        Formula l = formula();
        if (!cur_.accept("/\\")) return l;
        Formula r = formula();
        if (cur_.lookahead("/\\")) cur_.fail("bracketed conjunction");
        return Formula::conj(std::move(l), std::move(r));
    }

    Formula formula() {
        if (cur_.peek() == '(') {
            // Either a bracketed conjunction or an atom whose lhs is a product.
            std::size_t save = cur_.pos();
            std::optional<ParseError> first;
            try {
                cur_.expect("(");
                Formula l = formula();
                cur_.expect("/\\");
                Formula r = formula();
                cur_.expect(")");
                return Formula::conj(std::move(l), std::move(r));
            } catch (const ParseError& e) {
                first = e;
            }
            cur_.reset(save);
            try {
                return atom();
            } catch (const ParseError& e) {
                throw later(*first, e) ? *first : e;
            }
        }
        if (cur_.peek_ident() == "T") {
            cur_.ident();
            return Formula::top();
        }
        return atom();
    }

    Formula atom() {
        Term l = term();
        Relation rel;
        if (cur_.accept("<="))
            rel = Relation::Leq;
        else if (cur_.accept("=="))
            rel = Relation::Equiv;
        else
            cur_.fail("'<=' or '=='");
        Term r = term();
        return Formula::atom(rel, std::move(l), std::move(r));
    }

    ArrowTerm arrow() {
        ArrowTerm g = tensor();
        if (cur_.peek_ident() == "o") {
            cur_.ident();
            return ArrowTerm::compose(std::move(g), arrow());
        }
        return g;
    }

    ArrowTerm tensor() {
        ArrowTerm f = primary();
        if (!cur_.accept("/\\")) return f;
        ArrowTerm g = primary();
        if (cur_.lookahead("/\\")) cur_.fail("bracketed tensor");
        return ArrowTerm::tensor(std::move(f), std::move(g));
    }

    ArrowTerm primary() {
        if (cur_.accept("(")) {
            ArrowTerm f = arrow();
            cur_.expect(")");
            return f;
        }
        std::string name = cur_.ident();
        if (cur_.accept(">"))
            name += ">";
        else if (cur_.accept("<"))
            name += "<";
        for (const auto& spec : kGenerators) {
            if (spec.name != name) continue;
            std::vector<Formula> fs;
            std::vector<Term> ts;
            if (spec.formulas > 0) {
                cur_.expect("{");
                for (int i = 0; i < spec.formulas; ++i) {
                    if (i) cur_.expect(";");
                    fs.push_back(top_formula());
                }
                cur_.expect("}");
            } else {
                cur_.expect("[");
                for (int i = 0; i < spec.terms; ++i) {
                    if (i) cur_.expect(";");
                    ts.push_back(term());
                }
                cur_.expect("]");
            }
            return ArrowTerm::generator(spec.kind, std::move(fs), std::move(ts));
        }
        cur_.reset(cur_.pos() - name.size());
        cur_.fail("generator");
    }

private:
    Cursor cur_;
};

std::string print_list(const ArrowTerm& g) {
    std::string out;
    if (!g.formulas().empty()) {
        out += "{";
        for (std::size_t i = 0; i < g.formulas().size(); ++i) {
            if (i) out += "; ";
            out += to_string(g.formulas()[i]);
        }
        return out + "}";
    }
    out += "[";
    for (std::size_t i = 0; i < g.terms().size(); ++i) {
        if (i) out += ";";
        out += to_string(g.terms()[i]);
    }
    return out + "]";
}

std::string print(const ArrowTerm& f) {
    if (f.is_generator()) return to_string(f.kind()) + print_list(f);
    auto wrap = [](const ArrowTerm& x, bool need) { return need ? "(" + print(x) + ")" : print(x); };
    if (f.is_compose()) return wrap(f.left(), f.left().is_compose()) + " o " + print(f.right());
    return wrap(f.left(), !f.left().is_generator()) + " /\\ " + wrap(f.right(), !f.right().is_generator());
}

} // namespace

Term parse_term(std::string_view text) {
    Parser p(text);
    Term t = p.term();
    p.finish();
    return t;
}

Formula parse_formula(std::string_view text) {
    Parser p(text);
    Formula a = p.top_formula();
    p.finish();
    return a;
}

ArrowTerm parse_arrow(std::string_view text) {
    Parser p(text);
    ArrowTerm f = p.arrow();
    p.finish();
    return f;
}

std::string print_arrow(const ArrowTerm& f) { return print(f); }

} // namespace lineq
