// Seeded, type-directed generation of well-typed arrow terms.

#include <random>

#include "lineq/proofterm.hpp"

namespace lineq {

namespace {

class Generator {
public:
    Generator(Theory theory, std::uint64_t seed, const std::vector<Variable>& vars)
        : theory_(theory), rng_(seed), vars_(vars) {}

    // Raw engine output keeps the stream identical across standard libraries.
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
    bool chance(unsigned percent) { return below(100) < percent; }

    Term term(int depth) {
        if (theory_.dotted() && depth > 0 && chance(20)) return Term::product(term(depth - 1), term(depth - 1));
        return Term::variable(vars_[below(vars_.size())]);
    }

    Formula formula(int depth) {
        if (depth > 0 && chance(45)) return Formula::conj(formula(depth - 1), formula(depth - 1));
        if (chance(12)) return Formula::top();
        return Formula::atom(theory_.relation(), term(1), term(1));
    }

    // A well-typed term with source `src` and at most `budget` nodes.
    ArrowTerm from(const Formula& src, std::size_t budget, Formula& tgt) {
        if (budget >= 3) {
            std::size_t roll = below(10);
            if (roll < 3) {
                std::size_t k = 1 + below(budget - 2);
                Formula mid;
                ArrowTerm f = from(src, k, mid);
                ArrowTerm g = from(mid, budget - 1 - k, tgt);
                return ArrowTerm::compose(std::move(g), std::move(f));
            }
            if (roll < 6 && src.is_conj()) {
                std::size_t k = 1 + below(budget - 2);
                Formula tl, tr;
                ArrowTerm f = from(src.left(), k, tl);
                ArrowTerm g = from(src.right(), budget - 1 - k, tr);
                tgt = Formula::conj(tl, tr);
                return ArrowTerm::tensor(std::move(f), std::move(g));
            }
        }
        std::vector<ArrowTerm> options = generators_from(src);
        ArrowTerm g = options[below(options.size())];
        tgt = generator_type(g, theory_.relation()).target;
        return g;
    }

    std::vector<ArrowTerm> generators_from(const Formula& a) {
        std::vector<ArrowTerm> out{ArrowTerm::id(a), ArrowTerm::delta_bwd(a), ArrowTerm::sigma_bwd(a)};
        if (a.is_top()) {
            out.push_back(ArrowTerm::refl(term(1)));
            out.push_back(ArrowTerm::refl(term(1)));
        }
        if (a.is_atom() && theory_.has_s()) out.push_back(ArrowTerm::inv(a.lhs(), a.rhs()));
        if (a.is_conj()) {
            const Formula& l = a.left();
            const Formula& r = a.right();
            if (r.is_conj()) out.push_back(ArrowTerm::b_fwd(l, r.left(), r.right()));
            if (l.is_conj()) out.push_back(ArrowTerm::b_bwd(l.left(), l.right(), r));
            if (r.is_top()) out.push_back(ArrowTerm::delta_fwd(l));
            if (l.is_top()) out.push_back(ArrowTerm::sigma_fwd(r));
            if (theory_.symmetric()) out.push_back(ArrowTerm::sym(l, r));
            if (l.is_atom() && r.is_atom()) {
                if (l.rhs() == r.lhs()) {
                    // Favour t: it is the only generator that creates cups.
                    out.push_back(ArrowTerm::trans(l.lhs(), l.rhs(), r.rhs()));
                    out.push_back(ArrowTerm::trans(l.lhs(), l.rhs(), r.rhs()));
                }
                if (theory_.dotted()) out.push_back(ArrowTerm::cong(l.lhs(), l.rhs(), r.lhs(), r.rhs()));
            }
        }
        return out;
    }

private:
    Theory theory_;
    std::mt19937_64 rng_;
    const std::vector<Variable>& vars_;
};

} // namespace

ArrowTerm random_term(Theory theory, std::size_t size_budget, std::uint64_t seed,
                      const std::vector<Variable>& vars) {
    Generator gen(theory, seed, vars);
    Formula src = gen.formula(2);
    Formula tgt;
    return gen.from(src, size_budget < 1 ? 1 : size_budget, tgt);
}

} // namespace lineq
