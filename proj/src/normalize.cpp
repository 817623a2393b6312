#include <stdexcept>

#include "engine.hpp"
#include "lineq/errors.hpp"
#include "lineq/parse.hpp"

namespace lineq {

using namespace detail;

namespace {

Session make_session(const ArrowTerm& f, Theory theory, std::optional<std::size_t> budget) {
    infer_type(f, theory);
    return Session(f, theory, budget.value_or(Session::default_budget(f)));
}

const ArrowTerm& head_of(const ArrowTerm& beta) {
    const ArrowTerm* t = &beta;
    for (Step s : head_path(beta)) t = s == Step::TensorLeft ? &t->left() : &t->right();
    return *t;
}

bool has_head(const ArrowTerm& factor, ArrowKind k) { return head_kind(factor) == k; }

} // namespace

NormalForm develop(const ArrowTerm& f, Theory theory, std::optional<std::size_t> budget) {
    Session s = make_session(f, theory, budget);
    if (!is_developed(f)) Engine(s).develop({});
    return {s.term(), s.derivation()};
}

RNormalForm r_normal(const ArrowTerm& f, Theory theory, std::optional<std::size_t> budget) {
    Session s = make_session(f, theory, budget);
    Engine e(s);
    e.develop_chain({});

    auto push_up = [&](const Path& q, const Path& hu, const Path& hl) {
        if (!hu.empty() && !hl.empty()) return e.swap(q, hu.front());
        if (!hu.empty()) throw std::logic_error("r-factor below a deeper head");
        switch (e.at(q).left().kind()) {
        case ArrowKind::Trans:
            e.apply(hl.front() == Step::TensorRight ? "rtdelta" : "rtsigma", q, L2R);
            break;
        case ArrowKind::Inv: e.apply("rs", q, L2R); break;
        case ArrowKind::Cong:
            throw PreconditionError("a congruence generator consumes the output of r in " + print_arrow(f) +
                                    "; no r-normal form exists");
        default: e.lift_through(q);
        }
    };

    for (;;) {
        auto fs = factors(s.term());
        std::size_t i = 1;
        while (i < fs.size() && !(has_head(fs[i], ArrowKind::Refl) && !has_head(fs[i - 1], ArrowKind::Refl))) ++i;
        if (i == fs.size()) break;
        e.pair_op({}, i - 1, push_up);
        e.drop_identity_factors({});
    }

    auto fs = factors(s.term());
    std::size_t k = 0;
    while (has_head(fs[k], ArrowKind::Refl)) ++k;
    if (k == 0) {
        s.apply("cat1L", {}, R2L);
    } else {
        for (std::size_t j = k - 1; j-- > 0;) s.apply("cat2", Path(j, Step::ComposeRight), R2L);
    }
    const ArrowTerm& out = s.term();
    return {out.left(), out.right(), s.derivation()};
}

NormalForm s_normal(const ArrowTerm& f, Theory theory, std::optional<std::size_t> budget) {
    if (!theory.has_s()) throw GeneratorNotInTheory("s", theory.name());
    ArrowType type = infer_type(f, theory);
    if (!is_diversified_type(type))
        throw PreconditionNotDiversified("type " + to_string(type) + " is not diversified");
    Session s = make_session(f, theory, budget);
    if (is_s_normal(f)) return {f, s.derivation()};
    Engine e(s);
    e.develop_chain({});

    bool cancelled = false;
    auto push_up = [&](const Path& q, const Path& hu, const Path& hl) {
        if (!hu.empty() && !hl.empty()) return e.swap(q, hu.front());
        if (!hu.empty()) throw std::logic_error("s-factor below a deeper head");
        switch (e.at(q).left().kind()) {
        case ArrowKind::Inv:
            e.apply("ss", q, L2R);
            cancelled = true;
            break;
        case ArrowKind::Trans:
        case ArrowKind::Cong:
            throw PreconditionError("an inversion cannot pass " + to_string(e.at(q).left().kind()) + " in " +
                                    print_arrow(f));
        default: e.lift_through(q);
        }
    };
    auto pair_of = [](const ArrowTerm& factor) {
        const ArrowTerm& h = head_of(factor);
        return std::minmax(h.terms()[0], h.terms()[1]);
    };

    for (;;) {
        auto fs = factors(s.term());
        std::size_t lower = fs.size();
        for (std::size_t i = fs.size(); i-- > 1 && lower == fs.size();) {
            if (!has_head(fs[i], ArrowKind::Inv)) continue;
            for (std::size_t j = 0; j < i; ++j)
                if (has_head(fs[j], ArrowKind::Inv) && pair_of(fs[j]) == pair_of(fs[i])) lower = i;
        }
        if (lower == fs.size()) break;
        cancelled = false;
        for (std::size_t pos = lower; !cancelled; --pos) {
            if (pos == 0) throw PreconditionError("no s-normal form found for " + print_arrow(f));
            e.pair_op({}, pos - 1, push_up);
        }
        e.drop_identity_factors({});
    }
    return {s.term(), s.derivation()};
}

} // namespace lineq
