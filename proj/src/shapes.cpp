#include <map>
#include <set>

#include "lineq/rewrite.hpp"

namespace lineq {

namespace {

bool is_primitive_id(const ArrowTerm& f) { return f.is_id(); }

bool composition_free(const ArrowTerm& f) {
    if (f.is_compose()) return false;
    if (f.is_tensor()) return composition_free(f.left()) && composition_free(f.right());
    return true;
}

void collect_factors(const ArrowTerm& f, std::vector<ArrowTerm>& out) {
    if (f.is_compose()) {
        collect_factors(f.left(), out);
        collect_factors(f.right(), out);
    } else {
        out.push_back(f);
    }
}

} // namespace

bool is_one_term(const ArrowTerm& f) {
    if (f.is_id()) return true;
    if (!f.is_tensor()) return false;
    return (is_primitive_id(f.left()) && is_one_term(f.right())) ||
           (is_primitive_id(f.right()) && is_one_term(f.left()));
}

bool is_beta_term(const ArrowTerm& f, ArrowKind* head) {
    if (f.is_generator()) {
        if (f.is_id()) return false;
        if (head) *head = f.kind();
        return true;
    }
    if (!f.is_tensor()) return false;
    if (is_primitive_id(f.left()) && is_beta_term(f.right(), head)) return true;
    return is_primitive_id(f.right()) && is_beta_term(f.left(), head);
}

bool is_headed_factor(const ArrowTerm& f) { return is_beta_term(f); }

std::vector<ArrowTerm> factors(const ArrowTerm& f) {
    std::vector<ArrowTerm> out;
    collect_factors(f, out);
    return out;
}

bool is_factorized(const ArrowTerm& f) {
    for (const auto& g : factors(f))
        if (!composition_free(g)) return false;
    return true;
}

bool is_developed(const ArrowTerm& f) {
    auto fs = factors(f);
    if (!is_one_term(fs.back())) return false;
    for (std::size_t i = 0; i + 1 < fs.size(); ++i)
        if (!is_beta_term(fs[i])) return false;
    return true;
}

bool is_r_less(const ArrowTerm& f) { return count_kind(f, ArrowKind::Refl) == 0; }

bool is_r_factorized(const ArrowTerm& f) {
    for (const auto& g : factors(f)) {
        ArrowKind head;
        if (is_one_term(g)) continue;
        if (!is_beta_term(g, &head) || head != ArrowKind::Refl) return false;
    }
    return true;
}

bool is_delta_sigma_less(const ArrowTerm& f) {
    for (ArrowKind k : {ArrowKind::DeltaFwd, ArrowKind::DeltaBwd, ArrowKind::SigmaFwd, ArrowKind::SigmaBwd})
        if (count_kind(f, k)) return false;
    return true;
}

namespace {

void count_s_pairs(const ArrowTerm& f, std::map<std::pair<Term, Term>, int>& seen) {
    if (f.kind() == ArrowKind::Inv) {
        auto key = std::minmax(f.terms()[0], f.terms()[1]);
        ++seen[{key.first, key.second}];
    } else if (!f.is_generator()) {
        count_s_pairs(f.left(), seen);
        count_s_pairs(f.right(), seen);
    }
}

} // namespace

bool is_s_normal(const ArrowTerm& f) {
    std::map<std::pair<Term, Term>, int> seen;
    count_s_pairs(f, seen);
    for (const auto& [pair, n] : seen)
        if (n > 1) return false;
    return true;
}

bool is_diversified_type(const ArrowType& t) {
    std::map<Variable, int> count;
    for (const auto& v : occurrences(t.source)) ++count[v];
    for (const auto& v : occurrences(t.target)) ++count[v];
    for (const auto& [v, n] : count)
        if (n != 2) return false;
    return true;
}

} // namespace lineq
