#include "lineq/diagram.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "lineq/errors.hpp"

namespace lineq {

namespace {

// Flat form used internally: mates over source positions then target positions.
struct Matching {
    std::vector<Variable> source, target;
    std::vector<std::size_t> mate;
    std::size_t loops = 0;
    std::vector<std::size_t> wire; // traced evaluation only; parallel to mate
};

std::size_t flat(const Endpoint& e, std::size_t n_src) { return e.side == Side::Src ? e.index : n_src + e.index; }

Endpoint unflat(std::size_t p, std::size_t n_src) {
    return p < n_src ? Endpoint{Side::Src, p} : Endpoint{Side::Tgt, p - n_src};
}

Matching to_matching(const Diagram& d) {
    Matching m{d.source(), d.target(), {}, d.loops_discarded(), {}};
    std::size_t n = d.source().size();
    m.mate.resize(n + d.target().size());
    for (const auto& [a, b] : d.edges()) {
        m.mate[flat(a, n)] = flat(b, n);
        m.mate[flat(b, n)] = flat(a, n);
    }
    return m;
}

Diagram to_diagram(const Matching& m) {
    std::size_t n = m.source.size();
    std::vector<Edge> edges;
    for (std::size_t p = 0; p < m.mate.size(); ++p)
        if (p < m.mate[p]) edges.push_back({unflat(p, n), unflat(m.mate[p], n)});
    return Diagram(m.source, m.target, edges, m.loops);
}

class UnionFind {
public:
    std::size_t make() {
        parent_.push_back(parent_.size());
        return parent_.size() - 1;
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};

Matching tensor_m(const Matching& f, const Matching& g) {
    std::size_t n1 = f.source.size(), m1 = f.target.size();
    std::size_t n2 = g.source.size(), m2 = g.target.size();
    auto from_f = [&](std::size_t p) { return p < n1 ? p : n2 + p; };
    auto from_g = [&](std::size_t p) { return p < n2 ? n1 + p : n1 + m1 + p; };
    Matching out;
    out.source = f.source;
    out.source.insert(out.source.end(), g.source.begin(), g.source.end());
    out.target = f.target;
    out.target.insert(out.target.end(), g.target.begin(), g.target.end());
    out.mate.resize(n1 + n2 + m1 + m2);
    bool traced = !f.wire.empty() || !g.wire.empty();
    if (traced) out.wire.resize(out.mate.size());
    for (std::size_t p = 0; p < f.mate.size(); ++p) {
        out.mate[from_f(p)] = from_f(f.mate[p]);
        if (traced) out.wire[from_f(p)] = f.wire[p];
    }
    for (std::size_t p = 0; p < g.mate.size(); ++p) {
        out.mate[from_g(p)] = from_g(g.mate[p]);
        if (traced) out.wire[from_g(p)] = g.wire[p];
    }
    out.loops = f.loops + g.loops;
    return out;
}

Matching compose_m(const Matching& g, const Matching& f, UnionFind* uf) {
    if (f.target != g.source) {
        std::size_t i = 0;
        while (i < f.target.size() && i < g.source.size() && f.target[i] == g.source[i]) ++i;
        throw InterfaceMismatch(i, i < f.target.size() ? f.target[i] : "<end>",
                                i < g.source.size() ? g.source[i] : "<end>");
    }
    const std::size_t n = f.source.size(), k = f.target.size(), m = g.target.size();
    Matching out;
    out.source = f.source;
    out.target = g.target;
    out.mate.assign(n + m, 0);
    out.loops = f.loops + g.loops;
    std::vector<bool> seen(k, false);

    // Follow the alternating path from a position of f (in_f) or g until it
    // leaves through the outer boundary; returns the result position.
    auto walk = [&](bool in_f, std::size_t p) {
        for (;;) {
            if (in_f) {
                std::size_t q = f.mate[p];
                if (q < n) return q;
                seen[q - n] = true;
                in_f = false;
                p = q - n;
            } else {
                std::size_t r = g.mate[p];
                if (r >= k) return n + (r - k);
                seen[r] = true;
                in_f = true;
                p = n + r;
            }
        }
    };
    for (std::size_t i = 0; i < n; ++i) out.mate[i] = walk(true, i);
    for (std::size_t j = 0; j < m; ++j) out.mate[n + j] = walk(false, k + j);
    for (std::size_t j = 0; j < k; ++j) {
        if (seen[j]) continue;
        // A cycle confined to the interface.
        std::size_t p = j;
        do {
            seen[p] = true;
            std::size_t q = f.mate[n + p] - n;
            seen[q] = true;
            p = g.mate[q];
        } while (p != j);
        ++out.loops;
    }
    if (uf) {
        for (std::size_t j = 0; j < k; ++j) uf->unite(f.wire[n + j], g.wire[j]);
        out.wire.resize(n + m);
        for (std::size_t i = 0; i < n; ++i) out.wire[i] = f.wire[i];
        for (std::size_t j = 0; j < m; ++j) out.wire[n + j] = g.wire[k + j];
    }
    return out;
}

// Source blocks are sent to target slots: block b goes to slot order[b].
Matching block_permutation(std::vector<Variable> src, std::vector<Variable> tgt,
                           const std::vector<std::size_t>& sizes, const std::vector<std::size_t>& order) {
    std::size_t n = src.size();
    std::vector<std::size_t> src_start(sizes.size()), slot_start(sizes.size());
    std::vector<std::size_t> slot_size(sizes.size());
    for (std::size_t b = 0; b < sizes.size(); ++b) slot_size[order[b]] = sizes[b];
    for (std::size_t b = 1; b < sizes.size(); ++b) {
        src_start[b] = src_start[b - 1] + sizes[b - 1];
        slot_start[b] = slot_start[b - 1] + slot_size[b - 1];
    }
    Matching m{std::move(src), std::move(tgt), {}, 0, {}};
    m.mate.resize(n + m.target.size());
    for (std::size_t b = 0; b < sizes.size(); ++b)
        for (std::size_t i = 0; i < sizes[b]; ++i) {
            std::size_t s = src_start[b] + i, t = n + slot_start[order[b]] + i;
            m.mate[s] = t;
            m.mate[t] = s;
        }
    return m;
}

Matching generator_matching(const ArrowTerm& g, Relation rel) {
    ArrowType type = generator_type(g, rel);
    std::vector<Variable> src = occurrences(type.source), tgt = occurrences(type.target);
    auto len = [](const auto& x) { return occurrences(x).size(); };
    switch (g.kind()) {
    case ArrowKind::Sym:
        return block_permutation(std::move(src), std::move(tgt), {len(g.formulas()[0]), len(g.formulas()[1])}, {1, 0});
    case ArrowKind::Inv:
        return block_permutation(std::move(src), std::move(tgt), {len(g.terms()[0]), len(g.terms()[1])}, {1, 0});
    case ArrowKind::Cong: {
        std::vector<std::size_t> sizes;
        for (const auto& t : g.terms()) sizes.push_back(len(t));
        return block_permutation(std::move(src), std::move(tgt), sizes, {0, 2, 1, 3});
    }
    case ArrowKind::Refl: {
        std::size_t k = len(g.terms()[0]);
        Matching m{std::move(src), std::move(tgt), std::vector<std::size_t>(2 * k), 0, {}};
        for (std::size_t i = 0; i < k; ++i) {
            m.mate[i] = k + i;
            m.mate[k + i] = i;
        }
        return m;
    }
    case ArrowKind::Trans: {
        std::size_t a = len(g.terms()[0]), b = len(g.terms()[1]), c = len(g.terms()[2]);
        std::size_t n = a + 2 * b + c;
        Matching m{std::move(src), std::move(tgt), std::vector<std::size_t>(n + a + c), 0, {}};
        auto join = [&](std::size_t p, std::size_t q) {
            m.mate[p] = q;
            m.mate[q] = p;
        };
        for (std::size_t i = 0; i < a; ++i) join(i, n + i);
        for (std::size_t i = 0; i < b; ++i) join(a + i, a + b + i);
        for (std::size_t i = 0; i < c; ++i) join(a + 2 * b + i, n + a + i);
        return m;
    }
    default: {
        // Identities and the b, δ, σ isomorphisms: straight lines.
        std::size_t n = src.size();
        Matching m{std::move(src), std::move(tgt), std::vector<std::size_t>(2 * n), 0, {}};
        for (std::size_t i = 0; i < n; ++i) {
            m.mate[i] = n + i;
            m.mate[n + i] = i;
        }
        return m;
    }
    }
}

Matching eval_m(const ArrowTerm& f, Relation rel) {
    if (f.is_generator()) return generator_matching(f, rel);
    if (f.is_tensor()) return tensor_m(eval_m(f.left(), rel), eval_m(f.right(), rel));
    return compose_m(eval_m(f.left(), rel), eval_m(f.right(), rel), nullptr);
}

Matching eval_traced_m(const ArrowTerm& f, Relation rel, Path& path, UnionFind& uf,
                       std::vector<GeneratorTrace>& gens) {
    if (f.is_generator()) {
        Matching m = generator_matching(f, rel);
        m.wire.resize(m.mate.size());
        for (std::size_t p = 0; p < m.mate.size(); ++p)
            if (p < m.mate[p]) m.wire[p] = m.wire[m.mate[p]] = uf.make();
        gens.push_back({path, f.kind(), m.wire});
        return m;
    }
    bool comp = f.is_compose();
    path.push_back(comp ? Step::ComposeLeft : Step::TensorLeft);
    Matching l = eval_traced_m(f.left(), rel, path, uf, gens);
    path.back() = comp ? Step::ComposeRight : Step::TensorRight;
    Matching r = eval_traced_m(f.right(), rel, path, uf, gens);
    path.pop_back();
    return comp ? compose_m(l, r, &uf) : tensor_m(l, r);
}

} // namespace

Diagram::Diagram(std::vector<Variable> source, std::vector<Variable> target, const std::vector<Edge>& edges,
                 std::size_t loops_discarded)
    : source_(std::move(source)), target_(std::move(target)), loops_(loops_discarded) {
    const std::size_t n = source_.size(), total = n + target_.size();
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    mate_.assign(total, unset);
    for (auto [a, b] : edges) {
        if (b < a) std::swap(a, b);
        if ((a.side == Side::Src ? n : target_.size()) <= a.index ||
            (b.side == Side::Src ? n : target_.size()) <= b.index)
            throw std::invalid_argument("edge endpoint out of range");
        std::size_t p = flat(a, n), q = flat(b, n);
        if (p == q || mate_[p] != unset || mate_[q] != unset)
            throw std::invalid_argument("edges are not a matching");
        mate_[p] = q;
        mate_[q] = p;
        edges_.push_back({a, b});
    }
    if (std::find(mate_.begin(), mate_.end(), unset) != mate_.end())
        throw std::invalid_argument("matching is not perfect");
    std::sort(edges_.begin(), edges_.end());
}

Endpoint Diagram::mate(Endpoint e) const { return unflat(mate_.at(flat(e, source_.size())), source_.size()); }

const Variable& Diagram::label(Endpoint e) const {
    return e.side == Side::Src ? source_.at(e.index) : target_.at(e.index);
}

std::size_t Diagram::cups() const {
    return std::count_if(edges_.begin(), edges_.end(),
                         [](const Edge& e) { return e.second.side == Side::Src; });
}

std::size_t Diagram::caps() const {
    return std::count_if(edges_.begin(), edges_.end(),
                         [](const Edge& e) { return e.first.side == Side::Tgt; });
}

bool Diagram::label_consistent() const {
    return std::all_of(edges_.begin(), edges_.end(),
                       [this](const Edge& e) { return label(e.first) == label(e.second); });
}

Diagram identity_diagram(const Formula& a) { return to_diagram(generator_matching(ArrowTerm::id(a), Relation::Leq)); }

Diagram tensor(const Diagram& d1, const Diagram& d2) { return to_diagram(tensor_m(to_matching(d1), to_matching(d2))); }

Diagram compose(const Diagram& g, const Diagram& f) {
    return to_diagram(compose_m(to_matching(g), to_matching(f), nullptr));
}

Diagram mirror(const Diagram& d) {
    std::vector<Edge> edges;
    auto flip = [](Endpoint e) { return Endpoint{e.side == Side::Src ? Side::Tgt : Side::Src, e.index}; };
    for (const auto& [a, b] : d.edges()) edges.push_back({flip(a), flip(b)});
    return Diagram(d.target(), d.source(), edges, d.loops_discarded());
}

Diagram eval(const ArrowTerm& f, Theory theory) {
    infer_type(f, theory);
    return to_diagram(eval_m(f, theory.relation()));
}

TracedDiagram eval_traced(const ArrowTerm& f, Theory theory) {
    infer_type(f, theory);
    UnionFind uf;
    TracedDiagram out;
    Path path;
    Matching m = eval_traced_m(f, theory.relation(), path, uf, out.generators);
    out.diagram = to_diagram(m);

    std::map<std::size_t, std::size_t> number; // wire class -> public wire id
    const std::size_t n = m.source.size();
    for (const auto& [a, b] : out.diagram.edges()) number.emplace(uf.find(m.wire[flat(a, n)]), number.size());
    for (auto& g : out.generators)
        for (auto& w : g.wires) w = number.emplace(uf.find(w), number.size()).first->second;
    out.wire_count = number.size();
    return out;
}

std::vector<std::vector<EdgeSource>> TracedDiagram::provenance() const {
    std::vector<std::vector<EdgeSource>> out(diagram.edges().size());
    for (const auto& g : generators) {
        // Each primitive edge contributes its two positions to one wire.
        std::map<std::size_t, std::size_t> count;
        for (std::size_t w : g.wires) ++count[w];
        for (const auto& [w, c] : count)
            if (w < out.size())
                for (std::size_t i = 0; i < c / 2; ++i) out[w].push_back({g.path, g.kind});
    }
    return out;
}

std::string diagram_json(const Diagram& d) {
    nlohmann::json edges = nlohmann::json::array();
    auto ep = [](Endpoint e) { return nlohmann::json::array({e.side == Side::Src ? "s" : "t", e.index}); };
    for (const auto& [a, b] : d.edges()) edges.push_back(nlohmann::json::array({ep(a), ep(b)}));
    nlohmann::ordered_json j;
    j["source"] = d.source();
    j["target"] = d.target();
    j["edges"] = edges;
    j["loops_discarded"] = d.loops_discarded();
    return j.dump();
}

Diagram diagram_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    std::vector<Edge> edges;
    auto ep = [](const nlohmann::json& e) {
        return Endpoint{e.at(0).get<std::string>() == "s" ? Side::Src : Side::Tgt, e.at(1).get<std::size_t>()};
    };
    for (const auto& e : j.at("edges")) edges.push_back({ep(e.at(0)), ep(e.at(1))});
    return Diagram(j.at("source").get<std::vector<Variable>>(), j.at("target").get<std::vector<Variable>>(), edges,
                   j.value("loops_discarded", std::size_t{0}));
}

std::string diagram_dot(const Diagram& d) {
    // Sources on the bottom rank, targets on the top rank.
    std::ostringstream out;
    out << "graph diagram {\n  rankdir=TB;\n  node [shape=plaintext];\n";
    out << "  { rank=same;";
    for (std::size_t i = 0; i < d.target().size(); ++i) out << " t" << i;
    out << " }\n  { rank=same;";
    for (std::size_t i = 0; i < d.source().size(); ++i) out << " s" << i;
    out << " }\n";
    for (std::size_t i = 0; i < d.target().size(); ++i)
        out << "  t" << i << " [label=\"" << d.target()[i] << "\"];\n";
    for (std::size_t i = 0; i < d.source().size(); ++i)
        out << "  s" << i << " [label=\"" << d.source()[i] << "\"];\n";
    // Invisible chains keep each row in occurrence order.
    for (std::size_t i = 1; i < d.target().size(); ++i) out << "  t" << i - 1 << " -- t" << i << " [style=invis];\n";
    for (std::size_t i = 1; i < d.source().size(); ++i) out << "  s" << i - 1 << " -- s" << i << " [style=invis];\n";
    auto name = [](Endpoint e) { return (e.side == Side::Src ? "s" : "t") + std::to_string(e.index); };
    for (const auto& [a, b] : d.edges()) {
        // Rank order: targets above sources.
        Endpoint upper = b.side == Side::Tgt ? b : a, lower = b.side == Side::Tgt ? a : b;
        out << "  " << name(upper) << " -- " << name(lower) << ";\n";
    }
    out << "}\n";
    return out.str();
}

std::string diagram_ascii(const Diagram& d) {
    std::ostringstream out;
    auto row = [&](const char* tag, const std::vector<Variable>& labels) {
        out << tag;
        for (std::size_t i = 0; i < labels.size(); ++i) out << ' ' << i << ':' << labels[i];
        out << '\n';
    };
    row("target:", d.target());
    row("source:", d.source());
    for (const auto& [a, b] : d.edges()) {
        const char* what = a.side != b.side ? "line" : (a.side == Side::Src ? "cup " : "cap ");
        out << "  " << what << ' ' << (a.side == Side::Src ? 's' : 't') << a.index << " -- "
            << (b.side == Side::Src ? 's' : 't') << b.index << " (" << d.label(a) << ")\n";
    }
    if (d.loops_discarded()) out << "  loops discarded: " << d.loops_discarded() << '\n';
    return out.str();
}

} // namespace lineq
