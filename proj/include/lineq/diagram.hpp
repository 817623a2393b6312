#pragma once

// Arrows of the matching category: labelled source/target occurrence lists
// with a perfect matching on their disjoint union. Composition follows
// paths through the shared interface; closed loops are dropped and counted.

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lineq/proofterm.hpp"

namespace lineq {

enum class Side : std::uint8_t { Src, Tgt };

struct Endpoint {
    Side side;
    std::size_t index;
    friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

/// Stored with first < second (SRC before TGT, then by index).
using Edge = std::pair<Endpoint, Endpoint>;

class Diagram {
public:
    Diagram() = default;
    /// Throws std::invalid_argument unless `edges` is a perfect matching.
    Diagram(std::vector<Variable> source, std::vector<Variable> target, const std::vector<Edge>& edges,
            std::size_t loops_discarded = 0);

    const std::vector<Variable>& source() const { return source_; }
    const std::vector<Variable>& target() const { return target_; }
    /// Canonically sorted.
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t loops_discarded() const { return loops_; }
    Endpoint mate(Endpoint e) const;
    const Variable& label(Endpoint e) const;

    std::size_t cups() const;
    std::size_t caps() const;
    /// Every edge joins equal labels.
    bool label_consistent() const;

    /// Labels and edges only; the loop count is a diagnostic and is ignored.
    friend bool operator==(const Diagram& a, const Diagram& b) {
        return a.source_ == b.source_ && a.target_ == b.target_ && a.edges_ == b.edges_;
    }
    bool identical(const Diagram& other) const { return *this == other && loops_ == other.loops_; }

private:
    std::vector<Variable> source_, target_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> mate_; // over source positions, then target positions
    std::size_t loops_ = 0;
};

Diagram identity_diagram(const Formula& a);
Diagram tensor(const Diagram& d1, const Diagram& d2);
/// g ∘ f. Throws InterfaceMismatch when target(f) and source(g) differ.
Diagram compose(const Diagram& g, const Diagram& f);
/// Horizontal mirror: source and target exchanged.
Diagram mirror(const Diagram& d);

Diagram eval(const ArrowTerm& f, Theory theory);

/// A generator occurrence inside a term and, for each of its local
/// positions (source occurrences then target occurrences), the wire of the
/// composite it belongs to.
struct GeneratorTrace {
    Path path;
    ArrowKind kind;
    std::vector<std::size_t> wires;
};

struct EdgeSource {
    Path path;
    ArrowKind kind;
    friend bool operator==(const EdgeSource&, const EdgeSource&) = default;
};

/// Wires are numbered 0..edges-1 in canonical edge order, then the loops.
struct TracedDiagram {
    Diagram diagram;
    std::vector<GeneratorTrace> generators;
    std::size_t wire_count = 0;

    /// Generator occurrences whose primitive edges were fused into each
    /// edge of `diagram` (parallel to diagram.edges()).
    std::vector<std::vector<EdgeSource>> provenance() const;
};

TracedDiagram eval_traced(const ArrowTerm& f, Theory theory);

std::string diagram_json(const Diagram& d);
Diagram diagram_from_json(const std::string& text);
std::string diagram_dot(const Diagram& d);
std::string diagram_ascii(const Diagram& d);

} // namespace lineq
