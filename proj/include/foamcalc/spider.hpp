// The decategorified layer: Kuperberg sl(3) spider evaluation of closed
// webs, the quantum link polynomial by skein expansion, and the bilinear
// pairing of webs with boundary.
//
// A closed web evaluates by the spider relations
//   circle  -> [3] = q^2 + 1 + q^-2
//   bigon   -> [2] = q + q^-1 times the strand
//   square  -> the sum of its two smoothings
// with the same deterministic reduction order the foam layer uses, so the
// two layers can be cross-checked summand by summand.

#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "foamcalc/algebra.hpp"
#include "foamcalc/diagram.hpp"
#include "foamcalc/web.hpp"

namespace foamcalc {

// Memoized by canonical form of the combinatorial map.
LaurentPoly evaluateClosedWeb(const Web& w);

// Expands each positive crossing as q^2 (identity) - q^3 (H) and each
// negative crossing as -q^-3 (H) + q^-2 (identity), then evaluates every
// resulting closed web.
LaurentPoly quantumInvariant(const LinkDiagram& d);

// ---------------------------------------------------------------------------
// Webs with boundary, for the pairing. Boundary points sit on the disc's
// rim in cyclic order; each is the endpoint of exactly one strand end.
// ---------------------------------------------------------------------------

struct BoundaryWeb {
    // Attachment of an edge end: an internal vertex or a boundary point.
    struct BoundaryPt {
        int index;
    };
    struct Edge {
        std::variant<VId, BoundaryPt> tail, head;
    };
    std::map<Id, Edge> edges;
    std::map<VId, VertexData> vertices;  // rotations reference edge ids
    std::set<Id> circles;
    int boundaryCount = 0;

    // true when the strand at boundary point i points outward (its head is
    // on the rim).
    std::vector<bool> outwardAt() const;
    void validate() const;
};

// Single arc between two boundary points, oriented from `from` to `to`.
BoundaryWeb arcWeb(int boundaryCount, int from, int to);
// Crossingless matching of 2k points given as (from, to) oriented pairs.
BoundaryWeb matchingWeb(int boundaryCount, const std::vector<std::pair<int, int>>& pairs);

// Reverses A's orientations, glues A and B point by point along their
// boundary, and evaluates the resulting closed web. Boundaries must carry
// identical orientation sequences.
LaurentPoly pairing(const BoundaryWeb& a, const BoundaryWeb& b);

struct PairingMatrix {
    std::vector<std::vector<LaurentPoly>> gram;
    LaurentPoly determinant;
    bool nondegenerate = false;
};
PairingMatrix pairingMatrix(const std::vector<const BoundaryWeb*>& ws);

}  // namespace foamcalc
