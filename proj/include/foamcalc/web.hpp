// Closed trivalent oriented planar webs as combinatorial maps.
//
// A web is stored as a rotation system: every vertex is trivalent and lists
// its three incident edge-ends in anticlockwise planar order. Orientations
// make every vertex a sink (all edges in) or a source (all edges out).
// Vertex-free loops are kept separately as "free circles"; they share one id
// namespace with edges so that movie events can reference either.
//
// Faces are traced as orbits of (next-at-vertex o opposite); with
// anticlockwise rotations each face is traversed with its interior on the
// left, and V - E + F = 2 holds per connected component of the dart graph.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace foamcalc {

using Id = std::uint32_t;   // edges and free circles
using VId = std::uint32_t;  // vertices

enum class Polarity : std::uint8_t { Sink, Source };

// A web error is a structural precondition failure (bad surgery target,
// inconsistent orientation, ...). Callers attach context (event index).
struct WebError : std::runtime_error {
    explicit WebError(const std::string& msg) : std::runtime_error(msg) {}
};

// One endpoint attachment of an edge: which edge, and whether its head
// (arrow tip) sits at this vertex.
struct EdgeEnd {
    Id edge = 0;
    bool head = false;
    auto operator<=>(const EdgeEnd&) const = default;
};

struct Edge {
    VId tail = 0;
    VId head = 0;
    auto operator<=>(const Edge&) const = default;
};

struct VertexData {
    Polarity pol = Polarity::Sink;
    std::array<EdgeEnd, 3> rot{};  // anticlockwise
    auto operator<=>(const VertexData&) const = default;
};

// Directed edge occurrence. forward means tail -> head; the face orbit a
// dart belongs to is the face on the dart's left.
struct Dart {
    Id edge = 0;
    bool forward = true;
    auto operator<=>(const Dart&) const = default;
};

// Reference to one side of an edge or a free circle, as used by zip events.
// For circles, forward selects the side in the same way the forward dart
// does for edges.
struct StrandRef {
    Id target = 0;
    bool forward = true;
    bool circle = false;
    auto operator<=>(const StrandRef&) const = default;
};

// ---------------------------------------------------------------------------
// Surgery id blocks. Builders choose the ids new cells receive so that movie
// targets match independently constructed webs exactly.
// ---------------------------------------------------------------------------

struct ZipIds {
    VId sink = 0;
    VId source = 0;
    Id bar = 0;
    Id aIn = 0;   // tail-side half of the forward-referenced strand
    Id aOut = 0;  // head-side half (== aIn when that strand is a circle)
    Id bIn = 0;
    Id bOut = 0;
};

struct UnzipIds {
    Id out1 = 0;  // result of the (pred-at-sink, succ-at-source) side
    Id out2 = 0;  // result of the other side
};

// What a zip actually did; replay uses this to maintain foam cells.
struct ZipReport {
    bool swapped = false;  // roles were (b, a): b carried the forward dart
    // Resolved role data. A is the forward side.
    StrandRef refA, refB;
    Id aIn = 0, aOut = 0, bIn = 0, bOut = 0;
    VId sink = 0, source = 0;
    Id bar = 0;
    ZipIds resolvedIds;  // the event's id block with sentinels filled in
};

struct UnzipReport {
    VId vSink = 0, vSource = 0;
    int slotEdgeAtSink = 0, slotEdgeAtSource = 0;
    struct Side {
        Id edgeAtSink = 0;  // edge occupying the paired slot, pre-merge
        int slotAtSink = 0;
        Id edgeAtSource = 0;
        int slotAtSource = 0;
        Id result = 0;
        bool closedCircle = false;
    };
    std::array<Side, 2> sides{};
    UnzipIds resolvedIds;
};

// ---------------------------------------------------------------------------

class Web {
public:
    Web() = default;

    bool empty() const { return edges_.empty() && circles_.empty() && vertices_.empty(); }
    const std::map<Id, Edge>& edges() const { return edges_; }
    const std::set<Id>& circles() const { return circles_; }
    const std::map<VId, VertexData>& vertices() const { return vertices_; }

    bool hasEdge(Id e) const { return edges_.count(e) != 0; }
    bool hasCircle(Id c) const { return circles_.count(c) != 0; }
    bool idInUse(Id i) const { return hasEdge(i) || hasCircle(i); }
    const Edge& edge(Id e) const;
    const VertexData& vertex(VId v) const;

    Id maxId() const;    // over edges and circles (0 when none)
    VId maxVId() const;  // over vertices

    // --- construction -------------------------------------------------------
    void addCircle(Id c);
    void removeCircle(Id c);
    // Adds an edge with given endpoints; rotations are installed separately.
    void addEdgeRaw(Id e, VId tail, VId head);
    void addVertexRaw(VId v, Polarity pol, const std::array<EdgeEnd, 3>& rot);

    // Validates the whole structure: trivalence, sink/source orientation
    // consistency, the dart involution, and planarity (V - E + F = 2 per
    // dart-connected component). Throws WebError on failure.
    void validate() const;

    // --- darts and faces ----------------------------------------------------
    VId dartBase(Dart d) const;
    Dart opposite(Dart d) const { return {d.edge, !d.forward}; }
    Dart nextAtVertex(Dart d) const;  // sigma: next anticlockwise at the base
    Dart prevAtVertex(Dart d) const;  // sigma inverse
    // Walks the face on the dart's left (rotations are anticlockwise, so
    // the boundary continues along the clockwise-adjacent edge at the far
    // endpoint).
    Dart faceNext(Dart d) const { return prevAtVertex(opposite(d)); }

    std::vector<Dart> allDarts() const;
    // Face containing d, listed in traversal order starting at d.
    std::vector<Dart> faceOf(Dart d) const;
    // All face orbits, each starting at its lexicographically least dart,
    // sorted by that dart. Free circles are not included.
    std::vector<std::vector<Dart>> faces() const;

    // --- surgeries ----------------------------------------------------------
    // Zip two strand sides together across a face: creates one sink, one
    // source and a bar edge between them. Exactly one of a, b must run
    // forward along its strand. When both refs are edge darts they must lie
    // on a common face.
    ZipReport zip(const StrandRef& a, const StrandRef& b, const ZipIds& ids);

    // Unzip edge e (its endpoints are automatically one source, one sink):
    // deletes e and both endpoints and merges the remaining legs by planar
    // side-pairing. A side whose pair is a single edge closes into a free
    // circle.
    UnzipReport unzip(Id e, const UnzipIds& ids);

    // Equality of labeled webs. Rotations are cyclic data, so vertex
    // rotation arrays compare up to cyclic shift.
    friend bool operator==(const Web& x, const Web& y) {
        if (x.edges_ != y.edges_ || x.circles_ != y.circles_) return false;
        if (x.vertices_.size() != y.vertices_.size()) return false;
        auto xi = x.vertices_.begin();
        auto yi = y.vertices_.begin();
        for (; xi != x.vertices_.end(); ++xi, ++yi) {
            if (xi->first != yi->first || xi->second.pol != yi->second.pol) return false;
            const auto& a = xi->second.rot;
            const auto& b = yi->second.rot;
            bool match = false;
            for (int s = 0; s < 3 && !match; ++s)
                match = (a[0] == b[s] && a[1] == b[(s + 1) % 3] && a[2] == b[(s + 2) % 3]);
            if (!match) return false;
        }
        return true;
    }
    friend bool operator!=(const Web& x, const Web& y) { return !(x == y); }

    // Canonical invariant string: equal for isomorphic combinatorial maps,
    // independent of the id labeling. Used as a memoization key.
    std::string canonicalString() const;

    std::string dump() const;  // debugging aid

private:
    std::map<Id, Edge> edges_;
    std::set<Id> circles_;
    std::map<VId, VertexData> vertices_;

    int slotOf(VId v, const EdgeEnd& ee) const;
    void renameEnd(VId v, const EdgeEnd& from, const EdgeEnd& to);
    void requireFresh(Id i) const;
};

// ---------------------------------------------------------------------------
// Reducible parts of a closed web (the spider relations' left-hand sides).
// ---------------------------------------------------------------------------

struct Circle {
    Id circle;
};
struct Bigon {
    Id e1, e2;  // e1 < e2
    VId sink, source;
};
struct Square {
    std::array<Id, 4> edges;      // in face order a,b,c,d
    std::array<VId, 4> vertices;  // corner between edges[i] and edges[i+1]... [i] precedes
};
using Reducible = std::variant<Circle, Bigon, Square>;

// Lowest-identifier deterministic search: any free circle, else any 2-face,
// else any 4-face, else nothing. A nonempty closed web always yields one.
std::optional<Reducible> findReducible(const Web& w);

}  // namespace foamcalc
