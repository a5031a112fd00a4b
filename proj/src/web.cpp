#include "foamcalc/web.hpp"

#include <algorithm>
#include <sstream>

namespace foamcalc {

const Edge& Web::edge(Id e) const {
    auto it = edges_.find(e);
    if (it == edges_.end()) throw WebError("no such edge: " + std::to_string(e));
    return it->second;
}

const VertexData& Web::vertex(VId v) const {
    auto it = vertices_.find(v);
    if (it == vertices_.end()) throw WebError("no such vertex: " + std::to_string(v));
    return it->second;
}

Id Web::maxId() const {
    Id m = 0;
    if (!edges_.empty()) m = std::max(m, edges_.rbegin()->first);
    if (!circles_.empty()) m = std::max(m, *circles_.rbegin());
    return m;
}

VId Web::maxVId() const { return vertices_.empty() ? 0 : vertices_.rbegin()->first; }

void Web::requireFresh(Id i) const {
    if (idInUse(i)) throw WebError("id already in use: " + std::to_string(i));
}

void Web::addCircle(Id c) {
    requireFresh(c);
    circles_.insert(c);
}

void Web::removeCircle(Id c) {
    if (!hasCircle(c)) throw WebError("no such circle: " + std::to_string(c));
    circles_.erase(c);
}

void Web::addEdgeRaw(Id e, VId tail, VId head) {
    requireFresh(e);
    edges_[e] = Edge{tail, head};
}

void Web::addVertexRaw(VId v, Polarity pol, const std::array<EdgeEnd, 3>& rot) {
    if (vertices_.count(v)) throw WebError("vertex id already in use: " + std::to_string(v));
    vertices_[v] = VertexData{pol, rot};
}

int Web::slotOf(VId v, const EdgeEnd& ee) const {
    const VertexData& vd = vertex(v);
    for (int i = 0; i < 3; ++i)
        if (vd.rot[i] == ee) return i;
    throw WebError("edge end not found at vertex " + std::to_string(v));
}

void Web::renameEnd(VId v, const EdgeEnd& from, const EdgeEnd& to) {
    vertices_.at(v).rot[slotOf(v, from)] = to;
}

void Web::validate() const {
    // Every edge end appears exactly once in some rotation, with polarity
    // matching: heads at sinks, tails at sources.
    std::map<std::pair<Id, bool>, int> seen;
    for (const auto& [v, vd] : vertices_) {
        for (const EdgeEnd& ee : vd.rot) {
            auto it = edges_.find(ee.edge);
            if (it == edges_.end())
                throw WebError("rotation references missing edge " + std::to_string(ee.edge));
            VId expect = ee.head ? it->second.head : it->second.tail;
            if (expect != v)
                throw WebError("edge " + std::to_string(ee.edge) + " endpoint mismatch at vertex " +
                               std::to_string(v));
            bool wantHead = (vd.pol == Polarity::Sink);
            if (ee.head != wantHead)
                throw WebError("orientation violates sink/source at vertex " + std::to_string(v));
            seen[{ee.edge, ee.head}]++;
        }
    }
    for (const auto& [e, ed] : edges_) {
        if (ed.tail == ed.head) throw WebError("loop edge " + std::to_string(e));
        if (seen[{e, false}] != 1 || seen[{e, true}] != 1)
            throw WebError("edge " + std::to_string(e) + " ends not attached exactly once");
        if (circles_.count(e)) throw WebError("id used as both edge and circle");
    }

    // Planarity: V - E + F = 2 on each connected component of the dart graph.
    if (edges_.empty()) return;
    std::map<Id, int> comp;
    int ncomp = 0;
    for (const auto& [e, ed] : edges_) {
        if (comp.count(e)) continue;
        int c = ncomp++;
        std::vector<Id> stack{e};
        comp[e] = c;
        while (!stack.empty()) {
            Id cur = stack.back();
            stack.pop_back();
            for (bool head : {false, true}) {
                VId v = head ? edges_.at(cur).head : edges_.at(cur).tail;
                for (const EdgeEnd& ee : vertices_.at(v).rot) {
                    if (!comp.count(ee.edge)) {
                        comp[ee.edge] = c;
                        stack.push_back(ee.edge);
                    }
                }
            }
        }
    }
    std::vector<int> V(ncomp, 0), E(ncomp, 0), F(ncomp, 0);
    for (const auto& [v, vd] : vertices_) V[comp.at(vd.rot[0].edge)]++;
    for (const auto& [e, ed] : edges_) E[comp.at(e)]++;
    for (const auto& f : faces()) F[comp.at(f.front().edge)]++;
    for (int c = 0; c < ncomp; ++c) {
        if (V[c] - E[c] + F[c] != 2)
            throw WebError("component fails V-E+F=2: V=" + std::to_string(V[c]) +
                           " E=" + std::to_string(E[c]) + " F=" + std::to_string(F[c]));
    }
}

VId Web::dartBase(Dart d) const {
    const Edge& e = edge(d.edge);
    return d.forward ? e.tail : e.head;
}

Dart Web::nextAtVertex(Dart d) const {
    VId v = dartBase(d);
    EdgeEnd atBase{d.edge, !d.forward};  // the end sitting at the base
    int i = slotOf(v, atBase);
    EdgeEnd nxt = vertex(v).rot[(i + 1) % 3];
    return Dart{nxt.edge, !nxt.head};  // tail end -> forward dart
}

Dart Web::prevAtVertex(Dart d) const {
    VId v = dartBase(d);
    EdgeEnd atBase{d.edge, !d.forward};
    int i = slotOf(v, atBase);
    EdgeEnd nxt = vertex(v).rot[(i + 2) % 3];
    return Dart{nxt.edge, !nxt.head};
}

std::vector<Dart> Web::allDarts() const {
    std::vector<Dart> ds;
    ds.reserve(edges_.size() * 2);
    for (const auto& [e, ed] : edges_) {
        ds.push_back({e, true});
        ds.push_back({e, false});
    }
    return ds;
}

std::vector<Dart> Web::faceOf(Dart d) const {
    std::vector<Dart> face;
    Dart cur = d;
    do {
        face.push_back(cur);
        cur = faceNext(cur);
        if (face.size() > 4 * edges_.size() + 4)
            throw WebError("face tracing does not close");
    } while (cur != d);
    return face;
}

std::vector<std::vector<Dart>> Web::faces() const {
    std::vector<std::vector<Dart>> out;
    std::set<Dart> used;
    for (Dart d : allDarts()) {
        if (used.count(d)) continue;
        auto f = faceOf(d);
        for (Dart x : f) used.insert(x);
        out.push_back(std::move(f));
    }
    return out;
}

ZipReport Web::zip(const StrandRef& a, const StrandRef& b, const ZipIds& ids) {
    auto exists = [&](const StrandRef& r) {
        return r.circle ? hasCircle(r.target) : hasEdge(r.target);
    };
    if (!exists(a) || !exists(b)) throw WebError("zip target does not exist");
    if (a.target == b.target && a.circle == b.circle && a.forward == b.forward)
        throw WebError("zip requires two distinct strand sides");
    if (a.forward == b.forward)
        throw WebError("zip sides are not co-orientable (need one forward, one backward)");

    // Edge darts must share a face; circles float, so no check is possible.
    if (!a.circle && !b.circle) {
        Dart da{a.target, a.forward}, db{b.target, b.forward};
        bool found = false;
        for (Dart x : faceOf(da))
            if (x == db) found = true;
        if (!found) throw WebError("zip darts do not lie on a common face");
    }

    // Id 0 is a sentinel asking for fresh defaults.
    ZipIds resolved = ids;
    {
        VId nv = maxVId();
        if (resolved.sink == 0) resolved.sink = ++nv;
        if (resolved.source == 0) resolved.source = ++nv;
        Id ni = maxId();
        if (resolved.bar == 0) resolved.bar = ++ni;
        bool sameTarget = (a.target == b.target && a.circle == b.circle);
        if (resolved.aIn == 0) {
            if (a.circle && b.circle && sameTarget) {
                resolved.aIn = ++ni;
                resolved.bOut = resolved.aIn;
                resolved.aOut = ++ni;
                resolved.bIn = resolved.aOut;
            } else if (sameTarget) {
                resolved.aIn = ++ni;
                resolved.aOut = ++ni;
                resolved.bIn = resolved.aOut;
                resolved.bOut = ++ni;
            } else {
                resolved.aIn = ++ni;
                resolved.aOut = a.circle ? resolved.aIn : ++ni;
                resolved.bIn = ++ni;
                resolved.bOut = b.circle ? resolved.bIn : ++ni;
            }
        }
    }
    const ZipIds& rids = resolved;

    ZipReport rep;
    rep.swapped = !a.forward;
    rep.refA = rep.swapped ? b : a;
    rep.refB = rep.swapped ? a : b;
    rep.sink = rids.sink;
    rep.source = rids.source;
    rep.bar = rids.bar;
    rep.resolvedIds = rids;
    // Role A ids follow the event's (a, b) labels, so swap with the roles.
    rep.aIn = rep.swapped ? rids.bIn : rids.aIn;
    rep.aOut = rep.swapped ? rids.bOut : rids.aOut;
    rep.bIn = rep.swapped ? rids.aIn : rids.bIn;
    rep.bOut = rep.swapped ? rids.aOut : rids.bOut;

    if (vertices_.count(rids.sink) || vertices_.count(rids.source) || rids.sink == rids.source)
        throw WebError("zip vertex ids not fresh");

    VId s = rids.sink, r = rids.source;

    // Cut the two strands. Self-zip (both refs on one edge) is handled as a
    // three-piece cut; the shared middle piece is identified by the id
    // pattern aOut == bIn or bOut == aIn.
    auto cutCircle = [&](Id c, Id pieceId) {
        removeCircle(c);
        if (idInUse(pieceId)) throw WebError("zip id already in use: " + std::to_string(pieceId));
        edges_[pieceId] = Edge{r, s};
    };

    if (rep.refA.target == rep.refB.target && !rep.refA.circle) {
        // Self-zip of one edge.
        Id x = rep.refA.target;
        Edge old = edge(x);
        Id tailPiece, middle, headPiece;
        if (rep.aOut == rep.bIn) {
            tailPiece = rep.aIn;
            middle = rep.aOut;
            headPiece = rep.bOut;
        } else if (rep.bOut == rep.aIn) {
            tailPiece = rep.bIn;
            middle = rep.bOut;
            headPiece = rep.aOut;
        } else {
            throw WebError("self-zip needs a shared middle id (aOut==bIn or bOut==aIn)");
        }
        edges_.erase(x);
        if (idInUse(tailPiece) || idInUse(headPiece) || idInUse(middle))
            throw WebError("zip ids already in use");
        edges_[tailPiece] = Edge{old.tail, s};
        edges_[middle] = Edge{r, s};
        edges_[headPiece] = Edge{r, old.head};
        renameEnd(old.tail, EdgeEnd{x, false}, EdgeEnd{tailPiece, false});
        renameEnd(old.head, EdgeEnd{x, true}, EdgeEnd{headPiece, true});
    } else if (rep.refA.target == rep.refB.target && rep.refA.circle) {
        // Self-zip of a circle: the two arcs both run source -> sink.
        if (!(rep.aOut == rep.bIn && rep.bOut == rep.aIn))
            throw WebError("circle self-zip needs ids aOut==bIn and bOut==aIn");
        removeCircle(rep.refA.target);
        if (idInUse(rep.aIn) || idInUse(rep.aOut)) throw WebError("zip ids already in use");
        edges_[rep.aIn] = Edge{r, s};
        edges_[rep.aOut] = Edge{r, s};
    } else {
        // Two distinct strands.
        auto cutStrand = [&](const StrandRef& ref, Id inId, Id outId) {
            if (ref.circle) {
                if (inId != outId)
                    throw WebError("zipping a circle produces one edge; in/out ids must match");
                cutCircle(ref.target, inId);
                return;
            }
            Id x = ref.target;
            Edge old = edge(x);
            edges_.erase(x);
            if (idInUse(inId) || idInUse(outId) || inId == outId)
                throw WebError("zip ids already in use");
            edges_[inId] = Edge{old.tail, s};
            edges_[outId] = Edge{r, old.head};
            renameEnd(old.tail, EdgeEnd{x, false}, EdgeEnd{inId, false});
            renameEnd(old.head, EdgeEnd{x, true}, EdgeEnd{outId, true});
        };
        cutStrand(rep.refA, rep.aIn, rep.aOut);
        cutStrand(rep.refB, rep.bIn, rep.bOut);
    }

    if (idInUse(rids.bar)) throw WebError("bar id already in use");
    edges_[rids.bar] = Edge{r, s};

    // The zipped face lies to the left of A's forward dart, so A sits on
    // the face's east side: sigma(sink) = (A_in, bar, B_in) and
    // sigma(source) = (A_out, B_out, bar), both anticlockwise.
    addVertexRaw(s, Polarity::Sink,
                 {EdgeEnd{rep.aIn, true}, EdgeEnd{rids.bar, true}, EdgeEnd{rep.bIn, true}});
    addVertexRaw(r, Polarity::Source,
                 {EdgeEnd{rep.aOut, false}, EdgeEnd{rep.bOut, false}, EdgeEnd{rids.bar, false}});
    return rep;
}

UnzipReport Web::unzip(Id e, const UnzipIds& ids) {
    const Edge& ed = edge(e);
    VId vk = ed.head, vr = ed.tail;
    if (vertex(vk).pol != Polarity::Sink || vertex(vr).pol != Polarity::Source)
        throw WebError("unzip edge must run source -> sink");

    UnzipReport rep;
    rep.vSink = vk;
    rep.vSource = vr;
    int k0 = slotOf(vk, EdgeEnd{e, true});
    int r0 = slotOf(vr, EdgeEnd{e, false});
    rep.slotEdgeAtSink = k0;
    rep.slotEdgeAtSource = r0;

    // Side pairing: (pred at sink, succ at source) and (succ at sink, pred
    // at source); this is the inverse of the zip's rotation layout.
    struct RawSide {
        int slotK, slotR;
        Id result;
    };
    RawSide raw[2] = {{(k0 + 2) % 3, (r0 + 1) % 3, ids.out1},
                      {(k0 + 1) % 3, (r0 + 2) % 3, ids.out2}};

    for (int i = 0; i < 2; ++i) {
        // Re-read the slots: the first merge may have renamed them.
        EdgeEnd pk = vertex(vk).rot[raw[i].slotK];
        EdgeEnd pr = vertex(vr).rot[raw[i].slotR];
        if (!pk.head || pr.head) throw WebError("unzip side pairing hit inconsistent orientation");
        auto& side = rep.sides[i];
        side.edgeAtSink = pk.edge;
        side.slotAtSink = raw[i].slotK;
        side.edgeAtSource = pr.edge;
        side.slotAtSource = raw[i].slotR;
        side.result = raw[i].result;
        if (side.result == 0)  // sentinel: keep the closing edge's id, else the smaller
            side.result = (pk.edge == pr.edge) ? pk.edge : std::min(pk.edge, pr.edge);
        if (pk.edge == pr.edge) {
            // Single edge spans the side: it closes into a free circle.
            Edge old = edge(pk.edge);
            if (old.head != vk || old.tail != vr)
                throw WebError("unzip self-pair edge endpoints inconsistent");
            edges_.erase(pk.edge);
            if (idInUse(side.result)) throw WebError("unzip id already in use");
            circles_.insert(side.result);
            side.closedCircle = true;
            // Remove its rotation entries at vk, vr by marking; the vertices
            // are deleted below, so only the other side's re-read matters.
            vertices_.at(vk).rot[raw[i].slotK] = EdgeEnd{side.result, true};   // placeholder
            vertices_.at(vr).rot[raw[i].slotR] = EdgeEnd{side.result, false};  // placeholder
        } else {
            Edge ek = edge(pk.edge);
            Edge er = edge(pr.edge);
            if (ek.head != vk || er.tail != vr) throw WebError("unzip pair endpoints inconsistent");
            Id m = side.result;
            VId newTail = ek.tail, newHead = er.head;
            Id oldK = pk.edge, oldR = pr.edge;
            edges_.erase(oldK);
            edges_.erase(oldR);
            if (idInUse(m)) throw WebError("unzip id already in use");
            edges_[m] = Edge{newTail, newHead};
            renameEnd(newTail, EdgeEnd{oldK, false}, EdgeEnd{m, false});
            renameEnd(newHead, EdgeEnd{oldR, true}, EdgeEnd{m, true});
        }
    }

    edges_.erase(e);
    vertices_.erase(vk);
    vertices_.erase(vr);
    rep.resolvedIds = UnzipIds{rep.sides[0].result, rep.sides[1].result};
    return rep;
}

std::string Web::dump() const {
    std::ostringstream os;
    os << "web{circles:";
    for (Id c : circles_) os << " " << c;
    os << "; edges:";
    for (const auto& [e, ed] : edges_) os << " " << e << "(" << ed.tail << "->" << ed.head << ")";
    os << "; vertices:";
    for (const auto& [v, vd] : vertices_) {
        os << " " << v << (vd.pol == Polarity::Sink ? "snk[" : "src[");
        for (const EdgeEnd& ee : vd.rot) os << ee.edge << (ee.head ? "h" : "t") << " ";
        os << "]";
    }
    os << "}";
    return os.str();
}

std::string Web::canonicalString() const {
    // Breadth-first dart code, minimized over all starting darts. Two webs
    // get the same string iff they are isomorphic as oriented rotation
    // systems with polarities; free circles only contribute a count.
    std::string best;
    auto dartKey = [](Dart d) { return std::pair<Id, bool>(d.edge, d.forward); };
    std::vector<Dart> darts = allDarts();
    for (Dart start : darts) {
        std::map<std::pair<Id, bool>, int> num;
        std::vector<Dart> order;
        num[dartKey(start)] = 0;
        order.push_back(start);
        for (std::size_t i = 0; i < order.size(); ++i) {
            Dart d = order[i];
            for (Dart n : {nextAtVertex(d), opposite(d)}) {
                if (!num.count(dartKey(n))) {
                    num[dartKey(n)] = static_cast<int>(order.size());
                    order.push_back(n);
                }
            }
        }
        std::ostringstream os;
        for (Dart d : order) {
            os << num[dartKey(nextAtVertex(d))] << "," << num[dartKey(opposite(d))] << ","
               << (vertex(dartBase(d)).pol == Polarity::Sink ? "k" : "r") << ","
               << (d.forward ? "f" : "b") << ";";
        }
        std::string code = os.str();
        if (best.empty() || code < best) best = code;
    }
    best += "|O" + std::to_string(circles_.size());
    return best;
}

std::optional<Reducible> findReducible(const Web& w) {
    if (!w.circles().empty()) return Circle{*w.circles().begin()};

    auto fs = w.faces();
    // Deterministic: faces() lists orbits by least dart; scan bigons first,
    // then squares, each by the least edge id on the face.
    const std::vector<Dart>* bestBigon = nullptr;
    const std::vector<Dart>* bestSquare = nullptr;
    auto minEdge = [](const std::vector<Dart>& f) {
        Id m = f.front().edge;
        for (Dart d : f) m = std::min(m, d.edge);
        return m;
    };
    for (const auto& f : fs) {
        if (f.size() == 2) {
            if (!bestBigon || minEdge(f) < minEdge(*bestBigon)) bestBigon = &f;
        } else if (f.size() == 4) {
            if (!bestSquare || minEdge(f) < minEdge(*bestSquare)) bestSquare = &f;
        }
    }
    if (bestBigon) {
        const auto& f = *bestBigon;
        Id e1 = f[0].edge, e2 = f[1].edge;
        if (e1 == e2) throw WebError("degenerate bigon face (same edge twice)");
        if (e1 > e2) std::swap(e1, e2);
        const Edge& ed = w.edge(e1);
        return Bigon{e1, e2, ed.head, ed.tail};
    }
    if (bestSquare) {
        const auto& f = *bestSquare;
        Square sq;
        for (int i = 0; i < 4; ++i) {
            sq.edges[i] = f[i].edge;
            sq.vertices[i] = w.dartBase(f[i]);
        }
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (sq.edges[i] == sq.edges[j] || sq.vertices[i] == sq.vertices[j])
                    throw WebError("degenerate square face");
        return sq;
    }
    if (!w.vertices().empty())
        throw WebError("nonempty closed web with no circle, bigon or square face");
    return std::nullopt;
}

}  // namespace foamcalc
