#include "foamcalc/spider.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_map>

namespace foamcalc {

namespace {

std::mutex spiderMemoMutex;
std::unordered_map<std::string, LaurentPoly> spiderMemo;

LaurentPoly three() { return LaurentPoly::quantumInt(3); }
LaurentPoly two() { return LaurentPoly::quantumInt(2); }

LaurentPoly evaluateRec(Web w);

LaurentPoly evaluateVertexPart(const Web& w) {
    std::string key = w.canonicalString();
    {
        std::lock_guard<std::mutex> lk(spiderMemoMutex);
        auto it = spiderMemo.find(key);
        if (it != spiderMemo.end()) return it->second;
    }
    LaurentPoly result;
    auto red = findReducible(w);
    if (!red) {
        result = LaurentPoly(Rational(1));
    } else if (std::holds_alternative<Circle>(*red)) {
        throw WebError("internal: circles stripped before vertex-part evaluation");
    } else if (const auto* bg = std::get_if<Bigon>(&*red)) {
        Web next = w;
        UnzipReport rep = next.unzip(bg->e1, UnzipIds{});
        bool removed = false;
        for (const auto& side : rep.sides)
            if (side.edgeAtSink == bg->e2 && side.edgeAtSource == bg->e2) {
                if (!side.closedCircle) throw WebError("internal: bigon partner did not close");
                next.removeCircle(side.result);
                removed = true;
            }
        if (!removed) throw WebError("internal: bigon partner not found");
        result = two() * evaluateRec(std::move(next));
    } else {
        const auto& sq = std::get<Square>(*red);
        auto smooth = [&](Id x, Id y) {
            Web next = w;
            next.unzip(x, UnzipIds{});
            UnzipReport r2 = next.unzip(y, UnzipIds{});
            bool removed = false;
            for (const auto& side : r2.sides)
                if (side.closedCircle) {
                    if (removed) throw WebError("internal: square smoothing closed two circles");
                    next.removeCircle(side.result);
                    removed = true;
                }
            if (!removed) throw WebError("internal: square smoothing closed no circle");
            return evaluateRec(std::move(next));
        };
        result = smooth(sq.edges[0], sq.edges[2]) + smooth(sq.edges[1], sq.edges[3]);
    }
    std::lock_guard<std::mutex> lk(spiderMemoMutex);
    spiderMemo.emplace(std::move(key), result);
    return result;
}

LaurentPoly evaluateRec(Web w) {
    // Strip circles first: each contributes a [3] factor.
    std::size_t circles = w.circles().size();
    while (!w.circles().empty()) w.removeCircle(*w.circles().begin());
    LaurentPoly factor(Rational(1));
    for (std::size_t i = 0; i < circles; ++i) factor *= three();
    if (w.edges().empty()) return factor;
    return factor * evaluateVertexPart(w);
}

}  // namespace

LaurentPoly evaluateClosedWeb(const Web& w) { return evaluateRec(w); }

LaurentPoly quantumInvariant(const LinkDiagram& d) {
    int n = d.crossingCount();
    LaurentPoly total;
    for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
        std::vector<bool> choice(n);
        for (int j = 0; j < n; ++j) choice[j] = (mask >> j) & 1UL;
        Resolution r = resolve(d, choice);
        Rational sign((r.height % 2 == 0) ? 1 : -1);
        LaurentPoly term = LaurentPoly::monomial(r.qShift, sign);
        total += term * evaluateClosedWeb(r.web);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Boundary webs and the pairing.
// ---------------------------------------------------------------------------

std::vector<bool> BoundaryWeb::outwardAt() const {
    std::vector<bool> out(boundaryCount, false);
    std::vector<bool> seen(boundaryCount, false);
    auto mark = [&](int idx, bool isOut) {
        if (idx < 0 || idx >= boundaryCount) throw WebError("boundary point out of range");
        if (seen[idx]) throw WebError("boundary point used twice");
        seen[idx] = true;
        out[idx] = isOut;
    };
    for (const auto& [e, ed] : edges) {
        if (const auto* bp = std::get_if<BoundaryPt>(&ed.head)) mark(bp->index, true);
        if (const auto* bp = std::get_if<BoundaryPt>(&ed.tail)) mark(bp->index, false);
    }
    for (int i = 0; i < boundaryCount; ++i)
        if (!seen[i]) throw WebError("boundary point " + std::to_string(i) + " unused");
    return out;
}

void BoundaryWeb::validate() const { (void)outwardAt(); }

BoundaryWeb arcWeb(int boundaryCount, int from, int to) {
    BoundaryWeb w;
    w.boundaryCount = boundaryCount;
    w.edges[1] = BoundaryWeb::Edge{BoundaryWeb::BoundaryPt{from}, BoundaryWeb::BoundaryPt{to}};
    return w;
}

BoundaryWeb matchingWeb(int boundaryCount, const std::vector<std::pair<int, int>>& pairs) {
    BoundaryWeb w;
    w.boundaryCount = boundaryCount;
    Id e = 1;
    for (const auto& [from, to] : pairs)
        w.edges[e++] =
            BoundaryWeb::Edge{BoundaryWeb::BoundaryPt{from}, BoundaryWeb::BoundaryPt{to}};
    w.validate();
    return w;
}

LaurentPoly pairing(const BoundaryWeb& a, const BoundaryWeb& b) {
    a.validate();
    b.validate();
    if (a.boundaryCount != b.boundaryCount) throw WebError("pairing: boundary sizes differ");
    if (a.outwardAt() != b.outwardAt())
        throw WebError("pairing: boundary orientation sequences are incompatible");

    // Pool both webs' edges with endpoint descriptors: an internal vertex id
    // or a rim slot. Rim slot 2p belongs to B at boundary point p, slot
    // 2p+1 to A; the two slots of a point are glued. A's orientations are
    // reversed (so its strand at an outward point now runs inward), which
    // makes every rim gluing join one head to one tail.
    using EndPt = std::variant<VId, int>;
    struct PoolEdge {
        EndPt tail, head;
    };
    Id offset = 0;
    for (const auto& [e, ed] : b.edges) offset = std::max(offset, e);
    for (Id c : b.circles) offset = std::max(offset, c);
    VId voffset = 0;
    for (const auto& [v, vd] : b.vertices) voffset = std::max(voffset, v);

    std::map<Id, PoolEdge> pool;
    std::vector<Id> poolCircleCount;
    auto addSide = [&](const BoundaryWeb& w, bool isA) {
        for (const auto& [e, ed] : w.edges) {
            Id id = isA ? e + offset : e;
            auto conv = [&](const std::variant<VId, BoundaryWeb::BoundaryPt>& at) -> EndPt {
                if (const auto* v = std::get_if<VId>(&at))
                    return static_cast<VId>(isA ? *v + voffset : *v);
                return 2 * std::get<BoundaryWeb::BoundaryPt>(at).index + (isA ? 1 : 0);
            };
            if (isA)  // reversed orientation: former head becomes the tail
                pool[id] = PoolEdge{conv(ed.head), conv(ed.tail)};
            else
                pool[id] = PoolEdge{conv(ed.tail), conv(ed.head)};
        }
        for (Id c : w.circles) poolCircleCount.push_back(isA ? c + offset : c);
    };
    addSide(b, false);
    addSide(a, true);

    // slot -> (edge whose end sits there, end is head?)
    std::map<int, std::pair<Id, bool>> slotEnd;
    for (const auto& [e, pe] : pool) {
        if (const auto* s = std::get_if<int>(&pe.tail)) {
            if (slotEnd.count(*s)) throw WebError("pairing: rim slot used twice");
            slotEnd[*s] = {e, false};
        }
        if (const auto* s = std::get_if<int>(&pe.head)) {
            if (slotEnd.count(*s)) throw WebError("pairing: rim slot used twice");
            slotEnd[*s] = {e, true};
        }
    }
    auto nextAcrossRim = [&](Id e) -> std::optional<Id> {
        // Follows e's head through the rim; the mate end must be a tail.
        if (!std::holds_alternative<int>(pool.at(e).head)) return std::nullopt;
        int mate = std::get<int>(pool.at(e).head) ^ 1;
        auto it = slotEnd.find(mate);
        if (it == slotEnd.end()) throw WebError("pairing: unmatched rim point");
        if (it->second.second)
            throw WebError("pairing: rim joins two strand heads (orientation clash)");
        return it->second.first;
    };
    auto prevAcrossRim = [&](Id e) -> std::optional<Id> {
        if (!std::holds_alternative<int>(pool.at(e).tail)) return std::nullopt;
        int mate = std::get<int>(pool.at(e).tail) ^ 1;
        auto it = slotEnd.find(mate);
        if (it == slotEnd.end()) throw WebError("pairing: unmatched rim point");
        if (!it->second.second)
            throw WebError("pairing: rim joins two strand tails (orientation clash)");
        return it->second.first;
    };

    Web glued;
    Id nextId = 1;
    std::set<Id> assigned;
    // (pool edge, head end?) -> (final edge, head end?) for vertex rotations.
    std::map<std::pair<Id, bool>, std::pair<Id, bool>> endMap;

    for (const auto& [e0, pe0] : pool) {
        if (assigned.count(e0)) continue;
        // Walk back to the chain start or detect a closed chain.
        Id start = e0;
        bool closed = false;
        while (auto prev = prevAcrossRim(start)) {
            if (*prev == e0) {
                closed = true;
                break;
            }
            start = *prev;
        }
        std::vector<Id> chain{start};
        assigned.insert(start);
        if (!closed) {
            Id walker = start;
            while (auto nxt = nextAcrossRim(walker)) {
                walker = *nxt;
                chain.push_back(walker);
                assigned.insert(walker);
            }
        } else {
            Id walker = start;
            while (true) {
                auto nxt = nextAcrossRim(walker);
                if (!nxt || *nxt == start) break;
                walker = *nxt;
                chain.push_back(walker);
                assigned.insert(walker);
            }
        }
        Id fid = nextId++;
        if (closed) {
            glued.addCircle(fid);
        } else {
            VId t = std::get<VId>(pool.at(chain.front()).tail);
            VId h = std::get<VId>(pool.at(chain.back()).head);
            glued.addEdgeRaw(fid, t, h);
            endMap[{chain.front(), false}] = {fid, false};
            endMap[{chain.back(), true}] = {fid, true};
        }
    }
    for (std::size_t i = 0; i < poolCircleCount.size(); ++i) glued.addCircle(nextId++);

    // Vertices: B's rotations kept; A's mirrored (viewed from the far side
    // of the sphere) with head/tail flipped by the orientation reversal.
    auto addVertices = [&](const BoundaryWeb& w, bool isA) {
        for (const auto& [v, vd] : w.vertices) {
            VId fv = isA ? v + voffset : v;
            std::array<EdgeEnd, 3> rot{};
            for (int i = 0; i < 3; ++i) {
                const EdgeEnd& ee = isA ? vd.rot[2 - i] : vd.rot[i];
                Id pe = isA ? ee.edge + offset : ee.edge;
                bool head = isA ? !ee.head : ee.head;
                auto it = endMap.find({pe, head});
                if (it == endMap.end()) throw WebError("pairing: lost edge end");
                rot[i] = EdgeEnd{it->second.first, it->second.second};
            }
            Polarity pol = vd.pol;
            if (isA) pol = (pol == Polarity::Sink) ? Polarity::Source : Polarity::Sink;
            glued.addVertexRaw(fv, pol, rot);
        }
    };
    addVertices(b, false);
    addVertices(a, true);

    glued.validate();
    return evaluateClosedWeb(glued);
}

PairingMatrix pairingMatrix(const std::vector<const BoundaryWeb*>& ws) {
    PairingMatrix m;
    std::size_t n = ws.size();
    m.gram.assign(n, std::vector<LaurentPoly>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.gram[i][j] = pairing(*ws[i], *ws[j]);

    // Cofactor determinant; pairing matrices stay small here.
    struct Det {
        static LaurentPoly go(const std::vector<std::vector<LaurentPoly>>& g,
                              const std::vector<std::size_t>& cols, std::size_t row) {
            if (cols.empty()) return LaurentPoly(Rational(1));
            LaurentPoly acc;
            for (std::size_t k = 0; k < cols.size(); ++k) {
                std::vector<std::size_t> rest;
                for (std::size_t t = 0; t < cols.size(); ++t)
                    if (t != k) rest.push_back(cols[t]);
                LaurentPoly term = g[row][cols[k]] * go(g, rest, row + 1);
                if (k % 2 == 0)
                    acc += term;
                else
                    acc -= term;
            }
            return acc;
        }
    };
    std::vector<std::size_t> cols(n);
    for (std::size_t i = 0; i < n; ++i) cols[i] = i;
    m.determinant = Det::go(m.gram, cols, 0);
    m.nondegenerate = !m.determinant.isZero();
    return m;
}

}  // namespace foamcalc
