#include "foamcalc/foam.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace foamcalc {

namespace {

// Minimal union-find over int nodes.
struct UF {
    std::vector<int> parent;
    int add() {
        parent.push_back(static_cast<int>(parent.size()));
        return static_cast<int>(parent.size()) - 1;
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    // Returns the surviving root (root of a).
    int unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[b] = a;
        return a;
    }
};

struct VertexInstance {
    VId id = 0;
    Polarity pol = Polarity::Sink;
    int trace = -1;
    std::array<int, 3> germs{-1, -1, -1};
};

// Replay state: webs evolve, sheet pieces accumulate Euler characteristic,
// vertex traces accumulate seam structure.
class Replayer {
public:
    explicit Replayer(const Movie& m) : movie_(m), w_(m.source) {}

    AssembledFoam run() {
        w_.validate();
        for (const auto& [c, _] : w_.edges()) newSheet(c, 1, true);
        for (Id c : w_.circles()) newSheet(c, 0, true);
        for (const auto& [v, vd] : w_.vertices()) bornVertex(v, vd, true);
        sourceVertexCount_ = static_cast<int>(w_.vertices().size());

        for (std::size_t i = 0; i < movie_.events.size(); ++i) {
            eventIndex_ = static_cast<int>(i);
            try {
                std::visit([this](const auto& ev) { this->apply(ev); }, movie_.events[i]);
            } catch (const WebError& e) {
                throw FoamError(e.what(), eventIndex_);
            }
        }
        eventIndex_ = -1;
        for (const auto& [id, piece] : sheet_) pieces_.touches[pieces_.uf.find(piece)] = true;
        return finish();
    }

private:
    const Movie& movie_;
    Web w_;
    int eventIndex_ = -1;
    int sourceVertexCount_ = 0;

    struct Pieces {
        UF uf;
        std::vector<long> chi;
        std::vector<bool> touches;  // touches the source or target web
        int add(long c, bool touch) {
            int n = uf.add();
            chi.push_back(c);
            touches.push_back(touch);
            return n;
        }
        // Glue two pieces along an arc (dChi = -1) or circle (dChi = 0).
        void glue(int a, int b, long glueChi) {
            int ra = uf.find(a), rb = uf.find(b);
            if (ra == rb) {
                chi[ra] -= glueChi;
            } else {
                long c = chi[ra] + chi[rb] - glueChi;
                bool t = touches[ra] || touches[rb];
                int r = uf.unite(ra, rb);
                chi[r] = c;
                touches[r] = t;
            }
        }
    } pieces_;

    std::map<Id, int> sheet_;  // current edge/circle -> piece node

    UF orbits_;
    std::vector<int> orbitPiece_;  // piece node recorded at orbit creation

    UF traces_;
    std::vector<int> traceEnds_;  // open ends per root

    std::vector<VertexInstance> vinsts_;
    std::map<VId, int> liveV_;

    std::vector<std::array<int, 3>> chokeSeams_;

    int newSheet(Id id, long chi, bool touchesSource) {
        int p = pieces_.add(chi, touchesSource);
        sheet_[id] = p;
        return p;
    }
    int sheetOf(Id id) {
        auto it = sheet_.find(id);
        if (it == sheet_.end()) throw FoamError("no sheet for id " + std::to_string(id), eventIndex_);
        return pieces_.uf.find(it->second);
    }
    int newOrbit(int piece) {
        int o = orbits_.add();
        orbitPiece_.push_back(piece);
        return o;
    }

    void bornVertex(VId v, const VertexData& vd, bool atSource) {
        VertexInstance vi;
        vi.id = v;
        vi.pol = vd.pol;
        vi.trace = traces_.add();
        traceEnds_.push_back(2);
        for (int s = 0; s < 3; ++s) vi.germs[s] = newOrbit(sheetOf(vd.rot[s].edge));
        (void)atSource;
        liveV_[v] = static_cast<int>(vinsts_.size());
        vinsts_.push_back(vi);
    }

    // Joins two vertex traces at a singular point, consuming one open end of
    // each (they may already belong to one component).
    void joinTraces(int va, int vb) {
        int ra = traces_.find(vinsts_[va].trace), rb = traces_.find(vinsts_[vb].trace);
        int ends = (ra == rb) ? traceEnds_[ra] - 2 : traceEnds_[ra] + traceEnds_[rb] - 2;
        if (ends < 0) throw FoamError("internal: trace ends underflow", eventIndex_);
        int r = traces_.unite(ra, rb);
        traceEnds_[r] = ends;
    }

    void apply(const BirthEvent& ev) {
        w_.addCircle(ev.circle);
        newSheet(ev.circle, 1, false);
    }

    void apply(const DeathEvent& ev) {
        w_.removeCircle(ev.circle);
        int r = sheetOf(ev.circle);
        pieces_.chi[r] += 1;
        sheet_.erase(ev.circle);
    }

    void apply(const HandleEvent& ev) {
        if (!w_.idInUse(ev.target)) throw FoamError("handle target does not exist", eventIndex_);
        pieces_.chi[sheetOf(ev.target)] -= 2;
    }

    void apply(const ChokeEvent& ev) {
        if (!w_.idInUse(ev.target)) throw FoamError("choke target does not exist", eventIndex_);
        int host = sheetOf(ev.target);
        pieces_.chi[host] -= 1;
        int pt = pieces_.add(-1, false);
        int disc = pieces_.add(+1, false);
        int oBulk = newOrbit(host), oPt = newOrbit(pt), oDisc = newOrbit(disc);
        if (ev.reversed)
            chokeSeams_.push_back({oBulk, oDisc, oPt});
        else
            chokeSeams_.push_back({oBulk, oPt, oDisc});
    }

    void apply(const ZipEvent& ev) {
        ZipReport rep = w_.zip(ev.a, ev.b, ev.ids);

        // Sheet bookkeeping: split strands keep their sheet, the bar starts
        // a fresh one. All frame gluings are chi no-ops by construction.
        bool selfZip = (rep.refA.target == rep.refB.target && rep.refA.circle == rep.refB.circle);
        if (selfZip) {
            int p = sheetOf(rep.refA.target);
            sheet_.erase(rep.refA.target);
            for (Id piece : {rep.aIn, rep.aOut, rep.bIn, rep.bOut}) sheet_[piece] = p;
        } else {
            int pa = sheetOf(rep.refA.target);
            int pb = sheetOf(rep.refB.target);
            sheet_.erase(rep.refA.target);
            sheet_.erase(rep.refB.target);
            sheet_[rep.aIn] = pa;
            sheet_[rep.aOut] = pa;
            sheet_[rep.bIn] = pb;
            sheet_[rep.bOut] = pb;
        }
        int barPiece = pieces_.add(1, false);
        sheet_[rep.bar] = barPiece;

        // Germ orbits: each zipped sheet wraps around the singular point
        // (one orbit covering its in and out germs), the bar sheet's germ
        // closes onto itself.
        int oA = newOrbit(sheetOf(rep.aIn));
        int oB = newOrbit(sheetOf(rep.bIn));
        int oBar = newOrbit(barPiece);
        // sigma(sink) = (A_in, bar, B_in); sigma(source) = (A_out, B_out, bar)
        VertexInstance si;
        si.id = rep.sink;
        si.pol = Polarity::Sink;
        si.trace = traces_.add();
        traceEnds_.push_back(2);
        si.germs = {oA, oBar, oB};
        liveV_[rep.sink] = static_cast<int>(vinsts_.size());
        vinsts_.push_back(si);

        VertexInstance ri;
        ri.id = rep.source;
        ri.pol = Polarity::Source;
        ri.trace = traces_.add();
        traceEnds_.push_back(2);
        ri.germs = {oA, oB, oBar};
        liveV_[rep.source] = static_cast<int>(vinsts_.size());
        vinsts_.push_back(ri);

        joinTraces(liveV_[rep.sink], liveV_[rep.source]);
    }

    void apply(const UnzipEvent& ev) {
        if (!w_.hasEdge(ev.edge)) throw FoamError("unzip edge does not exist", eventIndex_);
        VId vk = w_.edge(ev.edge).head, vr = w_.edge(ev.edge).tail;
        UnzipReport rep = w_.unzip(ev.edge, ev.ids);

        auto ik = liveV_.find(vk), ir = liveV_.find(vr);
        if (ik == liveV_.end() || ir == liveV_.end())
            throw FoamError("internal: unzip vertices not tracked", eventIndex_);
        VertexInstance& KI = vinsts_[ik->second];
        VertexInstance& RI = vinsts_[ir->second];

        for (const auto& side : rep.sides) {
            if (side.closedCircle) {
                int p = sheetOf(side.edgeAtSink);
                pieces_.chi[p] -= 1;
                sheet_.erase(side.edgeAtSink);
                sheet_[side.result] = p;
            } else {
                int pk = sheetOf(side.edgeAtSink);
                int pr = sheetOf(side.edgeAtSource);
                pieces_.glue(pk, pr, 1);  // pair piece chi 1, two arc gluings
                sheet_.erase(side.edgeAtSink);
                sheet_.erase(side.edgeAtSource);
                sheet_[side.result] = pieces_.uf.find(pk);
            }
            // Paired-leg germs connect around the singular point.
            orbits_.unite(KI.germs[side.slotAtSink], RI.germs[side.slotAtSource]);
        }
        // The deleted edge's sheet caps off at the point; its germ closes.
        sheet_.erase(ev.edge);
        orbits_.unite(KI.germs[rep.slotEdgeAtSink], RI.germs[rep.slotEdgeAtSource]);

        joinTraces(ik->second, ir->second);
        liveV_.erase(ik);
        liveV_.erase(vr);
    }

    static std::array<int, 3> canonicalCyclic(std::array<int, 3> t) {
        int best = 0;
        for (int i = 1; i < 3; ++i)
            if (t[i] < t[best]) best = i;
        return {t[best], t[(best + 1) % 3], t[(best + 2) % 3]};
    }

    AssembledFoam finish() {
        AssembledFoam f;
        f.target = w_;
        f.closed = movie_.source.empty() && w_.empty();
        f.sourceVertexCount = sourceVertexCount_;
        f.targetVertexCount = static_cast<int>(w_.vertices().size());

        // Facets: piece roots.
        std::map<int, int> facetIndex;
        auto facetOf = [&](int piece) {
            int r = pieces_.uf.find(piece);
            auto it = facetIndex.find(r);
            if (it != facetIndex.end()) return it->second;
            int idx = static_cast<int>(f.facets.size());
            facetIndex[r] = idx;
            AssembledFoam::Facet fc;
            fc.chi = pieces_.chi[r];
            fc.touchesWebs = pieces_.touches[r];
            f.facets.push_back(fc);
            return idx;
        };

        // Orbits: roots, each referencing one facet.
        std::map<int, int> orbitIndex;
        std::map<int, int> orbitFacetRoot;
        for (std::size_t o = 0; o < orbitPiece_.size(); ++o) {
            int ro = orbits_.find(static_cast<int>(o));
            int rp = pieces_.uf.find(orbitPiece_[o]);
            auto it = orbitFacetRoot.find(ro);
            if (it == orbitFacetRoot.end()) {
                orbitFacetRoot[ro] = rp;
            } else if (it->second != rp) {
                throw FoamError("internal: germ orbit borders two facets");
            }
        }
        auto orbitIdx = [&](int o) {
            int ro = orbits_.find(o);
            auto it = orbitIndex.find(ro);
            if (it != orbitIndex.end()) return it->second;
            int idx = f.orbitCount++;
            orbitIndex[ro] = idx;
            int fi = facetOf(orbitFacetRoot.at(ro));
            f.orbitFacet.push_back(fi);
            f.facets[fi].orbits.push_back(idx);
            return idx;
        };

        // Vertex-trace seams.
        std::map<int, std::vector<const VertexInstance*>> byTrace;
        for (const auto& vi : vinsts_) byTrace[traces_.find(vi.trace)].push_back(&vi);
        int openArcs = 0;
        for (const auto& [root, members] : byTrace) {
            int ends = traceEnds_[root];
            if (ends != 0 && ends != 2) throw FoamError("internal: seam component with odd ends");
            if (ends == 2) {
                ++openArcs;
                if (f.closed) throw FoamError("internal: open seam arc in a closed movie");
                continue;
            }
            std::optional<std::array<int, 3>> cyclic;
            for (const VertexInstance* vi : members) {
                std::array<int, 3> g{orbits_.find(vi->germs[0]), orbits_.find(vi->germs[1]),
                                     orbits_.find(vi->germs[2])};
                if (vi->pol == Polarity::Source) std::swap(g[1], g[2]);
                if (g[0] == g[1] || g[1] == g[2] || g[0] == g[2])
                    throw UnsupportedFoam(
                        "seam circle without three parallel germ orbits (sheet monodromy)");
                auto c = canonicalCyclic(g);
                if (!cyclic) {
                    cyclic = c;
                } else if (*cyclic != c) {
                    throw UnsupportedFoam("inconsistent germ cyclic order along a seam circle");
                }
            }
            AssembledFoam::Seam s;
            s.orbits = {orbitIdx((*cyclic)[0]), orbitIdx((*cyclic)[1]), orbitIdx((*cyclic)[2])};
            f.seams.push_back(s);
        }

        // Choking-torus seams arrive whole.
        for (const auto& cs : chokeSeams_) {
            auto c = canonicalCyclic({orbits_.find(cs[0]), orbits_.find(cs[1]), orbits_.find(cs[2])});
            AssembledFoam::Seam s;
            s.orbits = {orbitIdx(c[0]), orbitIdx(c[1]), orbitIdx(c[2])};
            f.seams.push_back(s);
        }

        // Any facet not yet registered via an orbit (closed surfaces and
        // plain web sheets).
        for (const auto& [id, piece] : sheet_) facetOf(pieces_.uf.find(piece));
        std::vector<int> roots;
        for (int p = 0; p < static_cast<int>(pieces_.chi.size()); ++p)
            if (pieces_.uf.find(p) == p) roots.push_back(p);
        for (int r : roots) facetOf(r);

        long total = 0;
        for (int r : roots) total += pieces_.chi[r];
        total -= 2 * openArcs;
        f.totalChi = total;
        return f;
    }
};

}  // namespace

AssembledFoam replay(const Movie& m) { return Replayer(m).run(); }

long foamDegree(const AssembledFoam& f) {
    return 2 * f.totalChi + (f.sourceVertexCount + f.targetVertexCount) / 2;
}

namespace {

// Cut types a germ orbit can take under neck cutting, named by the cap left
// on the seam side: disc (facet side grows a handle), choking torus on both
// sides, punctured torus (facet side gets a disc).
enum CutType : int { CutDisc = 0, CutChoke = 1, CutPTorus = 2 };

const Rational& cutCoeff(int t) {
    static const Rational cs[3] = {Rational(1, 3), Rational(-1, 9), Rational(1, 3)};
    return cs[t];
}

// Seam circle with three pairwise distinct seam-side caps: +-9 by cyclic
// order. The anchor convention: (disc, choke, punctured torus) in seam
// cyclic order evaluates to -9.
Rational seamValue(const std::array<int, 3>& caps) {
    int iD = -1;
    for (int i = 0; i < 3; ++i)
        if (caps[i] == CutDisc) iD = i;
    if (caps[(iD + 1) % 3] == CutChoke) return Rational(-9);
    return Rational(9);
}

struct EvalFacet {
    long genus = 0;
    int remaining = 0;
    int nC = 0, nD = 0;
};

// Closed-surface values Sigma_{k,l}: 3 at (0,1), -9 at (2,0), else 0.
Rational facetValue(const EvalFacet& fc) {
    long k = fc.nC, l = fc.genus + fc.nD;
    if (k == 0 && l == 1) return Rational(3);
    if (k == 2 && l == 0) return Rational(-9);
    return Rational(0);
}

bool facetFeasible(const EvalFacet& fc) {
    // Target (nC, nD) = (0, 1 - genus) or (2, 0) with genus 0; remaining
    // orbits may always absorb punctured-torus cuts.
    if (fc.genus <= 1) {
        long wantD = 1 - fc.genus;
        if (fc.nC == 0 && fc.nD <= wantD && wantD - fc.nD <= fc.remaining) return true;
    }
    if (fc.genus == 0) {
        if (fc.nD == 0 && fc.nC <= 2 && 2 - fc.nC <= fc.remaining) return true;
    }
    return false;
}

class ComponentEval {
public:
    ComponentEval(const AssembledFoam& f, const std::vector<int>& seamIdx,
                  const std::vector<int>& facetIdx)
        : foam_(f), seams_(seamIdx) {
        for (std::size_t i = 0; i < facetIdx.size(); ++i) facetSlot_[facetIdx[i]] = i;
        for (int fi : facetIdx) {
            const auto& fc = foam_.facets[fi];
            EvalFacet ef;
            long b = static_cast<long>(fc.orbits.size());
            long twoG = 2 - fc.chi - b;
            if (twoG < 0 || twoG % 2 != 0)
                throw FoamError("internal: facet with invalid genus (chi=" +
                                std::to_string(fc.chi) + ", b=" + std::to_string(b) + ")");
            ef.genus = twoG / 2;
            ef.remaining = static_cast<int>(b);
            facets_.push_back(ef);
        }
    }

    Rational run() {
        Rational acc(0);
        dfs(0, Rational(1), acc);
        return acc;
    }

private:
    const AssembledFoam& foam_;
    std::vector<int> seams_;
    std::map<int, std::size_t> facetSlot_;
    std::vector<EvalFacet> facets_;

    void dfs(std::size_t si, Rational partial, Rational& acc) {
        if (si == seams_.size()) {
            Rational v = partial;
            for (const auto& ef : facets_) {
                v *= facetValue(ef);
                if (v.isZero()) return;
            }
            acc += v;
            return;
        }
        const auto& seam = foam_.seams[seams_[si]];
        static const std::array<std::array<int, 3>, 6> perms = {{{0, 1, 2},
                                                                 {0, 2, 1},
                                                                 {1, 0, 2},
                                                                 {1, 2, 0},
                                                                 {2, 0, 1},
                                                                 {2, 1, 0}}};
        for (const auto& perm : perms) {
            Rational factor = seamValue(perm);
            for (int i = 0; i < 3; ++i) {
                factor *= cutCoeff(perm[i]);
                EvalFacet& ef = facets_[facetSlot_.at(foam_.orbitFacet[seam.orbits[i]])];
                ef.remaining -= 1;
                if (perm[i] == CutChoke) ef.nC += 1;
                if (perm[i] == CutDisc) ef.nD += 1;
            }
            bool ok = true;
            for (const auto& ef : facets_)
                if (!facetFeasible(ef)) {
                    ok = false;
                    break;
                }
            if (ok) dfs(si + 1, partial * factor, acc);
            for (int i = 0; i < 3; ++i) {
                EvalFacet& ef = facets_[facetSlot_.at(foam_.orbitFacet[seam.orbits[i]])];
                ef.remaining += 1;
                if (perm[i] == CutChoke) ef.nC -= 1;
                if (perm[i] == CutDisc) ef.nD -= 1;
            }
        }
    }
};

}  // namespace

Rational evaluateClosed(const AssembledFoam& f) {
    if (!f.closed) throw FoamError("evaluation requires a closed foam");

    Rational total(1);
    // Closed facets evaluate through Sigma_{0,g}.
    for (const auto& fc : f.facets) {
        if (!fc.orbits.empty()) continue;
        if (fc.touchesWebs) throw FoamError("internal: boundary facet in closed foam");
        if (fc.chi % 2 != 0) throw FoamError("internal: closed facet with odd chi");
        if (fc.chi == 0)
            total *= Rational(3);
        else
            return Rational(0);
    }
    if (f.seams.empty()) return total;

    // Connected components of the seam-facet incidence graph.
    UF comp;
    std::vector<int> seamNode(f.seams.size());
    std::map<int, int> facetNode;
    for (std::size_t s = 0; s < f.seams.size(); ++s) seamNode[s] = comp.add();
    for (std::size_t s = 0; s < f.seams.size(); ++s) {
        for (int o : f.seams[s].orbits) {
            int fi = f.orbitFacet[o];
            if (!facetNode.count(fi)) facetNode[fi] = comp.add();
            comp.unite(seamNode[s], facetNode[fi]);
        }
    }
    std::map<int, std::pair<std::vector<int>, std::vector<int>>> comps;  // root -> (seams, facets)
    for (std::size_t s = 0; s < f.seams.size(); ++s)
        comps[comp.find(seamNode[s])].first.push_back(static_cast<int>(s));
    for (const auto& [fi, node] : facetNode) comps[comp.find(node)].second.push_back(fi);

    for (auto& [root, sf] : comps) {
        ComponentEval ce(f, sf.first, sf.second);
        total *= ce.run();
        if (total.isZero()) return total;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Movie reversal and composition.
// ---------------------------------------------------------------------------

namespace {

// Replays m step by step, returning the web before each event and the final
// target.
std::pair<std::vector<Web>, Web> framesOf(const Movie& m) {
    std::vector<Web> pre;
    Web w = m.source;
    for (std::size_t i = 0; i < m.events.size(); ++i) {
        pre.push_back(w);
        try {
            std::visit(
                [&w](const auto& ev) {
                    using T = std::decay_t<decltype(ev)>;
                    if constexpr (std::is_same_v<T, BirthEvent>) {
                        w.addCircle(ev.circle);
                    } else if constexpr (std::is_same_v<T, DeathEvent>) {
                        w.removeCircle(ev.circle);
                    } else if constexpr (std::is_same_v<T, ZipEvent>) {
                        w.zip(ev.a, ev.b, ev.ids);
                    } else if constexpr (std::is_same_v<T, UnzipEvent>) {
                        w.unzip(ev.edge, ev.ids);
                    } else if constexpr (std::is_same_v<T, HandleEvent>) {
                        if (!w.idInUse(ev.target)) throw WebError("handle target does not exist");
                    } else if constexpr (std::is_same_v<T, ChokeEvent>) {
                        if (!w.idInUse(ev.target)) throw WebError("choke target does not exist");
                    }
                },
                m.events[i]);
        } catch (const WebError& e) {
            throw FoamError(e.what(), static_cast<int>(i));
        }
    }
    return {std::move(pre), std::move(w)};
}

}  // namespace

Movie reverseMovie(const Movie& m) {
    auto [pre, target] = framesOf(m);
    Movie rev;
    rev.source = target;
    for (int i = static_cast<int>(m.events.size()) - 1; i >= 0; --i) {
        const Web& before = pre[i];
        const MovieEvent& ev = m.events[i];
        if (const auto* b = std::get_if<BirthEvent>(&ev)) {
            rev.events.push_back(DeathEvent{b->circle});
        } else if (const auto* d = std::get_if<DeathEvent>(&ev)) {
            rev.events.push_back(BirthEvent{d->circle});
        } else if (const auto* h = std::get_if<HandleEvent>(&ev)) {
            rev.events.push_back(HandleEvent{h->target});
        } else if (const auto* c = std::get_if<ChokeEvent>(&ev)) {
            rev.events.push_back(ChokeEvent{c->target, c->reversed});
        } else if (const auto* z = std::get_if<ZipEvent>(&ev)) {
            // Undo a zip by unzipping its bar; each side restores the
            // original strand id.
            Web tmp = before;
            ZipReport rep = tmp.zip(z->a, z->b, z->ids);
            // Side 1 of the bar's unzip merges (pred at sink, succ at
            // source) = the A strand's halves.
            rev.events.push_back(
                UnzipEvent{rep.resolvedIds.bar, UnzipIds{rep.refA.target, rep.refB.target}});
        } else if (const auto* u = std::get_if<UnzipEvent>(&ev)) {
            // Undo an unzip by re-zipping the merged sides.
            Web tmp = before;
            UnzipReport rep = tmp.unzip(u->edge, u->ids);
            if (rep.sides[0].result == rep.sides[1].result)
                throw FoamError("cannot reverse a chained unzip", i);
            // Side 0 merged (pred at sink, succ at source): those become the
            // A-role halves of the zip that undoes this unzip.
            ZipEvent ze;
            ze.a = StrandRef{rep.sides[0].result, true, rep.sides[0].closedCircle};
            ze.b = StrandRef{rep.sides[1].result, false, rep.sides[1].closedCircle};
            ze.ids.sink = rep.vSink;
            ze.ids.source = rep.vSource;
            ze.ids.bar = u->edge;
            ze.ids.aIn = rep.sides[0].edgeAtSink;
            ze.ids.aOut = rep.sides[0].edgeAtSource;
            ze.ids.bIn = rep.sides[1].edgeAtSink;
            ze.ids.bOut = rep.sides[1].edgeAtSource;
            rev.events.push_back(ze);
        }
    }
    return rev;
}

Movie concatMovies(const std::vector<const Movie*>& chain) {
    if (chain.empty()) return Movie{};
    Movie out;
    out.source = chain.front()->source;
    Web cur = out.source;
    for (const Movie* m : chain) {
        if (!(m->source == cur))
            throw FoamError("movie composition mismatch: source does not match previous target");
        for (const auto& ev : m->events) out.events.push_back(ev);
        cur = framesOf(*m).second;
    }
    return out;
}

std::string movieKey(const Movie& m) {
    // Relabeling-invariant serialization: ids numbered by first use. Only
    // meaningful for movies with empty source.
    std::map<Id, int> ids;
    std::map<VId, int> vids;
    auto nid = [&](Id x) {
        auto [it, fresh] = ids.try_emplace(x, static_cast<int>(ids.size()));
        return it->second;
    };
    auto nvid = [&](VId x) {
        auto [it, fresh] = vids.try_emplace(x, static_cast<int>(vids.size()));
        return it->second;
    };
    std::ostringstream os;
    for (const auto& ev : m.events) {
        if (const auto* b = std::get_if<BirthEvent>(&ev)) {
            os << "B" << nid(b->circle);
        } else if (const auto* d = std::get_if<DeathEvent>(&ev)) {
            os << "D" << nid(d->circle);
        } else if (const auto* h = std::get_if<HandleEvent>(&ev)) {
            os << "H" << nid(h->target);
        } else if (const auto* c = std::get_if<ChokeEvent>(&ev)) {
            os << "C" << nid(c->target) << (c->reversed ? "r" : "s");
        } else if (const auto* z = std::get_if<ZipEvent>(&ev)) {
            os << "Z" << nid(z->a.target) << (z->a.forward ? "f" : "b") << (z->a.circle ? "o" : "e")
               << "," << nid(z->b.target) << (z->b.forward ? "f" : "b") << (z->b.circle ? "o" : "e")
               << ":" << nvid(z->ids.sink) << "," << nvid(z->ids.source) << "," << nid(z->ids.bar)
               << "," << nid(z->ids.aIn) << "," << nid(z->ids.aOut) << "," << nid(z->ids.bIn) << ","
               << nid(z->ids.bOut);
        } else if (const auto* u = std::get_if<UnzipEvent>(&ev)) {
            os << "U" << nid(u->edge) << ":" << nid(u->ids.out1) << "," << nid(u->ids.out2);
        }
        os << ";";
    }
    return os.str();
}

namespace {
std::mutex evalMemoMutex;
std::unordered_map<std::string, Rational> evalMemo;
}  // namespace

Rational evalMovieSum(const std::vector<const FoamSum*>& chain) {
    // Validate shared sources/targets once per term.
    struct TermInfo {
        const FoamTerm* term;
        Web target;
    };
    std::vector<std::vector<TermInfo>> infos;
    for (const FoamSum* fs : chain) {
        std::vector<TermInfo> v;
        for (const FoamTerm& t : fs->terms) v.push_back({&t, framesOf(t.movie).second});
        infos.push_back(std::move(v));
    }
    if (!infos.empty()) {
        for (const auto& t : infos.front())
            if (!t.term->movie.source.empty())
                throw FoamError("movie chain must start at the empty web");
        for (const auto& t : infos.back())
            if (!t.target.empty()) throw FoamError("movie chain must end at the empty web");
    }

    Rational total(0);
    std::vector<std::size_t> pick(infos.size(), 0);
    if (infos.empty()) return Rational(1);
    for (const auto& fs : infos)
        if (fs.empty()) return Rational(0);

    while (true) {
        // One tuple: check adjacency, concatenate, evaluate.
        Rational coeff(1);
        Movie cat;
        cat.source = infos.front()[pick[0]].term->movie.source;
        bool ok = true;
        const Web* prevTarget = nullptr;
        for (std::size_t i = 0; i < infos.size(); ++i) {
            const TermInfo& ti = infos[i][pick[i]];
            if (prevTarget && !(*prevTarget == ti.term->movie.source))
                throw FoamError("movie chain composition mismatch");
            coeff *= ti.term->coeff;
            for (const auto& ev : ti.term->movie.events) cat.events.push_back(ev);
            prevTarget = &ti.target;
            (void)ok;
        }
        std::string key = movieKey(cat);
        Rational val;
        bool have = false;
        {
            std::lock_guard<std::mutex> lk(evalMemoMutex);
            auto it = evalMemo.find(key);
            if (it != evalMemo.end()) {
                val = it->second;
                have = true;
            }
        }
        if (!have) {
            val = evaluateClosed(replay(cat));
            std::lock_guard<std::mutex> lk(evalMemoMutex);
            evalMemo.emplace(std::move(key), val);
        }
        total += coeff * val;

        // Next tuple.
        std::size_t i = 0;
        for (; i < pick.size(); ++i) {
            if (++pick[i] < infos[i].size()) break;
            pick[i] = 0;
        }
        if (i == pick.size()) break;
    }
    return total;
}

Web movieTarget(const Movie& m) { return framesOf(m).second; }

Movie resolveMovieIds(const Movie& m) {
    Movie out;
    out.source = m.source;
    Web w = m.source;
    for (std::size_t i = 0; i < m.events.size(); ++i) {
        try {
            if (const auto* z = std::get_if<ZipEvent>(&m.events[i])) {
                ZipReport rep = w.zip(z->a, z->b, z->ids);
                out.events.push_back(ZipEvent{z->a, z->b, rep.resolvedIds});
            } else if (const auto* u = std::get_if<UnzipEvent>(&m.events[i])) {
                UnzipReport rep = w.unzip(u->edge, u->ids);
                out.events.push_back(UnzipEvent{u->edge, rep.resolvedIds});
            } else {
                if (const auto* b = std::get_if<BirthEvent>(&m.events[i])) w.addCircle(b->circle);
                if (const auto* d = std::get_if<DeathEvent>(&m.events[i])) w.removeCircle(d->circle);
                out.events.push_back(m.events[i]);
            }
        } catch (const WebError& e) {
            throw FoamError(e.what(), static_cast<int>(i));
        }
    }
    return out;
}

Movie closedMovie(std::vector<MovieEvent> events) {
    Movie m;
    m.events = std::move(events);
    return m;
}

}  // namespace foamcalc
