#include "foamcalc/simplify.hpp"

#include <sstream>

namespace foamcalc {

namespace {

struct LocalBranch {
    int shift = 0;
    Rational pCoeff;
    std::vector<MovieEvent> pEvents;
    Rational iCoeff;
    std::vector<MovieEvent> iEvents;
    Web next;
};

std::vector<MovieEvent> concatEvents(std::vector<MovieEvent> a, const std::vector<MovieEvent>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

LocalBranch reverseBranch(const Web& w, int shift, const Rational& pc,
                          std::vector<MovieEvent> pEvents, const Rational& ic, Web next) {
    LocalBranch br;
    br.shift = shift;
    br.pCoeff = pc;
    br.pEvents = std::move(pEvents);
    br.iCoeff = ic;
    br.iEvents = reverseMovie(Movie{w, br.pEvents}).events;
    br.next = std::move(next);
    return br;
}

// Unzips a bigon edge and kills the circle its partner closes into.
// Returns the events and the remaining web.
std::pair<std::vector<MovieEvent>, Web> bigonCap(const Web& w, Id e1, Id e2) {
    Web scratch = w;
    UnzipReport rep = scratch.unzip(e1, UnzipIds{});
    Id circleId = 0;
    for (const auto& side : rep.sides) {
        if (side.edgeAtSink == e2 && side.edgeAtSource == e2) {
            if (!side.closedCircle)
                throw FoamError("internal: bigon partner did not close into a circle");
            circleId = side.result;
        }
    }
    if (circleId == 0) throw FoamError("internal: bigon partner not found during unzip");
    scratch.removeCircle(circleId);
    std::vector<MovieEvent> ev{UnzipEvent{e1, rep.resolvedIds}, DeathEvent{circleId}};
    return {std::move(ev), std::move(scratch)};
}

// Unzips opposite square edges x then y; the side edges merge across the
// first unzip and close into a circle at the second, which then dies.
std::pair<std::vector<MovieEvent>, Web> squareCap(const Web& w, Id x, Id y) {
    Web scratch = w;
    UnzipReport r1 = scratch.unzip(x, UnzipIds{});
    UnzipReport r2 = scratch.unzip(y, UnzipIds{});
    Id circleId = 0;
    for (const auto& side : r2.sides)
        if (side.closedCircle) {
            if (circleId != 0)
                throw FoamError("internal: square unzip closed two circles");
            circleId = side.result;
        }
    if (circleId == 0) throw FoamError("internal: square unzip closed no circle");
    scratch.removeCircle(circleId);
    std::vector<MovieEvent> ev{UnzipEvent{x, r1.resolvedIds}, UnzipEvent{y, r2.resolvedIds},
                               DeathEvent{circleId}};
    return {std::move(ev), std::move(scratch)};
}

}  // namespace

std::vector<MovieEvent> kissEvents(const Web& w, Id e1, Id e2) {
    // Locate the bigon face to orient the zip.
    Dart d1{e1, true};
    auto face = w.faceOf(d1);
    if (!(face.size() == 2 && face[1].edge == e2)) {
        d1 = Dart{e1, false};
        face = w.faceOf(d1);
    }
    if (!(face.size() == 2 && face[1].edge == e2))
        throw FoamError("kiss requires a bigon face on the given edges");
    Dart d2 = face[1];

    Web scratch = w;
    ZipReport rep = scratch.zip(StrandRef{e1, d1.forward, false}, StrandRef{e2, d2.forward, false},
                                ZipIds{});
    scratch.unzip(rep.bar, UnzipIds{rep.refA.target, rep.refB.target});
    if (!(scratch == w)) throw FoamError("internal: kiss failed to restore the web");

    return {ZipEvent{StrandRef{e1, d1.forward, false}, StrandRef{e2, d2.forward, false},
                     rep.resolvedIds},
            UnzipEvent{rep.bar, UnzipIds{rep.refA.target, rep.refB.target}}};
}

namespace {

SummandDecomposition simplifyRaw(const Web& w);

}  // namespace

SummandDecomposition simplify(const Web& w) {
    SummandDecomposition out = simplifyRaw(w);
    // The projection/inclusion movies are composed from local models whose
    // relative signs depend on drawing conventions the event language does
    // not see (which face a kiss crosses, which square smoothing comes
    // first). The pairing eval(p o iota) is always a unit; normalize each
    // inclusion so the unit is +1, and let the Gram self-test certify the
    // result.
    for (auto& s : out.summands) {
        Rational diag = evalMovieSum({&s.iota, &s.p});
        if (diag == Rational(-1)) {
            s.iota.terms.front().coeff = -s.iota.terms.front().coeff;
        } else if (diag != Rational(1)) {
            throw FoamError("decomposition pairing is not a unit: " + diag.str());
        }
    }
    return out;
}

namespace {

SummandDecomposition simplifyRaw(const Web& w) {
    SummandDecomposition out;
    out.web = w;

    auto red = findReducible(w);
    if (!red) {
        Summand s;
        s.qShift = 0;
        s.p.terms.push_back({Rational(1), Movie{w, {}}});
        s.iota.terms.push_back({Rational(1), Movie{Web{}, {}}});
        out.summands.push_back(std::move(s));
        return out;
    }

    std::vector<LocalBranch> branches;

    if (const auto* c = std::get_if<Circle>(&*red)) {
        Id id = c->circle;
        Web next = w;
        next.removeCircle(id);
        {
            LocalBranch b;  // q^-2 summand
            b.shift = -2;
            b.pCoeff = Rational(1);
            b.pEvents = {DeathEvent{id}};
            b.iCoeff = Rational(1, 3);
            b.iEvents = {BirthEvent{id}, HandleEvent{id}};
            b.next = next;
            branches.push_back(std::move(b));
        }
        {
            LocalBranch b;  // q^0 summand
            b.shift = 0;
            b.pCoeff = Rational(1, 3);
            b.pEvents = {ChokeEvent{id}, DeathEvent{id}};
            b.iCoeff = Rational(-1, 3);
            b.iEvents = {BirthEvent{id}, ChokeEvent{id}};
            b.next = next;
            branches.push_back(std::move(b));
        }
        {
            LocalBranch b;  // q^+2 summand
            b.shift = 2;
            b.pCoeff = Rational(1, 3);
            b.pEvents = {HandleEvent{id}, DeathEvent{id}};
            b.iCoeff = Rational(1);
            b.iEvents = {BirthEvent{id}};
            b.next = next;
            branches.push_back(std::move(b));
        }
    } else if (const auto* bg = std::get_if<Bigon>(&*red)) {
        auto [capEvents, next] = bigonCap(w, bg->e1, bg->e2);
        auto kiss = kissEvents(w, bg->e1, bg->e2);
        Movie capMovie{w, capEvents};
        std::vector<MovieEvent> rebuild = reverseMovie(capMovie).events;
        {
            LocalBranch b;  // q^-1 summand
            b.shift = -1;
            b.pCoeff = Rational(1);
            b.pEvents = capEvents;
            b.iCoeff = Rational(1, 2);
            b.iEvents = concatEvents(rebuild, kiss);
            b.next = next;
            branches.push_back(std::move(b));
        }
        {
            LocalBranch b;  // q^+1 summand
            b.shift = 1;
            b.pCoeff = Rational(1, 2);
            b.pEvents = concatEvents(kiss, capEvents);
            b.iCoeff = Rational(1);
            b.iEvents = rebuild;
            b.next = next;
            branches.push_back(std::move(b));
        }
    } else {
        const auto& sq = std::get<Square>(*red);
        // Opposite pairs in face order: (edges[0], edges[2]) and
        // (edges[1], edges[3]). The branch containing the least edge id goes
        // first; within a pair the lesser edge is unzipped first.
        std::array<Id, 2> pair1{sq.edges[0], sq.edges[2]};
        std::array<Id, 2> pair2{sq.edges[1], sq.edges[3]};
        if (pair1[0] > pair1[1]) std::swap(pair1[0], pair1[1]);
        if (pair2[0] > pair2[1]) std::swap(pair2[0], pair2[1]);
        if (pair2[0] < pair1[0]) std::swap(pair1, pair2);

        auto [ev1, next1] = squareCap(w, pair1[0], pair1[1]);
        auto [ev2, next2] = squareCap(w, pair2[0], pair2[1]);
        branches.push_back(
            reverseBranch(w, 0, Rational(1), std::move(ev1), Rational(1), std::move(next1)));
        branches.push_back(
            reverseBranch(w, 0, Rational(1), std::move(ev2), Rational(1), std::move(next2)));
    }

    for (const auto& br : branches) {
        SummandDecomposition sub = simplifyRaw(br.next);
        for (const auto& ss : sub.summands) {
            const FoamTerm& subP = ss.p.terms.front();
            const FoamTerm& subI = ss.iota.terms.front();
            Summand s;
            s.qShift = br.shift + ss.qShift;
            Movie pm{w, concatEvents(br.pEvents, subP.movie.events)};
            Movie im{Web{}, concatEvents(subI.movie.events, br.iEvents)};
            s.p.terms.push_back({br.pCoeff * subP.coeff, std::move(pm)});
            s.iota.terms.push_back({br.iCoeff * subI.coeff, std::move(im)});
            out.summands.push_back(std::move(s));
        }
    }
    return out;
}

}  // namespace

GramReport decompositionSelfTest(const SummandDecomposition& dec) {
    GramReport rep;
    const auto& ss = dec.summands;
    for (std::size_t b = 0; b < ss.size(); ++b) {
        for (std::size_t a = 0; a < ss.size(); ++a) {
            Rational val = evalMovieSum({&ss[a].iota, &ss[b].p});
            Rational want(a == b ? 1 : 0);
            if (val != want) {
                rep.ok = false;
                std::ostringstream os;
                os << "Gram[" << b << "," << a << "] = " << val.str() << ", expected "
                   << want.str() << " (shifts " << ss[b].qShift << "," << ss[a].qShift << ")";
                rep.counterexample = os.str();
                return rep;
            }
        }
    }
    return rep;
}

GramReport decompositionSelfTest(const Web& w) { return decompositionSelfTest(simplify(w)); }

}  // namespace foamcalc
