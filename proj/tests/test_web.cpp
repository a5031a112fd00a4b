#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "foamcalc/diagram.hpp"
#include "foamcalc/web.hpp"

using namespace foamcalc;

namespace {

Web thetaWeb() {
    // Two vertices, three parallel edges, all oriented source -> sink.
    Web w;
    w.addEdgeRaw(1, 11, 10);
    w.addEdgeRaw(2, 11, 10);
    w.addEdgeRaw(3, 11, 10);
    w.addVertexRaw(10, Polarity::Sink, {EdgeEnd{1, true}, EdgeEnd{2, true}, EdgeEnd{3, true}});
    w.addVertexRaw(11, Polarity::Source, {EdgeEnd{1, false}, EdgeEnd{3, false}, EdgeEnd{2, false}});
    w.validate();
    return w;
}

}  // namespace

TEST_CASE("braid parsing") {
    LinkDiagram unlink = parseBraid(2, {});
    CHECK(unlink.crossingCount() == 0);
    CHECK(unlink.freeLoops.size() == 2);

    LinkDiagram kink = parseBraid(2, {1});
    CHECK(kink.crossingCount() == 1);
    CHECK(kink.writhe() == 1);

    LinkDiagram trefoil = parseBraid(2, {1, 1, 1});
    CHECK(trefoil.crossingCount() == 3);
    CHECK(trefoil.writhe() == 3);

    CHECK_THROWS_AS(parseBraid(2, {2}), DiagramError);
    CHECK_THROWS_AS(parseBraid(2, {0}), DiagramError);

    LinkDiagram viaString = parseBraidString(" 2 ; 1, 1, 1 ");
    CHECK(viaString.crossingCount() == 3);
    CHECK(parseBraidString("2;").freeLoops.size() == 2);
}

TEST_CASE("signed PD parsing") {
    LinkDiagram k = parsePD("Xp[1,2,2,1]");
    CHECK(k.crossingCount() == 1);
    CHECK(k.crossings[0].sign == 1);

    LinkDiagram tref = parsePD("Xp[2,5,3,6] Xp[4,1,5,2] Xp[6,3,1,4]");
    CHECK(tref.crossingCount() == 3);
    CHECK(tref.writhe() == 3);

    CHECK_THROWS_AS(parsePD("Xp[1,2,3,4]"), DiagramError);      // dangling arcs
    CHECK_THROWS_AS(parsePD("Xq[1,2,2,1]"), DiagramError);      // bad sign tag
    CHECK_THROWS_AS(parsePD("Xp[1,2,2"), DiagramError);         // malformed
    CHECK_THROWS_AS(parsePD("Xp[1,1,2,2] Xp[2,2,1,1]"), DiagramError);  // twice-in arcs
}

TEST_CASE("resolution shifts and heights") {
    LinkDiagram pos = parseBraid(2, {1});
    Resolution r0 = resolve(pos, {false});
    CHECK(r0.qShift == 2);
    CHECK(r0.height == 0);
    CHECK(r0.web.vertices().empty());
    CHECK(r0.web.circles().size() == 2);

    Resolution r1 = resolve(pos, {true});
    CHECK(r1.qShift == 3);
    CHECK(r1.height == 1);
    CHECK(r1.web.vertices().size() == 2);

    LinkDiagram neg = parseBraid(2, {-1});
    Resolution n0 = resolve(neg, {false});
    CHECK(n0.qShift == -3);
    CHECK(n0.height == -1);
    CHECK(n0.web.vertices().size() == 2);
    Resolution n1 = resolve(neg, {true});
    CHECK(n1.qShift == -2);
    CHECK(n1.height == 0);

    LinkDiagram tref = parseBraid(2, {1, 1, 1});
    Resolution all1 = resolve(tref, {true, true, true});
    CHECK(all1.web.vertices().size() == 6);
    CHECK(all1.qShift == 9);
    CHECK(all1.height == 3);

    // Vertex count is twice the number of H choices, for every choice.
    for (int mask = 0; mask < 8; ++mask) {
        std::vector<bool> choice{(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0};
        Resolution r = resolve(tref, choice);
        int hs = 0;
        for (bool b : choice) hs += b ? 1 : 0;
        CHECK(static_cast<int>(r.web.vertices().size()) == 2 * hs);
    }
}

TEST_CASE("face structure and reducibles") {
    Web empty;
    CHECK(!findReducible(empty).has_value());

    Web circle;
    circle.addCircle(1);
    auto red = findReducible(circle);
    REQUIRE(red.has_value());
    CHECK(std::holds_alternative<Circle>(*red));

    Web theta = thetaWeb();
    CHECK(theta.faces().size() == 3);  // V - E + F = 2
    auto b = findReducible(theta);
    REQUIRE(b.has_value());
    REQUIRE(std::holds_alternative<Bigon>(*b));
    CHECK(std::get<Bigon>(*b).e1 == 1);

    // A resolution with adjacent H-sites on three strands contains a square.
    LinkDiagram d = parseBraid(3, {1, 2});
    Resolution r = resolve(d, {true, true});
    bool sawSquare = false;
    for (const auto& f : r.web.faces())
        if (f.size() == 4) sawSquare = true;
    CHECK(sawSquare);
}

TEST_CASE("theta and dumbbell are the same planar map") {
    LinkDiagram kink = parseBraid(2, {1});
    Resolution dumb = resolve(kink, {true});
    CHECK(dumb.web.canonicalString() == thetaWeb().canonicalString());
}

TEST_CASE("zip then unzip restores the web") {
    Web theta = thetaWeb();
    Web w = theta;
    // Kiss a bigon: zip across its face, then unzip the new bar.
    Dart d1{1, true};
    auto face = w.faceOf(d1);
    if (face.size() != 2) {
        d1 = Dart{1, false};
        face = w.faceOf(d1);
    }
    REQUIRE(face.size() == 2);
    Dart d2 = face[1];
    ZipReport rep = w.zip(StrandRef{1, d1.forward, false},
                          StrandRef{d2.edge, d2.forward, false}, ZipIds{});
    UnzipReport urep = w.unzip(rep.bar, UnzipIds{rep.refA.target, rep.refB.target});
    w.validate();
    CHECK(w == theta);
    CHECK(!urep.sides[0].closedCircle);
}
