#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "foamcalc/cube.hpp"
#include "foamcalc/spider.hpp"

using namespace foamcalc;

namespace {

BiPoly timesQ3(const BiPoly& p) { return BiPoly::fromLaurent(LaurentPoly::quantumInt(3)) * p; }

BiPoly trefoilExpected() {
    BiPoly inner;
    inner.add(0, 4, Rational(1));
    inner.add(2, 8, Rational(1));
    inner.add(3, 12, Rational(1));
    return timesQ3(inner);
}

}  // namespace

TEST_CASE("matrix rank") {
    CHECK(matrixRank({}) == 0);
    CHECK(matrixRank({{Rational(0), Rational(0)}}) == 0);
    CHECK(matrixRank({{Rational(1), Rational(2)}, {Rational(2), Rational(4)}}) == 1);
    CHECK(matrixRank({{Rational(1, 2), Rational(0)}, {Rational(0), Rational(1, 3)}}) == 2);
    CHECK(matrixRank({{Rational(1), Rational(2), Rational(3)},
                      {Rational(4), Rational(5), Rational(6)},
                      {Rational(7), Rational(8), Rational(9)}}) == 2);
}

TEST_CASE("unknot cube") {
    CubeComplex cx = buildCube(parseBraid(1, {}));
    CHECK(cx.diff.empty());
    std::multiset<int> qdegs;
    for (const auto& [key, group] : cx.groups)
        for (std::size_t i = 0; i < group.size(); ++i) qdegs.insert(key.second);
    CHECK(qdegs == std::multiset<int>{-2, 0, 2});

    BiPoly h = homologyPoincare(cx);
    CHECK(h == BiPoly::fromLaurent(LaurentPoly::quantumInt(3)));
}

TEST_CASE("one-crossing unknot cube shape and homology") {
    LinkDiagram d = parseBraid(2, {1});
    CubeComplex cx = buildCube(d);
    int h0 = 0, h1 = 0;
    for (const auto& [key, group] : cx.groups) {
        if (key.first == 0) h0 += static_cast<int>(group.size());
        if (key.first == 1) h1 += static_cast<int>(group.size());
    }
    CHECK(h0 == 9);
    CHECK(h1 == 6);
    CHECK(checkDSquared(cx));
    BiPoly h = homologyPoincare(cx);
    CHECK(h == BiPoly::fromLaurent(LaurentPoly::quantumInt(3)));
}

TEST_CASE("negative kink unknot") {
    CHECK(poincare(parseBraid(2, {-1})) == BiPoly::fromLaurent(LaurentPoly::quantumInt(3)));
}

TEST_CASE("corrupted differential fails d-squared") {
    LinkDiagram d = parseBraid(2, {1, 1});
    CubeComplex cx = buildCube(d);
    REQUIRE(checkDSquared(cx));
    for (auto& [key, m] : cx.diff) {
        auto up = std::make_pair(key.first + 1, key.second);
        if (!cx.diff.count(up) || m.empty() || m[0].empty()) continue;
        bool upNonzero = false;
        for (const auto& row : cx.diff.at(up))
            for (const auto& x : row) upNonzero |= !x.isZero();
        if (!upNonzero) continue;
        m[0][0] += Rational(1);
        break;
    }
    CHECK(!checkDSquared(cx));
}

TEST_CASE("trefoil homology") {
    BiPoly h = poincare(parseBraid(2, {1, 1, 1}));
    CHECK(h == trefoilExpected());
    CHECK(h.evalT(Rational(-1)) == quantumInvariant(parseBraid(2, {1, 1, 1})));
}

TEST_CASE("hopf link homology") {
    BiPoly inner;
    inner.add(0, 2, Rational(1));
    inner.add(2, 6, Rational(1));
    inner.add(2, 8, Rational(1));
    CHECK(poincare(parseBraid(2, {1, 1})) == timesQ3(inner));
}

TEST_CASE("disjoint union multiplies") {
    // Hopf link next to a far strand: the closure adds a split unknot.
    BiPoly withCircle = poincare(parseBraid(3, {1, 1}));
    BiPoly hopf = poincare(parseBraid(2, {1, 1}));
    CHECK(withCircle == timesQ3(hopf));
}
