#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "foamcalc/diagram.hpp"
#include "foamcalc/simplify.hpp"

using namespace foamcalc;

namespace {

std::multiset<int> shiftsOf(const SummandDecomposition& d) {
    std::multiset<int> s;
    for (const auto& x : d.summands) s.insert(x.qShift);
    return s;
}

Web circleWeb() {
    Web w;
    w.addCircle(1);
    return w;
}

Web twoCircles() {
    Web w;
    w.addCircle(1);
    w.addCircle(2);
    return w;
}

Web thetaWeb() { return resolve(parseBraid(2, {1}), {true}).web; }

}  // namespace

TEST_CASE("empty web decomposition") {
    SummandDecomposition d = simplify(Web{});
    CHECK(d.summands.size() == 1);
    CHECK(d.summands[0].qShift == 0);
    CHECK(decompositionSelfTest(d).ok);
}

TEST_CASE("circle delooping") {
    SummandDecomposition d = simplify(circleWeb());
    CHECK(shiftsOf(d) == std::multiset<int>{-2, 0, 2});
    auto rep = decompositionSelfTest(d);
    INFO(rep.counterexample);
    CHECK(rep.ok);
}

TEST_CASE("two circles") {
    SummandDecomposition d = simplify(twoCircles());
    CHECK(d.summands.size() == 9);
    auto rep = decompositionSelfTest(d);
    INFO(rep.counterexample);
    CHECK(rep.ok);
}

TEST_CASE("theta web debubbles into six summands") {
    SummandDecomposition d = simplify(thetaWeb());
    CHECK(shiftsOf(d) == std::multiset<int>{-3, -1, -1, 1, 1, 3});
    auto rep = decompositionSelfTest(d);
    INFO(rep.counterexample);
    CHECK(rep.ok);
}

TEST_CASE("square-bearing web decomposes orthogonally") {
    // H-H resolution of a 2-letter 3-strand braid has a square face.
    Web w = resolve(parseBraid(3, {1, 2}), {true, true}).web;
    bool sawSquare = false;
    for (const auto& f : w.faces()) sawSquare |= (f.size() == 4);
    REQUIRE(sawSquare);
    SummandDecomposition d = simplify(w);
    auto rep = decompositionSelfTest(d);
    INFO(rep.counterexample);
    CHECK(rep.ok);
}
