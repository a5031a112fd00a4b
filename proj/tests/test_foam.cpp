#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "foamcalc/foam.hpp"

using namespace foamcalc;

namespace {

Movie sphereMovie() { return closedMovie({BirthEvent{1}, DeathEvent{1}}); }
Movie torusMovie() { return closedMovie({BirthEvent{1}, HandleEvent{1}, DeathEvent{1}}); }

// Theta foam: birth two circles, zip them into a theta web, unzip the bar,
// kill both circles.
Movie thetaFoamMovie() {
    std::vector<MovieEvent> ev;
    ev.push_back(BirthEvent{1});
    ev.push_back(BirthEvent{2});
    ZipEvent z;
    z.a = StrandRef{1, true, true};
    z.b = StrandRef{2, false, true};
    z.ids = ZipIds{10, 11, 5, 3, 3, 4, 4};
    ev.push_back(z);
    ev.push_back(UnzipEvent{5, UnzipIds{6, 7}});
    ev.push_back(DeathEvent{6});
    ev.push_back(DeathEvent{7});
    return closedMovie(std::move(ev));
}

Rational evalMovie(const Movie& m) { return evaluateClosed(replay(m)); }

}  // namespace

TEST_CASE("sphere and torus") {
    AssembledFoam sphere = replay(sphereMovie());
    CHECK(sphere.closed);
    CHECK(sphere.totalChi == 2);
    CHECK(sphere.seams.empty());
    CHECK(evaluateClosed(sphere) == Rational(0));
    CHECK(foamDegree(sphere) == 4);

    AssembledFoam torus = replay(torusMovie());
    CHECK(torus.totalChi == 0);
    CHECK(evaluateClosed(torus) == Rational(3));
    CHECK(foamDegree(torus) == 0);

    AssembledFoam dbl = replay(closedMovie({BirthEvent{1}, HandleEvent{1}, HandleEvent{1}, DeathEvent{1}}));
    CHECK(evaluateClosed(dbl) == Rational(0));
}

TEST_CASE("choking torus composites") {
    // [Birth, Choke, Death]: three facets with chi (1, 1, -1), one seam.
    AssembledFoam one = replay(closedMovie({BirthEvent{1}, ChokeEvent{1}, DeathEvent{1}}));
    CHECK(one.facets.size() == 3);
    CHECK(one.seams.size() == 1);
    CHECK(one.totalChi == 1);
    std::multiset<long> chis;
    for (const auto& fc : one.facets) chis.insert(fc.chi);
    CHECK(chis == std::multiset<long>{-1, 1, 1});
    CHECK(foamDegree(one) == 2);
    CHECK(evaluateClosed(one) == Rational(0));

    // Two chokes: Sigma_{2,0} = -9.
    AssembledFoam two =
        replay(closedMovie({BirthEvent{1}, ChokeEvent{1}, ChokeEvent{1}, DeathEvent{1}}));
    CHECK(evaluateClosed(two) == Rational(-9));

    // Torus + choke = 0.
    AssembledFoam tc =
        replay(closedMovie({BirthEvent{1}, HandleEvent{1}, ChokeEvent{1}, DeathEvent{1}}));
    CHECK(evaluateClosed(tc) == Rational(0));

    // Seam-swap: reversing one choke negates.
    AssembledFoam swapped = replay(
        closedMovie({BirthEvent{1}, ChokeEvent{1}, ChokeEvent{1, true}, DeathEvent{1}}));
    CHECK(evaluateClosed(swapped) == Rational(9));
}

TEST_CASE("theta foam") {
    AssembledFoam th = replay(thetaFoamMovie());
    CHECK(th.closed);
    CHECK(th.seams.size() == 1);
    CHECK(th.facets.size() == 3);
    for (const auto& fc : th.facets) CHECK(fc.chi == 1);
    CHECK(evaluateClosed(th) == Rational(0));
}

TEST_CASE("movie reversal round-trips") {
    Movie th = thetaFoamMovie();
    Movie rev = reverseMovie(th);
    CHECK(rev.events.size() == th.events.size());
    AssembledFoam f = replay(rev);
    CHECK(f.target == th.source);
    // Reversal of the reversal replays to the original target.
    Movie rr = reverseMovie(rev);
    AssembledFoam f2 = replay(rr);
    CHECK(f2.target == replay(th).target);
}

TEST_CASE("eval_movie_sum") {
    FoamSum a;
    a.terms.push_back({Rational(1, 3), torusMovie()});
    CHECK(evalMovieSum({&a}) == Rational(1));

    FoamSum b;
    b.terms.push_back({Rational(1, 3), torusMovie()});
    b.terms.push_back({Rational(1), sphereMovie()});
    CHECK(evalMovieSum({&b}) == Rational(1));

    CHECK(evalMovieSum({}) == Rational(1));
}

TEST_CASE("disjoint union multiplies") {
    // Torus next to [Birth, Choke, Choke, Death]: 3 * -9.
    Movie m = closedMovie({BirthEvent{1}, HandleEvent{1}, BirthEvent{2}, ChokeEvent{2},
                           ChokeEvent{2}, DeathEvent{1}, DeathEvent{2}});
    CHECK(evalMovie(m) == Rational(-27));
}

TEST_CASE("precondition failures carry the event index") {
    Movie bad = closedMovie({BirthEvent{1}, DeathEvent{2}});
    try {
        replay(bad);
        CHECK(false);
    } catch (const FoamError& e) {
        CHECK(e.eventIndex == 1);
    }
}
