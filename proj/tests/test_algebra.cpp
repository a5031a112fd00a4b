#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "foamcalc/algebra.hpp"

using namespace foamcalc;

TEST_CASE("rational arithmetic is exact") {
    Rational a(2, 4);
    CHECK(a == Rational(1, 2));
    CHECK(a.str() == "1/2");
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> d(-40, 40);
    for (int i = 0; i < 200; ++i) {
        long n = d(rng), m = d(rng);
        if (n == 0 || m == 0) continue;
        Rational x(n, m);
        CHECK(x * (Rational(1) / x) == Rational(1));
    }
}

TEST_CASE("laurent multiplication examples") {
    LaurentPoly three = LaurentPoly::quantumInt(3);  // q^2 + 1 + q^-2
    CHECK(three.str() == "q^-2 + 1 + q^2");
    CHECK(three * LaurentPoly(Rational(1)) == three);

    LaurentPoly two = LaurentPoly::quantumInt(2);  // q + q^-1
    LaurentPoly prod = three * two;
    LaurentPoly expect;
    expect.add(3, Rational(1));
    expect.add(1, Rational(2));
    expect.add(-1, Rational(2));
    expect.add(-3, Rational(1));
    CHECK(prod == expect);

    CHECK((LaurentPoly() * three).isZero());
}

TEST_CASE("laurent ring axioms on random inputs") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> e(-4, 4), c(-5, 5), n(1, 4);
    auto rnd = [&] {
        LaurentPoly p;
        int terms = n(rng);
        for (int i = 0; i < terms; ++i) p.add(e(rng), Rational(c(rng)));
        return p;
    };
    for (int i = 0; i < 100; ++i) {
        LaurentPoly a = rnd(), b = rnd(), cc = rnd();
        CHECK(a * b == b * a);
        CHECK((a * b) * cc == a * (b * cc));
        CHECK(a * (b + cc) == a * b + a * cc);
    }
}

TEST_CASE("bipoly t-evaluation") {
    BiPoly p = BiPoly::fromLaurent(LaurentPoly::quantumInt(3), 0);
    CHECK(p.evalT(Rational(-1)) == LaurentPoly::quantumInt(3));

    BiPoly q;
    q.add(1, 1, Rational(1));
    q.add(2, 1, Rational(1));
    CHECK(q.evalT(Rational(-1)).isZero());

    BiPoly r = BiPoly::monomial(3, 4);
    LaurentPoly want;
    want.add(4, Rational(-1));
    CHECK(r.evalT(Rational(-1)) == want);
}

TEST_CASE("bipoly ring axioms and rendering") {
    std::mt19937 rng(13);
    std::uniform_int_distribution<int> e(-3, 3), c(-4, 4), n(1, 3);
    auto rnd = [&] {
        BiPoly p;
        int terms = n(rng);
        for (int i = 0; i < terms; ++i) p.add(e(rng), e(rng), Rational(c(rng)));
        return p;
    };
    for (int i = 0; i < 60; ++i) {
        BiPoly a = rnd(), b = rnd(), cc = rnd();
        CHECK(a * b == b * a);
        CHECK((a * b) * cc == a * (b * cc));
        CHECK((a + b).evalT(Rational(-1)) == a.evalT(Rational(-1)) + b.evalT(Rational(-1)));
    }

    BiPoly demo;
    demo.add(0, 4, Rational(1));
    demo.add(2, 8, Rational(1));
    demo.add(3, 12, Rational(1));
    CHECK(demo.str() == "q^4 + q^8*t^2 + q^12*t^3");
}
