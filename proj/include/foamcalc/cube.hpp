// Cube of resolutions, scalar differential assembly, and bigraded homology.
//
// Every resolution web is decomposed into graded empty summands; the cube's
// zip/unzip edge cobordisms then have scalar matrices over Q, computed as
// closed-foam evaluations p_beta o edge o iota_alpha. Differentials are
// stored as blocks keyed by (homological height, q-degree); homology ranks
// come from fraction-free Gaussian elimination.

#pragma once

#include <functional>
#include <map>
#include <vector>

#include "foamcalc/diagram.hpp"
#include "foamcalc/simplify.hpp"

namespace foamcalc {

struct CubeOptions {
    // Evaluate entries between unequal q-degrees and assert they vanish.
    // When off, those entries are certified zero through the grading: the
    // composite foam has nonzero degree, and only degree-zero closed foams
    // evaluate nonzero. Defaults to on for small cubes.
    enum class CrossDegreeCheck { Auto, Full, Degree } crossDegreeCheck = CrossDegreeCheck::Auto;
};

struct CubeComplex {
    int crossings = 0;

    struct SummandRef {
        unsigned long vertex;  // resolution bitmask
        int summand;           // index into that vertex's decomposition
        int qDegree;
    };
    // Summands grouped by (height, qDegree), in deterministic order.
    std::map<std::pair<int, int>, std::vector<SummandRef>> groups;

    // Differential blocks: (height h, qDegree j) -> matrix taking the
    // (h, j) group to the (h+1, j) group; rows = targets, cols = sources.
    std::map<std::pair<int, int>, std::vector<std::vector<Rational>>> diff;

    int minHeight = 0, maxHeight = 0;
};

CubeComplex buildCube(const LinkDiagram& d, const CubeOptions& opts = {});

// True iff every composite of consecutive blocks is zero.
bool checkDSquared(const CubeComplex& cx);

// Per bidegree: dim H = count - rank(incoming) - rank(outgoing), by exact
// fraction-free elimination. Requires d^2 = 0.
BiPoly homologyPoincare(const CubeComplex& cx);

// The full pipeline: build, assert d^2 = 0, take homology.
BiPoly poincare(const LinkDiagram& d, const CubeOptions& opts = {});

// Exact rank of a rational matrix (Bareiss elimination on integer-scaled
// rows, first-nonzero pivoting).
int matrixRank(const std::vector<std::vector<Rational>>& m);

// Runs fn(0..n-1) on the worker pool; FOAMCALC_THREADS caps the pool size.
void parallelFor(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace foamcalc
