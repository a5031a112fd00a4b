// Reduction of a closed web to a direct sum of graded empty objects, with
// explicit projection/inclusion foam movies realizing the isomorphism.
//
// The three moves are the categorified spider relations:
//   deloop    circle ~ q^-2 O + O + q^2 O
//   debubble  bigon  ~ q^-1 strand + q strand
//   desquare  square ~ smoothing + smoothing
// applied in that priority with lowest-identifier tie breaking, so the
// decomposition is a pure function of the web's labeling.

#pragma once

#include "foamcalc/foam.hpp"

namespace foamcalc {

struct Summand {
    int qShift = 0;
    FoamSum p;     // web -> empty; a single scaled movie
    FoamSum iota;  // empty -> web
};

struct SummandDecomposition {
    Web web;
    std::vector<Summand> summands;
};

SummandDecomposition simplify(const Web& w);

// Evaluates the full Gram matrix eval(p_beta o iota_alpha) and compares it
// with the identity. Failures are reported, not thrown.
struct GramReport {
    bool ok = true;
    std::string counterexample;
};
GramReport decompositionSelfTest(const Web& w);
GramReport decompositionSelfTest(const SummandDecomposition& dec);

// The kiss composite on a bigon: zip its two edges across the bigon face,
// then unzip the new bar. Restores the web, id for id.
std::vector<MovieEvent> kissEvents(const Web& w, Id e1, Id e2);

}  // namespace foamcalc
