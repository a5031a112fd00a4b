// Oriented link diagrams (braid closures and signed PD codes) and their
// resolutions into closed webs.
//
// A crossing stores its four incident arcs positionally as (sw, se, ne, nw)
// with sw, se incoming and ne, nw outgoing; all strands run upward through
// a crossing, so position p continues to nw and position p+1 to ne. Signs
// are explicit: this engine never infers them from over/under data.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "foamcalc/algebra.hpp"
#include "foamcalc/web.hpp"

namespace foamcalc {

struct DiagramError : std::runtime_error {
    explicit DiagramError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CrossingData {
    int sign = +1;  // +1 or -1
    Id sw = 0, se = 0, ne = 0, nw = 0;
};

enum class DiagramSource { Braid, PD };

struct LinkDiagram {
    DiagramSource source = DiagramSource::Braid;
    std::vector<CrossingData> crossings;
    std::vector<Id> arcs;       // canonical arc ids, sorted
    std::vector<Id> freeLoops;  // crossing-free components (braid strands)

    int crossingCount() const { return static_cast<int>(crossings.size()); }
    int writhe() const {
        int w = 0;
        for (const auto& c : crossings) w += c.sign;
        return w;
    }
};

// Trace closure of a braid word: generator i crosses strands i, i+1
// positively, -i negatively. Requires 0 < |letter| < strands.
LinkDiagram parseBraid(int strands, const std::vector<int>& word);

// Braid input string "strands; l1, l2, ..." (the word may be empty).
LinkDiagram parseBraidString(const std::string& text);

// Signed PD: a whitespace-insensitive list of Xp[a,b,c,d] / Xm[a,b,c,d]
// crossings, arcs labeled by positive integers, a and b incoming, c and d
// outgoing (slots sw, se, ne, nw). Every arc label must appear exactly once
// as an input and once as an output.
LinkDiagram parsePD(const std::string& text);

// One vertex of the cube of resolutions.
struct Resolution {
    Web web;
    int qShift = 0;
    int height = 0;
    struct Site {
        bool smoothedH = false;
        // Web ids occupying the four crossing slots in this resolution
        // (classes of the diagram arcs). For an H-smoothing, bar/sink/source
        // identify the local web cells.
        Id swClass = 0, seClass = 0, neClass = 0, nwClass = 0;
        Id bar = 0;
        VId sink = 0, source = 0;
    };
    std::vector<Site> sites;
};

// Smooths every crossing according to the choice bits (one per crossing).
// Positive crossing: bit 0 is the oriented-identity smoothing at height 0
// with q-shift +2, bit 1 the H smoothing at height 1 with shift +3.
// Negative crossing: bit 0 is the H smoothing at height -1 with shift -3,
// bit 1 the identity at height 0 with shift -2. The web is validated.
Resolution resolve(const LinkDiagram& d, const std::vector<bool>& choice);

// Deterministic ids used by resolutions and the cube's edge movies.
inline VId crossingSinkId(int j) { return static_cast<VId>(2 * j + 1); }
inline VId crossingSourceId(int j) { return static_cast<VId>(2 * j + 2); }
Id crossingBarId(const LinkDiagram& d, int j);

}  // namespace foamcalc
