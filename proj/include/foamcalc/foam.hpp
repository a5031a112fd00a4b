// Foams presented as movies of elementary events between closed webs,
// assembly of the swept-out 2-complex, and exact evaluation of closed foams.
//
// A movie is replayed slab by slab. Facet connectivity is maintained by a
// union-find over sheet pieces with incremental Euler characteristic
// bookkeeping; seam circles are assembled from vertex traces joined at zip
// and unzip points, with one germ orbit per parallel cutting circle.
//
// Closed foams are evaluated by neck-cutting every germ orbit: each orbit
// independently takes one of the three neck-cutting cut types, each seam
// circle then demands three pairwise-distinct seam-side caps (else it dies
// by seam-swapping) and contributes +-9 by cyclic order, and each capped-off
// facet contributes through the closed-surface table Sigma_{k,l} which is 3
// at (0,1), -9 at (2,0) and zero otherwise.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "foamcalc/algebra.hpp"
#include "foamcalc/web.hpp"

namespace foamcalc {

struct FoamError : std::runtime_error {
    int eventIndex;  // -1 when not tied to a specific event
    FoamError(const std::string& msg, int idx = -1)
        : std::runtime_error(idx >= 0 ? "event " + std::to_string(idx) + ": " + msg : msg),
          eventIndex(idx) {}
};

// A seam circle whose germs do not form three parallel orbits (sheet
// monodromy). No foam produced by the pipeline should ever trigger this.
struct UnsupportedFoam : FoamError {
    explicit UnsupportedFoam(const std::string& msg, int idx = -1) : FoamError(msg, idx) {}
};

// ---------------------------------------------------------------------------
// Movie events. Events carry the ids of every cell they create, so that a
// movie's target web is reproducible id-for-id and movies can be reversed
// and composed without relabeling.
// ---------------------------------------------------------------------------

struct BirthEvent {
    Id circle;
};
struct DeathEvent {
    Id circle;
};
struct ZipEvent {
    StrandRef a, b;
    ZipIds ids;
};
struct UnzipEvent {
    Id edge;
    UnzipIds ids;
};
struct HandleEvent {
    Id target;  // edge or circle carrying the new handle
};
struct ChokeEvent {
    Id target;
    bool reversed = false;  // standard cyclic order is bulk-handle-disc
};

using MovieEvent =
    std::variant<BirthEvent, DeathEvent, ZipEvent, UnzipEvent, HandleEvent, ChokeEvent>;

struct Movie {
    Web source;
    std::vector<MovieEvent> events;

    Movie() = default;
    Movie(Web src, std::vector<MovieEvent> ev) : source(std::move(src)), events(std::move(ev)) {}
};

// Formal rational combination of movies with common source and target.
struct FoamTerm {
    Rational coeff;
    Movie movie;
};
struct FoamSum {
    std::vector<FoamTerm> terms;
};

// ---------------------------------------------------------------------------
// Assembled foam: the cell-level description replay produces.
// ---------------------------------------------------------------------------

struct AssembledFoam {
    struct Facet {
        long chi = 0;
        std::vector<int> orbits;      // germ orbits bounding this facet
        bool touchesWebs = false;     // has boundary on the source/target web
    };
    struct Seam {
        std::array<int, 3> orbits{};  // cyclic order around the seam circle
    };

    bool closed = false;   // source and target webs both empty
    long totalChi = 0;     // Euler characteristic of the whole 2-complex
    int sourceVertexCount = 0;
    int targetVertexCount = 0;
    std::vector<Facet> facets;
    std::vector<Seam> seams;
    int orbitCount = 0;
    std::vector<int> orbitFacet;  // orbit -> facet index
    Web target;
};

// Replays a movie, validating every event precondition, and assembles the
// foam it sweeps out. Throws FoamError (with the offending event index) or
// UnsupportedFoam.
AssembledFoam replay(const Movie& m);

// deg = 2*chi - |boundary| + |V|/2; movies run between closed webs, so the
// boundary term vanishes and |V| counts source plus target vertices.
long foamDegree(const AssembledFoam& f);

// Exact evaluation of a closed foam. The empty foam evaluates to 1.
Rational evaluateClosed(const AssembledFoam& f);

// Reverses a movie (time reversal): births become deaths, zips become
// unzips and vice versa, handles and chokes persist. The result replays
// from m's target back to m's source, id for id.
Movie reverseMovie(const Movie& m);

// Concatenates composable movies (target of each equals the source of the
// next, id for id).
Movie concatMovies(const std::vector<const Movie*>& chain);

// Bilinear extension of evaluation to a chain of foam sums composing
// end-to-end, closed overall. Evaluations of the assembled closed movies
// are memoized process-wide under a relabeling-invariant movie key.
Rational evalMovieSum(const std::vector<const FoamSum*>& chain);

// Relabeling-invariant memo key for a closed movie.
std::string movieKey(const Movie& m);

// The web a movie ends on.
Web movieTarget(const Movie& m);

// Rewrites sentinel (zero) ids in zip/unzip events with the ids replay
// resolves them to, so the movie is stable under reversal and hashing.
Movie resolveMovieIds(const Movie& m);

// Convenience: build a closed movie from events applied to the empty web.
Movie closedMovie(std::vector<MovieEvent> events);

}  // namespace foamcalc
