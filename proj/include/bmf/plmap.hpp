#pragma once

// Piecewise-linear measure-preserving approximants.
//
// Starting from the full tent map, every flat segment scheduled for replacement is
// rewritten in place: a steeper chord up to the removed interval, one or two plain
// tents over it (dipping exactly to the frame image of the carrier's left value),
// and the trailing chord out of it. The mirrored region of the same frame is
// rewritten in the same call, so every intermediate map stays symmetric where the
// construction is symmetric.
//
// Measure preservation is decided exactly: a finite piecewise-linear self-map of
// [0,1] preserves Lebesgue measure iff for every value cell the reciprocal absolute
// slopes of the covering pieces sum to 1.

#include "bmf/bmfunction.hpp"
#include "bmf/rational.hpp"
#include "bmf/staircase.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bmf {

struct PLMap {
    std::vector<Rational> breakpoints; // strictly increasing, first 0, last 1
    std::vector<Rational> values;      // same length, each in [0, 1]
    // schedule provenance when produced by build_g (-1 otherwise)
    int gen = -1;
    int cutoff = -1;
};

// Validates the shape invariants (monotone breakpoints spanning [0,1], values in
// range) and returns the map; zero-slope pieces are representable — they are
// diagnosed by verify_measure rather than rejected here.
PLMap make_plmap(std::vector<Rational> breakpoints, std::vector<Rational> values);

// The measure-preserving seed: breakpoints 0, 1/2, 1 with values 0, 1, 0.
PLMap tent();

// Exact evaluation by linear interpolation on the containing piece.
Rational eval_pl(const PLMap& g, const Rational& x);

// Replaces the single linear piece over the image of the node's carrier [c, d]
// (and, atomically, over the mirrored region of the same frame) with the steeper
// entry chord, the tent(s) over the removed interval — one for odd node levels,
// two split at the tent-base break for even ones — and the trailing chord.
// Throws std::invalid_argument if the map is not linear over a target region.
PLMap modify(const PLMap& g, const Frame& frame, const StaircaseNode& node);

// One scheduled replacement, recorded for distance bookkeeping.
struct ScheduleStep {
    int gen = 0;             // generation being built by this step
    int m = 0;               // staircase level of the node modified
    std::int64_t p = 0;      // node position within its level
    int parent_index = -1;   // which generation-(gen-1) frame hosted the step
    Rational owner_h;        // height of the hosting frame
    Rational child_h;        // height of the tents introduced (owner_h * value drop)
    Rational sup_dist;       // exact uniform distance moved by this step
};

struct Schedule {
    PLMap result;
    std::vector<ScheduleStep> steps;
};

// Applies the full lexicographic schedule: for every generation k <= n, every
// generation-(k-1) frame whose ancestry only uses staircase levels <= cutoff is
// rewritten at each of its nodes with level <= cutoff, in (m, p) order; frames are
// enumerated parents-first, direct children before their mirrored copies.
Schedule build_g_trace(int n, int cutoff);
PLMap build_g(int n, int cutoff);

struct MeasureCell {
    Rational lo, hi; // open value cell
    Rational sum;    // exact sum of reciprocal absolute slopes over covering pieces
};

struct MeasureReport {
    std::vector<MeasureCell> cells;
    bool preserving = false;
    std::string diagnostic; // nonempty when not preserving (e.g. a flat piece's span)
};

MeasureReport verify_measure(const PLMap& g);

// Exact Lebesgue measure of g^{-1}([u, v]).
Rational preimage_measure(const PLMap& g, const Rational& u, const Rational& v);

// Exact uniform distance; attained on the union of breakpoints.
Rational sup_distance(const PLMap& g, const PLMap& h);

} // namespace bmf
