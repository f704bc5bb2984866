#pragma once

// The limit function built by replacing every flat segment of a staircase with an
// affinely rescaled copy of a (deeper) staircase tent, generation after generation.
//
// A Frame is one such affine placement: on base [u, v] the function equals
// y0 + orient * h * stair(fold(t)) where t normalizes x into [0,1], fold(t) =
// min(t, 1-t) maps onto staircase coordinates, and stair is the sigma-staircase of
// the frame. Entering a removed interval of the staircase means descending into a
// child frame one generation deeper; points that never enter one are exactly the
// Cantor-set points of their frame.
//
// Evaluation therefore produces either an exact value (width-0 enclosure) at
// endpoints, plateau closures, split points and apexes, or a certified bracket
// [vc, vd] mapped through the frame once h * (vd - vc) drops below the requested
// tolerance.

#include "bmf/enclosure.hpp"
#include "bmf/errors.hpp"
#include "bmf/rational.hpp"
#include "bmf/staircase.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace bmf {

// Affine placement of one rescaled staircase tent.
struct Frame {
    int gen = 0;       // generation; the root tent is generation 0
    Rational u, v;     // base interval [u, v]
    Rational y0;       // value of the function on the flat segment carrying the tent
    Rational h;        // height of the tent
    int orient = 1;    // +1 opens upward (even generations), -1 downward
    int sigma = 1;     // staircase parameter of this tent
    int parent = -1;   // index into an owning chain's frame list; -1 for the root

    Rational len() const { return v - u; }
    // Image of a staircase value w under this frame.
    Rational value_of(const Rational& w) const {
        return orient == 1 ? y0 + h * w : y0 - h * w;
    }
    Rational value_min() const { return orient == 1 ? y0 : y0 - h; }
    Rational value_max() const { return orient == 1 ? y0 + h : y0; }
    // x -> staircase coordinate; mirrored reports the fold branch taken.
    Rational fold(const Rational& x, bool& mirrored) const;
    // staircase coordinate -> x on the requested fold branch.
    Rational unfold(const Rational& s, bool mirrored) const;
    bool contains(const Rational& x) const { return x >= u && x <= v; }
};

// Result of classifying a point against the frame hierarchy.
struct Chain {
    std::vector<Frame> frames; // root first; frames[i].parent == i-1 below the root
    bool resolved = false;     // false: max_gen or the level cutoff was exhausted
    int order = -1;            // 0: Cantor point of the root tent; n: of a generation-n frame
    bool boundary = false;     // x is an endpoint of some flat segment (or a split point)
};

class BMFunction {
public:
    static constexpr int kDefaultLevelCutoff = StaircaseTree::kDefaultLevelCutoff;
    static constexpr int kDefaultMaxGen = 6;

    BMFunction() = default;

    static Frame root_frame();

    // Child frames sitting on the removed interval of `node`, placed on the direct
    // (unmirrored) fold branch of `parent`: one frame for odd node levels, two
    // (split at the tent-base break) for even levels, ordered left to right.
    static std::vector<Frame> child_frames(const Frame& parent, const StaircaseNode& node);

    // Certified enclosure of the limit function, width <= eps.
    Enclosure eval(const Rational& x, const Rational& eps,
                   int level_cutoff = kDefaultLevelCutoff);

    // Same walk, but generation-n flat segments are not descended into: the exact
    // plateau image is returned there (the n-th approximant).
    Enclosure eval_n(const Rational& x, int n, const Rational& eps,
                     int level_cutoff = kDefaultLevelCutoff);

    // Frame chain of x: descends while x sits strictly inside removed intervals,
    // classifying x as a Cantor point of its deepest frame when the walk ends in an
    // exact hit. No tolerance: unresolved when max_gen or the level cutoff runs out.
    Chain locate(const Rational& x, int max_gen = kDefaultMaxGen,
                 int level_cutoff = kDefaultLevelCutoff);

    // Runs fn(tree) with exclusive access to the cached sigma-staircase.
    template <typename Fn>
    auto with_tree(int sigma, Fn&& fn) {
        TreeEntry& e = entry(sigma);
        std::lock_guard<std::mutex> lk(e.mu);
        return fn(e.tree);
    }

private:
    struct TreeEntry {
        explicit TreeEntry(int sigma) : tree(sigma, KMode::exact) {}
        std::mutex mu;
        StaircaseTree tree;
    };
    TreeEntry& entry(int sigma);

    std::mutex map_mu_;
    std::map<int, std::unique_ptr<TreeEntry>> trees_;
};

// Exact maximum frame height at generation n when every descent is restricted to
// removed intervals of staircase level <= breadth; lower-approximates the uniform
// distance between successive approximants (bounded by 2^(-n/2)).
Rational max_height(int n, int breadth);

} // namespace bmf
