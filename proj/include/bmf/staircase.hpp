#pragma once

// The nowhere-dense removal construction on [0, 1/2] and its staircase values.
//
// Level 1 starts from the single carrier [0, 1/2] with values (0, 1). Each level-m
// carrier [c, d] loses one open interval (a, b):
//   - odd m:  b is the carrier midpoint, (b - a)/(d - c) = 1/2 - 2^-(m+sigma);
//   - even m: symmetric margins of width (d - c)/K(m) survive on both sides, where
//     K(m) = 1 + 2 * max_p (vd - vc)/(d - c) over the level-m carriers (optionally
//     rounded up to the next power of two, see KMode).
// The staircase is constant on each removed interval; the plateau keeps the chord
// slope: plateau = vc + ((b - c)/(d - c)) * (vd - vc). Level m+1 carriers are
// [c, a] and [b, d] with value pairs (vc, plateau), (plateau, vd).
//
// Full level lists are materialized only to a modest depth cap; evaluation walks a
// single root-to-leaf path and obtains K(m) from the left-edge recursion (the level
// maximum is always attained at p = 1, which build() re-checks against the
// materialized levels).

#include "bmf/enclosure.hpp"
#include "bmf/errors.hpp"
#include "bmf/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bmf {

// How the even-level expansion factor K(m) is formed from the level maximum.
enum class KMode {
    exact, // K(m) = 1 + 2 * max ratio, kept as an exact rational
    ceil   // K(m) rounded up to the next power of two
};

std::string kmode_name(KMode mode);
KMode kmode_parse(const std::string& name);

// One carrier interval together with the open interval removed from it.
// [c, d] is the carrier, (a, b) the removed interval, (vc, vd) the staircase
// values at c and d, plateau the constant value on [a, b]. Even levels also carry
// the interior split point b - (b - a)/(K(m) - 2) separating the two tent bases
// used by the later stages of the construction.
struct StaircaseNode {
    int m = 1;
    std::int64_t p = 1; // position within the level, 1-based; -1 when not tracked
    Rational c, a, b, d;
    Rational vc, plateau, vd;
    bool has_split = false;
    Rational split;

    Rational carrier_len() const { return d - c; }
    Rational removed_len() const { return b - a; }
    Rational value_gap() const { return vd - vc; }
};

class StaircaseTree {
public:
    // Full level lists beyond this depth would need 2^(depth-1) nodes each; deeper
    // queries must use the path API instead.
    static constexpr int kMaxMaterializedDepth = 14;
    // Hard bound on a single evaluation walk (and on the K(m) recursion).
    static constexpr int kDefaultLevelCutoff = 64;

    StaircaseTree(int sigma, KMode kmode);

    int sigma() const { return sigma_; }
    KMode kmode() const { return kmode_; }
    int depth() const { return static_cast<int>(levels_.size()); }

    // Materializes levels 1..depth (appends only; exclusive access required).
    void ensure_depth(int depth);

    const std::vector<StaircaseNode>& level(int m) const;
    const StaircaseNode& node(int m, std::int64_t p) const;

    // K(m) for even m <= built depth.
    const Rational& expansion_factor(int m) const;

    // Exact total length of the 2^M carriers remaining after the level-M removal
    // (M = 0 gives 1/2). Requires M <= built depth.
    Rational survivor_length(int M) const;

    // Path API: nodes computed on demand without materializing levels. The returned
    // node always carries its hole. Deepening the K(m) sequence past the built depth
    // mutates shared state; call acquire_kfactors() first if concurrent reads follow.
    StaircaseNode path_root();
    StaircaseNode path_child(const StaircaseNode& parent, bool left_side,
                             int level_limit = kDefaultLevelCutoff);

    // Extends the K(m) recursion up to level m (no-op if already present).
    void acquire_kfactors(int m, int level_limit = kDefaultLevelCutoff);

    // Certified enclosure of the staircase value at s in [0, 1] (values at s and
    // 1 - s coincide). Width is at most eps; width 0 whenever s lies in the closure
    // of a removed interval or hits a carrier endpoint within the level cutoff.
    Enclosure eval(const Rational& s, const Rational& eps,
                   int level_cutoff = kDefaultLevelCutoff);

private:
    void fill_hole(StaircaseNode& n, int level_limit);
    const Rational& kfactor(int m, int level_limit);

    int sigma_;
    KMode kmode_;
    std::vector<std::vector<StaircaseNode>> levels_;
    std::vector<Rational> kfactors_; // kfactors_[i] = K(2*(i+1))
    Rational edge_ratio_;            // (vd-vc)/(d-c) of the leftmost level-edge_level_ carrier
    int edge_level_;
};

StaircaseTree build_staircase(int sigma, int depth, KMode kmode = KMode::exact);

inline const Rational& expansion_factor(const StaircaseTree& t, int m) {
    return t.expansion_factor(m);
}
inline Rational survivor_length(const StaircaseTree& t, int M) {
    return t.survivor_length(M);
}
inline Enclosure staircase_eval(StaircaseTree& t, const Rational& s, const Rational& eps,
                                int level_cutoff = StaircaseTree::kDefaultLevelCutoff) {
    return t.eval(s, eps, level_cutoff);
}

} // namespace bmf
