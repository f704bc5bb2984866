#pragma once

// Difference-quotient probes of the limit function (or of a piecewise-linear
// control map): certified quotient enclosures, the designed odd-level witness
// sequences realizing the one-sided derivative blowup, and scale-indexed Dini
// scans. All reported bounds are one-sided certified — maxima of enclosure lower
// ends, minima of enclosure upper ends — so a report never overstates a quotient.

#include "bmf/bmfunction.hpp"
#include "bmf/plmap.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace bmf {

enum class Side { left, right };

std::string side_name(Side side);
Side side_parse(const std::string& name);

// What a scan probes: certified point values plus structurally significant
// abscissas (flat-segment endpoints, tent apexes, split points) near an anchor.
class ProbeTarget {
public:
    virtual ~ProbeTarget() = default;

    // Certified enclosure of the target value, width <= eps.
    virtual Enclosure eval(const Rational& x, const Rational& eps) const = 0;

    // Inserts probe abscissas strictly inside (lo, hi) discovered around `anchor`.
    virtual void structural_points(const Rational& anchor, const Rational& lo,
                                   const Rational& hi, std::set<Rational>& out) const = 0;
};

// The limit function: structural points are harvested by walking the frame chain
// of the anchor and recording carrier endpoints, removed-interval endpoints,
// split points and tent apexes in every frame visited.
class LimitTarget : public ProbeTarget {
public:
    Enclosure eval(const Rational& x, const Rational& eps) const override;
    void structural_points(const Rational& anchor, const Rational& lo, const Rational& hi,
                           std::set<Rational>& out) const override;

private:
    mutable BMFunction f_;
};

// A piecewise-linear control map: exact values, breakpoints as structural points.
class PLTarget : public ProbeTarget {
public:
    explicit PLTarget(PLMap g) : g_(std::move(g)) {}

    Enclosure eval(const Rational& x, const Rational& eps) const override;
    void structural_points(const Rational& anchor, const Rational& lo, const Rational& hi,
                           std::set<Rational>& out) const override;

    const PLMap& map() const { return g_; }

private:
    PLMap g_;
};

struct QuotientRecord {
    Rational x, y;
    Enclosure value; // encloses (f(x) - f(y))/(x - y)
    // witness fraction (f(a) - f(x))/(f(a) - f(c)) when the record is a designed
    // witness with exactly known values; in (0, 1] for such records
    std::optional<Rational> epsilon_m;
};

// Certified difference quotient with enclosure width <= eps.
QuotientRecord quotient(const ProbeTarget& target, const Rational& x, const Rational& y,
                        const Rational& eps);
QuotientRecord quotient(const Rational& x, const Rational& y, const Rational& eps);

// For each odd level m, the quotient of the limit function between x and the left
// endpoint a of the leftmost level-m removed interval beyond x (in the folded
// orientation of the root frame). When x lies in that node's own carrier and its
// value is exact, epsilon_m is filled and |quotient| >= epsilon_m * 2^(m+1).
// Requires x to resolve as a point of the root nowhere-dense set.
std::vector<QuotientRecord> witness_sequence(const Rational& x, const std::vector<int>& m_list);

struct DiniRow {
    Rational scale;
    Rational max_lb; // largest certified lower bound among probed quotients
    Rational min_ub; // smallest certified upper bound among probed quotients
    int samples = 0; // probe points actually certified at this scale
};

struct DiniScan {
    Rational x;
    Side side = Side::right;
    std::vector<DiniRow> rows; // one per scale, in the given (decreasing) order
};

// Cumulative extremes as the scale shrinks; max_lb rows are nondecreasing and
// min_ub rows nonincreasing. Sample counts accumulate.
DiniScan running_records(const DiniScan& scan);

// Probes quotients (x, y) for y in the open one-sided window of each scale: a
// uniform grid of `samples` points merged with structural points harvested near
// geometrically shrinking anchors. Scales must be positive and strictly
// decreasing, and every window must stay inside [0, 1].
DiniScan dini_scan(const ProbeTarget& target, const Rational& x, Side side,
                   const std::vector<Rational>& scales, int samples);
DiniScan dini_scan(const Rational& x, Side side, const std::vector<Rational>& scales,
                   int samples);

struct MorseSide {
    bool applicable = false; // false when every scale window leaves the domain
    bool flagged = false;    // some scale certifies |quotient| beyond the threshold
    Rational best_lb;
    Rational worst_ub;
    std::vector<DiniRow> rows;
};

struct MorsePoint {
    Rational x;
    MorseSide left, right;
};

struct MorseReport {
    Rational threshold;
    std::vector<MorsePoint> points;
};

// Finite-scale evidence of derivative blowup: each applicable side of each point
// is scanned over the scales that fit in the domain and flagged when a certified
// bound exceeds the threshold in absolute value. Evidence, not proof.
MorseReport morse_report(const ProbeTarget& target, const std::vector<Rational>& points,
                         const std::vector<Rational>& scales, const Rational& threshold,
                         int samples);
MorseReport morse_report(const std::vector<Rational>& points, const std::vector<Rational>& scales,
                         const Rational& threshold, int samples);

} // namespace bmf
