#include "bmf/plmap.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace bmf {

namespace {

void check_frame(const Frame& frame) {
    if (!(frame.u < frame.v) || frame.h <= Rational(0) ||
        (frame.orient != 1 && frame.orient != -1))
        throw std::invalid_argument("modify: malformed frame");
}

void check_node(const StaircaseNode& node) {
    bool ok = node.m >= 1 && node.c < node.a && node.a < node.b && node.b < node.d &&
              node.plateau > node.vc && node.vd >= node.plateau;
    if (ok && node.m % 2 == 0) ok = node.has_split && node.a < node.split && node.split < node.b;
    if (!ok) throw std::invalid_argument("modify: malformed staircase node");
}

// Index of the piece containing x (x in [bp[i], bp[i+1]]).
std::size_t piece_index(const PLMap& g, const Rational& x) {
    auto it = std::upper_bound(g.breakpoints.begin(), g.breakpoints.end(), x);
    std::size_t i = static_cast<std::size_t>(it - g.breakpoints.begin());
    if (i > 0) --i;
    if (i + 1 >= g.breakpoints.size()) i = g.breakpoints.size() - 2;
    return i;
}

} // namespace

PLMap make_plmap(std::vector<Rational> breakpoints, std::vector<Rational> values) {
    if (breakpoints.size() != values.size() || breakpoints.size() < 2)
        throw std::invalid_argument("plmap: breakpoints and values must match, length >= 2");
    if (breakpoints.front() != Rational(0) || breakpoints.back() != Rational(1))
        throw std::invalid_argument("plmap: breakpoints must span [0, 1]");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i - 1] < breakpoints[i]))
            throw std::invalid_argument("plmap: breakpoints must increase strictly");
    for (const Rational& v : values)
        if (v < Rational(0) || v > Rational(1))
            throw std::invalid_argument("plmap: values must lie in [0, 1]");
    PLMap g;
    g.breakpoints = std::move(breakpoints);
    g.values = std::move(values);
    return g;
}

PLMap tent() {
    PLMap g = make_plmap({Rational(0), Rational(1, 2), Rational(1)},
                         {Rational(0), Rational(1), Rational(0)});
    g.gen = 0;
    g.cutoff = 0;
    return g;
}

Rational eval_pl(const PLMap& g, const Rational& x) {
    if (x < Rational(0) || x > Rational(1))
        throw std::invalid_argument("eval_pl: point outside [0, 1]");
    std::size_t i = piece_index(g, x);
    const Rational& x0 = g.breakpoints[i];
    const Rational& x1 = g.breakpoints[i + 1];
    if (x == x0) return g.values[i];
    if (x == x1) return g.values[i + 1];
    return g.values[i] + (x - x0) * (g.values[i + 1] - g.values[i]) / (x1 - x0);
}

PLMap modify(const PLMap& g, const Frame& frame, const StaircaseNode& node) {
    check_frame(frame);
    check_node(node);
    Rational plateau_img = frame.value_of(node.plateau);
    Rational dip_img = frame.value_of(node.vc);

    Rational C = frame.unfold(node.c, false);
    Rational A = frame.unfold(node.a, false);
    Rational B = frame.unfold(node.b, false);
    Rational D = frame.unfold(node.d, false);

    // vertices strictly between the region ends, on the direct branch
    std::vector<std::pair<Rational, Rational>> inner;
    inner.emplace_back(A, plateau_img);
    if (node.m % 2 == 1) {
        inner.emplace_back((A + B) / 2, dip_img);
    } else {
        Rational S = frame.unfold(node.split, false);
        inner.emplace_back((A + S) / 2, dip_img);
        inner.emplace_back(S, plateau_img);
        inner.emplace_back((S + B) / 2, dip_img);
    }
    inner.emplace_back(B, plateau_img);

    struct Region {
        Rational lo, hi;
        std::vector<std::pair<Rational, Rational>> verts; // includes anchored ends
    };
    Rational refl = frame.u + frame.v; // reflection about the frame-base midpoint
    std::vector<Region> regions(2);
    regions[0].lo = C;
    regions[0].hi = D;
    regions[0].verts = inner;
    regions[1].lo = refl - D;
    regions[1].hi = refl - C;
    for (auto it = inner.rbegin(); it != inner.rend(); ++it)
        regions[1].verts.emplace_back(refl - it->first, it->second);

    for (Region& r : regions) {
        // the region must currently be a single chord; anchor its ends on g
        Rational gl = eval_pl(g, r.lo);
        Rational gr = eval_pl(g, r.hi);
        for (std::size_t i = 0; i < g.breakpoints.size(); ++i) {
            const Rational& x = g.breakpoints[i];
            if (x <= r.lo || x >= r.hi) continue;
            Rational chord = gl + (x - r.lo) * (gr - gl) / (r.hi - r.lo);
            if (g.values[i] != chord)
                throw std::invalid_argument(
                    "modify: map is not linear over [" + r.lo.str() + ", " + r.hi.str() +
                    "]; replacements must follow the schedule");
        }
        r.verts.emplace_back(r.lo, gl);
        r.verts.emplace_back(r.hi, gr);
    }

    std::map<Rational, Rational> merged;
    for (std::size_t i = 0; i < g.breakpoints.size(); ++i) {
        const Rational& x = g.breakpoints[i];
        bool interior = false;
        for (const Region& r : regions) interior = interior || (x > r.lo && x < r.hi);
        if (!interior) merged.emplace(x, g.values[i]);
    }
    for (const Region& r : regions)
        for (const auto& [x, y] : r.verts) {
            auto [it, inserted] = merged.emplace(x, y);
            if (!inserted && it->second != y)
                throw std::logic_error("modify: conflicting vertex values at x = " + x.str());
        }

    std::vector<Rational> bps, vals;
    bps.reserve(merged.size());
    vals.reserve(merged.size());
    for (const auto& [x, y] : merged) {
        bps.push_back(x);
        vals.push_back(y);
    }
    return make_plmap(std::move(bps), std::move(vals));
}

Schedule build_g_trace(int n, int cutoff) {
    if (n < 0) throw std::invalid_argument("build_g: generation must be nonnegative");
    if (cutoff < 1) throw std::invalid_argument("build_g: cutoff must be at least 1");
    Schedule sch;
    sch.result = tent();
    std::map<int, StaircaseTree> trees;
    auto tree_for = [&](int sigma) -> StaircaseTree& {
        auto it = trees.find(sigma);
        if (it == trees.end()) it = trees.emplace(sigma, build_staircase(sigma, cutoff)).first;
        return it->second;
    };
    std::vector<Frame> parents{BMFunction::root_frame()};
    for (int gen = 1; gen <= n; ++gen) {
        std::vector<Frame> next;
        for (std::size_t pi = 0; pi < parents.size(); ++pi) {
            const Frame& parent = parents[pi];
            StaircaseTree& tree = tree_for(parent.sigma);
            std::vector<Frame> direct;
            for (int m = 1; m <= cutoff; ++m) {
                for (std::int64_t p = 1; p <= (std::int64_t{1} << (m - 1)); ++p) {
                    const StaircaseNode& node = tree.node(m, p);
                    PLMap before = std::move(sch.result);
                    sch.result = modify(before, parent, node);
                    ScheduleStep step;
                    step.gen = gen;
                    step.m = m;
                    step.p = p;
                    step.parent_index = static_cast<int>(pi);
                    step.owner_h = parent.h;
                    step.child_h = parent.h * (node.plateau - node.vc);
                    step.sup_dist = sup_distance(before, sch.result);
                    sch.steps.push_back(std::move(step));
                    for (Frame& child : BMFunction::child_frames(parent, node))
                        direct.push_back(std::move(child));
                }
            }
            next.insert(next.end(), direct.begin(), direct.end());
            for (const Frame& child : direct) {
                Frame mirrored = child;
                mirrored.u = parent.u + parent.v - child.v;
                mirrored.v = parent.u + parent.v - child.u;
                next.push_back(std::move(mirrored));
            }
        }
        parents = std::move(next);
    }
    sch.result.gen = n;
    sch.result.cutoff = cutoff;
    return sch;
}

PLMap build_g(int n, int cutoff) { return build_g_trace(n, cutoff).result; }

MeasureReport verify_measure(const PLMap& g) {
    MeasureReport rep;
    for (std::size_t i = 0; i + 1 < g.breakpoints.size(); ++i) {
        if (g.values[i] == g.values[i + 1]) {
            rep.preserving = false;
            rep.diagnostic = "flat piece on [" + g.breakpoints[i].str() + ", " +
                             g.breakpoints[i + 1].str() + "]";
            return rep;
        }
    }
    std::vector<Rational> vs = g.values;
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    bool onto = vs.front() == Rational(0) && vs.back() == Rational(1);
    rep.preserving = onto;
    if (!onto) rep.diagnostic = "range does not cover [0, 1]";
    for (std::size_t j = 0; j + 1 < vs.size(); ++j) {
        MeasureCell cell;
        cell.lo = vs[j];
        cell.hi = vs[j + 1];
        cell.sum = Rational(0);
        Rational mid = (cell.lo + cell.hi) / 2;
        for (std::size_t i = 0; i + 1 < g.breakpoints.size(); ++i) {
            const Rational& va = g.values[i];
            const Rational& vb = g.values[i + 1];
            if (min(va, vb) < mid && mid < max(va, vb))
                cell.sum += (g.breakpoints[i + 1] - g.breakpoints[i]) / abs(vb - va);
        }
        if (cell.sum != Rational(1)) {
            rep.preserving = false;
            if (rep.diagnostic.empty())
                rep.diagnostic = "cell (" + cell.lo.str() + ", " + cell.hi.str() +
                                 ") has reciprocal-slope sum " + cell.sum.str();
        }
        rep.cells.push_back(std::move(cell));
    }
    return rep;
}

Rational preimage_measure(const PLMap& g, const Rational& u, const Rational& v) {
    if (u < Rational(0) || !(u < v) || v > Rational(1))
        throw std::invalid_argument("preimage_measure: need 0 <= u < v <= 1");
    Rational total(0);
    for (std::size_t i = 0; i + 1 < g.breakpoints.size(); ++i) {
        Rational dx = g.breakpoints[i + 1] - g.breakpoints[i];
        const Rational& va = g.values[i];
        const Rational& vb = g.values[i + 1];
        if (va == vb) {
            if (u <= va && va <= v) total += dx; // a flat piece maps wholly inside
            continue;
        }
        Rational lo = min(va, vb), hi = max(va, vb);
        Rational ov_lo = max(lo, u), ov_hi = min(hi, v);
        if (ov_lo < ov_hi) total += dx * (ov_hi - ov_lo) / (hi - lo);
    }
    return total;
}

Rational sup_distance(const PLMap& g, const PLMap& h) {
    Rational best(0);
    for (const PLMap* m : {&g, &h})
        for (const Rational& x : m->breakpoints)
            best = max(best, abs(eval_pl(g, x) - eval_pl(h, x)));
    return best;
}

} // namespace bmf
